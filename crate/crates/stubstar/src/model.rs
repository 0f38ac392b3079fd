//! Core domain types: label partitions, stub-star ensembles, instances,
//! labeled graphs, and color-degree matrices.
//!
//! A *stub-star* is a vertex of degree `d` whose `d` stubs are labeled with
//! the degrees its eventual neighbors must have. The label multiset is a
//! partition `lambda` with height `h(lambda) = d` and size `|lambda| = f`
//! (the neighbor degree sum). An *ensemble* counts stub-stars per partition;
//! it is the combinatorial object the feasibility systems decide over.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("degree and sum lists have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("entry {index}: values must be positive (got d={d}, f={f})")]
    NonPositive { index: usize, d: u32, f: u32 },
    #[error("entry {index}: f={f} exceeds d*delta={max} (impossible even as a multigraph)")]
    InfeasiblePair { index: usize, f: u32, max: u32 },
    #[error("delta {delta} smaller than max degree {max_d}")]
    DeltaTooSmall { delta: u32, max_d: u32 },
    #[error("delta must be in 1..=16 (got {0})")]
    DeltaOutOfRange(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A label multiset, stored with parts in non-increasing order.
///
/// Height (number of parts) is the stub-star's degree; size (sum of parts)
/// is its neighbor degree sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(!parts.is_empty(), "partition must have at least one part");
        assert!(parts.iter().all(|&p| p >= 1), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, equal to the stub-star's degree.
    pub fn height(&self) -> u32 {
        self.parts.len() as u32
    }

    /// Sum of parts, equal to the stub-star's neighbor degree sum.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Multiplicity of label `j`, written `N(lambda, j)`.
    pub fn count(&self, j: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == j).count() as u32
    }

    /// Number of parts strictly greater than 1.
    pub fn big_labels(&self) -> u32 {
        self.parts.iter().filter(|&&p| p > 1).count() as u32
    }

    /// Degree of this stub-star in the single-color subgraph `(i, j)`:
    /// the count of `j`-labels if the star has degree `i`, the count of
    /// `i`-labels if it has degree `j`, and 0 otherwise.
    pub fn chromatic_degree(&self, color: (u32, u32)) -> u32 {
        let (i, j) = color;
        let h = self.height();
        if i == j {
            if h == i {
                self.count(i)
            } else {
                0
            }
        } else if h == i {
            self.count(j)
        } else if h == j {
            self.count(i)
        } else {
            0
        }
    }

    /// Sum of chromatic degrees over a set of colors.
    pub fn multichromatic_degree(&self, colors: &[(u32, u32)]) -> u32 {
        colors.iter().map(|&c| self.chromatic_degree(c)).sum()
    }
}

/// Orders by height first, then lexicographically on the parts read in
/// ascending order (so (1,3) sorts before (2,2)). This is the canonical
/// enumeration and expansion order.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.parts
            .len()
            .cmp(&other.parts.len())
            .then_with(|| self.parts.iter().rev().cmp(other.parts.iter().rev()))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All label partitions with parts in `1..=delta` and height in `1..=delta`,
/// in canonical order (grouped by height, lexicographic within a height).
pub fn enumerate_partitions(delta: u32) -> Vec<Partition> {
    assert!((1..=16).contains(&delta), "delta must be in 1..=16");
    let mut out = Vec::new();
    for height in 1..=delta {
        let mut stack = vec![(Vec::<u32>::new(), 1u32)];
        while let Some((prefix, min)) = stack.pop() {
            if prefix.len() == height as usize {
                let mut parts = prefix;
                parts.reverse();
                out.push(Partition { parts });
                continue;
            }
            // Push in reverse so smaller next-parts are explored first.
            for p in (min..=delta).rev() {
                let mut next = prefix.clone();
                next.push(p);
                stack.push((next, p));
            }
        }
    }
    out
}

/// Multiset of stub-stars, keyed by label partition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ensemble {
    counts: BTreeMap<Partition, u64>,
}

impl Ensemble {
    pub fn new() -> Self {
        Ensemble::default()
    }

    pub fn from_counts(counts: BTreeMap<Partition, u64>) -> Self {
        let mut e = Ensemble::new();
        for (p, c) in counts {
            if c > 0 {
                e.counts.insert(p, c);
            }
        }
        e
    }

    pub fn from_stars<'a, I: IntoIterator<Item = &'a Partition>>(stars: I) -> Self {
        let mut e = Ensemble::new();
        for s in stars {
            e.add(s.clone(), 1);
        }
        e
    }

    pub fn add(&mut self, p: Partition, count: u64) {
        if count > 0 {
            *self.counts.entry(p).or_insert(0) += count;
        }
    }

    pub fn count(&self, p: &Partition) -> u64 {
        self.counts.get(p).copied().unwrap_or(0)
    }

    /// Number of stub-stars (vertices).
    pub fn n(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Sum of heights, i.e. twice the edge count of any realization.
    pub fn degree_sum(&self) -> u64 {
        self.counts
            .iter()
            .map(|(p, &c)| p.height() as u64 * c)
            .sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.counts.keys().map(|p| p.height()).max().unwrap_or(0)
    }

    pub fn max_label(&self) -> u32 {
        self.counts
            .keys()
            .map(|p| p.parts()[0])
            .max()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u64)> {
        self.counts.iter().map(|(p, &c)| (p, c))
    }

    /// Stub-star list in canonical partition order, one entry per vertex.
    pub fn expand(&self) -> Vec<Partition> {
        let mut out = Vec::with_capacity(self.n() as usize);
        for (p, &c) in &self.counts {
            for _ in 0..c {
                out.push(p.clone());
            }
        }
        out
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, &c) in &self.counts {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "x_{p}={c}")?;
            first = false;
        }
        Ok(())
    }
}

/// Graph classes a realization can be requested in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Multigraph,
    LooplessMultigraph,
    Simple,
    ConnectedSimple,
    Forest,
    Tree,
    Caterpillar,
}

impl GraphClass {
    pub const ALL: [GraphClass; 7] = [
        GraphClass::Multigraph,
        GraphClass::LooplessMultigraph,
        GraphClass::Simple,
        GraphClass::ConnectedSimple,
        GraphClass::Forest,
        GraphClass::Tree,
        GraphClass::Caterpillar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Multigraph => "multigraph",
            GraphClass::LooplessMultigraph => "loopless",
            GraphClass::Simple => "simple",
            GraphClass::ConnectedSimple => "connected-simple",
            GraphClass::Forest => "forest",
            GraphClass::Tree => "tree",
            GraphClass::Caterpillar => "caterpillar",
        }
    }

    /// Whether realizations must be acyclic (forest, tree, caterpillar).
    pub fn is_forest_family(self) -> bool {
        matches!(
            self,
            GraphClass::Forest | GraphClass::Tree | GraphClass::Caterpillar
        )
    }
}

impl std::str::FromStr for GraphClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multigraph" => Ok(GraphClass::Multigraph),
            "loopless" | "loopless-multigraph" => Ok(GraphClass::LooplessMultigraph),
            "simple" => Ok(GraphClass::Simple),
            "connected-simple" | "connected" => Ok(GraphClass::ConnectedSimple),
            "forest" => Ok(GraphClass::Forest),
            "tree" => Ok(GraphClass::Tree),
            "caterpillar" => Ok(GraphClass::Caterpillar),
            other => Err(format!(
                "unknown class '{other}' (expected one of: multigraph, loopless, simple, \
                 connected-simple, forest, tree, caterpillar)"
            )),
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An undirected graph on vertices `0..n`, possibly with loops and parallel
/// edges. A loop `(v, v)` contributes 2 to `deg(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl LabeledGraph {
    pub fn new(n: usize) -> Self {
        LabeledGraph { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = LabeledGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, u: u32, v: u32) {
        assert!((u as usize) < self.n && (v as usize) < self.n);
        let e = if u <= v { (u, v) } else { (v, u) };
        self.edges.push(e);
    }

    pub fn remove_edge(&mut self, u: u32, v: u32) -> bool {
        let e = if u <= v { (u, v) } else { (v, u) };
        match self.edges.iter().position(|&x| x == e) {
            Some(k) => {
                self.edges.swap_remove(k);
                true
            }
            None => false,
        }
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Edge multiset in sorted order, for order-insensitive comparison.
    pub fn sorted_edges(&self) -> Vec<(u32, u32)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    /// Neighbor degree sums; a loop at `v` contributes `2 * deg(v)`.
    pub fn neighbor_degree_sums(&self) -> Vec<u32> {
        let d = self.degrees();
        let mut f = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            f[u as usize] += d[v as usize];
            f[v as usize] += d[u as usize];
        }
        f
    }

    /// Per-vertex stub-stars: vertex `v` gets one label per incident edge
    /// end, the degree of the opposite endpoint (a loop contributes two
    /// labels equal to `deg(v)`). Vertices of degree 0 yield no partition
    /// and make the decomposition fail.
    pub fn stub_stars(&self) -> Option<Vec<Partition>> {
        let d = self.degrees();
        let mut labels: Vec<Vec<u32>> = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            labels[u as usize].push(d[v as usize]);
            labels[v as usize].push(d[u as usize]);
        }
        labels
            .into_iter()
            .map(|l| if l.is_empty() { None } else { Some(Partition::new(l)) })
            .collect()
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn has_parallel(&self) -> bool {
        let mut e = self.sorted_edges();
        e.dedup();
        e.len() != self.edges.len()
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loop() && !self.has_parallel()
    }

    /// Component id per vertex (isolated vertices are their own component).
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            if a != b {
                parent[a] = b;
            }
        }
        let mut ids = BTreeMap::new();
        let mut out = vec![0usize; self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            let next = ids.len();
            out[v] = *ids.entry(r).or_insert(next);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |&m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_count() == 1
    }

    /// True when loop-free, parallel-free, and cycle-free.
    pub fn is_forest(&self) -> bool {
        self.is_simple() && self.n - self.component_count() == self.m()
    }

    pub fn is_tree(&self) -> bool {
        self.is_forest() && self.is_connected()
    }

    /// A caterpillar is a tree whose non-leaf vertices induce a path
    /// (an empty or single-vertex spine counts).
    pub fn is_caterpillar(&self) -> bool {
        if !self.is_tree() {
            return false;
        }
        let d = self.degrees();
        let spine: Vec<u32> = (0..self.n as u32).filter(|&v| d[v as usize] >= 2).collect();
        if spine.len() <= 1 {
            return true;
        }
        let on_spine = |v: u32| d[v as usize] >= 2;
        let mut spine_deg = vec![0u32; self.n];
        let mut spine_edges = 0usize;
        for &(u, v) in &self.edges {
            if on_spine(u) && on_spine(v) {
                spine_deg[u as usize] += 1;
                spine_deg[v as usize] += 1;
                spine_edges += 1;
            }
        }
        // Induced subgraph of a tree is a forest; a path needs exactly
        // spine-1 edges (connected) and max induced degree 2.
        spine_edges == spine.len() - 1 && spine.iter().all(|&v| spine_deg[v as usize] <= 2)
    }

    pub fn class_member(&self, cls: GraphClass) -> bool {
        match cls {
            GraphClass::Multigraph => true,
            GraphClass::LooplessMultigraph => !self.has_loop(),
            GraphClass::Simple => self.is_simple(),
            GraphClass::ConnectedSimple => self.is_simple() && self.is_connected(),
            GraphClass::Forest => self.is_forest(),
            GraphClass::Tree => self.is_tree(),
            GraphClass::Caterpillar => self.is_caterpillar(),
        }
    }

    /// Edge-list text: one `u v` pair per line, 0-based.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Graphviz DOT form, loops and multi-edges included as repeated lines.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph g {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for &(u, v) in &self.edges {
            s.push_str(&format!("  {u} -- {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// A `(D, F)` instance: vertex `k` must get degree `d_k` and neighbor degree
/// sum `f_k`. `delta` bounds the degrees a realization may use; it defaults
/// to `max(D)` and may be set higher when the domain guarantees one (carbon
/// skeletons use 4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    d: Vec<u32>,
    f: Vec<u32>,
    delta: u32,
    y: BTreeMap<(u32, u32), u64>,
}

impl Instance {
    pub fn from_lists(d: Vec<u32>, f: Vec<u32>) -> Result<Self, ModelError> {
        let max_d = d.iter().copied().max().unwrap_or(1);
        Instance::from_lists_with_delta(d, f, max_d)
    }

    pub fn from_lists_with_delta(d: Vec<u32>, f: Vec<u32>, delta: u32) -> Result<Self, ModelError> {
        if d.len() != f.len() {
            return Err(ModelError::LengthMismatch(d.len(), f.len()));
        }
        if !(1..=16).contains(&delta) {
            return Err(ModelError::DeltaOutOfRange(delta));
        }
        let mut y = BTreeMap::new();
        for (k, (&dk, &fk)) in d.iter().zip(&f).enumerate() {
            if dk == 0 || fk == 0 {
                return Err(ModelError::NonPositive { index: k, d: dk, f: fk });
            }
            if dk > delta {
                return Err(ModelError::DeltaTooSmall { delta, max_d: dk });
            }
            if fk > dk * delta {
                return Err(ModelError::InfeasiblePair { index: k, f: fk, max: dk * delta });
            }
            *y.entry((dk, fk)).or_insert(0) += 1;
        }
        Ok(Instance { d, f, delta, y })
    }

    /// The instance realized by a graph, provided every vertex has positive
    /// degree.
    pub fn from_graph(g: &LabeledGraph) -> Result<Self, ModelError> {
        Instance::from_lists(g.degrees(), g.neighbor_degree_sums())
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self) -> &[u32] {
        &self.d
    }

    pub fn f(&self) -> &[u32] {
        &self.f
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn degree_sum(&self) -> u64 {
        self.d.iter().map(|&x| x as u64).sum()
    }

    /// Histogram `y[(d, f)]`: how many vertices demand the pair `(d, f)`.
    pub fn histogram(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.y
    }

    /// Re-derive `delta` as a different bound (e.g. 4 for carbon skeletons).
    pub fn with_delta(&self, delta: u32) -> Result<Self, ModelError> {
        Instance::from_lists_with_delta(self.d.clone(), self.f.clone(), delta)
    }

    /// Whether an ensemble matches this instance's histogram exactly.
    pub fn matches_ensemble(&self, e: &Ensemble) -> bool {
        let mut seen: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for (p, c) in e.iter() {
            *seen.entry((p.height(), p.size())).or_insert(0) += c;
        }
        seen == self.y
    }

    /// Parses the `d f` per-line text format. Blank lines and lines whose
    /// first non-space character is `#` are ignored.
    pub fn parse_text(text: &str) -> Result<Self, ModelError> {
        let mut d = Vec::new();
        let mut f = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (a, b) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(ModelError::Parse {
                        line: lineno + 1,
                        msg: format!("expected 'd f', got '{line}'"),
                    })
                }
            };
            let dk: u32 = a.parse().map_err(|_| ModelError::Parse {
                line: lineno + 1,
                msg: format!("bad degree '{a}'"),
            })?;
            let fk: u32 = b.parse().map_err(|_| ModelError::Parse {
                line: lineno + 1,
                msg: format!("bad neighbor sum '{b}'"),
            })?;
            d.push(dk);
            f.push(fk);
        }
        if d.is_empty() {
            return Err(ModelError::Parse { line: 0, msg: "no vertex lines".into() });
        }
        Instance::from_lists(d, f)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (dk, fk) in self.d.iter().zip(&self.f) {
            s.push_str(&format!("{dk} {fk}\n"));
        }
        s
    }
}

/// Rows indexed by color `(i, j)` with `i <= j`, columns by stub-star list
/// position; entry = chromatic degree of that stub-star in that color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorDegreeMatrix {
    delta: u32,
    colors: Vec<(u32, u32)>,
    rows: Vec<Vec<u32>>,
}

impl ColorDegreeMatrix {
    pub fn from_stars(stars: &[Partition], delta: u32) -> Self {
        let colors = all_colors(delta);
        let rows = colors
            .iter()
            .map(|&c| stars.iter().map(|s| s.chromatic_degree(c)).collect())
            .collect();
        ColorDegreeMatrix { delta, colors, rows }
    }

    /// Matrix over an ensemble's canonical expansion.
    pub fn from_ensemble(e: &Ensemble, delta: u32) -> Self {
        ColorDegreeMatrix::from_stars(&e.expand(), delta)
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn colors(&self) -> &[(u32, u32)] {
        &self.colors
    }

    pub fn row(&self, color: (u32, u32)) -> Option<&[u32]> {
        let color = if color.0 <= color.1 { color } else { (color.1, color.0) };
        self.colors
            .iter()
            .position(|&c| c == color)
            .map(|k| self.rows[k].as_slice())
    }

    /// Column sums equal stub-star degrees; this is what makes the matrix
    /// special in the sense that disjoint color pairs cannot both hit a
    /// column (each column's entries live in the rows naming its degree).
    pub fn column_sums(&self) -> Vec<u32> {
        let cols = self.rows.first().map_or(0, |r| r.len());
        (0..cols)
            .map(|c| self.rows.iter().map(|r| r[c]).sum())
            .collect()
    }
}

/// All colors `(i, j)` with `1 <= i <= j <= delta`, lexicographic.
pub fn all_colors(delta: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for i in 1..=delta {
        for j in i..=delta {
            v.push((i, j));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent counting oracle: multisets of size `k` from `m` values is
    /// C(k + m - 1, k); partitions here are multisets of heights 1..=delta.
    fn multiset_count(m: u64, k: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for t in 0..k {
            num *= m + t;
            den *= t + 1;
        }
        num / den
    }

    fn partition_universe_size(delta: u64) -> u64 {
        (1..=delta).map(|k| multiset_count(delta, k)).sum()
    }

    #[test]
    fn partition_order_and_accessors() {
        let p = Partition::new(vec![2, 3, 1, 2]);
        assert_eq!(p.parts(), &[3, 2, 2, 1]);
        assert_eq!(p.height(), 4);
        assert_eq!(p.size(), 8);
        assert_eq!(p.count(2), 2);
        assert_eq!(p.count(4), 0);
        assert_eq!(p.big_labels(), 3);
        assert_eq!(p.to_string(), "(3,2,2,1)");
    }

    #[test]
    fn enumerate_delta_2_exact() {
        let parts = enumerate_partitions(2);
        let expect: Vec<Partition> = vec![
            Partition::new(vec![1]),
            Partition::new(vec![2]),
            Partition::new(vec![1, 1]),
            Partition::new(vec![2, 1]),
            Partition::new(vec![2, 2]),
        ];
        assert_eq!(parts, expect);
    }

    #[test]
    fn enumerate_counts_match_multiset_oracle() {
        for delta in 1..=6u32 {
            let parts = enumerate_partitions(delta);
            assert_eq!(parts.len() as u64, partition_universe_size(delta as u64));
            // No duplicates, canonical order, all within bounds.
            for w in parts.windows(2) {
                assert!(w[0] < w[1], "{} !< {}", w[0], w[1]);
            }
            for p in &parts {
                assert!(p.height() >= 1 && p.height() <= delta);
                assert!(p.parts().iter().all(|&x| x >= 1 && x <= delta));
            }
        }
        assert_eq!(enumerate_partitions(4).len(), 69);
        assert_eq!(enumerate_partitions(1).len(), 1);
    }

    #[test]
    fn chromatic_degree_cases() {
        // Stub-star with labels (2,2,1) has degree 3.
        let s = Partition::new(vec![2, 2, 1]);
        assert_eq!(s.chromatic_degree((2, 3)), 2);
        assert_eq!(s.chromatic_degree((1, 3)), 1);
        assert_eq!(s.chromatic_degree((2, 2)), 0);
        assert_eq!(s.multichromatic_degree(&[(2, 2), (2, 3)]), 2);
        let t = Partition::new(vec![3]);
        assert_eq!(t.multichromatic_degree(&[(2, 2), (2, 3)]), 0);
        assert_eq!(t.multichromatic_degree(&[]), 0);
        // Diagonal color on a matching-degree star.
        let u = Partition::new(vec![2, 1]);
        assert_eq!(u.chromatic_degree((2, 2)), 1);
    }

    #[test]
    fn graph_decomposition_and_instance() {
        // Single edge: two degree-1 vertices seeing a degree-1 neighbor.
        let g = LabeledGraph::from_edges(2, &[(0, 1)]);
        let stars = g.stub_stars().unwrap();
        assert_eq!(stars, vec![Partition::new(vec![1]), Partition::new(vec![1])]);
        let e = Ensemble::from_stars(&stars);
        assert_eq!(e.count(&Partition::new(vec![1])), 2);
        let inst = Instance::from_graph(&g).unwrap();
        assert_eq!(inst.d(), &[1, 1]);
        assert_eq!(inst.f(), &[1, 1]);
        assert_eq!(inst.delta(), 1);
        assert!(inst.matches_ensemble(&e));
    }

    #[test]
    fn loop_convention() {
        // A loop adds 2 to the degree and two self-degree labels.
        let mut g = LabeledGraph::new(1);
        g.add_edge(0, 0);
        assert_eq!(g.degrees(), vec![2]);
        assert_eq!(g.neighbor_degree_sums(), vec![4]);
        let stars = g.stub_stars().unwrap();
        assert_eq!(stars, vec![Partition::new(vec![2, 2])]);
    }

    #[test]
    fn triangle_with_pendant() {
        // Vertices 0,1 in a triangle with 3; 2 pendant on 3.
        let g = LabeledGraph::from_edges(4, &[(0, 1), (0, 3), (1, 3), (3, 2)]);
        let inst = Instance::from_graph(&g).unwrap();
        assert_eq!(inst.d(), &[2, 2, 1, 3]);
        assert_eq!(inst.f(), &[5, 5, 3, 5]);
        let e = Ensemble::from_stars(&g.stub_stars().unwrap());
        assert_eq!(e.count(&Partition::new(vec![3, 2])), 2);
        assert_eq!(e.count(&Partition::new(vec![3])), 1);
        assert_eq!(e.count(&Partition::new(vec![2, 2, 1])), 1);
        assert_eq!(e.n(), 4);
    }

    fn caterpillar_c1() -> LabeledGraph {
        // 8-vertex caterpillar, 0-based edges.
        LabeledGraph::from_edges(
            8,
            &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6), (6, 7)],
        )
    }

    #[test]
    fn caterpillar_instance_values() {
        let g = caterpillar_c1();
        let inst = Instance::from_graph(&g).unwrap();
        assert_eq!(inst.d(), &[1, 3, 1, 2, 3, 1, 2, 1]);
        assert_eq!(inst.f(), &[3, 4, 3, 6, 5, 3, 4, 2]);
        assert!(g.is_caterpillar());
    }

    #[test]
    fn color_degree_matrix_rows() {
        let g = caterpillar_c1();
        let stars = g.stub_stars().unwrap();
        let m = ColorDegreeMatrix::from_stars(&stars, 3);
        assert_eq!(m.row((1, 3)).unwrap(), &[1, 2, 1, 0, 1, 1, 0, 0]);
        assert_eq!(m.row((1, 2)).unwrap(), &[0, 0, 0, 0, 0, 0, 1, 1]);
        assert_eq!(m.row((2, 3)).unwrap(), &[0, 1, 0, 2, 2, 0, 1, 0]);
        assert_eq!(m.row((1, 1)).unwrap(), &[0; 8]);
        assert_eq!(m.row((2, 2)).unwrap(), &[0; 8]);
        assert_eq!(m.row((3, 3)).unwrap(), &[0; 8]);
        // Column sums recover the degrees.
        assert_eq!(m.column_sums(), vec![1, 3, 1, 2, 3, 1, 2, 1]);
    }

    #[test]
    fn matrix_single_edge() {
        let g = LabeledGraph::from_edges(2, &[(0, 1)]);
        let m = ColorDegreeMatrix::from_stars(&g.stub_stars().unwrap(), 1);
        assert_eq!(m.row((1, 1)).unwrap(), &[1, 1]);
    }

    #[test]
    fn matrix_is_special() {
        // Disjoint colors never share a positive column: each column's
        // positive rows all mention the star's own degree.
        let mut rng = crate::oracle::seeds(11);
        for _ in 0..200 {
            let g = crate::oracle::random_tree(12, 4, rng.draw()).unwrap();
            let stars = g.stub_stars().unwrap();
            let m = ColorDegreeMatrix::from_stars(&stars, 4);
            for (a, ca) in m.colors().iter().enumerate() {
                for (b, cb) in m.colors().iter().enumerate().skip(a + 1) {
                    let disjoint = ca.0 != cb.0 && ca.0 != cb.1 && ca.1 != cb.0 && ca.1 != cb.1;
                    if !disjoint {
                        continue;
                    }
                    for col in 0..stars.len() {
                        assert!(
                            m.rows[a][col] == 0 || m.rows[b][col] == 0,
                            "disjoint colors {ca:?} {cb:?} share column {col}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn instance_errors() {
        assert_eq!(
            Instance::from_lists(vec![1, 2], vec![1]),
            Err(ModelError::LengthMismatch(2, 1))
        );
        assert!(matches!(
            Instance::from_lists(vec![1, 0], vec![1, 1]),
            Err(ModelError::NonPositive { index: 1, .. })
        ));
        // f > d * delta with delta = max degree 2.
        assert!(matches!(
            Instance::from_lists(vec![2, 1], vec![5, 2]),
            Err(ModelError::InfeasiblePair { index: 0, f: 5, max: 4 })
        ));
        // Same pair is fine once delta is widened.
        assert!(Instance::from_lists_with_delta(vec![2, 1], vec![5, 2], 4).is_ok());
        assert!(matches!(
            Instance::from_lists_with_delta(vec![2, 1], vec![4, 2], 1),
            Err(ModelError::DeltaTooSmall { .. })
        ));
    }

    #[test]
    fn instance_text_roundtrip() {
        let text = "# comment\n2 5\n2 5\n\n1 3\n3 5\n";
        let inst = Instance::parse_text(text).unwrap();
        assert_eq!(inst.d(), &[2, 2, 1, 3]);
        assert_eq!(inst.f(), &[5, 5, 3, 5]);
        let again = Instance::parse_text(&inst.to_text()).unwrap();
        assert_eq!(inst, again);
        assert!(Instance::parse_text("1 2 3\n").is_err());
        assert!(Instance::parse_text("x y\n").is_err());
        assert!(Instance::parse_text("").is_err());
    }

    #[test]
    fn decomposition_roundtrip_on_random_trees() {
        let mut rng = crate::oracle::seeds(7);
        for _ in 0..100 {
            let g = crate::oracle::random_tree(20, 4, rng.draw()).unwrap();
            let inst = Instance::from_graph(&g).unwrap();
            let e = Ensemble::from_stars(&g.stub_stars().unwrap());
            assert!(inst.matches_ensemble(&e));
            assert_eq!(e.n() as usize, g.n());
            assert_eq!(e.degree_sum(), 2 * g.m() as u64);
        }
    }

    #[test]
    fn class_predicates() {
        let path = LabeledGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(path.is_tree() && path.is_caterpillar());
        let tri = LabeledGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(tri.is_simple() && !tri.is_forest());
        let two_edges = LabeledGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(two_edges.is_forest() && !two_edges.is_tree());
        // Spider: K_{1,3} with each edge subdivided is a tree, not a caterpillar.
        let spider = LabeledGraph::from_edges(
            7,
            &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
        );
        assert!(spider.is_tree() && !spider.is_caterpillar());
        let star = LabeledGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(star.is_caterpillar());
        let mut looped = LabeledGraph::new(1);
        looped.add_edge(0, 0);
        assert!(looped.class_member(GraphClass::Multigraph));
        assert!(!looped.class_member(GraphClass::LooplessMultigraph));
        let para = LabeledGraph::from_edges(2, &[(0, 1), (0, 1)]);
        assert!(!para.is_simple() && !para.has_loop());
    }

    #[test]
    fn class_names_parse() {
        for cls in GraphClass::ALL {
            let parsed: GraphClass = cls.name().parse().unwrap();
            assert_eq!(parsed, cls);
        }
        assert!("nonsense".parse::<GraphClass>().is_err());
    }
}
