//! Independent ground truth for tests and experiments.
//!
//! Everything here is deliberately brute-force and shares no code with the
//! feasibility solver or the assembler: exhaustive graph search over small
//! vertex counts, Prufer-coded tree enumeration, canonical forms for
//! isomorphism-safe deduplication, and the recursive random tree generator
//! that drives the benchmarks.

use crate::model::{GraphClass, Instance, LabeledGraph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("size {n} exceeds the brute-force bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("invalid argument: {0}")]
    Invalid(&'static str),
}

/// Deterministic stream of 64-bit seeds, identical across platforms.
/// Used to fan one base seed out to many independent trials.
pub struct Seeds {
    rng: ChaCha8Rng,
}

pub fn seeds(base: u64) -> Seeds {
    Seeds {
        rng: ChaCha8Rng::seed_from_u64(base),
    }
}

impl Seeds {
    pub fn draw(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// Decodes a Prufer code into the labeled tree on `n` vertices it encodes.
pub fn prufer_decode(code: &[u32], n: usize) -> Result<LabeledGraph, OracleError> {
    if n == 0 {
        return Err(OracleError::Invalid("tree needs at least one vertex"));
    }
    if n == 1 {
        return if code.is_empty() {
            Ok(LabeledGraph::new(1))
        } else {
            Err(OracleError::Invalid("code of a 1-vertex tree is empty"))
        };
    }
    if code.len() != n - 2 {
        return Err(OracleError::Invalid("code length must be n - 2"));
    }
    if code.iter().any(|&c| c as usize >= n) {
        return Err(OracleError::Invalid("code label out of range"));
    }
    let mut deg = vec![1u32; n];
    for &c in code {
        deg[c as usize] += 1;
    }
    let mut g = LabeledGraph::new(n);
    let mut leaves: BinaryHeap<Reverse<u32>> = (0..n as u32)
        .filter(|&v| deg[v as usize] == 1)
        .map(Reverse)
        .collect();
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("leaf available");
        g.add_edge(leaf, c);
        deg[leaf as usize] -= 1;
        deg[c as usize] -= 1;
        if deg[c as usize] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two vertices left");
    let Reverse(b) = leaves.pop().expect("two vertices left");
    g.add_edge(a, b);
    Ok(g)
}

/// Encodes a labeled tree as its Prufer code (inverse of `prufer_decode`).
pub fn prufer_encode(tree: &LabeledGraph) -> Result<Vec<u32>, OracleError> {
    if !tree.is_tree() {
        return Err(OracleError::Invalid("input is not a tree"));
    }
    let n = tree.n();
    if n <= 2 {
        return Ok(Vec::new());
    }
    let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for &(u, v) in tree.edges() {
        adj[u as usize].insert(v);
        adj[v as usize].insert(u);
    }
    let mut leaves: BinaryHeap<Reverse<u32>> = (0..n as u32)
        .filter(|&v| adj[v as usize].len() == 1)
        .map(Reverse)
        .collect();
    let mut code = Vec::with_capacity(n - 2);
    while code.len() < n - 2 {
        let Reverse(leaf) = leaves.pop().expect("leaf available");
        let &parent = adj[leaf as usize].iter().next().expect("leaf neighbor");
        code.push(parent);
        adj[parent as usize].remove(&leaf);
        adj[leaf as usize].clear();
        if adj[parent as usize].len() == 1 {
            leaves.push(Reverse(parent));
        }
    }
    Ok(code)
}

fn ahu_encode(adj: &[Vec<u32>], v: u32, parent: Option<u32>) -> String {
    let mut child_codes: Vec<String> = adj[v as usize]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| ahu_encode(adj, w, Some(v)))
        .collect();
    child_codes.sort();
    let mut out = String::from("(");
    for c in &child_codes {
        out.push_str(c);
    }
    out.push(')');
    out
}

/// Canonical string of an unlabeled tree: rooted encoding at the tree
/// center(s), minimum over the at most two candidates. Two trees share the
/// string iff they are isomorphic.
pub fn canonical_form(tree: &LabeledGraph) -> Result<String, OracleError> {
    if !tree.is_tree() {
        return Err(OracleError::Invalid("input is not a tree"));
    }
    let n = tree.n();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in tree.edges() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    // Peel leaf layers until one or two center vertices remain.
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut frontier: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] <= 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &frontier {
            alive[v as usize] = false;
            remaining -= 1;
            for &w in &adj[v as usize] {
                if alive[w as usize] {
                    deg[w as usize] -= 1;
                    if deg[w as usize] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    let centers: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize]).collect();
    centers
        .iter()
        .map(|&c| ahu_encode(&adj, c, None))
        .min()
        .ok_or(OracleError::Invalid("tree has no center"))
}

enum TreeIterInner {
    Tiny(Option<LabeledGraph>),
    Codes {
        n: usize,
        cap: u32,
        code: Vec<u32>,
        counts: Vec<u32>,
        started: bool,
        done: bool,
    },
}

/// Streams all labeled trees on `n` vertices with maximum degree at most
/// `delta`, in Prufer-code lexicographic order.
pub struct TreeIter {
    inner: TreeIterInner,
}

impl TreeIter {
    fn smallest_free(counts: &[u32], cap: u32, from: u32) -> Option<u32> {
        (from..counts.len() as u32).find(|&v| counts[v as usize] < cap)
    }
}

impl Iterator for TreeIter {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        match &mut self.inner {
            TreeIterInner::Tiny(slot) => slot.take(),
            TreeIterInner::Codes {
                n,
                cap,
                code,
                counts,
                started,
                done,
            } => {
                if *done {
                    return None;
                }
                if !*started {
                    *started = true;
                    // Per-vertex capacity cap >= 1 and n*cap > n-2, so the
                    // greedy fill below always succeeds.
                    for pos in 0..code.len() {
                        match Self::smallest_free(counts, *cap, 0) {
                            Some(v) => {
                                code[pos] = v;
                                counts[v as usize] += 1;
                            }
                            None => {
                                *done = true;
                                return None;
                            }
                        }
                    }
                } else {
                    let mut pos = code.len();
                    loop {
                        if pos == 0 {
                            *done = true;
                            return None;
                        }
                        pos -= 1;
                        let old = code[pos];
                        counts[old as usize] -= 1;
                        if let Some(v) = Self::smallest_free(counts, *cap, old + 1) {
                            code[pos] = v;
                            counts[v as usize] += 1;
                            for p in pos + 1..code.len() {
                                let v = Self::smallest_free(counts, *cap, 0)
                                    .expect("capacity exceeds code length");
                                code[p] = v;
                                counts[v as usize] += 1;
                            }
                            break;
                        }
                    }
                }
                Some(prufer_decode(code, *n).expect("valid code"))
            }
        }
    }
}

/// All labeled trees on `n` vertices with maximum degree at most `delta`.
/// Brute-force scale only: `n` is capped at 10.
pub fn enumerate_trees(n: usize, delta: u32) -> Result<TreeIter, OracleError> {
    const BOUND: usize = 10;
    if n == 0 {
        return Err(OracleError::Invalid("tree needs at least one vertex"));
    }
    if n > BOUND {
        return Err(OracleError::TooLarge { n, bound: BOUND });
    }
    let inner = if n == 1 {
        TreeIterInner::Tiny(Some(LabeledGraph::new(1)))
    } else if n == 2 {
        TreeIterInner::Tiny((delta >= 1).then(|| LabeledGraph::from_edges(2, &[(0, 1)])))
    } else if delta < 2 {
        TreeIterInner::Tiny(None)
    } else {
        TreeIterInner::Codes {
            n,
            cap: delta - 1,
            code: vec![0; n - 2],
            counts: vec![0; n],
            started: false,
            done: false,
        }
    };
    Ok(TreeIter { inner })
}

/// Random degree-bounded tree, built by the recursive splitting generator:
/// the root draws a child count from `1..=k`, every other vertex from
/// `1..=k-1` (one stub goes to the parent), redrawing until the count fits
/// the subtree budget; the remaining budget is split into that many parts
/// uniformly at random, one subtree per part.
pub fn random_tree(n: usize, k: u32, seed: u64) -> Result<LabeledGraph, OracleError> {
    if n == 0 {
        return Err(OracleError::Invalid("tree needs at least one vertex"));
    }
    if k < 2 {
        return Err(OracleError::Invalid("degree bound must be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = LabeledGraph::new(n);
    let mut next_id = 0u32;
    // (parent, subtree size, is_root); explicit stack to keep recursion
    // depth independent of n.
    let mut stack: Vec<(Option<u32>, usize, bool)> = vec![(None, n, true)];
    while let Some((parent, size, is_root)) = stack.pop() {
        let v = next_id;
        next_id += 1;
        if let Some(p) = parent {
            g.add_edge(p, v);
        }
        if size == 1 {
            continue;
        }
        let dmax = if is_root { k } else { k - 1 };
        let d = loop {
            let d = rng.gen_range(1..=dmax) as usize;
            if d <= size - 1 {
                break d;
            }
        };
        // Uniform composition of size-1 into d positive parts: d-1 distinct
        // cut positions out of size-2.
        let mut cuts: Vec<usize> = rand::seq::index::sample(&mut rng, size - 2, d - 1).into_vec();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(d);
        let mut prev = 0;
        for &c in &cuts {
            parts.push(c + 1 - prev);
            prev = c + 1;
        }
        parts.push(size - 1 - prev);
        for part in parts.into_iter().rev() {
            stack.push((Some(v), part, false));
        }
    }
    debug_assert_eq!(next_id as usize, n);
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteForceMode {
    Exists,
    CountEnsembles,
    CountUnlabeled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Exists(bool),
    Count(u64),
}

/// Canonical edge multiset of a small graph: minimum over all vertex
/// permutations. Handles loops and parallel edges.
fn canonical_edges(g: &LabeledGraph) -> Vec<(u32, u32)> {
    let n = g.n();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut best: Option<Vec<(u32, u32)>> = None;
    fn visit(perm: &mut Vec<u32>, at: usize, g: &LabeledGraph, best: &mut Option<Vec<(u32, u32)>>) {
        if at == perm.len() {
            let mut mapped: Vec<(u32, u32)> = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (perm[u as usize], perm[v as usize]);
                    (a.min(b), a.max(b))
                })
                .collect();
            mapped.sort_unstable();
            if best.as_ref().map_or(true, |b| mapped < *b) {
                *best = Some(mapped);
            }
            return;
        }
        for i in at..perm.len() {
            perm.swap(at, i);
            visit(perm, at + 1, g, best);
            perm.swap(at, i);
        }
    }
    visit(&mut perm, 0, g, &mut best);
    best.unwrap_or_default()
}

struct Collector {
    mode: BruteForceMode,
    tree_canon: bool,
    found: bool,
    ensembles: BTreeSet<Vec<Partition>>,
    shapes: BTreeSet<Vec<(u32, u32)>>,
    tree_shapes: BTreeSet<String>,
}

impl Collector {
    fn new(mode: BruteForceMode, tree_canon: bool) -> Self {
        Collector {
            mode,
            tree_canon,
            found: false,
            ensembles: BTreeSet::new(),
            shapes: BTreeSet::new(),
            tree_shapes: BTreeSet::new(),
        }
    }

    /// Returns true when the search may stop early.
    fn take(&mut self, g: &LabeledGraph) -> bool {
        self.found = true;
        match self.mode {
            BruteForceMode::Exists => true,
            BruteForceMode::CountEnsembles => {
                let mut stars = g.stub_stars().expect("positive degrees");
                stars.sort();
                self.ensembles.insert(stars);
                false
            }
            BruteForceMode::CountUnlabeled => {
                if self.tree_canon {
                    self.tree_shapes
                        .insert(canonical_form(g).expect("tree input"));
                } else {
                    self.shapes.insert(canonical_edges(g));
                }
                false
            }
        }
    }

    fn outcome(self) -> BruteForceOutcome {
        match self.mode {
            BruteForceMode::Exists => BruteForceOutcome::Exists(self.found),
            BruteForceMode::CountEnsembles => BruteForceOutcome::Count(self.ensembles.len() as u64),
            BruteForceMode::CountUnlabeled => BruteForceOutcome::Count(
                (self.tree_shapes.len() + self.shapes.len()) as u64,
            ),
        }
    }
}

/// Backtracking search over edge multiplicities for all realizations of the
/// instance in the class, with per-vertex remaining-degree pruning.
fn search_graphs(inst: &Instance, cls: GraphClass, out: &mut Collector) {
    let n = inst.n();
    let allow_loops = matches!(cls, GraphClass::Multigraph);
    let allow_parallel = matches!(cls, GraphClass::Multigraph | GraphClass::LooplessMultigraph);
    let delta = inst.delta();
    let mut slots: Vec<(u32, u32)> = Vec::new();
    for i in 0..n as u32 {
        if allow_loops {
            slots.push((i, i));
        }
        for j in i + 1..n as u32 {
            slots.push((i, j));
        }
    }
    // Most degree a vertex can still gain from slots s.. (sound upper bound).
    let unit = if allow_parallel { delta as u64 } else { 1 };
    let loop_unit = 2 * (delta as u64 / 2);
    let mut weight_after = vec![vec![0u64; n]; slots.len() + 1];
    for s in (0..slots.len()).rev() {
        weight_after[s] = weight_after[s + 1].clone();
        let (u, v) = slots[s];
        if u == v {
            weight_after[s][u as usize] += loop_unit;
        } else {
            weight_after[s][u as usize] += unit;
            weight_after[s][v as usize] += unit;
        }
    }
    let mut rem: Vec<u32> = inst.d().to_vec();
    let mut g = LabeledGraph::new(n);

    fn feasible(rem: &[u32], bound: &[u64]) -> bool {
        rem.iter().zip(bound).all(|(&r, &b)| r as u64 <= b)
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        s: usize,
        slots: &[(u32, u32)],
        weight_after: &[Vec<u64>],
        allow_parallel: bool,
        rem: &mut [u32],
        g: &mut LabeledGraph,
        inst: &Instance,
        cls: GraphClass,
        out: &mut Collector,
    ) -> bool {
        if s == slots.len() {
            if rem.iter().any(|&r| r != 0) {
                return false;
            }
            if g.neighbor_degree_sums() == inst.f() && g.class_member(cls) {
                return out.take(g);
            }
            return false;
        }
        let (u, v) = slots[s];
        let max_m = if u == v {
            rem[u as usize] / 2
        } else if allow_parallel {
            rem[u as usize].min(rem[v as usize])
        } else {
            rem[u as usize].min(rem[v as usize]).min(1)
        };
        for m in 0..=max_m {
            if m > 0 {
                g.add_edge(u, v);
                if u == v {
                    rem[u as usize] -= 2;
                } else {
                    rem[u as usize] -= 1;
                    rem[v as usize] -= 1;
                }
            }
            if feasible(rem, &weight_after[s + 1])
                && go(s + 1, slots, weight_after, allow_parallel, rem, g, inst, cls, out)
            {
                // Unwind before propagating the stop signal.
                for _ in 0..m {
                    g.remove_edge(u, v);
                }
                if u == v {
                    rem[u as usize] += 2 * m;
                } else {
                    rem[u as usize] += m;
                    rem[v as usize] += m;
                }
                return true;
            }
        }
        for _ in 0..max_m {
            g.remove_edge(u, v);
        }
        if u == v {
            rem[u as usize] += 2 * max_m;
        } else {
            rem[u as usize] += max_m;
            rem[v as usize] += max_m;
        }
        false
    }

    go(
        0,
        &slots,
        &weight_after,
        allow_parallel,
        &mut rem,
        &mut g,
        inst,
        cls,
        out,
    );
}

/// Exhaustive ground truth for small instances. `Exists` reports whether
/// any graph of the class realizes the instance; `CountEnsembles` counts
/// distinct stub-star multisets over all realizations; `CountUnlabeled`
/// counts isomorphism classes of realizations.
pub fn brute_force(
    inst: &Instance,
    cls: GraphClass,
    mode: BruteForceMode,
) -> Result<BruteForceOutcome, OracleError> {
    let n = inst.n();
    match cls {
        GraphClass::Tree | GraphClass::Caterpillar => {
            let mut out = Collector::new(mode, true);
            for t in enumerate_trees(n, inst.delta())? {
                if t.degrees() == inst.d()
                    && t.neighbor_degree_sums() == inst.f()
                    && t.class_member(cls)
                    && out.take(&t)
                {
                    break;
                }
            }
            Ok(out.outcome())
        }
        _ => {
            const BOUND: usize = 8;
            if n > BOUND {
                return Err(OracleError::TooLarge { n, bound: BOUND });
            }
            let mut out = Collector::new(mode, false);
            search_graphs(inst, cls, &mut out);
            Ok(out.outcome())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Ensemble;

    #[test]
    fn seed_stream_is_deterministic() {
        let mut a = seeds(99);
        let mut b = seeds(99);
        let mut c = seeds(100);
        let first: Vec<u64> = (0..8).map(|_| a.draw()).collect();
        let second: Vec<u64> = (0..8).map(|_| b.draw()).collect();
        assert_eq!(first, second);
        assert_ne!(first, (0..8).map(|_| c.draw()).collect::<Vec<_>>());
    }

    #[test]
    fn prufer_roundtrip_exhaustive() {
        for n in 2..=7usize {
            let mut codes = vec![vec![]];
            for _ in 0..n - 2 {
                codes = codes
                    .into_iter()
                    .flat_map(|c: Vec<u32>| {
                        (0..n as u32).map(move |v| {
                            let mut c2 = c.clone();
                            c2.push(v);
                            c2
                        })
                    })
                    .collect();
            }
            for code in codes {
                let t = prufer_decode(&code, n).unwrap();
                assert!(t.is_tree());
                assert_eq!(prufer_encode(&t).unwrap(), code, "n={n}");
            }
        }
    }

    #[test]
    fn prufer_rejects_bad_input() {
        assert!(prufer_decode(&[0], 2).is_err());
        assert!(prufer_decode(&[5], 3).is_err());
        assert!(prufer_decode(&[], 0).is_err());
        let two_comps = LabeledGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(prufer_encode(&two_comps).is_err());
    }

    #[test]
    fn tree_counts_match_cayley() {
        assert_eq!(enumerate_trees(1, 4).unwrap().count(), 1);
        assert_eq!(enumerate_trees(2, 4).unwrap().count(), 1);
        assert_eq!(enumerate_trees(3, 4).unwrap().count(), 3);
        assert_eq!(enumerate_trees(4, 4).unwrap().count(), 16);
        assert_eq!(enumerate_trees(4, 2).unwrap().count(), 12);
        assert_eq!(enumerate_trees(5, 4).unwrap().count(), 125);
        assert_eq!(enumerate_trees(5, 3).unwrap().count(), 120);
        assert_eq!(enumerate_trees(6, 6).unwrap().count(), 1296);
        assert!(enumerate_trees(11, 4).is_err());
    }

    #[test]
    fn enumerated_trees_respect_degree_bound() {
        for delta in 2..=4u32 {
            for t in enumerate_trees(6, delta).unwrap() {
                assert!(t.is_tree());
                assert!(t.degrees().into_iter().max().unwrap() <= delta);
            }
        }
    }

    #[test]
    fn canonical_form_counts_unlabeled_trees() {
        // Number of unlabeled trees on n vertices: 1, 1, 1, 2, 3, 6, 11.
        let want = [1usize, 1, 1, 2, 3, 6, 11];
        for (i, &w) in want.iter().enumerate() {
            let n = i + 1;
            let forms: BTreeSet<String> = enumerate_trees(n, n as u32)
                .unwrap()
                .map(|t| canonical_form(&t).unwrap())
                .collect();
            assert_eq!(forms.len(), w, "n={n}");
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let mut rng = seeds(7);
        for _ in 0..1000 {
            let n = 2 + (rng.draw() % 9) as usize;
            let t = random_tree(n, 4, rng.draw()).unwrap();
            let form = canonical_form(&t).unwrap();
            // Random permutation of vertex labels.
            let mut perm: Vec<u32> = (0..n as u32).collect();
            for i in (1..n).rev() {
                let j = (rng.draw() % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            let edges: Vec<(u32, u32)> = t
                .edges()
                .iter()
                .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
                .collect();
            let relabeled = LabeledGraph::from_edges(n, &edges);
            assert_eq!(canonical_form(&relabeled).unwrap(), form);
        }
    }

    #[test]
    fn random_tree_shape() {
        assert_eq!(random_tree(1, 4, 5).unwrap().n(), 1);
        assert_eq!(random_tree(2, 4, 5).unwrap().sorted_edges(), vec![(0, 1)]);
        let mut rng = seeds(12);
        for _ in 0..100 {
            let t = random_tree(100, 4, rng.draw()).unwrap();
            assert!(t.is_tree());
            assert_eq!(t.m(), 99);
            assert!(t.degrees().into_iter().max().unwrap() <= 4);
        }
        let a = random_tree(50, 4, 777).unwrap();
        let b = random_tree(50, 4, 777).unwrap();
        assert_eq!(a.sorted_edges(), b.sorted_edges());
        assert!(random_tree(0, 4, 1).is_err());
        assert!(random_tree(5, 1, 1).is_err());
    }

    #[test]
    fn brute_force_counterexample_instance() {
        let inst = Instance::from_lists(vec![2, 2, 1, 3], vec![5, 5, 3, 5]).unwrap();
        assert_eq!(
            brute_force(&inst, GraphClass::Simple, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(true)
        );
        assert_eq!(
            brute_force(&inst, GraphClass::Forest, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(false)
        );
        assert_eq!(
            brute_force(&inst, GraphClass::Tree, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(false)
        );
        assert_eq!(
            brute_force(&inst, GraphClass::Simple, BruteForceMode::CountEnsembles).unwrap(),
            BruteForceOutcome::Count(1)
        );
    }

    #[test]
    fn brute_force_small_cases() {
        let edge = Instance::from_lists(vec![1, 1], vec![1, 1]).unwrap();
        assert_eq!(
            brute_force(&edge, GraphClass::Tree, BruteForceMode::CountUnlabeled).unwrap(),
            BruteForceOutcome::Count(1)
        );
        assert_eq!(
            brute_force(&edge, GraphClass::Tree, BruteForceMode::CountEnsembles).unwrap(),
            BruteForceOutcome::Count(1)
        );
        let star = Instance::from_lists(vec![3, 1, 1, 1], vec![3, 3, 3, 3]).unwrap();
        assert_eq!(
            brute_force(&star, GraphClass::Caterpillar, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(true)
        );
        // Two vertices of degree 4 each seeing degree sum 16: four parallel
        // edges, realizable as loopless multigraph but not simple.
        let banana = Instance::from_lists(vec![4, 4], vec![16, 16]).unwrap();
        assert_eq!(
            brute_force(&banana, GraphClass::LooplessMultigraph, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(true)
        );
        assert_eq!(
            brute_force(&banana, GraphClass::Simple, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(false)
        );
        assert_eq!(
            brute_force(&banana, GraphClass::Multigraph, BruteForceMode::CountEnsembles).unwrap(),
            BruteForceOutcome::Count(1)
        );
    }

    #[test]
    fn brute_force_connected_simple() {
        // Path P3: unique connected simple realization.
        let p3 = Instance::from_lists(vec![1, 2, 1], vec![2, 2, 2]).unwrap();
        assert_eq!(
            brute_force(&p3, GraphClass::ConnectedSimple, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(true)
        );
        // Two disjoint edges: simple yes, connected no.
        let m2 = Instance::from_lists(vec![1, 1, 1, 1], vec![1, 1, 1, 1]).unwrap();
        assert_eq!(
            brute_force(&m2, GraphClass::Simple, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(true)
        );
        assert_eq!(
            brute_force(&m2, GraphClass::ConnectedSimple, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(false)
        );
    }

    #[test]
    fn brute_force_counts_loops() {
        // Single vertex of degree 2: one loop; multigraph only.
        let loop1 = Instance::from_lists(vec![2], vec![4]).unwrap();
        assert_eq!(
            brute_force(&loop1, GraphClass::Multigraph, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(true)
        );
        assert_eq!(
            brute_force(&loop1, GraphClass::LooplessMultigraph, BruteForceMode::Exists).unwrap(),
            BruteForceOutcome::Exists(false)
        );
    }

    #[test]
    fn ensembles_are_counted_not_graphs() {
        // Path P4: D=(1,2,2,1), F=(2,3,3,2). As a labeled simple graph there
        // are several realizations but only one stub-star multiset.
        let p4 = Instance::from_lists(vec![1, 2, 2, 1], vec![2, 3, 3, 2]).unwrap();
        match brute_force(&p4, GraphClass::Simple, BruteForceMode::CountEnsembles).unwrap() {
            BruteForceOutcome::Count(c) => assert_eq!(c, 1),
            other => panic!("unexpected outcome {other:?}"),
        }
        let e = Ensemble::from_stars(
            [
                Partition::new(vec![2]),
                Partition::new(vec![2, 1]),
                Partition::new(vec![2, 1]),
                Partition::new(vec![2]),
            ]
            .iter(),
        );
        let inst = Instance::from_lists(vec![1, 2, 2, 1], vec![2, 3, 3, 2]).unwrap();
        assert!(inst.matches_ensemble(&e));
    }
}
