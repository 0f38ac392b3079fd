//! Component-merging color swaps for forest-family realizations.
//!
//! A union of per-color forest pieces can come out disconnected and cyclic at
//! the same time. `swap_reduce` fixes one step of that: it finds a pair of
//! same-colored edges in different components, swaps their endpoints (which
//! preserves every stub-star exactly), and repeats along a prepared chain
//! until the component count drops.
//!
//! The chain is prepared by growing a color closure out of the shortest
//! cycle. Starting from the cycle's colors, whenever the colored subgraph is
//! split but still inside one component, a path between two same-colored
//! edges is walked and every new-colored edge on it is labeled with that
//! pair. The first swap uses a color whose edges escape the cycle's
//! component. If a swap fails to merge (both edges were bridges), it provably
//! separates the labeled pair one level down, so the cascade descends until
//! it reaches a cycle edge, where removal cannot disconnect anything and the
//! merge is forced. Any deviation from that argument is reported as
//! `SwapChainBroken` instead of being papered over.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::AssemblerError;
use crate::model::{Ensemble, GraphClass, LabeledGraph};

/// Undirected edge, endpoints normalized so `u <= v`.
type Edge = (u32, u32);
/// Degree pair of an edge's endpoints, normalized ascending.
type Color = (u32, u32);

fn norm(u: u32, v: u32) -> Edge {
    if u <= v { (u, v) } else { (v, u) }
}

/// One endpoint swap. `removed` is oriented as `((v1, v2), (v3, v4))` with
/// `deg(v1) = deg(v4)`; `added` is then `((v1, v3), (v2, v4))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapStep {
    pub removed: ((u32, u32), (u32, u32)),
    pub added: ((u32, u32), (u32, u32)),
    /// Component count after this step.
    pub components: usize,
}

impl fmt::Display for SwapStep {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((v1, v2), (v3, v4)) = self.removed;
        write!(
            w,
            "swap ({v1},{v2})({v3},{v4}) -> ({v1},{v3})({v2},{v4}) components={}",
            self.components
        )
    }
}

/// Ordered log of the swaps one `swap_reduce` call performed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwapTrace {
    pub steps: Vec<SwapStep>,
}

impl fmt::Display for SwapTrace {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(w, "{s}")?;
        }
        Ok(())
    }
}

fn ensemble_matches(g: &LabeledGraph, e: &Ensemble) -> bool {
    match g.stub_stars() {
        Some(stars) => Ensemble::from_stars(&stars) == *e,
        None => false,
    }
}

fn color_of(deg: &[u32], e: Edge) -> Color {
    let (a, b) = (deg[e.0 as usize], deg[e.1 as usize]);
    if a <= b { (a, b) } else { (b, a) }
}

fn sorted_adjacency(g: &LabeledGraph) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); g.n()];
    for &(u, v) in g.edges() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    adj
}

/// Shortest cycle, as a normalized edge list. Scans edges in ascending order
/// and BFSes for the shortest path closing each one, so ties resolve to the
/// smallest edge. Only the 2-core is scanned; leaves cannot sit on a cycle.
fn shortest_cycle(g: &LabeledGraph) -> Option<Vec<Edge>> {
    let mut core_deg = g.degrees();
    let adj = sorted_adjacency(g);
    let mut queue: VecDeque<u32> = (0..g.n() as u32).filter(|&v| core_deg[v as usize] == 1).collect();
    while let Some(v) = queue.pop_front() {
        core_deg[v as usize] = 0;
        for &w in &adj[v as usize] {
            if core_deg[w as usize] > 0 {
                core_deg[w as usize] -= 1;
                if core_deg[w as usize] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| core_deg[u as usize] >= 2 && core_deg[v as usize] >= 2)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let in_core = |v: u32| core_deg[v as usize] >= 2;

    // One BFS per core edge: the shortest u-v path avoiding the edge (u, v)
    // itself closes the shortest cycle through it. The visit buffers are
    // shared across edges with an epoch stamp instead of reallocating.
    let mut parent = vec![0u32; g.n()];
    let mut seen = vec![0u32; g.n()];
    let mut dist = vec![0usize; g.n()];
    let mut epoch = 0u32;
    let mut q = VecDeque::new();
    let mut best: Option<Vec<Edge>> = None;
    for &(u, v) in &edges {
        epoch += 1;
        q.clear();
        seen[u as usize] = epoch;
        dist[u as usize] = 0;
        q.push_back(u);
        let limit = best.as_ref().map(|c| c.len() - 1);
        let mut reached = false;
        'bfs: while let Some(x) = q.pop_front() {
            if let Some(l) = limit {
                if dist[x as usize] + 1 >= l {
                    break;
                }
            }
            for &y in &adj[x as usize] {
                if !in_core(y) || seen[y as usize] == epoch || (x == u && y == v) {
                    continue;
                }
                seen[y as usize] = epoch;
                parent[y as usize] = x;
                dist[y as usize] = dist[x as usize] + 1;
                if y == v {
                    reached = true;
                    break 'bfs;
                }
                q.push_back(y);
            }
        }
        if !reached {
            continue;
        }
        let mut cyc = vec![norm(u, v)];
        let mut x = v;
        while x != u {
            let p = parent[x as usize];
            cyc.push(norm(p, x));
            x = p;
        }
        if best.as_ref().is_none_or(|b| cyc.len() < b.len()) {
            best = Some(cyc);
        }
    }
    best
}

/// Shortest path between two edges: BFS from both endpoints of `from` until
/// either endpoint of `to` is reached. Returns the path's edges in walking
/// order; empty if the edges already touch.
fn edge_path(adj: &[Vec<u32>], n: usize, from: Edge, to: Edge) -> Option<Vec<Edge>> {
    let mut parent: Vec<Option<u32>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::new();
    for s in [from.0, from.1] {
        if !seen[s as usize] {
            seen[s as usize] = true;
            q.push_back(s);
        }
    }
    let hit = |v: u32| v == to.0 || v == to.1;
    if hit(from.0) || hit(from.1) {
        return Some(Vec::new());
    }
    let mut reached = None;
    'bfs: while let Some(x) = q.pop_front() {
        for &y in &adj[x as usize] {
            if seen[y as usize] {
                continue;
            }
            seen[y as usize] = true;
            parent[y as usize] = Some(x);
            if hit(y) {
                reached = Some(y);
                break 'bfs;
            }
            q.push_back(y);
        }
    }
    let mut path = Vec::new();
    let mut x = reached?;
    while let Some(p) = parent[x as usize] {
        path.push(norm(p, x));
        x = p;
    }
    path.reverse();
    Some(path)
}

/// Orients a same-colored edge pair `(a, b)` as `(v1, v2, v3, v4)` with
/// `deg(v1) = deg(v4)` and `deg(v2) = deg(v3)`, so that the replacement
/// edges `(v1, v3)` and `(v2, v4)` carry the same color again.
fn orient(deg: &[u32], a: Edge, b: Edge) -> (u32, u32, u32, u32) {
    let (p, _q) = color_of(deg, a);
    let (v1, v2) = if deg[a.0 as usize] == p { (a.0, a.1) } else { (a.1, a.0) };
    let (v4, v3) = if deg[b.0 as usize] == p { (b.0, b.1) } else { (b.1, b.0) };
    (v1, v2, v3, v4)
}

fn broken(msg: impl Into<String>) -> AssemblerError {
    AssemblerError::SwapChainBroken(msg.into())
}

/// Merges two components of `g` with color-preserving endpoint swaps.
///
/// Preconditions: `g` realizes `e`, `e` passes the forest-family validator,
/// and `g` is simple with at least one cycle and at least two components.
/// The returned graph realizes `e` with strictly fewer components; the trace
/// lists every swap with the component count after it (unchanged for inner
/// cascade steps, strictly smaller for the final one).
pub fn swap_reduce(g: &LabeledGraph, e: &Ensemble) -> Result<(LabeledGraph, SwapTrace), AssemblerError> {
    let contract = |msg: &str| AssemblerError::Contract(msg.into());
    if !ensemble_matches(g, e) {
        return Err(contract("graph does not realize the given ensemble"));
    }
    let report = crate::feasibility::validate_ensemble(e, GraphClass::Forest);
    if !report.ok {
        return Err(contract("ensemble is not forest-realizable"));
    }
    if !g.is_simple() {
        return Err(contract("graph is not simple"));
    }
    if g.is_forest() {
        return Err(contract("graph is already acyclic"));
    }
    if g.component_count() < 2 {
        return Err(contract("graph has fewer than two components"));
    }
    reduce_once(g, e, true)
}

/// [`swap_reduce`] without the precondition sweep or the per-swap ensemble
/// audit, for callers that validated the ensemble and the graph once and
/// then drain the cycles in a loop. Every swap preserves the skipped
/// invariants by construction: [`orient`] reproduces the removed colors at
/// all four endpoints, and both added edges join distinct components, so
/// they cannot duplicate an existing edge.
pub(super) fn swap_reduce_unchecked(
    g: &LabeledGraph,
    e: &Ensemble,
) -> Result<(LabeledGraph, SwapTrace), AssemblerError> {
    reduce_once(g, e, false)
}

fn reduce_once(
    g: &LabeledGraph,
    e: &Ensemble,
    audit: bool,
) -> Result<(LabeledGraph, SwapTrace), AssemblerError> {
    let deg = g.degrees();
    let adj = sorted_adjacency(g);
    let comp = g.components();
    let cycle = shortest_cycle(g).ok_or_else(|| broken("cyclic graph yielded no cycle"))?;
    let home = comp[cycle[0].0 as usize];

    // Color closure grown from the cycle. `intro` keeps, per color, the
    // first edge that brought the color in: a cycle edge at level 0, a
    // labeled path edge afterwards. Labels record which same-colored pair a
    // path edge was walked for; first write wins.
    let mut level: BTreeMap<Color, usize> = BTreeMap::new();
    let mut intro: BTreeMap<Color, Edge> = BTreeMap::new();
    let mut labels: BTreeMap<Edge, (Edge, Edge)> = BTreeMap::new();
    let mut cycle_sorted = cycle.clone();
    cycle_sorted.sort_unstable();
    for &ce in &cycle_sorted {
        let c = color_of(&deg, ce);
        level.entry(c).or_insert(0);
        intro.entry(c).or_insert(ce);
    }

    let all_edges = {
        let mut es = g.sorted_edges();
        es.dedup();
        es
    };
    let mut round = 0usize;
    let start_pair: (Edge, Edge) = loop {
        let colored: Vec<Edge> = all_edges
            .iter()
            .copied()
            .filter(|&f| level.contains_key(&color_of(&deg, f)))
            .collect();
        let outside: Vec<Edge> = colored
            .iter()
            .copied()
            .filter(|&f| comp[f.0 as usize] != home)
            .collect();
        if !outside.is_empty() {
            // Smallest (introducer, outside edge) pair, for determinism.
            let pick = outside
                .iter()
                .map(|&f| (intro[&color_of(&deg, f)], f))
                .min()
                .expect("outside is nonempty");
            break pick;
        }
        if round > all_edges.len() + level.len() {
            return Err(broken("color closure failed to escape the cycle's component"));
        }
        // The colored subgraph sits inside one component of the whole graph.
        // Split it into its own components and walk paths from the cycle
        // side to every stranded same-colored edge.
        let mut hg = LabeledGraph::new(g.n());
        for &f in &colored {
            hg.add_edge(f.0, f.1);
        }
        let hcomp = hg.components();
        let cyc_side = hcomp[cycle[0].0 as usize];
        let targets: Vec<Edge> = colored
            .iter()
            .copied()
            .filter(|&f| hcomp[f.0 as usize] != cyc_side)
            .collect();
        if targets.is_empty() {
            return Err(broken("colored subgraph is connected but the graph is not reduced"));
        }
        let mut grew = false;
        for &e2 in &targets {
            let c = color_of(&deg, e2);
            let e1 = intro[&c];
            let path = edge_path(&adj, g.n(), e1, e2)
                .ok_or_else(|| broken("no path between same-colored edges in one component"))?;
            for f in path {
                let cf = color_of(&deg, f);
                if !level.contains_key(&cf) {
                    level.insert(cf, round + 1);
                    intro.insert(cf, f);
                    grew = true;
                }
                if level[&cf] == round + 1 {
                    labels.entry(f).or_insert((e1, e2));
                }
            }
        }
        if !grew {
            return Err(broken("color closure stalled without new colors"));
        }
        round += 1;
    };

    // Swap cascade. The pair's first edge is always on the cycle side; if a
    // swap leaves the component count unchanged, its label pair is now the
    // one split across components and the cascade descends.
    let mut work = g.clone();
    let mut trace = SwapTrace::default();
    let mut pair = start_pair;
    let mut comp_now = comp;
    loop {
        let (a, b) = pair;
        if !work.edges().contains(&a) || !work.edges().contains(&b) {
            return Err(broken(format!("cascade edge ({},{}) or ({},{}) vanished", a.0, a.1, b.0, b.1)));
        }
        if comp_now[a.0 as usize] == comp_now[b.0 as usize] {
            return Err(broken(format!(
                "cascade pair ({},{}) ({},{}) not split across components",
                a.0, a.1, b.0, b.1
            )));
        }
        let before = comp_now.iter().max().map_or(0, |&m| m + 1);
        let (v1, v2, v3, v4) = orient(&deg, a, b);
        work.remove_edge(a.0, a.1);
        work.remove_edge(b.0, b.1);
        work.add_edge(v1, v3);
        work.add_edge(v2, v4);
        comp_now = work.components();
        let after = comp_now.iter().max().map_or(0, |&m| m + 1);
        if audit && !ensemble_matches(&work, e) {
            return Err(broken("swap changed the ensemble"));
        }
        trace.steps.push(SwapStep {
            removed: ((v1, v2), (v3, v4)),
            added: ((v1, v3), (v2, v4)),
            components: after,
        });
        if after < before {
            return Ok((work, trace));
        }
        if after > before {
            return Err(broken("swap increased the component count"));
        }
        match labels.get(&a) {
            Some(&next) => pair = next,
            // An unlabeled first edge is a cycle edge; removing it cannot
            // disconnect its side, so a non-merging swap here is impossible.
            None => return Err(broken("non-merging swap at a cycle edge")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Partition;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn ensemble_of(g: &LabeledGraph) -> Ensemble {
        Ensemble::from_stars(&g.stub_stars().expect("positive degrees"))
    }

    /// 4-cycle plus 4-path; same ensemble as the 8-path, one swap apart.
    fn square_and_path() -> LabeledGraph {
        LabeledGraph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7)],
        )
    }

    #[test]
    fn cycle_color_in_other_component_merges_in_one_swap() {
        let g = square_and_path();
        let e = ensemble_of(&g);
        assert_eq!(e.count(&pt(&[2, 2])), 4);
        let (h, trace) = swap_reduce(&g, &e).expect("reducible");
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].components, 1);
        assert!(h.is_tree());
        assert_eq!(ensemble_of(&h), e);
    }

    #[test]
    fn trace_lines_follow_the_swap_format() {
        let g = square_and_path();
        let e = ensemble_of(&g);
        let (_, trace) = swap_reduce(&g, &e).unwrap();
        let text = trace.to_string();
        assert!(text.starts_with("swap ("), "got {text:?}");
        assert!(text.contains(") -> ("));
        assert!(text.trim_end().ends_with("components=1"));
    }

    /// Two bridges swap first without merging, then the cascade descends to
    /// a cycle edge and the merge is forced. Component 1 carries a 4-cycle
    /// with degrees 2,3,2,4 plus tails; component 2 is a double star whose
    /// edge color (3,5) only appears on a labeled path edge in component 1.
    fn cascade_graph() -> LabeledGraph {
        LabeledGraph::from_edges(
            22,
            &[
                // cycle a=0, b=1, c=2, d=3
                (0, 1),
                (1, 2),
                (2, 3),
                (0, 3),
                // d's extra leaves
                (3, 7),
                (3, 8),
                // tail b - p1 - p2 - p3 with p1 = 4 (deg 5), p2 = 5, p3 = 6
                (1, 4),
                (4, 5),
                (5, 6),
                (4, 9),
                (4, 10),
                (4, 11),
                (6, 12),
                (6, 13),
                // second component: double star s1 = 14 (deg 3), s2 = 15 (deg 5)
                (14, 15),
                (14, 16),
                (14, 17),
                (15, 18),
                (15, 19),
                (15, 20),
                (15, 21),
            ],
        )
    }

    #[test]
    fn bridge_swap_cascades_down_to_the_cycle() {
        let g = cascade_graph();
        let e = ensemble_of(&g);
        assert_eq!(g.component_count(), 2);
        assert!(!g.is_forest());
        let (h, trace) = swap_reduce(&g, &e).expect("reducible");
        // First swap exchanges the two (3,5) bridges and cannot merge; the
        // second lands on the cycle edge (0,1) and must. The second removed
        // edge prints oriented, degree-5 endpoint first.
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].components, 2);
        assert_eq!(trace.steps[0].removed, ((1, 4), (15, 14)));
        assert_eq!(trace.steps[1].components, 1);
        assert_eq!(trace.steps[1].removed.0, (0, 1));
        assert!(h.is_tree());
        assert_eq!(ensemble_of(&h), e);
    }

    #[test]
    fn acyclic_input_is_a_contract_error() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (2, 3)]);
        let e = ensemble_of(&g);
        let err = swap_reduce(&g, &e).unwrap_err();
        assert!(matches!(err, AssemblerError::Contract(_)), "got {err:?}");
    }

    #[test]
    fn non_forest_ensemble_is_a_contract_error() {
        // Two triangles: every subgraph condition on color (2,2) fails.
        let g = LabeledGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let e = ensemble_of(&g);
        let err = swap_reduce(&g, &e).unwrap_err();
        assert!(matches!(err, AssemblerError::Contract(_)), "got {err:?}");
    }

    #[test]
    fn mismatched_ensemble_is_a_contract_error() {
        let g = square_and_path();
        let mut e = Ensemble::new();
        e.add(pt(&[1]), 2);
        let err = swap_reduce(&g, &e).unwrap_err();
        assert!(matches!(err, AssemblerError::Contract(_)), "got {err:?}");
    }

    #[test]
    fn every_cycle_plus_path_union_reduces_to_a_tree() {
        // C_j plus P_{m-j} realizes the m-path's ensemble for any j; one
        // call must merge the two components and land on the tree.
        for m in 7..=12usize {
            for j in 3..=(m - 4) {
                let mut edges: Vec<(u32, u32)> =
                    (0..j).map(|v| (v as u32, ((v + 1) % j) as u32)).collect();
                for v in j..m - 1 {
                    edges.push((v as u32, (v + 1) as u32));
                }
                let g = LabeledGraph::from_edges(m, &edges);
                let e = ensemble_of(&g);
                let (h, trace) = swap_reduce(&g, &e).expect("reducible");
                assert!(h.is_tree(), "m={m} j={j}");
                assert_eq!(ensemble_of(&h), e, "m={m} j={j}");
                assert_eq!(trace.steps.last().unwrap().components, 1);
            }
        }
    }

    #[test]
    fn shortest_cycle_prefers_the_small_one() {
        // A triangle and a 5-cycle share vertex 0.
        let g = LabeledGraph::from_edges(
            7,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5), (5, 6), (0, 6)],
        );
        let cyc = shortest_cycle(&g).unwrap();
        assert_eq!(cyc.len(), 3);
        let mut verts: Vec<u32> = cyc.iter().flat_map(|&(u, v)| [u, v]).collect();
        verts.sort_unstable();
        verts.dedup();
        assert_eq!(verts, vec![0, 1, 2]);
    }

    #[test]
    fn shortest_cycle_ignores_trees() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(shortest_cycle(&g).is_none());
    }
}
