//! Degree-sequence feasibility tests and constructive realizers.
//!
//! Checks: Erdos-Gallai (simple), Gale-Ryser (forced-bipartite simple),
//! multigraph parity, loopless max bound, forest edge bound. Each check has
//! a constructive counterpart that builds a witness graph; builders verify
//! their output degrees post-hoc and refuse to return a wrong graph.

use crate::model::LabeledGraph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("sequence is not realizable in the requested class: {0}")]
    NotRealizable(&'static str),
    #[error("constructed graph violates its contract: {0}")]
    ContractViolation(String),
}

/// Erdos-Gallai test for simple graphs; zeros are allowed. With
/// `k_limit = Some(t)` only the first `t` inequalities are checked, which is
/// sufficient whenever all entries are at most `t`.
pub fn check_erdos_gallai(seq: &[u32], k_limit: Option<usize>) -> bool {
    let mut d: Vec<u64> = seq.iter().map(|&x| x as u64).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let total: u64 = d.iter().sum();
    if total % 2 != 0 {
        return false;
    }
    let n = d.len();
    let upper = k_limit.unwrap_or(n).min(n);
    let mut lhs = 0u64;
    for k in 1..=upper {
        lhs += d[k - 1];
        let mut rhs = (k as u64) * (k as u64 - 1);
        for &dh in &d[k..] {
            rhs += dh.min(k as u64);
        }
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Gale-Ryser test for a forced-bipartite simple graph with side degree
/// sequences `a` and `b`. With `k_limit = Some(t)` only the first `t`
/// inequalities are checked, sufficient whenever `max(b) <= t + 1`.
pub fn check_gale_ryser(a: &[u32], b: &[u32], k_limit: Option<usize>) -> bool {
    let sa: u64 = a.iter().map(|&x| x as u64).sum();
    let sb: u64 = b.iter().map(|&x| x as u64).sum();
    if sa != sb {
        return false;
    }
    let mut a: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    a.sort_unstable_by(|x, y| y.cmp(x));
    let upper = k_limit.unwrap_or(a.len()).min(a.len());
    let mut lhs = 0u64;
    for k in 1..=upper {
        lhs += a[k - 1];
        let rhs: u64 = b.iter().map(|&x| (x as u64).min(k as u64)).sum();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Multigraphs (loops and parallel edges allowed) only need an even sum.
pub fn check_multigraph(seq: &[u32]) -> bool {
    seq.iter().map(|&x| x as u64).sum::<u64>() % 2 == 0
}

/// Loopless multigraphs need an even sum and no entry larger than the rest
/// combined.
pub fn check_loopless(seq: &[u32]) -> bool {
    let total: u64 = seq.iter().map(|&x| x as u64).sum();
    let max = seq.iter().copied().max().unwrap_or(0) as u64;
    total % 2 == 0 && 2 * max <= total
}

/// Forests: even sum bounded by `2 * (positives - 1)`; the all-zero
/// sequence is the empty forest.
pub fn check_forest(seq: &[u32]) -> bool {
    let total: u64 = seq.iter().map(|&x| x as u64).sum();
    if total == 0 {
        return true;
    }
    let p = seq.iter().filter(|&&x| x > 0).count() as u64;
    total % 2 == 0 && total <= 2 * (p - 1)
}

/// Largest achievable sums of at most `k` entries drawn from the multiset
/// `{l with multiplicity s[l-1]}`.
///
/// `t(l, k)` restricts to entries of value at most `l`. The capped variant
/// counts an entry of value `v` as `min(v, k)`, mirroring the right-hand
/// side of the truncated simple-graph inequalities.
#[derive(Debug, Clone)]
pub struct MaxSumTable {
    rows: Vec<Vec<u64>>, // rows[l][k], l in 0..=l_max, k in 0..=k_max
}

impl MaxSumTable {
    pub fn t(&self, l: usize, k: usize) -> u64 {
        self.rows[l][k]
    }

    pub fn l_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn k_max(&self) -> usize {
        self.rows[0].len() - 1
    }
}

/// Builds the table for value multiplicities `s` (`s[l-1]` entries of value
/// `l`), columns `0..=k_max`.
pub fn maxsum_table(s: &[u64], k_max: usize, capped: bool) -> MaxSumTable {
    let l_max = s.len();
    let mut rows = vec![vec![0u64; k_max + 1]; l_max + 1];
    for l in 1..=l_max {
        for k in 1..=k_max {
            // Greedy: entries are positive, so the best sum of at most k
            // entries takes the k largest (capped values keep the order).
            let mut budget = k as u64;
            let mut acc = 0u64;
            for v in (1..=l).rev() {
                if budget == 0 {
                    break;
                }
                let take = s[v - 1].min(budget);
                let value = if capped { (v as u64).min(k as u64) } else { v as u64 };
                acc += take * value;
                budget -= take;
            }
            rows[l][k] = acc;
        }
    }
    MaxSumTable { rows }
}

fn verify_degrees(g: &LabeledGraph, want: &[u32]) -> Result<(), BuildError> {
    let got = g.degrees();
    if got != want {
        return Err(BuildError::ContractViolation(format!(
            "degree mismatch: wanted {want:?}, built {got:?}"
        )));
    }
    Ok(())
}

/// Index order: remaining degree descending, original index ascending.
fn by_remaining(rem: &[u32]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rem.len()).collect();
    idx.sort_by(|&a, &b| rem[b].cmp(&rem[a]).then(a.cmp(&b)));
    idx
}

/// Havel-Hakimi construction of a simple graph. Ties go to the smaller
/// original index, so the output is deterministic.
pub fn build_havel_hakimi(seq: &[u32]) -> Result<LabeledGraph, BuildError> {
    if !check_erdos_gallai(seq, None) {
        return Err(BuildError::NotRealizable("Erdos-Gallai fails"));
    }
    let mut g = LabeledGraph::new(seq.len());
    let mut rem = seq.to_vec();
    loop {
        let order = by_remaining(&rem);
        let u = order[0];
        if rem[u] == 0 {
            break;
        }
        let need = rem[u] as usize;
        let targets: Vec<usize> = order[1..]
            .iter()
            .copied()
            .filter(|&v| rem[v] > 0)
            .take(need)
            .collect();
        if targets.len() < need {
            return Err(BuildError::NotRealizable("ran out of stubs"));
        }
        for v in targets {
            g.add_edge(u as u32, v as u32);
            rem[v] -= 1;
        }
        rem[u] = 0;
    }
    verify_degrees(&g, seq)?;
    if !g.is_simple() {
        return Err(BuildError::ContractViolation("not simple".into()));
    }
    Ok(g)
}

/// Gale-Ryser construction: vertices `0..a.len()` form side A, the rest side
/// B; every edge crosses. Each A vertex (largest degree first) connects to
/// the currently largest-remaining B vertices.
pub fn build_bipartite(a: &[u32], b: &[u32]) -> Result<LabeledGraph, BuildError> {
    if !check_gale_ryser(a, b, None) {
        return Err(BuildError::NotRealizable("Gale-Ryser fails"));
    }
    let mut g = LabeledGraph::new(a.len() + b.len());
    let mut rem_b = b.to_vec();
    for &u in &by_remaining(a) {
        let need = a[u] as usize;
        let order = by_remaining(&rem_b);
        let targets: Vec<usize> = order
            .into_iter()
            .filter(|&v| rem_b[v] > 0)
            .take(need)
            .collect();
        if targets.len() < need {
            return Err(BuildError::NotRealizable("ran out of stubs"));
        }
        for v in targets {
            g.add_edge(u as u32, (a.len() + v) as u32);
            rem_b[v] -= 1;
        }
    }
    let mut want = a.to_vec();
    want.extend_from_slice(b);
    verify_degrees(&g, &want)?;
    if !g.is_simple() {
        return Err(BuildError::ContractViolation("not simple".into()));
    }
    Ok(g)
}

/// Forced-bipartite multigraph construction; only needs equal side sums.
/// Parallel edges appear whenever the greedy pairing repeats a pair.
pub fn build_bipartite_multigraph(a: &[u32], b: &[u32]) -> Result<LabeledGraph, BuildError> {
    let sa: u64 = a.iter().map(|&x| x as u64).sum();
    let sb: u64 = b.iter().map(|&x| x as u64).sum();
    if sa != sb {
        return Err(BuildError::NotRealizable("side sums differ"));
    }
    let mut g = LabeledGraph::new(a.len() + b.len());
    let mut rem_a = a.to_vec();
    let mut rem_b = b.to_vec();
    loop {
        let u = by_remaining(&rem_a)[0];
        if rem_a[u] == 0 {
            break;
        }
        let v = by_remaining(&rem_b)[0];
        g.add_edge(u as u32, (a.len() + v) as u32);
        rem_a[u] -= 1;
        rem_b[v] -= 1;
    }
    let mut want = a.to_vec();
    want.extend_from_slice(b);
    verify_degrees(&g, &want)?;
    Ok(g)
}

/// Multigraph construction; pairs the two largest remaining stubs, and
/// closes a loop when only one vertex still has stubs.
pub fn build_multigraph(seq: &[u32]) -> Result<LabeledGraph, BuildError> {
    if !check_multigraph(seq) {
        return Err(BuildError::NotRealizable("odd degree sum"));
    }
    let mut g = LabeledGraph::new(seq.len());
    let mut rem = seq.to_vec();
    loop {
        let order = by_remaining(&rem);
        let u = order[0];
        if rem[u] == 0 {
            break;
        }
        let v = order[1..].iter().copied().find(|&v| rem[v] > 0);
        match v {
            Some(v) => {
                g.add_edge(u as u32, v as u32);
                rem[u] -= 1;
                rem[v] -= 1;
            }
            None => {
                // Lone vertex; remaining stubs are even, close loops.
                if rem[u] % 2 != 0 {
                    return Err(BuildError::NotRealizable("odd stub left over"));
                }
                for _ in 0..rem[u] / 2 {
                    g.add_edge(u as u32, u as u32);
                }
                rem[u] = 0;
            }
        }
    }
    verify_degrees(&g, seq)?;
    Ok(g)
}

/// Loopless multigraph construction: repeatedly join the two largest
/// remaining stubs. The max-versus-rest bound stays invariant, so no lone
/// vertex is ever left holding stubs.
pub fn build_loopless(seq: &[u32]) -> Result<LabeledGraph, BuildError> {
    if !check_loopless(seq) {
        return Err(BuildError::NotRealizable("loopless bound fails"));
    }
    let mut g = LabeledGraph::new(seq.len());
    let mut rem = seq.to_vec();
    loop {
        let order = by_remaining(&rem);
        let u = order[0];
        if rem[u] == 0 {
            break;
        }
        let v = order[1..]
            .iter()
            .copied()
            .find(|&v| rem[v] > 0)
            .ok_or(BuildError::NotRealizable("lone vertex with stubs"))?;
        g.add_edge(u as u32, v as u32);
        rem[u] -= 1;
        rem[v] -= 1;
    }
    verify_degrees(&g, seq)?;
    if g.has_loop() {
        return Err(BuildError::ContractViolation("loop built".into()));
    }
    Ok(g)
}

/// Tree construction for positive degrees summing to `2(p-1)`: vertices in
/// descending degree order attach to the earliest vertex with an open stub.
fn attach_tree(g: &mut LabeledGraph, vertices: &[usize], degs: &[u32]) {
    debug_assert_eq!(
        degs.iter().map(|&d| d as u64).sum::<u64>(),
        2 * (vertices.len() as u64 - 1)
    );
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| degs[b].cmp(&degs[a]).then(vertices[a].cmp(&vertices[b])));
    let mut open: Vec<(usize, u32)> = Vec::new(); // (vertex, free stubs) in attach order
    for (pos, &k) in order.iter().enumerate() {
        let v = vertices[k];
        if pos == 0 {
            open.push((v, degs[k]));
            continue;
        }
        let slot = open.iter_mut().find(|(_, free)| *free > 0).expect("open stub");
        g.add_edge(slot.0 as u32, v as u32);
        slot.1 -= 1;
        open.push((v, degs[k] - 1));
    }
}

/// Forest construction. Splits off single-edge components from degree-1
/// vertices until one tree's worth of degree remains, then attaches that
/// tree greedily. Zero entries stay isolated.
pub fn build_forest(seq: &[u32]) -> Result<LabeledGraph, BuildError> {
    if !check_forest(seq) {
        return Err(BuildError::NotRealizable("forest bound fails"));
    }
    let mut g = LabeledGraph::new(seq.len());
    let total: u64 = seq.iter().map(|&x| x as u64).sum();
    if total == 0 {
        return Ok(g);
    }
    let mut alive: Vec<usize> = (0..seq.len()).filter(|&v| seq[v] > 0).collect();
    let mut comps = alive.len() as u64 - total / 2;
    while comps > 1 {
        let mut ones = alive.iter().copied().filter(|&v| seq[v] == 1);
        let u = ones.next().expect("degree-1 vertex");
        let v = ones.next().expect("second degree-1 vertex");
        g.add_edge(u as u32, v as u32);
        alive.retain(|&x| x != u && x != v);
        comps -= 1;
    }
    if !alive.is_empty() {
        let degs: Vec<u32> = alive.iter().map(|&v| seq[v]).collect();
        attach_tree(&mut g, &alive, &degs);
    }
    verify_degrees(&g, seq)?;
    if !g.is_forest() {
        return Err(BuildError::ContractViolation("not a forest".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erdos_gallai_basics() {
        assert!(!check_erdos_gallai(&[4, 4], None));
        assert!(check_erdos_gallai(&[3, 1, 1, 1], None));
        assert!(check_erdos_gallai(&[2, 2, 2], None));
        assert!(!check_erdos_gallai(&[1], None)); // odd sum
        assert!(check_erdos_gallai(&[], None));
        assert!(check_erdos_gallai(&[0, 0], None));
        assert!(!check_erdos_gallai(&[3, 3, 1, 1], None));
    }

    #[test]
    fn gale_ryser_basics() {
        assert!(check_gale_ryser(&[2, 2], &[2, 2], None));
        assert!(!check_gale_ryser(&[2], &[1], None));
        assert!(check_gale_ryser(&[3, 3], &[2, 2, 2], None));
        assert!(!check_gale_ryser(&[2], &[2], None));
        assert!(check_gale_ryser(&[], &[], None));
    }

    #[test]
    fn multigraph_and_loopless_checks() {
        assert!(check_multigraph(&[4, 4]));
        assert!(check_loopless(&[4, 4]));
        assert!(check_multigraph(&[2]));
        assert!(!check_loopless(&[2]));
        assert!(!check_multigraph(&[3]));
        assert!(!check_loopless(&[5, 1, 2]));
    }

    #[test]
    fn forest_check() {
        assert!(check_forest(&[1, 1]));
        assert!(!check_forest(&[2, 2, 2]));
        assert!(check_forest(&[1, 1, 1, 1]));
        assert!(check_forest(&[2, 1, 1]));
        assert!(!check_forest(&[2, 2]));
        assert!(check_forest(&[0, 0]));
        assert!(check_forest(&[]));
        assert!(!check_forest(&[4, 4]));
        assert!(check_forest(&[3, 1, 1, 1]));
    }

    /// Sort-based oracle for the max-sum tables, written against the
    /// definition rather than the greedy implementation.
    fn maxsum_oracle(s: &[u64], l: usize, k: usize, capped: bool) -> u64 {
        let mut vals: Vec<u64> = Vec::new();
        for v in 1..=l {
            for _ in 0..s[v - 1] {
                vals.push(if capped { (v as u64).min(k as u64) } else { v as u64 });
            }
        }
        vals.sort_unstable_by(|a, b| b.cmp(a));
        vals.iter().take(k).sum()
    }

    #[test]
    fn maxsum_examples() {
        // Two 1s and one 2: best two of {1,1,2} is 3.
        let t = maxsum_table(&[2, 1], 4, false);
        assert_eq!(t.t(2, 2), 3);
        assert_eq!(t.t(1, 2), 2);
        assert_eq!(t.t(2, 1), 2);
        assert_eq!(t.t(2, 0), 0);
        // Four 3s capped at k=2 count as 2 each.
        let tc = maxsum_table(&[0, 0, 4], 4, true);
        assert_eq!(tc.t(3, 2), 4);
        assert_eq!(tc.t(3, 4), 12);
        // Zero multiset.
        let tz = maxsum_table(&[0, 0, 0], 3, false);
        assert_eq!(tz.t(3, 3), 0);
    }

    #[test]
    fn maxsum_matches_sort_oracle() {
        let mut rng = crate::oracle::seeds(42);
        for _ in 0..1000 {
            let l_max = 1 + (rng.draw() % 6) as usize;
            let s: Vec<u64> = (0..l_max).map(|_| rng.draw() % 5).collect();
            let k_max = 1 + (rng.draw() % 8) as usize;
            for &capped in &[false, true] {
                let table = maxsum_table(&s, k_max, capped);
                for l in 0..=l_max {
                    for k in 0..=k_max {
                        assert_eq!(
                            table.t(l, k),
                            maxsum_oracle(&s, l, k, capped),
                            "s={s:?} l={l} k={k} capped={capped}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn truncated_checks_agree_with_full() {
        let mut rng = crate::oracle::seeds(43);
        for _ in 0..1000 {
            let n = 1 + (rng.draw() % 8) as usize;
            let delta = 6u32;
            let seq: Vec<u32> = (0..n).map(|_| (rng.draw() % 7) as u32).collect();
            let full = check_erdos_gallai(&seq, None);
            let truncated = check_erdos_gallai(&seq, Some(delta as usize));
            assert_eq!(full, truncated, "seq={seq:?}");
            let m = 1 + (rng.draw() % 6) as usize;
            let b: Vec<u32> = (0..m).map(|_| (rng.draw() % 7) as u32).collect();
            let full = check_gale_ryser(&seq, &b, None);
            // Valid truncation bound: entries of b are at most 6.
            let truncated = check_gale_ryser(&seq, &b, Some(5));
            assert_eq!(full, truncated, "a={seq:?} b={b:?}");
        }
    }

    #[test]
    fn builder_star_and_triangle() {
        let g = build_havel_hakimi(&[3, 1, 1, 1]).unwrap();
        assert_eq!(g.degrees(), vec![3, 1, 1, 1]);
        assert!(g.is_simple());
        let g = build_havel_hakimi(&[2, 2, 2]).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(build_havel_hakimi(&[4, 4]).is_err());
    }

    #[test]
    fn builder_bipartite() {
        let g = build_bipartite(&[1], &[1]).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 1)]);
        let g = build_bipartite(&[2, 2], &[2, 2]).unwrap();
        assert_eq!(g.degrees(), vec![2, 2, 2, 2]);
        assert!(g.is_simple());
        let g = build_bipartite(&[2, 1, 1], &[2, 2]).unwrap();
        assert_eq!(g.degrees(), vec![2, 1, 1, 2, 2]);
        // No within-side edges.
        for &(u, v) in g.edges() {
            assert!((u as usize) < 3 && (v as usize) >= 3);
        }
        assert!(build_bipartite(&[2], &[2]).is_err());
    }

    #[test]
    fn builder_bipartite_multigraph() {
        // Needs a double edge; simple Gale-Ryser would refuse.
        let g = build_bipartite_multigraph(&[2], &[2]).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 1), (0, 1)]);
        assert!(build_bipartite_multigraph(&[2], &[1]).is_err());
    }

    #[test]
    fn builder_multigraph() {
        let g = build_multigraph(&[2]).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 0)]);
        let g = build_multigraph(&[4, 4]).unwrap();
        assert_eq!(g.m(), 4);
        assert_eq!(g.degrees(), vec![4, 4]);
        let g = build_multigraph(&[4, 2]).unwrap();
        assert_eq!(g.degrees(), vec![4, 2]);
        assert!(build_multigraph(&[3]).is_err());
    }

    #[test]
    fn builder_loopless() {
        let g = build_loopless(&[4, 4]).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 1); 4]);
        assert!(build_loopless(&[2]).is_err());
        let g = build_loopless(&[2, 1, 1]).unwrap();
        assert!(!g.has_loop());
        assert_eq!(g.degrees(), vec![2, 1, 1]);
    }

    #[test]
    fn builder_forest() {
        let g = build_forest(&[1, 1, 1, 1]).unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.is_forest());
        assert_eq!(g.component_count(), 2);
        let g = build_forest(&[3, 1, 1, 1]).unwrap();
        assert!(g.is_tree());
        let g = build_forest(&[2, 1, 2, 1, 0]).unwrap();
        assert_eq!(g.degrees(), vec![2, 1, 2, 1, 0]);
        assert!(g.is_forest());
        assert!(build_forest(&[2, 2]).is_err());
        let g = build_forest(&[0, 0]).unwrap();
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn builders_match_degrees_randomly() {
        let mut rng = crate::oracle::seeds(44);
        for _ in 0..500 {
            let n = 1 + (rng.draw() % 7) as usize;
            let seq: Vec<u32> = (0..n).map(|_| (rng.draw() % 5) as u32).collect();
            if check_erdos_gallai(&seq, None) {
                let g = build_havel_hakimi(&seq).unwrap();
                assert_eq!(g.degrees(), seq);
                assert!(g.is_simple());
            }
            if check_multigraph(&seq) {
                assert_eq!(build_multigraph(&seq).unwrap().degrees(), seq);
            }
            if check_loopless(&seq) {
                let g = build_loopless(&seq).unwrap();
                assert_eq!(g.degrees(), seq);
                assert!(!g.has_loop());
            }
            if check_forest(&seq) {
                let g = build_forest(&seq).unwrap();
                assert_eq!(g.degrees(), seq);
                assert!(g.is_forest());
                let total: u64 = seq.iter().map(|&x| x as u64).sum();
                let p = seq.iter().filter(|&&x| x > 0).count() as u64;
                if p > 0 {
                    let isolated = n as u64 - p;
                    assert_eq!(g.component_count() as u64 - isolated, p - total / 2);
                }
            }
            let m = 1 + (rng.draw() % 5) as usize;
            let b: Vec<u32> = (0..m).map(|_| (rng.draw() % 4) as u32).collect();
            if check_gale_ryser(&seq, &b, None) {
                let g = build_bipartite(&seq, &b).unwrap();
                let mut want = seq.clone();
                want.extend_from_slice(&b);
                assert_eq!(g.degrees(), want);
            }
            let sa: u64 = seq.iter().map(|&x| x as u64).sum();
            let sb: u64 = b.iter().map(|&x| x as u64).sum();
            if sa == sb {
                let g = build_bipartite_multigraph(&seq, &b).unwrap();
                let mut want = seq.clone();
                want.extend_from_slice(&b);
                assert_eq!(g.degrees(), want);
                for &(u, v) in g.edges() {
                    assert!((u as usize) < n && (v as usize) >= n);
                }
            }
        }
    }

    /// Exhaustive existence oracle over simple graphs with bounded vertex
    /// count, independent of the class checks above.
    fn exists_simple(seq: &[u32]) -> bool {
        let n = seq.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        fn go(rem: &mut Vec<i64>, pairs: &[(usize, usize)], at: usize) -> bool {
            if rem.iter().all(|&r| r == 0) {
                return true;
            }
            if at == pairs.len() {
                return false;
            }
            let (i, j) = pairs[at];
            // Skip this pair.
            if go(rem, pairs, at + 1) {
                return true;
            }
            if rem[i] > 0 && rem[j] > 0 {
                rem[i] -= 1;
                rem[j] -= 1;
                let ok = go(rem, pairs, at + 1);
                rem[i] += 1;
                rem[j] += 1;
                if ok {
                    return true;
                }
            }
            false
        }
        let mut rem: Vec<i64> = seq.iter().map(|&x| x as i64).collect();
        go(&mut rem, &pairs, 0)
    }

    #[test]
    fn erdos_gallai_matches_exhaustive() {
        let mut rng = crate::oracle::seeds(45);
        for _ in 0..300 {
            let n = 1 + (rng.draw() % 6) as usize;
            let seq: Vec<u32> = (0..n).map(|_| (rng.draw() % n as u64) as u32).collect();
            assert_eq!(
                check_erdos_gallai(&seq, None),
                exists_simple(&seq),
                "seq={seq:?}"
            );
        }
    }
}
