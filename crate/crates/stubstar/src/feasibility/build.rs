//! Translates an [`Instance`] and target [`GraphClass`] into a
//! [`LinearSystem`].
//!
//! Every system shares a base layer: one star-count variable per label
//! partition (canonical order), coupling rows tying star counts to the
//! per-(d, f) vertex histogram, per-color edge-count variables with
//! parity rows, and balance rows between color classes. Class layers
//! add the conditions that separate multigraphs from loopless
//! multigraphs, simple graphs, forests, trees and caterpillars.
//!
//! Each non-linear condition exists in two forms selected by
//! [`Encoding`]: a semantic leaf check evaluated on the star counts
//! during search, or a literal big-M formulation with min/max gadget
//! chains and prefix-sum DP tables.

use super::system::{
    LeafCheck, LinExpr, LinearSystem, Rel, SubsetCell, SubsetStar, SystemError, VarId, VarKind,
};
use crate::model::{all_colors, enumerate_partitions, GraphClass, Instance, Partition};
use std::collections::BTreeMap;

/// How non-linear conditions are expressed in the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    /// Degree-sequence tests, loopless bounds and subset conditions are
    /// evaluated directly on the star counts once pinned. Default:
    /// smaller systems, no big-M machinery, exact semantics.
    #[default]
    Semantic,
    /// Literal big-M formulation: min/max gadget chains for the
    /// loopless bound, DP-table variables for prefix-sum rows in the
    /// simple-graph case, and subset rows with min{1, p} selectors.
    /// Kept for fidelity testing against the semantic encoding; its
    /// simple-graph rows are deliberately the weaker k(k+1) form.
    BigM,
}

/// Hard ceiling on the degree bound for system construction: the
/// partition list grows like a binomial in delta.
const BUILD_DELTA_CAP: u32 = 8;
/// Forest/tree/caterpillar conditions quantify over color subsets
/// (2^(delta(delta+1)/2) of them), capping delta harder.
const FOREST_DELTA_CAP_SEMANTIC: u32 = 5;
const FOREST_DELTA_CAP_BIGM: u32 = 4;

/// Builds the feasibility system deciding whether the instance has a
/// realization in the given class. Star variables appear first, in
/// canonical partition order; solutions project onto ensembles.
pub fn build_system(
    inst: &Instance,
    cls: GraphClass,
    enc: Encoding,
) -> Result<LinearSystem, SystemError> {
    let delta = inst.delta();
    if delta > BUILD_DELTA_CAP {
        return Err(SystemError::DeltaTooLarge {
            delta,
            cap: BUILD_DELTA_CAP,
            what: "star partition enumeration",
        });
    }
    if cls.is_forest_family() {
        let cap = match enc {
            Encoding::Semantic => FOREST_DELTA_CAP_SEMANTIC,
            Encoding::BigM => FOREST_DELTA_CAP_BIGM,
        };
        if delta > cap {
            return Err(SystemError::DeltaTooLarge {
                delta,
                cap,
                what: "color-subset forest conditions",
            });
        }
    }

    let mut b = Builder::new(inst, cls);
    b.couple();
    b.parity_and_balance();
    match cls {
        GraphClass::Multigraph => {}
        GraphClass::LooplessMultigraph => b.loopless(enc)?,
        GraphClass::Simple => b.simple(enc)?,
        GraphClass::ConnectedSimple => {
            b.simple(enc)?;
            b.connectivity_precheck();
        }
        GraphClass::Forest => b.forest_family(enc, false)?,
        GraphClass::Tree | GraphClass::Caterpillar => b.forest_family(enc, true)?,
    }
    Ok(b.sys)
}

struct Builder<'a> {
    inst: &'a Instance,
    delta: u32,
    n: i64,
    parts: Vec<Partition>,
    x: Vec<VarId>,
    sys: LinearSystem,
}

impl<'a> Builder<'a> {
    fn new(inst: &'a Instance, cls: GraphClass) -> Self {
        let delta = inst.delta();
        let parts = enumerate_partitions(delta);
        let hist = inst.histogram();
        let mut sys = LinearSystem::new();
        let x: Vec<VarId> = parts
            .iter()
            .map(|p| {
                let cell = hist.get(&(p.height(), p.size())).copied().unwrap_or(0) as i64;
                // A caterpillar spine vertex keeps at most two non-leaf
                // neighbors, so stars with three or more labels > 1
                // cannot occur.
                let ub = if cls == GraphClass::Caterpillar && p.big_labels() >= 3 {
                    0
                } else {
                    cell
                };
                sys.add_var(format!("x_{p}"), 0, ub, VarKind::Star(p.clone()))
            })
            .collect();
        Builder { inst, delta, n: inst.n() as i64, parts, x, sys }
    }

    /// Star variables of each (degree, sum) cell must add up to the
    /// number of vertices demanding that cell. A demanded cell with no
    /// matching partition (f < d) yields an empty row equal to a
    /// positive count, which is correctly infeasible.
    fn couple(&mut self) {
        for (&(d, f), &count) in self.inst.histogram() {
            let terms: Vec<(VarId, i64)> = self
                .iter_stars()
                .filter(|(_, p)| p.height() == d && p.size() == f)
                .map(|(v, _)| (v, 1))
                .collect();
            self.sys.add_constraint(format!("couple d{d} f{f}"), terms, Rel::Eq, count as i64);
        }
    }

    /// Color-`i` stubs pair up into `p_i` edges (parity), and between
    /// two color classes the stub counts must agree (balance).
    fn parity_and_balance(&mut self) {
        let p: Vec<VarId> = (1..=self.delta)
            .map(|i| {
                self.sys.add_var(
                    format!("p_{i}"),
                    0,
                    self.n * i64::from(self.delta) / 2,
                    VarKind::EdgeCount(i),
                )
            })
            .collect();
        for i in 1..=self.delta {
            let mut terms: Vec<(VarId, i64)> = self
                .stars_of_height(i)
                .map(|(v, q)| (v, i64::from(q.count(i))))
                .collect();
            terms.push((p[(i - 1) as usize], -2));
            self.sys.add_constraint(format!("parity {i}"), terms, Rel::Eq, 0);
        }
        for i in 1..=self.delta {
            for j in (i + 1)..=self.delta {
                let mut terms: Vec<(VarId, i64)> = Vec::new();
                for (v, q) in self.stars_of_height(i) {
                    terms.push((v, i64::from(q.count(j))));
                }
                for (v, q) in self.stars_of_height(j) {
                    terms.push((v, -i64::from(q.count(i))));
                }
                self.sys.add_constraint(format!("balance {i} {j}"), terms, Rel::Eq, 0);
            }
        }
    }

    /// Smallest big-M constant valid for the expressions' box bounds.
    /// Several partitions can share one histogram cell, so sums of
    /// upper bounds may exceed n; deriving M from the actual ranges is
    /// always safe where a fixed constant may undershoot.
    fn auto_m(&self, x: &LinExpr, y: &LinExpr) -> i64 {
        let (xl, xu) = self.sys.expr_bounds(x);
        let (yl, yu) = self.sys.expr_bounds(y);
        (xu - yl).max(yu - xl).max(0)
    }

    fn auto_min(
        &mut self,
        label: String,
        x: LinExpr,
        y: LinExpr,
    ) -> Result<VarId, SystemError> {
        let m = self.auto_m(&x, &y);
        self.sys.encode_min(label, x, y, m)
    }

    fn auto_max(
        &mut self,
        label: String,
        x: LinExpr,
        y: LinExpr,
    ) -> Result<VarId, SystemError> {
        let m = self.auto_m(&x, &y);
        self.sys.encode_max(label, x, y, m)
    }

    fn iter_stars(&self) -> impl Iterator<Item = (VarId, &Partition)> + '_ {
        self.x.iter().copied().zip(self.parts.iter())
    }

    fn stars_of_height(&self, i: u32) -> impl Iterator<Item = (VarId, &Partition)> + '_ {
        self.iter_stars().filter(move |(_, p)| p.height() == i)
    }

    /// No color class may put more than half its stubs on one star.
    fn loopless(&mut self, enc: Encoding) -> Result<(), SystemError> {
        match enc {
            Encoding::Semantic => {
                for i in 1..=self.delta {
                    let entries: Vec<(VarId, u32)> = self
                        .stars_of_height(i)
                        .filter(|(_, p)| p.count(i) > 0)
                        .map(|(v, p)| (v, p.count(i)))
                        .collect();
                    if !entries.is_empty() {
                        self.sys.add_check(LeafCheck::LooplessBound { color: i, entries });
                    }
                }
            }
            Encoding::BigM => {
                for i in 1..=self.delta {
                    // z_k = min(1, #stars with k color-i stubs), then a
                    // max cascade over k * z_k gives the largest stub
                    // multiplicity held by any single populated star.
                    let mut chain: Option<LinExpr> = None;
                    for k in 1..=i {
                        let mut s = LinExpr::default();
                        for (v, p) in self.stars_of_height(i) {
                            if p.count(i) == k {
                                s.push(v, 1);
                            }
                        }
                        let z = self.auto_min(
                            format!("loopless{i} min{k}"),
                            LinExpr::constant(1),
                            s,
                        )?;
                        let term = LinExpr::scaled_var(z, i64::from(k));
                        chain = Some(match chain {
                            None => term,
                            Some(prev) => LinExpr::var(self.auto_max(
                                format!("loopless{i} max{k}"),
                                prev,
                                term,
                            )?),
                        });
                    }
                    let chain = chain.expect("delta >= 1");
                    let mut terms: Vec<(VarId, i64)> =
                        chain.terms.iter().map(|&(v, c)| (v, 2 * c)).collect();
                    for (v, p) in self.stars_of_height(i) {
                        terms.push((v, -i64::from(p.count(i))));
                    }
                    self.sys.add_constraint(format!("loopless{i} bound"), terms, Rel::Le, 0);
                }
            }
        }
        Ok(())
    }

    /// Simple-graph conditions: Erdos-Gallai within each color class
    /// and Gale-Ryser between classes.
    fn simple(&mut self, enc: Encoding) -> Result<(), SystemError> {
        match enc {
            Encoding::Semantic => {
                for i in 1..=self.delta {
                    let entries: Vec<(VarId, u32)> = self
                        .stars_of_height(i)
                        .filter(|(_, p)| p.count(i) > 0)
                        .map(|(v, p)| (v, p.count(i)))
                        .collect();
                    if !entries.is_empty() {
                        self.sys.add_check(LeafCheck::ErdosGallai {
                            color: i,
                            k_limit: self.delta as usize,
                            entries,
                        });
                    }
                }
                for i in 1..=self.delta {
                    for j in (i + 1)..=self.delta {
                        let side_a: Vec<(VarId, u32)> = self
                            .stars_of_height(i)
                            .filter(|(_, p)| p.count(j) > 0)
                            .map(|(v, p)| (v, p.count(j)))
                            .collect();
                        let side_b: Vec<(VarId, u32)> = self
                            .stars_of_height(j)
                            .filter(|(_, p)| p.count(i) > 0)
                            .map(|(v, p)| (v, p.count(i)))
                            .collect();
                        if !side_a.is_empty() || !side_b.is_empty() {
                            self.sys.add_check(LeafCheck::GaleRyser {
                                color: (i, j),
                                k_limit: (self.delta - 1) as usize,
                                side_a,
                                side_b,
                            });
                        }
                    }
                }
            }
            Encoding::BigM => {
                // Within a color class: first delta rows of the k(k+1)
                // form, with both prefix tables as DP variables.
                for i in 1..=self.delta {
                    let s = self.multiplicity_exprs(i, i);
                    let grid = self.min_grid(&format!("eg{i}"), &s, self.delta as usize)?;
                    let t = self.dp_table(&format!("t{i}"), &s, &grid, self.delta as usize, false)?;
                    let tt =
                        self.dp_table(&format!("tc{i}"), &s, &grid, self.delta as usize, true)?;
                    let l_max = s.len();
                    for k in 1..=self.delta as usize {
                        let mut terms =
                            vec![(t[l_max][k].unwrap(), 1), (tt[l_max][k].unwrap(), 1)];
                        for (v, p) in self.stars_of_height(i) {
                            terms.push((v, -i64::from(p.count(i).min(k as u32))));
                        }
                        self.sys.add_constraint(
                            format!("eg{i} k{k}"),
                            terms,
                            Rel::Le,
                            (k * (k + 1)) as i64,
                        );
                    }
                }
                // Between classes: first delta-1 Gale-Ryser rows, with
                // the prefix sums of the lower class as a DP table.
                for i in 1..=self.delta {
                    for j in (i + 1)..=self.delta {
                        let s = self.multiplicity_exprs(i, j);
                        let k_max = (self.delta - 1) as usize;
                        let grid = self.min_grid(&format!("gr{i}_{j}"), &s, k_max)?;
                        let t =
                            self.dp_table(&format!("t{i}_{j}"), &s, &grid, k_max, false)?;
                        let l_max = s.len();
                        for k in 1..=k_max {
                            let mut terms = vec![(t[l_max][k].unwrap(), 1)];
                            for (v, p) in self.stars_of_height(j) {
                                terms.push((v, -i64::from(p.count(i).min(k as u32))));
                            }
                            self.sys.add_constraint(
                                format!("gr{i}_{j} k{k}"),
                                terms,
                                Rel::Le,
                                0,
                            );
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `s[l-1]` = number of degree-`i` stars holding exactly `l` stubs
    /// of color `(i, j)`; `l` ranges over `1..=i`.
    fn multiplicity_exprs(&self, i: u32, j: u32) -> Vec<LinExpr> {
        (1..=i)
            .map(|l| {
                let mut e = LinExpr::default();
                for (v, p) in self.stars_of_height(i) {
                    if p.count(j) == l {
                        e.push(v, 1);
                    }
                }
                e
            })
            .collect()
    }

    /// `grid[l][k'] = min(k', s_l)` for `l = 1..=s.len()`, `k' = 1..=k_max`
    /// (index 0 unused).
    fn min_grid(
        &mut self,
        label: &str,
        s: &[LinExpr],
        k_max: usize,
    ) -> Result<Vec<Vec<Option<VarId>>>, SystemError> {
        let mut grid = vec![vec![None; k_max + 1]; s.len() + 1];
        for l in 0..s.len() {
            for k in 1..=k_max {
                let z = self.auto_min(
                    format!("{label} min l{} k{k}", l + 1),
                    LinExpr::constant(k as i64),
                    s[l].clone(),
                )?;
                grid[l + 1][k] = Some(z);
            }
        }
        Ok(grid)
    }

    /// Largest-prefix-sum table as max-gadget cascades:
    /// `t[l][k] = max over k' of (t[l-1][k-k'] + coef * min(k', s_l))`
    /// with `coef = l` plainly or `min(l, k)` in the capped variant.
    fn dp_table(
        &mut self,
        label: &str,
        s: &[LinExpr],
        grid: &[Vec<Option<VarId>>],
        k_max: usize,
        capped: bool,
    ) -> Result<Vec<Vec<Option<VarId>>>, SystemError> {
        let l_max = s.len();
        let mut t: Vec<Vec<Option<VarId>>> = vec![vec![None; k_max + 1]; l_max + 1];
        for l in 1..=l_max {
            for k in 1..=k_max {
                let coef = if capped { l.min(k) } else { l } as i64;
                let mut cur = cell_expr(&t, l - 1, k);
                for kp in 1..=k {
                    let mut arg = cell_expr(&t, l - 1, k - kp);
                    arg.push(grid[l][kp].unwrap(), coef);
                    let z = self.auto_max(format!("{label} l{l} k{k} c{kp}"), cur, arg)?;
                    cur = LinExpr::var(z);
                }
                t[l][k] = Some(cur.terms[0].0);
            }
        }
        Ok(t)
    }

    /// A connected graph needs at least n-1 edges; purely a constant
    /// test on the instance. The class decision stays incomplete: a
    /// feasible system only yields a candidate for the connectifier.
    fn connectivity_precheck(&mut self) {
        if self.inst.degree_sum() / 2 < (self.inst.n() as u64).saturating_sub(1) {
            self.sys.mark_infeasible("connected graph needs at least n-1 edges");
        }
    }

    /// Forest family: every color-subset restriction must be forest
    /// realizable; trees and caterpillars additionally pin the total
    /// degree sum to 2n-2.
    fn forest_family(&mut self, enc: Encoding, exact_edge_count: bool) -> Result<(), SystemError> {
        if exact_edge_count && self.inst.degree_sum() != 2 * self.inst.n() as u64 - 2 {
            self.sys.mark_infeasible("tree needs degree sum 2n-2");
        }
        let colors = all_colors(self.delta);
        let m = colors.len();
        // Per-partition chromatic degrees and touched-color masks.
        let chrom: Vec<Vec<u32>> = self
            .parts
            .iter()
            .map(|p| colors.iter().map(|&c| p.chromatic_degree(c)).collect())
            .collect();
        let masks: Vec<u32> = chrom
            .iter()
            .map(|cd| {
                cd.iter()
                    .enumerate()
                    .filter(|&(_, &d)| d > 0)
                    .fold(0u32, |acc, (c, _)| acc | (1 << c))
            })
            .collect();

        match enc {
            Encoding::Semantic => {
                // Singleton and pair subsets become relaxed rows (RHS 0
                // instead of -2) that steer propagation; the exact test
                // runs as leaf checks. Subsets touching only colors of
                // unoccupied cells reduce to smaller ones, so checks
                // cover submasks of the live colors: each fires as soon
                // as its own stars are pinned, and its interval
                // relaxation prunes doomed boxes even earlier, which
                // keeps larger subsets out of the row system entirely.
                // Above delta 4 the subset count explodes; only
                // singletons and pairs get early checks, and one
                // dynamic-programming sweep over all subsets stays
                // exact at the leaves.
                let live = self
                    .iter_stars()
                    .enumerate()
                    .filter(|(_, (_, p))| {
                        let cell = (p.height(), p.size());
                        self.inst.histogram().get(&cell).copied().unwrap_or(0) > 0
                    })
                    .fold(0u32, |acc, (idx, _)| acc | masks[idx]);
                let check_cap = if self.delta <= 4 { m as u32 } else { 2 };
                for mask in 1u32..(1 << m) {
                    let bits = mask.count_ones();
                    if bits > check_cap || mask & !live != 0 {
                        continue;
                    }
                    if bits <= 2 {
                        let terms = self.subset_terms(mask, &chrom, &masks, None);
                        if !terms.is_empty() {
                            self.sys.add_constraint(
                                format!("forest {}", subset_name(mask, &colors)),
                                terms,
                                Rel::Le,
                                0,
                            );
                        }
                    }
                    let mut entries: Vec<(VarId, u32)> = Vec::new();
                    let mut by_cell: BTreeMap<(u32, u32), Vec<(VarId, i64, bool)>> =
                        BTreeMap::new();
                    for (idx, (v, p)) in self.iter_stars().enumerate() {
                        let cell = (p.height(), p.size());
                        if self.inst.histogram().get(&cell).copied().unwrap_or(0) == 0 {
                            continue;
                        }
                        let member = masks[idx] & mask != 0;
                        let d = if member {
                            chrom[idx]
                                .iter()
                                .enumerate()
                                .filter(|&(c, _)| mask & (1 << c) != 0)
                                .map(|(_, &d)| d)
                                .sum::<u32>()
                        } else {
                            0
                        };
                        if member {
                            entries.push((v, d));
                        }
                        by_cell.entry(cell).or_default().push((v, i64::from(d) - 2 * i64::from(member), member));
                    }
                    if !entries.is_empty() {
                        let cells: Vec<SubsetCell> = by_cell
                            .into_iter()
                            .filter(|(_, members)| members.iter().any(|&(_, _, e)| e))
                            .map(|(cell, mut members)| {
                                members.sort_by_key(|&(_, coef, _)| coef);
                                SubsetCell {
                                    count: self.inst.histogram()[&cell] as i64,
                                    members,
                                }
                            })
                            .collect();
                        self.sys.add_check(LeafCheck::ForestSubset {
                            name: subset_name(mask, &colors),
                            entries,
                            cells,
                        });
                    }
                }
                if self.delta > 4 {
                    let stars: Vec<SubsetStar> = self
                        .iter_stars()
                        .enumerate()
                        .filter(|&(idx, _)| masks[idx] != 0)
                        .map(|(idx, (v, _))| SubsetStar {
                            var: v,
                            mask: masks[idx],
                            color_deg: chrom[idx].clone(),
                        })
                        .collect();
                    self.sys.add_check(LeafCheck::ForestSubsets { colors, stars });
                }
            }
            Encoding::BigM => {
                // Literal rows sum(x * d_I) <= 2 * sum(touched x) - 2,
                // activated by z = min(1, touched count) so empty
                // restrictions stay feasible.
                for mask in 1u32..(1 << m) {
                    let mut p_expr = LinExpr::default();
                    for (idx, (v, _)) in self.iter_stars().enumerate() {
                        if masks[idx] & mask != 0 {
                            p_expr.push(v, 1);
                        }
                    }
                    let z = self.auto_min(
                        format!("sel {}", subset_name(mask, &colors)),
                        LinExpr::constant(1),
                        p_expr,
                    )?;
                    let mut terms = self.subset_terms(mask, &chrom, &masks, Some(z));
                    if terms.len() == 1 {
                        // Only the selector: no star touches the subset.
                        terms.clear();
                    }
                    self.sys.add_constraint(
                        format!("forest {}", subset_name(mask, &colors)),
                        terms,
                        Rel::Le,
                        0,
                    );
                }
            }
        }
        Ok(())
    }

    /// Terms `x * (d_I - 2 * touched)`, plus `2z` when a selector
    /// variable is supplied.
    fn subset_terms(
        &self,
        mask: u32,
        chrom: &[Vec<u32>],
        masks: &[u32],
        selector: Option<VarId>,
    ) -> Vec<(VarId, i64)> {
        let mut terms: Vec<(VarId, i64)> = Vec::new();
        for (idx, (v, _)) in self.iter_stars().enumerate() {
            if masks[idx] & mask == 0 {
                continue;
            }
            let d_i: i64 = chrom[idx]
                .iter()
                .enumerate()
                .filter(|&(c, _)| mask & (1 << c) != 0)
                .map(|(_, &d)| i64::from(d))
                .sum();
            let coef = d_i - 2;
            if coef != 0 {
                terms.push((v, coef));
            }
        }
        if let Some(z) = selector {
            terms.push((z, 2));
        }
        terms
    }
}

fn cell_expr(t: &[Vec<Option<VarId>>], l: usize, k: usize) -> LinExpr {
    match t.get(l).and_then(|row| row.get(k)).copied().flatten() {
        Some(v) => LinExpr::var(v),
        None => LinExpr::constant(0),
    }
}

fn subset_name(mask: u32, colors: &[(u32, u32)]) -> String {
    let mut s = String::from("I");
    for (c, &(i, j)) in colors.iter().enumerate() {
        if mask & (1 << c) != 0 {
            s.push_str(&format!("_{i}{j}"));
        }
    }
    s
}
