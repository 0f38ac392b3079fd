//! Integer linear systems with min/max gadgets and semantic side checks.
//!
//! A [`LinearSystem`] is a bag of bounded integer variables, linear
//! constraints, recorded min/max gadgets (for auditing), and semantic
//! leaf checks that the solver evaluates once all participating
//! variables are pinned. Systems are built by [`crate::feasibility::build`]
//! and solved by [`crate::feasibility::solver`].

use crate::model::Partition;
use crate::seqcheck;
use std::fmt::Write as _;
use thiserror::Error;

/// Errors raised while constructing a system.
#[derive(Debug, Error)]
pub enum SystemError {
    /// The instance's degree bound exceeds what an encoding can handle.
    #[error("degree bound {delta} exceeds the practical cap {cap} for {what}")]
    DeltaTooLarge { delta: u32, cap: u32, what: &'static str },
    /// A min/max gadget was requested with a big-M constant smaller than
    /// the worst-case gap between its two arguments.
    #[error("big-M constant {m} too small for gadget {label:?}; need at least {needed}")]
    BigMTooSmall { m: i64, needed: i64, label: String },
}

/// Index of a variable inside its [`LinearSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// What a variable stands for. Only `Star` variables carry meaning
/// outside the system; everything else is encoding machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    /// Count of stub-stars with the given label partition.
    Star(Partition),
    /// Half the number of stubs of one color class (`p_i` for color `i`).
    EdgeCount(u32),
    /// Auxiliary variable introduced by a gadget or a DP table.
    Aux,
}

/// A bounded integer variable.
#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub lb: i64,
    pub ub: i64,
    pub kind: VarKind,
}

/// Comparison direction of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
        }
    }
}

/// `sum(coef * var) REL rhs`. Terms never repeat a variable.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub label: String,
    pub terms: Vec<(VarId, i64)>,
    pub rel: Rel,
    pub rhs: i64,
}

/// A linear expression `sum(coef * var) + constant` used as a gadget
/// argument.
#[derive(Debug, Clone, Default)]
pub struct LinExpr {
    pub terms: Vec<(VarId, i64)>,
    pub constant: i64,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        LinExpr { terms: Vec::new(), constant: c }
    }

    pub fn var(v: VarId) -> Self {
        LinExpr { terms: vec![(v, 1)], constant: 0 }
    }

    pub fn scaled_var(v: VarId, coef: i64) -> Self {
        LinExpr { terms: vec![(v, coef)], constant: 0 }
    }

    pub fn from_terms(terms: Vec<(VarId, i64)>) -> Self {
        LinExpr { terms, constant: 0 }
    }

    pub fn push(&mut self, v: VarId, coef: i64) {
        if coef != 0 {
            self.terms.push((v, coef));
        }
    }

    /// Evaluates the expression under a full assignment.
    pub fn eval(&self, values: &[i64]) -> i64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * values[v.0]).sum::<i64>()
    }
}

/// Whether a gadget pins `z` to the minimum or maximum of its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    Min,
    Max,
}

/// A recorded min/max gadget: `z = min(x, y)` or `z = max(x, y)`,
/// enforced with four big-M rows and one binary selector `b`. Kept so
/// solutions can be audited against the true min/max.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub label: String,
    pub x: LinExpr,
    pub y: LinExpr,
    pub z: VarId,
    pub b: VarId,
}

impl Gadget {
    /// True value the gadget should pin `z` to under `values`.
    pub fn expected(&self, values: &[i64]) -> i64 {
        let x = self.x.eval(values);
        let y = self.y.eval(values);
        match self.kind {
            GadgetKind::Min => x.min(y),
            GadgetKind::Max => x.max(y),
        }
    }
}

/// A semantic condition evaluated by the solver once every variable it
/// mentions is pinned. These replace big-M machinery in the semantic
/// encoding; each is a direct statement about the counts, not a row.
#[derive(Debug, Clone)]
pub enum LeafCheck {
    /// No color class may put more than half its stubs on one star:
    /// `2 * max{ mult : x > 0 } <= sum(x * mult)` where `mult` is the
    /// color-`color` multiplicity of each degree-`color` star.
    LooplessBound { color: u32, entries: Vec<(VarId, u32)> },
    /// The monochromatic degree sequence of color `(color, color)` must
    /// pass the Erdos-Gallai test (first `k_limit` rows suffice).
    ErdosGallai { color: u32, k_limit: usize, entries: Vec<(VarId, u32)> },
    /// The bichromatic bipartite degree pair for `(i, j)` must pass the
    /// Gale-Ryser test (first `k_limit` rows suffice).
    GaleRyser {
        color: (u32, u32),
        k_limit: usize,
        side_a: Vec<(VarId, u32)>,
        side_b: Vec<(VarId, u32)>,
    },
    /// Every restriction of the ensemble to a subset of colors must be
    /// realizable as a forest: the restricted degree sum is even and
    /// either zero or at most `2 * (touched stars - 1)`.
    ForestSubsets { colors: Vec<(u32, u32)>, stars: Vec<SubsetStar> },
    /// The same forest condition for one fixed color subset. `entries`
    /// holds `(var, d_I)` for the stars the subset touches (`d_I > 0`),
    /// so the check fires as soon as those counts are pinned, well
    /// before stars outside the subset are decided. `cells` groups the
    /// stars by histogram cell for the interval relaxation.
    ForestSubset { name: String, entries: Vec<(VarId, u32)>, cells: Vec<SubsetCell> },
}

/// Per-star data for the subset condition: which colors touch the star
/// and how many stubs of each color it holds.
#[derive(Debug, Clone)]
pub struct SubsetStar {
    pub var: VarId,
    /// Bitmask over the `colors` list of the enclosing check.
    pub mask: u32,
    /// Chromatic degree per color, indexed like `colors`.
    pub color_deg: Vec<u32>,
}

/// One histogram cell as seen by a subset check: all star variables of
/// the cell, each with its excess coefficient `d_I - 2` (zero for stars
/// the subset does not touch) and a flag for membership in the subset.
/// Members are sorted by coefficient so the interval relaxation can
/// distribute the cell count greedily.
#[derive(Debug, Clone)]
pub struct SubsetCell {
    /// How many vertices demand this cell; the member counts must add
    /// up to exactly this.
    pub count: i64,
    pub members: Vec<(VarId, i64, bool)>,
}

impl LeafCheck {
    pub fn label(&self) -> String {
        match self {
            LeafCheck::LooplessBound { color, .. } => format!("loopless({color},{color})"),
            LeafCheck::ErdosGallai { color, .. } => format!("erdos_gallai({color},{color})"),
            LeafCheck::GaleRyser { color: (i, j), .. } => format!("gale_ryser({i},{j})"),
            LeafCheck::ForestSubsets { .. } => "forest_subsets".to_string(),
            LeafCheck::ForestSubset { name, .. } => format!("forest_subset {name}"),
        }
    }

    /// Variables the check reads; the solver waits until all are pinned.
    pub fn vars(&self) -> Vec<VarId> {
        match self {
            LeafCheck::LooplessBound { entries, .. } | LeafCheck::ErdosGallai { entries, .. } => {
                entries.iter().map(|&(v, _)| v).collect()
            }
            LeafCheck::GaleRyser { side_a, side_b, .. } => {
                side_a.iter().chain(side_b).map(|&(v, _)| v).collect()
            }
            LeafCheck::ForestSubsets { stars, .. } => stars.iter().map(|s| s.var).collect(),
            LeafCheck::ForestSubset { entries, .. } => entries.iter().map(|&(v, _)| v).collect(),
        }
    }

    /// Evaluates the check under a full (or sufficiently pinned)
    /// assignment. `Err` carries a human-readable reason.
    pub fn evaluate(&self, values: &[i64]) -> Result<(), String> {
        match self {
            LeafCheck::LooplessBound { color, entries } => {
                let mut max_mult = 0u64;
                let mut total = 0u64;
                for &(v, mult) in entries {
                    let x = values[v.0] as u64;
                    if x > 0 && u64::from(mult) > max_mult {
                        max_mult = u64::from(mult);
                    }
                    total += x * u64::from(mult);
                }
                if 2 * max_mult <= total {
                    Ok(())
                } else {
                    Err(format!(
                        "color ({color},{color}): one star holds {max_mult} of {total} stubs"
                    ))
                }
            }
            LeafCheck::ErdosGallai { color, k_limit, entries } => {
                let seq = expand_degrees(entries, values);
                if seqcheck::check_erdos_gallai(&seq, Some(*k_limit)) {
                    Ok(())
                } else {
                    Err(format!("color ({color},{color}): degree sequence {seq:?} fails Erdos-Gallai"))
                }
            }
            LeafCheck::GaleRyser { color: (i, j), k_limit, side_a, side_b } => {
                let a = expand_degrees(side_a, values);
                let b = expand_degrees(side_b, values);
                if seqcheck::check_gale_ryser(&a, &b, Some(*k_limit)) {
                    Ok(())
                } else {
                    Err(format!("color ({i},{j}): bipartite pair {a:?} / {b:?} fails Gale-Ryser"))
                }
            }
            LeafCheck::ForestSubsets { colors, stars } => {
                forest_subsets_ok(colors, stars, values)
            }
            LeafCheck::ForestSubset { name, entries, .. } => {
                let mut degree_sum = 0i64;
                let mut touched = 0i64;
                for &(v, d) in entries {
                    degree_sum += i64::from(d) * values[v.0];
                    touched += values[v.0];
                }
                if degree_sum == 0 || (degree_sum % 2 == 0 && degree_sum <= 2 * (touched - 1)) {
                    Ok(())
                } else {
                    Err(format!(
                        "subset {name}: degree sum {degree_sum} on {touched} stars is no forest"
                    ))
                }
            }
        }
    }

    /// Interval form of [`evaluate`](Self::evaluate): `true` when the
    /// current bounds already rule out every completion, so the search
    /// can turn around without pinning the remaining variables.
    ///
    /// Only the per-subset forest test has a useful relaxation. Writing
    /// the condition as `sum((d_I - 2) * x) <= -2`, the left side is
    /// minimized per histogram cell: each cell must place exactly
    /// `count` vertices, so the floor pours the remaining count into
    /// the cheapest coefficients first. Plain per-variable bounds would
    /// let every undecided leaf-heavy star claim the whole cell at
    /// once, hiding violations until the final pin; the cell equality
    /// is what makes the floor bite early. If the floor exceeds `-2`
    /// while some star is forced into the subset, no leaf below can
    /// pass. Parity is left to the exact leaf test.
    pub fn doomed(&self, lb: &[i64], ub: &[i64]) -> bool {
        match self {
            LeafCheck::ForestSubset { cells, .. } => {
                let mut touched = 0i64;
                let mut floor = 0i64;
                for cell in cells {
                    let mut rest = cell.count;
                    let mut member_lb = 0i64;
                    let mut parked_ub = 0i64;
                    for &(v, _, member) in &cell.members {
                        rest -= lb[v.0];
                        if member {
                            member_lb += lb[v.0];
                        } else {
                            parked_ub += ub[v.0];
                        }
                    }
                    touched += member_lb.max(cell.count - parked_ub);
                    for &(v, coef, _) in &cell.members {
                        floor += coef * lb[v.0];
                        if rest > 0 {
                            let take = rest.min(ub[v.0] - lb[v.0]);
                            floor += coef * take;
                            rest -= take;
                        }
                    }
                }
                touched >= 1 && floor > -2
            }
            _ => false,
        }
    }
}

fn expand_degrees(entries: &[(VarId, u32)], values: &[i64]) -> Vec<u32> {
    let mut seq = Vec::new();
    for &(v, d) in entries {
        if d == 0 {
            continue;
        }
        for _ in 0..values[v.0] {
            seq.push(d);
        }
    }
    seq
}

/// Checks forest realizability of every color-subset restriction.
///
/// For a subset `I` the restriction keeps only stubs whose color lies in
/// `I`; it is forest realizable iff its degree sum is even and either
/// zero or at most `2 * (p_I - 1)`, where `p_I` counts stars touched by
/// `I`. Subset sums are built with two passes of subset dynamic
/// programming instead of looping over stars per subset.
fn forest_subsets_ok(
    colors: &[(u32, u32)],
    stars: &[SubsetStar],
    values: &[i64],
) -> Result<(), String> {
    let m = colors.len();
    assert!(m <= 20, "color subset check limited to 20 colors");
    let full = 1usize << m;

    // untouched[j] = number of stars whose colors all lie inside j.
    let mut untouched = vec![0i64; full];
    // Per-color stub totals, then degree sums additively over subsets.
    let mut color_total = vec![0i64; m];
    let mut active = 0i64;
    for s in stars {
        let x = values[s.var.0];
        if x == 0 {
            continue;
        }
        active += x;
        untouched[s.mask as usize] += x;
        for (c, &d) in s.color_deg.iter().enumerate() {
            color_total[c] += x * i64::from(d);
        }
    }
    for c in 0..m {
        let bit = 1usize << c;
        for j in 0..full {
            if j & bit != 0 {
                untouched[j] += untouched[j ^ bit];
            }
        }
    }

    let mut degree_sum = vec![0i64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        degree_sum[mask] = degree_sum[mask & (mask - 1)] + color_total[low];
    }

    for mask in 1..full {
        let sum = degree_sum[mask];
        let touched = active - untouched[full - 1 - mask];
        let ok = sum % 2 == 0 && (sum == 0 || sum <= 2 * (touched - 1));
        if !ok {
            let subset: Vec<(u32, u32)> = (0..m)
                .filter(|c| mask & (1 << c) != 0)
                .map(|c| colors[c])
                .collect();
            return Err(format!(
                "colors {subset:?}: restricted degree sum {sum} on {touched} touched stars is not a forest"
            ));
        }
    }
    Ok(())
}

/// A full assignment of values to every variable of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub(crate) values: Vec<i64>,
}

impl Assignment {
    pub fn new(values: Vec<i64>) -> Self {
        Assignment { values }
    }

    pub fn value(&self, v: VarId) -> i64 {
        self.values[v.0]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// A system of bounded integer variables and linear constraints.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    gadgets: Vec<Gadget>,
    checks: Vec<LeafCheck>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: i64, ub: i64, kind: VarKind) -> VarId {
        assert!(lb <= ub, "variable with empty domain");
        let id = VarId(self.vars.len());
        self.vars.push(Variable { name: name.into(), lb, ub, kind });
        id
    }

    pub fn add_constraint(
        &mut self,
        label: impl Into<String>,
        terms: Vec<(VarId, i64)>,
        rel: Rel,
        rhs: i64,
    ) {
        let terms: Vec<_> = terms.into_iter().filter(|&(_, c)| c != 0).collect();
        self.constraints.push(Constraint { label: label.into(), terms, rel, rhs });
    }

    pub fn add_check(&mut self, check: LeafCheck) {
        self.checks.push(check);
    }

    /// Records an always-false row, used when a precondition on the
    /// instance (degree sum, connectivity bound) already fails.
    pub fn mark_infeasible(&mut self, label: impl Into<String>) {
        self.constraints.push(Constraint {
            label: label.into(),
            terms: Vec::new(),
            rel: Rel::Le,
            rhs: -1,
        });
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    pub fn checks(&self) -> &[LeafCheck] {
        &self.checks
    }

    /// Star variables in canonical partition order (the order they were
    /// added by the builder).
    pub fn star_vars(&self) -> impl Iterator<Item = (VarId, &Partition)> {
        self.vars.iter().enumerate().filter_map(|(i, v)| match &v.kind {
            VarKind::Star(p) => Some((VarId(i), p)),
            _ => None,
        })
    }

    /// Star-count projection of an assignment.
    pub fn ensemble_of(&self, a: &Assignment) -> crate::model::Ensemble {
        let mut e = crate::model::Ensemble::new();
        for (id, p) in self.star_vars() {
            e.add(p.clone(), a.value(id) as u64);
        }
        e
    }

    /// Tightest bounds of a linear expression under variable bounds.
    pub fn expr_bounds(&self, e: &LinExpr) -> (i64, i64) {
        let mut lo = e.constant;
        let mut hi = e.constant;
        for &(v, c) in &e.terms {
            let (vl, vu) = (self.vars[v.0].lb, self.vars[v.0].ub);
            if c >= 0 {
                lo += c * vl;
                hi += c * vu;
            } else {
                lo += c * vu;
                hi += c * vl;
            }
        }
        (lo, hi)
    }

    /// Adds `z = min(x, y)` (four rows plus a binary selector).
    ///
    /// `m` must dominate `|x - y|` over the variable bounds; a too-small
    /// constant is rejected rather than silently corrupting the system.
    pub fn encode_min(
        &mut self,
        label: impl Into<String>,
        x: LinExpr,
        y: LinExpr,
        m: i64,
    ) -> Result<VarId, SystemError> {
        self.encode_extremum(GadgetKind::Min, label.into(), x, y, m)
    }

    /// Adds `z = max(x, y)`; see [`LinearSystem::encode_min`].
    pub fn encode_max(
        &mut self,
        label: impl Into<String>,
        x: LinExpr,
        y: LinExpr,
        m: i64,
    ) -> Result<VarId, SystemError> {
        self.encode_extremum(GadgetKind::Max, label.into(), x, y, m)
    }

    fn encode_extremum(
        &mut self,
        kind: GadgetKind,
        label: String,
        x: LinExpr,
        y: LinExpr,
        m: i64,
    ) -> Result<VarId, SystemError> {
        let (xl, xu) = self.expr_bounds(&x);
        let (yl, yu) = self.expr_bounds(&y);
        let needed = (xu - yl).max(yu - xl).max(0);
        if m < needed {
            return Err(SystemError::BigMTooSmall { m, needed, label });
        }
        let (zl, zu) = match kind {
            GadgetKind::Min => (xl.min(yl), xu.min(yu)),
            GadgetKind::Max => (xl.max(yl), xu.max(yu)),
        };
        let z = self.add_var(format!("z[{label}]"), zl, zu, VarKind::Aux);
        let b = self.add_var(format!("b[{label}]"), 0, 1, VarKind::Aux);

        // For min: z <= x, z <= y, z >= x - M*b, z >= y - M*(1-b).
        // For max the directions flip: z >= x, z >= y, z <= x + M*b,
        // z <= y + M*(1-b).
        let bound_rel = match kind {
            GadgetKind::Min => Rel::Le,
            GadgetKind::Max => Rel::Ge,
        };
        for (arg, which) in [(&x, "x"), (&y, "y")] {
            // z - arg REL 0  =>  z - sum(arg terms) REL arg.constant
            let mut terms = vec![(z, 1)];
            for &(v, c) in &arg.terms {
                terms.push((v, -c));
            }
            self.add_constraint(format!("{label}:z_{which}"), terms, bound_rel, arg.constant);
        }
        let slack_rel = match kind {
            GadgetKind::Min => Rel::Ge,
            GadgetKind::Max => Rel::Le,
        };
        let sign = match kind {
            GadgetKind::Min => 1,
            GadgetKind::Max => -1,
        };
        // min: z >= x - M*b      <=>  z - x + M*b        >= 0
        // max: z <= x + M*b      <=>  z - x - M*b        <= 0
        let mut terms = vec![(z, 1), (b, sign * m)];
        for &(v, c) in &x.terms {
            terms.push((v, -c));
        }
        self.add_constraint(format!("{label}:z_x_slack"), terms, slack_rel, x.constant);
        // min: z >= y - M*(1-b)  <=>  z - y - M*b  >= -M
        // max: z <= y + M*(1-b)  <=>  z - y + M*b  <=  M
        let mut terms = vec![(z, 1), (b, -sign * m)];
        for &(v, c) in &y.terms {
            terms.push((v, -c));
        }
        self.add_constraint(
            format!("{label}:z_y_slack"),
            terms,
            slack_rel,
            y.constant - sign * m,
        );

        self.gadgets.push(Gadget { kind, label, x, y, z, b });
        Ok(z)
    }

    /// Verifies that every recorded gadget variable equals the true
    /// min/max of its arguments under `a`.
    pub fn audit_gadgets(&self, a: &Assignment) -> Result<(), String> {
        for g in &self.gadgets {
            let expected = g.expected(&a.values);
            let got = a.values[g.z.0];
            if got != expected {
                return Err(format!(
                    "gadget {:?} pins {} but true {:?} is {}",
                    g.label, got, g.kind, expected
                ));
            }
        }
        Ok(())
    }

    /// Independent full re-check of an assignment: bounds, every linear
    /// row evaluated literally, every leaf check, every gadget. Shares
    /// no code with the propagating solver.
    pub fn check_assignment(&self, a: &Assignment) -> Result<(), String> {
        if a.values.len() != self.vars.len() {
            return Err(format!(
                "assignment has {} values for {} variables",
                a.values.len(),
                self.vars.len()
            ));
        }
        for (i, v) in self.vars.iter().enumerate() {
            let x = a.values[i];
            if x < v.lb || x > v.ub {
                return Err(format!("{} = {x} outside [{}, {}]", v.name, v.lb, v.ub));
            }
        }
        for c in &self.constraints {
            let lhs: i64 = c.terms.iter().map(|&(v, k)| k * a.values[v.0]).sum();
            let ok = match c.rel {
                Rel::Le => lhs <= c.rhs,
                Rel::Eq => lhs == c.rhs,
                Rel::Ge => lhs >= c.rhs,
            };
            if !ok {
                return Err(format!(
                    "constraint {:?}: lhs {lhs} {} rhs {} violated",
                    c.label,
                    c.rel.symbol(),
                    c.rhs
                ));
            }
        }
        for check in &self.checks {
            check.evaluate(&a.values).map_err(|e| format!("check {:?}: {e}", check.label()))?;
        }
        self.audit_gadgets(a)
    }

    /// Renders the linear part in LP format. Semantic leaf checks cannot
    /// be expressed as rows; they are listed as trailing comments.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        out.push_str("\\ stub-star feasibility system\n");
        out.push_str("Minimize\n obj: 0\nSubject To\n");
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, " r{i}_{}: ", sanitize(&c.label));
            if c.terms.is_empty() {
                out.push('0');
            }
            for (j, &(v, coef)) in c.terms.iter().enumerate() {
                let name = sanitize(&self.vars[v.0].name);
                if j == 0 {
                    if coef == 1 {
                        let _ = write!(out, "{name}");
                    } else if coef == -1 {
                        let _ = write!(out, "- {name}");
                    } else {
                        let _ = write!(out, "{coef} {name}");
                    }
                } else if coef >= 0 {
                    let _ = write!(out, " + {} {name}", coef);
                } else {
                    let _ = write!(out, " - {} {name}", -coef);
                }
            }
            let _ = writeln!(out, " {} {}", c.rel.symbol(), c.rhs);
        }
        out.push_str("Bounds\n");
        for v in &self.vars {
            let _ = writeln!(out, " {} <= {} <= {}", v.lb, sanitize(&v.name), v.ub);
        }
        out.push_str("Generals\n");
        for v in &self.vars {
            let _ = writeln!(out, " {}", sanitize(&v.name));
        }
        if !self.checks.is_empty() {
            out.push_str("\\ semantic checks (not expressible as rows):\n");
            for check in &self.checks {
                let _ = writeln!(out, "\\   {}", check.label());
            }
        }
        out.push_str("End\n");
        out
    }
}

/// LP identifiers may not contain brackets, commas or spaces.
fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expr_bounds_respect_signs() {
        let mut sys = LinearSystem::new();
        let a = sys.add_var("a", 0, 3, VarKind::Aux);
        let b = sys.add_var("b", 1, 2, VarKind::Aux);
        let e = LinExpr { terms: vec![(a, 2), (b, -1)], constant: 5 };
        assert_eq!(sys.expr_bounds(&e), (3, 10));
    }

    #[test]
    fn small_big_m_is_rejected() {
        let mut sys = LinearSystem::new();
        let a = sys.add_var("a", 0, 10, VarKind::Aux);
        let err = sys
            .encode_min("t", LinExpr::var(a), LinExpr::constant(1), 2)
            .unwrap_err();
        match err {
            SystemError::BigMTooSmall { m, needed, .. } => {
                assert_eq!(m, 2);
                assert_eq!(needed, 9);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn check_assignment_accepts_and_rejects() {
        let mut sys = LinearSystem::new();
        let a = sys.add_var("a", 0, 5, VarKind::Aux);
        let b = sys.add_var("b", 0, 5, VarKind::Aux);
        sys.add_constraint("sum", vec![(a, 1), (b, 1)], Rel::Eq, 4);
        sys.add_constraint("gap", vec![(a, 1), (b, -1)], Rel::Le, 1);
        assert!(sys.check_assignment(&Assignment::new(vec![2, 2])).is_ok());
        assert!(sys.check_assignment(&Assignment::new(vec![4, 0])).is_err());
        assert!(sys.check_assignment(&Assignment::new(vec![1, 1])).is_err());
        assert!(sys.check_assignment(&Assignment::new(vec![6, -2])).is_err());
    }

    #[test]
    fn min_gadget_audit_detects_drift() {
        let mut sys = LinearSystem::new();
        let x = sys.add_var("x", 3, 3, VarKind::Aux);
        let y = sys.add_var("y", 5, 5, VarKind::Aux);
        let z = sys
            .encode_min("m", LinExpr::var(x), LinExpr::var(y), 10)
            .unwrap();
        assert_eq!(sys.var(z).lb, 3);
        assert_eq!(sys.var(z).ub, 3);
        // z, b indices follow x, y.
        let good = Assignment::new(vec![3, 5, 3, 0]);
        assert!(sys.audit_gadgets(&good).is_ok());
        let bad = Assignment::new(vec![3, 5, 2, 0]);
        assert!(sys.audit_gadgets(&bad).is_err());
    }

    #[test]
    fn forest_subsets_flags_odd_and_overfull_restrictions() {
        // Two stars of shape (2,2): colors {(2,2)}, each with chromatic
        // degree 2. Restricted sum 8 > 2*(2-1) = 2: not a forest.
        let colors = vec![(2, 2)];
        let stars = vec![SubsetStar { var: VarId(0), mask: 1, color_deg: vec![2] }];
        assert!(forest_subsets_ok(&colors, &stars, &[2]).is_err());
        // A single edge between two degree-1 stars is a forest.
        let colors = vec![(1, 1)];
        let stars = vec![SubsetStar { var: VarId(0), mask: 1, color_deg: vec![1] }];
        assert!(forest_subsets_ok(&colors, &stars, &[2]).is_ok());
        // Odd restricted sum.
        assert!(forest_subsets_ok(&colors, &stars, &[3]).is_err());
    }

    #[test]
    fn lp_text_mentions_rows_bounds_and_checks() {
        let mut sys = LinearSystem::new();
        let a = sys.add_var("x_(1)", 0, 4, VarKind::Star(Partition::new(vec![1])));
        sys.add_constraint("parity 1", vec![(a, 1)], Rel::Eq, 2);
        sys.add_check(LeafCheck::LooplessBound { color: 1, entries: vec![(a, 1)] });
        let lp = sys.to_lp_text();
        assert!(lp.contains("Subject To"));
        assert!(lp.contains("x__1_ = 2"));
        assert!(lp.contains("0 <= x__1_ <= 4"));
        assert!(lp.contains("loopless(1,1)"));
        assert!(lp.contains("End"));
    }
}
