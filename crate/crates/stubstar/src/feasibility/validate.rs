//! Semantic validation of ensembles, independent of any system
//! encoding, plus the diagnostic comparing the two simple-graph row
//! forms (classical `k(k-1)` versus encoded `k(k+1) - capped table`).

use crate::model::{all_colors, Ensemble, GraphClass, Partition};
use crate::seqcheck::{check_erdos_gallai, check_gale_ryser, maxsum_table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One failed condition with a human-readable reason.
#[derive(Debug, Clone)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

/// Outcome of [`validate_ensemble`]: `ok` iff no violations.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, rule: impl Into<String>, detail: impl Into<String>) {
        self.ok = false;
        self.violations.push(Violation { rule: rule.into(), detail: detail.into() });
    }
}

/// Checks whether an ensemble satisfies the realizability conditions of
/// a class, computed directly on the star counts: parity and balance
/// everywhere; the half-stub bound for loopless; sorted Erdos-Gallai
/// and Gale-Ryser for simple; forest realizability of every color
/// restriction for the forest family; degree sum 2n-2 for trees; the
/// spine-label restriction for caterpillars.
pub fn validate_ensemble(e: &Ensemble, cls: GraphClass) -> ValidationReport {
    let mut report = ValidationReport { ok: true, violations: Vec::new() };
    let delta = e.max_degree().max(e.max_label()).max(1);
    let stars: Vec<(&Partition, u64)> = e.iter().collect();

    // Parity: each color's stubs pair up.
    for i in 1..=delta {
        let sum: u64 = stars
            .iter()
            .filter(|(p, _)| p.height() == i)
            .map(|(p, c)| u64::from(p.count(i)) * c)
            .sum();
        if sum % 2 != 0 {
            report.push(format!("parity {i}"), format!("{sum} stubs of color ({i},{i})"));
        }
    }
    // Balance between color classes.
    for i in 1..=delta {
        for j in (i + 1)..=delta {
            let a: u64 = stars
                .iter()
                .filter(|(p, _)| p.height() == i)
                .map(|(p, c)| u64::from(p.count(j)) * c)
                .sum();
            let b: u64 = stars
                .iter()
                .filter(|(p, _)| p.height() == j)
                .map(|(p, c)| u64::from(p.count(i)) * c)
                .sum();
            if a != b {
                report.push(
                    format!("balance {i} {j}"),
                    format!("degree-{i} side offers {a} stubs, degree-{j} side {b}"),
                );
            }
        }
    }

    match cls {
        GraphClass::Multigraph => {}
        GraphClass::LooplessMultigraph => loopless_bounds(&stars, delta, &mut report),
        GraphClass::Simple => simple_conditions(&stars, delta, &mut report),
        GraphClass::ConnectedSimple => {
            simple_conditions(&stars, delta, &mut report);
            let n = e.n();
            if n == 0 || e.degree_sum() / 2 < n - 1 {
                report.push(
                    "connectivity".to_string(),
                    format!("{} edges cannot connect {n} vertices", e.degree_sum() / 2),
                );
            }
        }
        GraphClass::Forest => forest_conditions(&stars, delta, &mut report),
        GraphClass::Tree | GraphClass::Caterpillar => {
            forest_conditions(&stars, delta, &mut report);
            let n = e.n();
            if n == 0 || e.degree_sum() != 2 * n - 2 {
                report.push(
                    "tree degree sum",
                    format!("degree sum {} differs from 2n-2 = {}", e.degree_sum(), 2 * n.max(1) - 2),
                );
            }
            if cls == GraphClass::Caterpillar {
                for (p, _) in stars.iter().filter(|(p, c)| *c > 0 && p.big_labels() >= 3) {
                    report.push(
                        "caterpillar spine",
                        format!("star {p} has {} labels above 1", p.big_labels()),
                    );
                }
            }
        }
    }
    report
}

fn loopless_bounds(stars: &[(&Partition, u64)], delta: u32, report: &mut ValidationReport) {
    for i in 1..=delta {
        let mut max_mult = 0u64;
        let mut sum = 0u64;
        for (p, c) in stars.iter().filter(|(p, c)| *c > 0 && p.height() == i) {
            max_mult = max_mult.max(u64::from(p.count(i)));
            sum += u64::from(p.count(i)) * c;
        }
        if 2 * max_mult > sum {
            report.push(
                format!("loopless {i}"),
                format!("one star holds {max_mult} of {sum} color-({i},{i}) stubs"),
            );
        }
    }
}

fn simple_conditions(stars: &[(&Partition, u64)], delta: u32, report: &mut ValidationReport) {
    for i in 1..=delta {
        let seq = restriction(stars, i, i);
        if !check_erdos_gallai(&seq, Some(delta as usize)) {
            report.push(
                format!("erdos_gallai {i}"),
                format!("color ({i},{i}) degrees {seq:?}"),
            );
        }
    }
    for i in 1..=delta {
        for j in (i + 1)..=delta {
            let a = restriction(stars, i, j);
            let b = restriction(stars, j, i);
            if !check_gale_ryser(&a, &b, Some((delta - 1) as usize)) {
                report.push(
                    format!("gale_ryser {i} {j}"),
                    format!("color ({i},{j}) sides {a:?} / {b:?}"),
                );
            }
        }
    }
}

/// Positive color-(h, other) multiplicities of all degree-`h` stars,
/// one entry per star copy.
fn restriction(stars: &[(&Partition, u64)], h: u32, other: u32) -> Vec<u32> {
    let mut seq = Vec::new();
    for (p, c) in stars.iter().filter(|(p, _)| p.height() == h) {
        let d = p.count(other);
        if d > 0 {
            for _ in 0..*c {
                seq.push(d);
            }
        }
    }
    seq
}

/// Every restriction to a color subset must be forest realizable: even
/// degree sum, and zero or at most `2 * (touched stars - 1)`. Direct
/// per-subset loop; deliberately naive so it can serve as an oracle for
/// the subset-DP used inside the solver.
fn forest_conditions(stars: &[(&Partition, u64)], delta: u32, report: &mut ValidationReport) {
    let colors = all_colors(delta);
    let m = colors.len();
    assert!(m <= 20, "color subset validation limited to 20 colors (delta <= 5)");
    for mask in 1u32..(1 << m) {
        let subset: Vec<(u32, u32)> = (0..m).filter(|c| mask & (1 << c) != 0).map(|c| colors[c]).collect();
        let mut sum = 0u64;
        let mut touched = 0u64;
        for (p, c) in stars.iter().filter(|(_, c)| *c > 0) {
            let d = u64::from(p.multichromatic_degree(&subset));
            if d > 0 {
                sum += d * c;
                touched += c;
            }
        }
        let ok = sum % 2 == 0 && (sum == 0 || sum <= 2 * (touched - 1));
        if !ok {
            report.push(
                "forest subset",
                format!("colors {subset:?}: degree sum {sum} on {touched} touched stars"),
            );
        }
    }
}

/// One compared inequality of the two simple-graph row forms for a
/// monochromatic color class.
#[derive(Debug, Clone)]
pub struct EgRow {
    pub color: u32,
    pub k: usize,
    /// Largest sum of at most k restricted degrees.
    pub lhs: u64,
    /// `k(k-1) + sum(min(k, d)) - (top-k of capped values)`.
    pub classical_rhs: u64,
    /// `k(k+1) + sum(min(k, d)) - (recursion-capped table)`.
    pub encoded_rhs: u64,
    pub classical_ok: bool,
    pub encoded_ok: bool,
}

impl EgRow {
    pub fn divergent(&self) -> bool {
        self.classical_ok != self.encoded_ok
    }
}

/// Compares, for every color `(i, i)` and every `k = 1..=delta`, the
/// classical sorted Erdos-Gallai row against the encoded row form used
/// by the big-M systems. The encoded right side is never smaller, so
/// any divergence is one-sided: the encoded row accepts what the
/// classical row rejects.
pub fn eg_row_comparison(e: &Ensemble, delta: u32) -> Vec<EgRow> {
    let mut rows = Vec::new();
    for i in 1..=delta {
        // s[l-1] = number of degree-i stars holding exactly l stubs of
        // color (i, i).
        let mut s = vec![0u64; i as usize];
        for (p, c) in e.iter() {
            if p.height() == i && p.count(i) > 0 {
                s[(p.count(i) - 1) as usize] += c;
            }
        }
        let k_max = delta as usize;
        let plain = maxsum_table(&s, k_max, false);
        let sorted_capped = maxsum_table(&s, k_max, true);
        let recursion_capped = recursion_capped_table(&s, k_max);
        let l_max = s.len();
        for k in 1..=k_max {
            let sum_min: u64 = s
                .iter()
                .enumerate()
                .map(|(idx, &cnt)| cnt * ((idx as u64 + 1).min(k as u64)))
                .sum();
            let lhs = plain.t(l_max, k);
            let classical_rhs = (k * (k - 1)) as u64 + sum_min - sorted_capped.t(l_max, k);
            let encoded_rhs = (k * (k + 1)) as u64 + sum_min - recursion_capped[l_max][k];
            rows.push(EgRow {
                color: i,
                k,
                lhs,
                classical_rhs,
                encoded_rhs,
                classical_ok: lhs <= classical_rhs,
                encoded_ok: lhs <= encoded_rhs,
            });
        }
    }
    rows
}

/// The capped table as the row encoding actually computes it:
/// `t[l][k] = max over k' of (t[l-1][k-k'] + min(l,k) * min(k', s_l))`.
/// This undercounts the true top-k of capped values whenever an
/// already-spent column budget shrinks the cap of a later value, which
/// is exactly the divergence the diagnostic reports.
fn recursion_capped_table(s: &[u64], k_max: usize) -> Vec<Vec<u64>> {
    let l_max = s.len();
    let mut t = vec![vec![0u64; k_max + 1]; l_max + 1];
    for l in 1..=l_max {
        for k in 1..=k_max {
            let cap = (l as u64).min(k as u64);
            let mut best = 0u64;
            for kp in 0..=k {
                let take = (kp as u64).min(s[l - 1]);
                best = best.max(t[l - 1][k - kp] + cap * take);
            }
            t[l][k] = best;
        }
    }
    t
}

/// Aggregate of [`eg_row_comparison`] over randomly sampled ensembles.
#[derive(Debug, Clone)]
pub struct DivergenceReport {
    pub samples: usize,
    pub rows_compared: u64,
    pub divergent_rows: u64,
    pub divergent_ensembles: u64,
    /// True while every divergence has the expected direction
    /// (encoded accepts, classical rejects).
    pub one_sided: bool,
    /// Rendered examples, at most ten.
    pub examples: Vec<String>,
}

impl std::fmt::Display for DivergenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "compared {} rows over {} ensembles: {} divergent rows in {} ensembles ({})",
            self.rows_compared,
            self.samples,
            self.divergent_rows,
            self.divergent_ensembles,
            if self.one_sided { "all one-sided: encoded row weaker" } else { "UNEXPECTED two-sided divergence" },
        )?;
        for e in &self.examples {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

/// Samples random ensembles (1..=4 distinct stars, counts 1..=3) and
/// tallies how often the encoded row form disagrees with the classical
/// test.
pub fn eg_divergence_report(samples: usize, delta: u32, seed: u64) -> DivergenceReport {
    let parts = crate::model::enumerate_partitions(delta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DivergenceReport {
        samples,
        rows_compared: 0,
        divergent_rows: 0,
        divergent_ensembles: 0,
        one_sided: true,
        examples: Vec::new(),
    };
    for _ in 0..samples {
        let mut e = Ensemble::new();
        let kinds = rng.gen_range(1..=4usize);
        for _ in 0..kinds {
            let p = parts[rng.gen_range(0..parts.len())].clone();
            e.add(p, rng.gen_range(1..=3u64));
        }
        let mut any = false;
        for row in eg_row_comparison(&e, delta) {
            report.rows_compared += 1;
            if row.divergent() {
                report.divergent_rows += 1;
                any = true;
                if row.classical_ok && !row.encoded_ok {
                    report.one_sided = false;
                }
                if report.examples.len() < 10 {
                    report.examples.push(format!(
                        "ensemble {e}: color ({c},{c}) k={k}: lhs {lhs}, classical rhs {cr} ({cok}), encoded rhs {er} ({eok})",
                        c = row.color,
                        k = row.k,
                        lhs = row.lhs,
                        cr = row.classical_rhs,
                        cok = if row.classical_ok { "pass" } else { "fail" },
                        er = row.encoded_rhs,
                        eok = if row.encoded_ok { "pass" } else { "fail" },
                    ));
                }
            }
        }
        if any {
            report.divergent_ensembles += 1;
        }
    }
    report
}
