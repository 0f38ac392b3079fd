//! Benchmark harness over random tree instances.
//!
//! Both modes sweep a size range, draw `trials` random degree-bounded trees
//! per size, digest each into an instance, and aggregate per-size samples
//! into CSV rows `n,mean,stddev,min,max`. Time mode measures the wall time
//! from system build through the first solution to a verified realization,
//! one trial at a time on the calling thread so measurements never contend.
//! Count mode enumerates all ensembles per instance and parallelizes across
//! trials; `STUBSTAR_THREADS` caps the worker count.

use std::time::Instant;

use rayon::prelude::*;

use crate::assembler;
use crate::feasibility::{build_system, enumerate_all, solve_first, Encoding};
use crate::model::{GraphClass, Instance};
use crate::oracle;

/// Inclusive size sweep: `start`, `start + step`, ... up to `end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl SizeRange {
    pub fn sizes(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

/// Parses `A..B:S` (also `A..B` with step 1, or a bare `A`).
pub fn parse_sizes(text: &str) -> Result<SizeRange, String> {
    let (range, step) = match text.split_once(':') {
        Some((r, s)) => {
            let step: usize = s.parse().map_err(|_| format!("bad step {s:?}"))?;
            (r, step)
        }
        None => (text, 1),
    };
    let (a, b) = match range.split_once("..") {
        Some((a, b)) => (a, b),
        None => (range, range),
    };
    let start: usize = a.parse().map_err(|_| format!("bad size {a:?}"))?;
    let end: usize = b.parse().map_err(|_| format!("bad size {b:?}"))?;
    if start < 2 {
        return Err("sizes must be at least 2".into());
    }
    if end < start {
        return Err(format!("range {start}..{end} is empty"));
    }
    if step == 0 {
        return Err("step must be positive".into());
    }
    Ok(SizeRange { start, end, step })
}

/// Aggregated samples for one size.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

pub const CSV_HEADER: &str = "n,mean,stddev,min,max";

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

impl BenchRecord {
    pub fn from_samples(n: usize, samples: &[f64]) -> Self {
        assert!(!samples.is_empty(), "need at least one sample");
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k;
        let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        BenchRecord { n, trials: samples.len(), mean, stddev: var.sqrt(), min, max }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n,
            fmt_num(self.mean),
            fmt_num(self.stddev),
            fmt_num(self.min),
            fmt_num(self.max)
        )
    }
}

/// Worker cap from `STUBSTAR_THREADS`; `None` leaves the default.
pub fn thread_cap() -> Option<usize> {
    std::env::var("STUBSTAR_THREADS").ok().and_then(|v| v.parse().ok()).filter(|&t| t > 0)
}

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap().unwrap_or(0))
        .build()
        .expect("thread pool")
}

/// Random degree-bounded tree digested into its instance, `delta = 4`.
pub fn random_instance(n: usize, seed: u64) -> Instance {
    assert!(n >= 2, "need at least two vertices");
    let t = oracle::random_tree(n, 4, seed).expect("tree generation");
    Instance::from_graph(&t)
        .expect("tree degrees digest")
        .with_delta(4)
        .expect("degree bound 4")
}

/// Milliseconds from system build through first solution to a verified
/// realization; the span deliberately excludes instance generation.
pub fn timed_tree_solve(inst: &Instance) -> f64 {
    let t0 = Instant::now();
    let sys = build_system(inst, GraphClass::Tree, Encoding::Semantic).expect("delta fits");
    if let Some(a) = solve_first(&sys) {
        let e = sys.ensemble_of(&a);
        let r = assembler::realize(&e, GraphClass::Tree).expect("validated ensemble");
        debug_assert!(r.graph().is_tree());
    }
    t0.elapsed().as_secs_f64() * 1e3
}

fn trial_seeds(base: u64, count: usize) -> Vec<u64> {
    let mut s = oracle::seeds(base);
    (0..count).map(|_| s.draw()).collect()
}

/// First-solution wall times; trials run sequentially so the measurements
/// never fight for cores.
pub fn bench_time(sizes: &[usize], trials: usize, seed: u64) -> Vec<BenchRecord> {
    assert!(trials >= 1);
    let mut records = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let samples: Vec<f64> = trial_seeds(seed ^ n as u64, trials)
            .into_iter()
            .map(|s| timed_tree_solve(&random_instance(n, s)))
            .collect();
        records.push(BenchRecord::from_samples(n, &samples));
    }
    records
}

/// Ensemble counts per instance, parallel across trials. With a cap the
/// count saturates at the cap value.
pub fn bench_count(sizes: &[usize], trials: usize, seed: u64, cap: Option<u64>) -> Vec<BenchRecord> {
    assert!(trials >= 1);
    let pool = pool();
    let mut records = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let seeds = trial_seeds(seed ^ n as u64, trials);
        let samples: Vec<f64> = pool.install(|| {
            seeds
                .par_iter()
                .map(|&s| {
                    let inst = random_instance(n, s);
                    let sys = build_system(&inst, GraphClass::Tree, Encoding::Semantic)
                        .expect("delta fits");
                    enumerate_all(&sys, cap).ensembles.len() as f64
                })
                .collect()
        });
        records.push(BenchRecord::from_samples(n, &samples));
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_ranges_parse() {
        assert_eq!(parse_sizes("10..80:10").unwrap(), SizeRange { start: 10, end: 80, step: 10 });
        assert_eq!(parse_sizes("5..9").unwrap(), SizeRange { start: 5, end: 9, step: 1 });
        assert_eq!(parse_sizes("12").unwrap(), SizeRange { start: 12, end: 12, step: 1 });
        assert_eq!(parse_sizes("10..80:10").unwrap().sizes(), vec![10, 20, 30, 40, 50, 60, 70, 80]);
        assert!(parse_sizes("1..5").is_err());
        assert!(parse_sizes("9..5").is_err());
        assert!(parse_sizes("5..9:0").is_err());
        assert!(parse_sizes("x..y").is_err());
    }

    #[test]
    fn record_statistics_are_population_moments() {
        let r = BenchRecord::from_samples(7, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(r.n, 7);
        assert_eq!(r.trials, 4);
        assert!((r.mean - 2.5).abs() < 1e-12);
        assert!((r.stddev - 1.25f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.min, 1.0);
        assert_eq!(r.max, 4.0);
        assert_eq!(r.csv_line(), "7,2.5,1.118034,1,4");
    }

    #[test]
    fn count_mode_reports_at_least_one_ensemble_per_tree() {
        let recs = bench_count(&[6, 8], 4, 0xbe7c0, None);
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert_eq!(r.trials, 4);
            assert!(r.min >= 1.0, "every tree instance is feasible, got {r:?}");
        }
    }

    #[test]
    fn count_mode_honors_the_cap() {
        let recs = bench_count(&[12], 3, 1, Some(2));
        assert!(recs[0].max <= 2.0);
    }

    #[test]
    fn time_mode_measures_something_finite() {
        let recs = bench_time(&[8], 2, 42);
        assert_eq!(recs[0].trials, 2);
        assert!(recs[0].min >= 0.0);
        assert!(recs[0].max.is_finite());
    }
}
