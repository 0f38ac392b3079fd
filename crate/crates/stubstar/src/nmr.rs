//! Hydrocarbon skeleton instances from digested carbon-13 NMR peak tables.
//!
//! A carbon bonded to `k` hydrogens has `4 - k` bonds left for carbon
//! neighbors, and a peak split into `l + 1` parts says those neighbors carry
//! `l` hydrogens in total, so their degrees sum to `4 * (4 - k) - l`. A peak
//! table therefore digests straight into an instance with `delta = 4`; no
//! spectrum processing happens here, the input is already the `(k, l,
//! count)` triple per distinct carbon environment.

use thiserror::Error;

use crate::model::{Instance, ModelError};

/// One digested peak: `count` carbons bonded to `k` hydrogens whose peak is
/// split into `l + 1` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NmrPeak {
    pub k: u32,
    pub l: u32,
    pub count: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NmrError {
    #[error("peak {index} (k={k}, l={l}, count={count}): {reason}")]
    InvalidPeak { index: usize, k: u32, l: u32, count: u64, reason: &'static str },
    #[error("peak list is empty")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("formula {text}: {reason}")]
    Formula { text: String, reason: &'static str },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl NmrPeak {
    /// Degree of the carbon in the skeleton.
    pub fn degree(&self) -> u32 {
        4 - self.k
    }

    /// Sum of the neighbor carbons' degrees.
    pub fn neighbor_sum(&self) -> u32 {
        16 - 4 * self.k - self.l
    }

    fn check(&self) -> Result<(), &'static str> {
        if self.k > 3 {
            return Err("k > 3 leaves no carbon-carbon bond");
        }
        if self.l > 3 * (4 - self.k) {
            return Err("l exceeds what the neighbor carbons can carry");
        }
        if self.count == 0 {
            return Err("count must be at least 1");
        }
        Ok(())
    }
}

/// Expands a peak table into an instance with `delta = 4`, one vertex per
/// counted carbon.
pub fn nmr_to_instance(peaks: &[NmrPeak]) -> Result<Instance, NmrError> {
    if peaks.is_empty() {
        return Err(NmrError::Empty);
    }
    let mut d = Vec::new();
    let mut f = Vec::new();
    for (index, p) in peaks.iter().enumerate() {
        p.check().map_err(|reason| NmrError::InvalidPeak {
            index,
            k: p.k,
            l: p.l,
            count: p.count,
            reason,
        })?;
        for _ in 0..p.count {
            d.push(p.degree());
            f.push(p.neighbor_sum());
        }
    }
    Ok(Instance::from_lists_with_delta(d, f, 4)?)
}

/// Parses peak lines `k l count` (count optional, defaulting to 1). Blank
/// lines and lines starting with `#` are skipped.
pub fn parse_peaks(text: &str) -> Result<Vec<NmrPeak>, NmrError> {
    let mut peaks = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(NmrError::Parse {
                line,
                msg: format!("expected 'k l' or 'k l count', got {} fields", fields.len()),
            });
        }
        let num = |s: &str| -> Result<u64, NmrError> {
            s.parse::<u64>().map_err(|_| NmrError::Parse {
                line,
                msg: format!("not a number: {s:?}"),
            })
        };
        let k = num(fields[0])?;
        let l = num(fields[1])?;
        let count = if fields.len() == 3 { num(fields[2])? } else { 1 };
        if k > u32::MAX as u64 || l > u32::MAX as u64 {
            return Err(NmrError::Parse { line, msg: "value out of range".into() });
        }
        peaks.push(NmrPeak { k: k as u32, l: l as u32, count });
    }
    if peaks.is_empty() {
        return Err(NmrError::Empty);
    }
    Ok(peaks)
}

/// Chemical formula `CnHm`, e.g. `C6H14`. Counts default to 1 when omitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formula {
    pub carbons: u64,
    pub hydrogens: u64,
}

impl Formula {
    /// Saturated acyclic hydrocarbons satisfy `m = 2n + 2`; when this holds
    /// the skeleton must be a tree.
    pub fn is_saturated_acyclic(&self) -> bool {
        self.hydrogens == 2 * self.carbons + 2
    }
}

/// Parses `CnHm` with optional counts (`CH4` reads as `C1H4`).
pub fn parse_formula(text: &str) -> Result<Formula, NmrError> {
    let bad = |reason: &'static str| NmrError::Formula { text: text.into(), reason };
    let s = text.trim();
    let rest = s.strip_prefix('C').ok_or_else(|| bad("must start with C"))?;
    let split = rest.find('H').ok_or_else(|| bad("missing H"))?;
    let (cn, hpart) = rest.split_at(split);
    let hn = &hpart[1..];
    let parse_count = |digits: &str| -> Result<u64, NmrError> {
        if digits.is_empty() {
            return Ok(1);
        }
        digits.parse::<u64>().map_err(|_| bad("counts must be numeric"))
    };
    let carbons = parse_count(cn)?;
    let hydrogens = parse_count(hn)?;
    if carbons == 0 {
        return Err(bad("needs at least one carbon"));
    }
    Ok(Formula { carbons, hydrogens })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ethane_digests_to_a_single_edge_instance() {
        let peaks = [NmrPeak { k: 3, l: 3, count: 2 }];
        let inst = nmr_to_instance(&peaks).unwrap();
        assert_eq!(inst.d(), &[1, 1]);
        assert_eq!(inst.f(), &[1, 1]);
        assert_eq!(inst.delta(), 4);
    }

    #[test]
    fn quaternary_carbon_peak_maxes_out() {
        let inst = nmr_to_instance(&[NmrPeak { k: 0, l: 0, count: 1 }]).unwrap();
        assert_eq!(inst.d(), &[4]);
        assert_eq!(inst.f(), &[16]);
    }

    #[test]
    fn methane_like_peak_is_rejected() {
        let err = nmr_to_instance(&[NmrPeak { k: 4, l: 0, count: 1 }]).unwrap_err();
        assert!(matches!(err, NmrError::InvalidPeak { index: 0, .. }), "got {err:?}");
    }

    #[test]
    fn oversplit_peak_is_rejected() {
        // k=2 leaves two neighbor carbons with at most 3 hydrogens each.
        let err = nmr_to_instance(&[NmrPeak { k: 2, l: 7, count: 1 }]).unwrap_err();
        assert!(matches!(err, NmrError::InvalidPeak { .. }));
        assert!(nmr_to_instance(&[NmrPeak { k: 2, l: 6, count: 2 }]).is_ok());
    }

    #[test]
    fn peak_lines_parse_with_optional_count() {
        let peaks = parse_peaks("# 2,3-dimethylbutane\n1 7 2\n3 1 4\n").unwrap();
        assert_eq!(
            peaks,
            vec![NmrPeak { k: 1, l: 7, count: 2 }, NmrPeak { k: 3, l: 1, count: 4 }]
        );
        let single = parse_peaks("3 3\n").unwrap();
        assert_eq!(single, vec![NmrPeak { k: 3, l: 3, count: 1 }]);
    }

    #[test]
    fn peak_parse_errors_carry_line_numbers() {
        let err = parse_peaks("3 3\nnope\n").unwrap_err();
        assert_eq!(
            err,
            NmrError::Parse { line: 2, msg: "expected 'k l' or 'k l count', got 1 fields".into() }
        );
        assert_eq!(parse_peaks("# only comments\n").unwrap_err(), NmrError::Empty);
    }

    #[test]
    fn formulas_parse_and_classify() {
        let hexane = parse_formula("C6H14").unwrap();
        assert_eq!(hexane, Formula { carbons: 6, hydrogens: 14 });
        assert!(hexane.is_saturated_acyclic());
        let cyclohexane = parse_formula("C6H12").unwrap();
        assert!(!cyclohexane.is_saturated_acyclic());
        assert_eq!(parse_formula("CH4").unwrap(), Formula { carbons: 1, hydrogens: 4 });
        assert!(parse_formula("H2O").is_err());
        assert!(parse_formula("C0H2").is_err());
    }

    #[test]
    fn digested_butane_instance_is_tree_feasible() {
        // n-butane: two CH3 (k=3, neighbors CH2 with 2 H -> l=2) and two CH2
        // (k=2, neighbors CH3 + CH2 -> l=5).
        let peaks = parse_peaks("3 2 2\n2 5 2\n").unwrap();
        let inst = nmr_to_instance(&peaks).unwrap();
        assert_eq!(inst.d(), &[1, 1, 2, 2]);
        assert_eq!(inst.f(), &[2, 2, 3, 3]);
        use crate::feasibility::{build_system, solve_first, Encoding};
        use crate::model::GraphClass;
        let sys = build_system(&inst, GraphClass::Tree, Encoding::Semantic).unwrap();
        assert!(solve_first(&sys).is_some());
    }
}
