//! Branch data realizing a prescribed formal irregular part, and the round
//! trip back through [`decompose`].
//!
//! A summand `R_α e^α` after the base change `τ ↦ τ^p` comes with its whole
//! orbit `{α(ξτ) : ξ^p = 1}`. It is realized by the curve `τ ↦ (τ^p, α(τ))`,
//! reparametrized primitively, carrying a local system of the summand's rank
//! and monodromy.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::{Branch, BranchError};
use crate::cyclotomic::{CycloNum, CycloPoly};
use crate::decomposition::{canonical_cmp, decompose, DecompositionError, FormalDecomposition};
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizationError {
    #[error("p must be positive")]
    ZeroP,
    #[error("summand {index}: {reason}")]
    InvalidSummand { index: usize, reason: String },
    #[error("summands {first} and {second} have equal polar parts")]
    DuplicateSummand { first: usize, second: usize },
    #[error("summands {first} and {second} lie in one orbit but differ in rank or monodromy")]
    OrbitConflict { first: usize, second: usize },
    #[error("after normalization the branches ramify to order {got}, not {p}")]
    NormalizationConflict { p: u32, got: u32 },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Branch(#[from] BranchError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub alpha: LaurentPoly,
    pub rank: u32,
    pub charpoly: CycloPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalModuleSpec {
    pub p: u32,
    #[serde(default)]
    pub summands: Vec<Summand>,
    /// Rank of the regular part; not encoded in any branch.
    #[serde(default)]
    pub regular_rank: u32,
}

impl FormalModuleSpec {
    pub fn validate(&self) -> Result<(), RealizationError> {
        if self.p == 0 {
            return Err(RealizationError::ZeroP);
        }
        for (i, s) in self.summands.iter().enumerate() {
            let bad = |reason: &str| RealizationError::InvalidSummand { index: i, reason: reason.into() };
            if s.alpha.is_zero() || !s.alpha.is_purely_polar() {
                return Err(bad("alpha must be nonzero with only negative exponents"));
            }
            if s.rank == 0 {
                return Err(bad("rank must be positive"));
            }
            if !s.charpoly.is_monic() || s.charpoly.degree() != Some(s.rank as usize) {
                return Err(bad("charpoly must be monic of degree rank"));
            }
            if let Some(j) = self.summands[..i].iter().position(|t| t.alpha == s.alpha) {
                return Err(RealizationError::DuplicateSummand { first: j, second: i });
            }
        }
        Ok(())
    }
}

/// Divide `p` and every exponent of `alpha` by their common gcd.
pub fn canonicalize(p: u32, alpha: &LaurentPoly) -> (u32, LaurentPoly) {
    let d = alpha.support_gcd(p as i64).max(1);
    let alpha = alpha.compress_exponents(d as i64).expect("d divides every exponent");
    (p / d as u32, alpha)
}

/// `{α(ξτ) : ξ^p = 1}` without repetitions, starting with `α` itself.
pub fn orbit(p: u32, alpha: &LaurentPoly) -> Result<Vec<LaurentPoly>, LaurentError> {
    let mut out: Vec<LaurentPoly> = Vec::new();
    for i in 0..p {
        let a = alpha.subst_root_power(&CycloNum::root_of_unity(p, i as i64), 1)?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    Ok(out)
}

/// One branch per orbit of summands, labelled `s<index>` after the first
/// summand of the orbit in input order.
pub fn realize(spec: &FormalModuleSpec) -> Result<Vec<Branch>, RealizationError> {
    spec.validate()?;
    let orbits: Vec<Vec<LaurentPoly>> =
        spec.summands.iter().map(|s| orbit(spec.p, &s.alpha)).collect::<Result<_, _>>()?;
    let mut branches = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, s) in spec.summands.iter().enumerate() {
        if let Some(&j) = reps.iter().find(|&&j| orbits[j].contains(&s.alpha)) {
            let r = &spec.summands[j];
            if r.rank != s.rank || r.charpoly != s.charpoly {
                return Err(RealizationError::OrbitConflict { first: j, second: i });
            }
            continue;
        }
        reps.push(i);
        let (p, alpha) = canonicalize(spec.p, &s.alpha);
        branches.push(Branch {
            label: format!("s{i}"),
            p,
            q: alpha.pole_order(),
            alpha,
            delta: LaurentPoly::zero(),
            m: s.rank,
            zeta: s.charpoly.clone(),
        });
    }
    let got = branches.iter().fold(1u32, |acc, b| acc.lcm(&b.p));
    if !branches.is_empty() && got != spec.p {
        return Err(RealizationError::NormalizationConflict { p: spec.p, got });
    }
    Ok(branches)
}

/// A factor expected from the orbit closure of the summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedFactor {
    pub alpha: LaurentPoly,
    pub rank: u32,
    pub charpoly: CycloPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub branches: Vec<Branch>,
    pub expected: Vec<ExpectedFactor>,
    pub computed: FormalDecomposition,
    pub matches: bool,
    pub mismatches: Vec<String>,
}

/// Orbit closure of the summands, canonically ordered.
pub fn orbit_closure(spec: &FormalModuleSpec) -> Result<Vec<ExpectedFactor>, LaurentError> {
    let mut out: Vec<ExpectedFactor> = Vec::new();
    for s in &spec.summands {
        for a in orbit(spec.p, &s.alpha)? {
            if !out.iter().any(|e| e.alpha == a) {
                out.push(ExpectedFactor { alpha: a, rank: s.rank, charpoly: s.charpoly.clone() });
            }
        }
    }
    let order = out.iter().fold(1, |acc, e| crate::cyclotomic::lcm(acc, e.alpha.order()));
    out.sort_by(|a, b| canonical_cmp(&a.alpha, &b.alpha, order));
    Ok(out)
}

/// Realize, decompose, and compare with the orbit closure.
pub fn roundtrip_check(spec: &FormalModuleSpec) -> Result<RoundtripReport, RealizationError> {
    let branches = realize(spec)?;
    let expected = orbit_closure(spec)?;
    let computed = decompose(&branches)?;
    let mut mismatches = Vec::new();
    if !branches.is_empty() && computed.p != spec.p {
        mismatches.push(format!("ramification order {} instead of {}", computed.p, spec.p));
    }
    for e in &expected {
        match computed.factors.iter().find(|f| f.alpha == e.alpha) {
            None => mismatches.push(format!("factor {} missing", e.alpha)),
            Some(f) => {
                if f.rank_branchwise != e.rank {
                    mismatches.push(format!("factor {}: rank {} instead of {}", e.alpha, f.rank_branchwise, e.rank));
                }
                match &f.charpoly {
                    Some(c) if *c == e.charpoly => {}
                    Some(c) => mismatches.push(format!(
                        "factor {}: charpoly {} instead of {}",
                        e.alpha,
                        c.display_with("λ"),
                        e.charpoly.display_with("λ")
                    )),
                    None => mismatches.push(format!("factor {}: no charpoly, condition (*) fails", e.alpha)),
                }
            }
        }
    }
    for f in &computed.factors {
        if !expected.iter().any(|e| e.alpha == f.alpha) {
            mismatches.push(format!("unexpected factor {}", f.alpha));
        }
    }
    let computed_order: Vec<&LaurentPoly> = computed.factors.iter().map(|f| &f.alpha).collect();
    let expected_order: Vec<&LaurentPoly> = expected.iter().map(|e| &e.alpha).collect();
    if mismatches.is_empty() && computed_order != expected_order {
        mismatches.push("factor order differs".into());
    }
    Ok(RoundtripReport { branches, expected, computed, matches: mismatches.is_empty(), mismatches })
}
