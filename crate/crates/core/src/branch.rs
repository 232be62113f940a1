//! Branch data of the singular support at a point, validation, and the
//! base change `τ ↦ τ^p` that splits every branch into `p_ℓ` unramified
//! copies.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycloNum, CycloPoly};
use crate::laurent::{LaurentError, LaurentPoly};

/// One irreducible local component `S_ℓ` with its Puiseux data and the
/// multiplicity and monodromy of the module along it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    /// Intersection multiplicity with the vertical line through the point.
    pub p: u32,
    /// Intersection multiplicity with the divisor at infinity.
    pub q: u32,
    /// Polar part, support in `[-q, -1]`.
    pub alpha: LaurentPoly,
    /// Truncated holomorphic part, support in `[0, T]`.
    #[serde(default)]
    pub delta: LaurentPoly,
    pub m: u32,
    /// Characteristic polynomial of the monodromy, monic of degree `m`.
    pub zeta: CycloPoly,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Violation {
    #[error("p must be positive")]
    ZeroP,
    #[error("q must be positive")]
    ZeroQ,
    #[error("m must be positive")]
    ZeroM,
    #[error("coefficient of τ^-{q} in alpha is zero")]
    LeadingCoefficientZero { q: u32 },
    #[error("alpha has exponent {exp} outside [-q, -1]")]
    AlphaSupport { exp: i64 },
    #[error("delta has exponent {exp} outside [0, {truncation}]")]
    DeltaSupport { exp: i64, truncation: u32 },
    #[error("zeta is not monic")]
    ZetaNotMonic,
    #[error("deg zeta = {deg} but m = {m}")]
    ZetaDegree { deg: usize, m: u32 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BranchError {
    #[error("branch {label:?}: {violation}")]
    Invalid { label: String, violation: Violation },
    #[error("empty branch list")]
    EmptyInput,
    #[error("branch {label:?}: p = {p_l} does not divide the ramification order {p}")]
    NotADivisor { label: String, p_l: u32, p: u32 },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Outcome of a successful validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub label: String,
    /// Gcd of `p` and all support exponents of alpha and delta.
    pub support_gcd: u64,
    pub warnings: Vec<String>,
}

impl Branch {
    /// Check every hard invariant; delta may use exponents up to `truncation`.
    pub fn validate(&self, truncation: u32) -> Result<ValidationReport, BranchError> {
        let fail = |violation| BranchError::Invalid { label: self.label.clone(), violation };
        if self.p == 0 {
            return Err(fail(Violation::ZeroP));
        }
        if self.q == 0 {
            return Err(fail(Violation::ZeroQ));
        }
        if self.m == 0 {
            return Err(fail(Violation::ZeroM));
        }
        let q = self.q as i64;
        if let Some(&exp) = self.alpha.terms().keys().find(|&&e| e < -q || e >= 0) {
            return Err(fail(Violation::AlphaSupport { exp }));
        }
        if self.alpha.coeff(-q).is_zero() {
            return Err(fail(Violation::LeadingCoefficientZero { q: self.q }));
        }
        if let Some(&exp) = self.delta.terms().keys().find(|&&e| e < 0 || e > truncation as i64) {
            return Err(fail(Violation::DeltaSupport { exp, truncation }));
        }
        if !self.zeta.is_monic() {
            return Err(fail(Violation::ZetaNotMonic));
        }
        let deg = self.zeta.degree().unwrap_or(0);
        if deg != self.m as usize {
            return Err(fail(Violation::ZetaDegree { deg, m: self.m }));
        }
        let d = self.delta.support_gcd(self.alpha.support_gcd(self.p as i64) as i64);
        let mut warnings = Vec::new();
        if d > 1 {
            warnings.push(format!(
                "support gcd {d} > 1: parametrization may be non-primitive or delta truncated too early"
            ));
        }
        Ok(ValidationReport { label: self.label.clone(), support_gcd: d, warnings })
    }
}

/// `lcm` of all `p_ℓ`.
pub fn ramification_order(branches: &[Branch]) -> Result<u32, BranchError> {
    if branches.is_empty() {
        return Err(BranchError::EmptyInput);
    }
    Ok(branches.iter().fold(1, |acc, b| acc.lcm(&b.p)))
}

/// Branch `S_ℓ^i` after the base change, parametrized by `τ ↦ (τ, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnramifiedBranch {
    /// Source label and root index `i` (with `ξ_i = ζ_{p_ℓ}^i`).
    pub origin: (String, u32),
    /// `α_ℓ(ξ_i τ^{p/p_ℓ})`.
    pub alpha_sub: LaurentPoly,
    /// `δ_ℓ(0)`.
    pub delta0: CycloNum,
    pub m: u32,
    pub zeta: CycloPoly,
}

/// The `p_ℓ` copies of every branch for the base change of order `p`.
pub fn unramify_with(branches: &[Branch], p: u32) -> Result<Vec<UnramifiedBranch>, BranchError> {
    let mut out = Vec::new();
    for b in branches {
        if b.p == 0 || !p.is_multiple_of(b.p) {
            return Err(BranchError::NotADivisor { label: b.label.clone(), p_l: b.p, p });
        }
        let k = (p / b.p) as i64;
        for i in 1..=b.p {
            let xi = CycloNum::root_of_unity(b.p, i as i64);
            out.push(UnramifiedBranch {
                origin: (b.label.clone(), i),
                alpha_sub: b.alpha.subst_root_power(&xi, k)?,
                delta0: b.delta.const_term(),
                m: b.m,
                zeta: b.zeta.clone(),
            });
        }
    }
    Ok(out)
}

/// [`unramify_with`] at `p = lcm p_ℓ`; an empty list stays empty.
pub fn unramify(branches: &[Branch]) -> Result<Vec<UnramifiedBranch>, BranchError> {
    if branches.is_empty() {
        return Ok(Vec::new());
    }
    unramify_with(branches, ramification_order(branches)?)
}
