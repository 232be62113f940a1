//! Strict transforms of unramified branches through the blow-up chain.
//!
//! A branch `1/y = α_ℓ(x) + δ_ℓ(x)` is carried as the parametrization
//! `x = τ`, `y = τ^{q'} / U(τ)` with `U = τ^{q'}(α_ℓ + δ_ℓ)`. Every center
//! lies in an `A` chart, where the transform is `v ↦ (v - c)/u` and `u = τ`
//! stays fixed, so the branch passes through the `k`-th center exactly when
//! the constant term of its current `v`-series equals the center.

use serde::{Deserialize, Serialize};

use super::{ResolutionError, ResolutionTree};
use crate::branch::{unramify_with, Branch};
use crate::cyclotomic::{CycloNum, CycloPoly};
use crate::decomposition::{exponential_factors, star_condition};
use crate::laurent::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictTransformResult {
    pub label: String,
    pub m: u32,
    pub zeta: CycloPoly,
    pub meets_ed: bool,
    /// `v`-coordinate of the intersection with `E_d` in its `A` chart.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point_on_ed: Option<CycloNum>,
    /// Value of `g` there.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g_value: Option<CycloNum>,
    /// Last exceptional curve the branch meets when it leaves the chain
    /// early, with the `v`-coordinate of the meeting point.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub leaves_at: Option<(usize, CycloNum)>,
}

/// Power series inverse of `c` (with `c[0] != 0`) modulo `τ^len`.
fn series_inverse(c: &[CycloNum], len: usize) -> Result<Vec<CycloNum>, ResolutionError> {
    let c0inv = c[0].inv()?;
    let mut out: Vec<CycloNum> = Vec::with_capacity(len);
    for k in 0..len {
        if k == 0 {
            out.push(c0inv.clone());
            continue;
        }
        let mut s = CycloNum::zero();
        for j in 1..=k.min(c.len() - 1) {
            s = &s + &(&c[j] * &out[k - j]);
        }
        out.push(-&(&s * &c0inv));
    }
    Ok(out)
}

/// Transform a `p = 1` branch whose delta is known through `τ^truncation`.
pub fn strict_transform(
    b: &Branch,
    tree: &ResolutionTree,
    truncation: u32,
) -> Result<StrictTransformResult, ResolutionError> {
    if b.p != 1 {
        return Err(ResolutionError::Ramified { label: b.label.clone(), p: b.p });
    }
    let qb = b.alpha.pole_order() as usize;
    if qb == 0 {
        return Err(ResolutionError::NotPolar);
    }
    let t = truncation as usize;
    // U_j = [τ^(j - q')](α + δ) for j = 0..=q' + T
    let series = &b.alpha + &b.delta;
    let u: Vec<CycloNum> = (0..=qb + t).map(|j| series.coeff(j as i64 - qb as i64)).collect();
    // y = τ^q' / U is known modulo τ^(2q' + T + 1)
    let inv = series_inverse(&u, qb + t + 1)?;
    let mut v: Vec<CycloNum> = vec![CycloNum::zero(); qb];
    v.extend(inv);
    let known = v.len();
    let needed = tree.steps.len() + 1;
    let mut result = StrictTransformResult {
        label: b.label.clone(),
        m: b.m,
        zeta: b.zeta.clone(),
        meets_ed: false,
        point_on_ed: None,
        g_value: None,
        leaves_at: None,
    };
    let short = |k: usize| ResolutionError::Truncation {
        label: b.label.clone(),
        truncation,
        needed: (truncation as usize + k + 1 - known) as u32,
    };
    let mut offset = 0;
    for (k, step) in tree.steps.iter().enumerate() {
        // the branch sits in chart A_k as (τ, v(τ)), v = series[offset..]
        if offset >= known {
            return Err(short(k));
        }
        if !step.center.0.is_zero() || v[offset] != step.center.1 {
            if k == 0 {
                return Err(ResolutionError::Structural {
                    at: "origin".into(),
                    reason: "branch does not pass through the origin".into(),
                    expr: b.label.clone(),
                });
            }
            result.leaves_at = Some((k, v[offset].clone()));
            return Ok(result);
        }
        offset += 1;
    }
    if offset >= known {
        return Err(short(needed - 1));
    }
    let pt = v[offset].clone();
    result.meets_ed = true;
    result.g_value = Some(tree.g_on_ed(&pt));
    result.point_on_ed = Some(pt);
    Ok(result)
}

/// Comparison of the blow-up side with the grouping side for one `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub alpha: LaurentPoly,
    /// Labels grouped under `α` by equality of polar parts.
    pub by_grouping: Vec<String>,
    /// Labels whose strict transform meets `E_d`.
    pub by_transform: Vec<String>,
    pub membership_agrees: bool,
    /// Condition (∗) among the grouped members.
    pub star_members: bool,
    /// Pairwise distinct intersection points on `E_d`.
    pub points_distinct: bool,
    pub star_agrees: bool,
    pub results: Vec<StrictTransformResult>,
}

impl CorollaryReport {
    pub fn agrees(&self) -> bool {
        self.membership_agrees && self.star_agrees
    }
}

/// [`verify_corollary_with`] for branches sharing one truncation depth.
pub fn verify_corollary(
    branches: &[Branch],
    alpha: &LaurentPoly,
    truncation: u32,
) -> Result<CorollaryReport, ResolutionError> {
    let with: Vec<(Branch, u32)> = branches.iter().map(|b| (b.clone(), truncation)).collect();
    verify_corollary_with(&with, alpha)
}

/// Check that the branches meeting `E_d` are those with polar part `α`, and
/// that distinctness of their intersection points matches (∗).
pub fn verify_corollary_with(
    branches: &[(Branch, u32)],
    alpha: &LaurentPoly,
) -> Result<CorollaryReport, ResolutionError> {
    let tree = super::build_resolution(alpha)?;
    let plain: Vec<Branch> = branches.iter().map(|(b, _)| b.clone()).collect();
    let ub = unramify_with(&plain, 1).map_err(crate::decomposition::DecompositionError::from)?;
    let factors = exponential_factors(&ub);
    let mut by_grouping: Vec<String> = factors
        .iter()
        .find(|f| f.alpha == *alpha)
        .map(|f| f.members.iter().map(|m| m.label.clone()).collect())
        .unwrap_or_default();
    by_grouping.sort();
    let mut results = Vec::with_capacity(branches.len());
    for (b, t) in branches {
        results.push(strict_transform(b, &tree, *t)?);
    }
    let mut by_transform: Vec<String> =
        results.iter().filter(|r| r.meets_ed).map(|r| r.label.clone()).collect();
    by_transform.sort();
    let members: Vec<_> = ub.iter().filter(|u| by_grouping.contains(&u.origin.0)).cloned().collect();
    let star_members = star_condition(&members).0;
    let pts: Vec<&CycloNum> = results.iter().filter_map(|r| r.point_on_ed.as_ref()).collect();
    let points_distinct =
        (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| pts[i] != pts[j]));
    Ok(CorollaryReport {
        alpha: alpha.clone(),
        membership_agrees: by_grouping == by_transform,
        star_agrees: star_members == points_distinct,
        by_grouping,
        by_transform,
        star_members,
        points_distinct,
        results,
    })
}

/// Every unramified copy of every branch as a `p = 1` branch, with the
/// holomorphic part substituted and its known depth.
pub fn plane_branches(
    branches: &[Branch],
    p: u32,
    truncation: u32,
) -> Result<Vec<(Branch, u32)>, ResolutionError> {
    let mut out = Vec::new();
    for b in branches {
        if b.p == 0 || !p.is_multiple_of(b.p) {
            return Err(ResolutionError::Ramified { label: b.label.clone(), p: b.p });
        }
        let k = p / b.p;
        for i in 1..=b.p {
            let xi = CycloNum::root_of_unity(b.p, i as i64);
            let alpha = b.alpha.subst_root_power(&xi, k as i64)?;
            let delta = b.delta.subst_root_power(&xi, k as i64)?;
            let label = if b.p == 1 { b.label.clone() } else { format!("{}#{i}", b.label) };
            let branch = Branch {
                label,
                p: 1,
                q: b.q * k,
                alpha,
                delta,
                m: b.m,
                zeta: b.zeta.clone(),
            };
            out.push((branch, (truncation + 1) * k - 1));
        }
    }
    Ok(out)
}
