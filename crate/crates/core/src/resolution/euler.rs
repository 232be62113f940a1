//! Euler characteristic and monodromy zeta function of the nearby cycles,
//! assembled stratum by stratum over the exceptional divisor.
//!
//! Away from `E_d` every stratum contributes nothing. On `E_d ≅ P¹` the point
//! `P` contributes `-r` (zeta `ζ_r^{-1}`), each point `Q_i` met by strict
//! transforms contributes `r - Σ m` (zeta `ζ_r · Π ζ_ℓ^{-1}`), and the open
//! complement, of Euler characteristic `2 - 1 - k`, contributes `r` per unit
//! of Euler characteristic (zeta `ζ_r`).

use super::{LemmaCase, ResolutionError, ResolutionTree, StrictTransformResult};
use crate::cyclotomic::{CycloNum, CycloPoly, RatFunc};

/// Euler characteristic of the stalk at a point of the given type. `local_m`
/// lists the multiplicities of the strict transforms through the point.
pub fn local_chi(case: &LemmaCase, r: u32, local_m: &[u32]) -> i64 {
    let r = r as i64;
    match case {
        LemmaCase::SmoothPole { .. } | LemmaCase::CrossingPole { .. } => 0,
        LemmaCase::PPoint { .. } => -r,
        LemmaCase::OnEd { .. } => r - local_m.iter().map(|&m| m as i64).sum::<i64>(),
    }
}

/// Intersection points on `E_d`, each with the results meeting there, in
/// first-seen order.
fn q_points(results: &[StrictTransformResult]) -> Vec<(CycloNum, Vec<&StrictTransformResult>)> {
    let mut out: Vec<(CycloNum, Vec<&StrictTransformResult>)> = Vec::new();
    for r in results {
        let Some(p) = &r.point_on_ed else { continue };
        match out.iter_mut().find(|(q, _)| q == p) {
            Some((_, v)) => v.push(r),
            None => out.push((p.clone(), vec![r])),
        }
    }
    out
}

fn euler_of_ed_open(k: usize) -> i64 {
    // E_d is a projective line minus P and the k points Q_i
    2 - 1 - k as i64
}

pub fn chi_psi(tree: &ResolutionTree, results: &[StrictTransformResult], r: u32) -> i64 {
    let mut total = 0;
    for c in &tree.components {
        if c.index != tree.ed {
            total += local_chi(&c.generic, r, &[]);
        }
    }
    for (i, p) in tree.points.iter().enumerate() {
        if i == tree.p_point || !p.components.contains(&tree.ed) {
            total += local_chi(&p.case, r, &[]);
        }
    }
    let qs = q_points(results);
    for (_, members) in &qs {
        let ms: Vec<u32> = members.iter().map(|m| m.m).collect();
        total += local_chi(&LemmaCase::OnEd { a: None }, r, &ms);
    }
    total + euler_of_ed_open(qs.len()) * local_chi(&tree.components[tree.ed - 1].generic, r, &[])
}

/// Zeta function of the monodromy as a reduced ratio; `zeta_r` is the
/// characteristic polynomial of the rank-`r` local system on the open part.
pub fn zeta_psi(
    tree: &ResolutionTree,
    results: &[StrictTransformResult],
    zeta_r: &CycloPoly,
) -> Result<RatFunc, ResolutionError> {
    let qs = q_points(results);
    if qs.iter().any(|(_, members)| members.len() > 1) {
        return Err(ResolutionError::StarRequired);
    }
    let zr = RatFunc::from_poly(zeta_r.clone());
    // strata off E_d have trivial zeta; P contributes ζ_r^{-1}
    let mut acc = RatFunc::one();
    for p in &tree.points {
        if matches!(p.case, LemmaCase::PPoint { .. }) {
            acc = acc.mul(&zr.pow(-1)?);
        }
    }
    for (_, members) in &qs {
        let local = zr.mul(&RatFunc::from_poly(members[0].zeta.clone()).pow(-1)?);
        acc = acc.mul(&local);
    }
    Ok(acc.mul(&zr.pow(euler_of_ed_open(qs.len()))?))
}
