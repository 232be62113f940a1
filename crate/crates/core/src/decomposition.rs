//! Exponential factors of the formal irregular part after the base change:
//! grouping of unramified branches by polar part, the two rank conventions,
//! the distinctness condition (∗) and monodromy characteristic polynomials.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::{ramification_order, unramify_with, Branch, BranchError, UnramifiedBranch};
use crate::cyclotomic::CycloPoly;
use crate::laurent::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error("characteristic polynomials need condition (*), which fails for {0} and {1}")]
    StarFails(Member, Member),
    #[error(transparent)]
    Branch(#[from] BranchError),
}

/// An unramified copy `(label, i)` of a branch.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Member {
    pub label: String,
    pub root: u32,
}

impl std::fmt::Display for Member {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.label, self.root)
    }
}

impl From<&UnramifiedBranch> for Member {
    fn from(u: &UnramifiedBranch) -> Self {
        Member { label: u.origin.0.clone(), root: u.origin.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentialFactor {
    pub alpha: LaurentPoly,
    pub members: Vec<Member>,
    /// Sum of `m` over members.
    pub rank_branchwise: u32,
    /// Sum of `m_ℓ` over the distinct labels among members.
    pub rank_paper: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub charpoly: Option<CycloPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalDecomposition {
    pub p: u32,
    pub factors: Vec<ExponentialFactor>,
    #[serde(rename = "star")]
    pub star_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub star_witness: Option<(Member, Member)>,
    /// Some factor receives several roots of the same branch, so the two
    /// rank conventions disagree on it.
    pub rank_divergence: bool,
}

/// Canonical order of polar parts: pole order, then coefficients from the
/// lowest exponent up, compared at a common cyclotomic order.
pub fn canonical_cmp(a: &LaurentPoly, b: &LaurentPoly, order: u32) -> Ordering {
    a.pole_order()
        .cmp(&b.pole_order())
        .then_with(|| a.lex_key(order).cmp(&b.lex_key(order)))
}

fn common_order<'a>(polys: impl IntoIterator<Item = &'a LaurentPoly>) -> u32 {
    polys.into_iter().fold(1, |acc, p| crate::cyclotomic::lcm(acc, p.order()))
}

/// Partition by exact equality of `alpha_sub`; factors in canonical order.
pub fn exponential_factors(ub: &[UnramifiedBranch]) -> Vec<ExponentialFactor> {
    let mut classes: Vec<(LaurentPoly, Vec<&UnramifiedBranch>)> = Vec::new();
    for u in ub {
        match classes.iter_mut().find(|(a, _)| *a == u.alpha_sub) {
            Some((_, members)) => members.push(u),
            None => classes.push((u.alpha_sub.clone(), vec![u])),
        }
    }
    let mut factors: Vec<ExponentialFactor> = classes
        .into_iter()
        .map(|(alpha, us)| {
            let rank_branchwise = us.iter().map(|u| u.m).sum();
            let mut seen: Vec<&str> = Vec::new();
            let mut rank_paper = 0;
            for u in &us {
                if !seen.contains(&u.origin.0.as_str()) {
                    seen.push(&u.origin.0);
                    rank_paper += u.m;
                }
            }
            let mut members: Vec<Member> = us.iter().map(|u| Member::from(*u)).collect();
            members.sort();
            ExponentialFactor { alpha, members, rank_branchwise, rank_paper, charpoly: None }
        })
        .collect();
    let order = common_order(factors.iter().map(|f| &f.alpha));
    factors.sort_by(|a, b| canonical_cmp(&a.alpha, &b.alpha, order));
    factors
}

/// Whether all `alpha_sub + delta0` are pairwise distinct; otherwise the
/// first equal pair in input order.
pub fn star_condition(ub: &[UnramifiedBranch]) -> (bool, Option<(Member, Member)>) {
    let shifted: Vec<LaurentPoly> =
        ub.iter().map(|u| &u.alpha_sub + &LaurentPoly::constant(u.delta0.clone())).collect();
    for i in 0..ub.len() {
        for j in i + 1..ub.len() {
            if shifted[i] == shifted[j] {
                return (false, Some((Member::from(&ub[i]), Member::from(&ub[j]))));
            }
        }
    }
    (true, None)
}

/// Fill `charpoly` with the product of `zeta` over each factor's members.
pub fn char_polys(
    factors: &mut [ExponentialFactor],
    ub: &[UnramifiedBranch],
) -> Result<(), DecompositionError> {
    if let (false, Some((a, b))) = star_condition(ub) {
        return Err(DecompositionError::StarFails(a, b));
    }
    for f in factors.iter_mut() {
        let mut prod = CycloPoly::one();
        for m in &f.members {
            let u = ub
                .iter()
                .find(|u| u.origin.0 == m.label && u.origin.1 == m.root)
                .expect("member comes from the branch list");
            prod = prod.mul(&u.zeta);
        }
        f.charpoly = Some(prod);
    }
    Ok(())
}

/// Full decomposition of already unramified data at ramification order `p`.
pub fn decompose_unramified(p: u32, ub: &[UnramifiedBranch]) -> FormalDecomposition {
    let mut factors = exponential_factors(ub);
    let (star_holds, star_witness) = star_condition(ub);
    if star_holds {
        char_polys(&mut factors, ub).expect("condition (*) holds");
    }
    let rank_divergence = factors.iter().any(|f| f.rank_branchwise != f.rank_paper);
    FormalDecomposition { p, factors, star_holds, star_witness, rank_divergence }
}

/// Decompose validated branch data.
pub fn decompose(branches: &[Branch]) -> Result<FormalDecomposition, DecompositionError> {
    if branches.is_empty() {
        return Ok(decompose_unramified(1, &[]));
    }
    let p = ramification_order(branches)?;
    let ub = unramify_with(branches, p)?;
    Ok(decompose_unramified(p, &ub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::tests::branch;
    use crate::cyclotomic::CycloNum;

    fn t(e: i64) -> LaurentPoly {
        LaurentPoly::tau_pow(e)
    }

    fn e1() -> Vec<Branch> {
        vec![
            branch("l1", 1, 1, t(-1), 2, &[1, -2, 1]),
            branch("l2", 2, 3, t(-3), 1, &[1, 1]),
        ]
    }

    #[test]
    fn e1_decomposition() {
        let d = decompose(&e1()).unwrap();
        assert_eq!(d.p, 2);
        let alphas: Vec<_> = d.factors.iter().map(|f| f.alpha.clone()).collect();
        assert_eq!(alphas, vec![t(-2), -&t(-3), t(-3)]);
        let ranks: Vec<_> = d.factors.iter().map(|f| f.rank_branchwise).collect();
        assert_eq!(ranks, vec![2, 1, 1]);
        assert!(d.star_holds);
        assert!(!d.rank_divergence);
        let cps: Vec<_> = d.factors.iter().map(|f| f.charpoly.clone().unwrap()).collect();
        assert_eq!(
            cps,
            vec![CycloPoly::from_ints(&[1, -2, 1]), CycloPoly::from_ints(&[1, 1]), CycloPoly::from_ints(&[1, 1])]
        );
    }

    #[test]
    fn trivial_cases() {
        let d = decompose(&[]).unwrap();
        assert_eq!((d.p, d.factors.len()), (1, 0));
        let d = decompose(&[branch("a", 1, 1, t(-1), 1, &[-1, 1])]).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].rank_branchwise, 1);
        assert_eq!(d.factors[0].charpoly, Some(CycloPoly::from_ints(&[-1, 1])));
    }

    #[test]
    fn non_primitive_branch_diverges() {
        let d = decompose(&[branch("a", 2, 2, t(-2), 1, &[-1, 1])]).unwrap();
        assert_eq!(d.factors.len(), 1);
        let f = &d.factors[0];
        assert_eq!(f.members.len(), 2);
        assert_eq!((f.rank_branchwise, f.rank_paper), (2, 1));
        assert!(d.rank_divergence);
        // both copies have the same delta(0), so (*) fails as well
        assert!(!d.star_holds);
        assert!(f.charpoly.is_none());
    }

    #[test]
    fn star_examples() {
        let a = branch("a", 1, 1, t(-1), 1, &[-1, 1]);
        let mut b = a.clone();
        b.label = "b".into();
        let ub = unramify_with(&[a.clone(), b.clone()], 1).unwrap();
        let (ok, w) = star_condition(&ub);
        assert!(!ok);
        assert_eq!(w.unwrap().0.label, "a");
        b.delta = LaurentPoly::constant(CycloNum::one());
        let ub = unramify_with(&[a, b], 1).unwrap();
        assert!(star_condition(&ub).0);
        let mut fs = exponential_factors(&ub);
        assert_eq!(fs.len(), 1);
        char_polys(&mut fs, &ub).unwrap();
        assert_eq!(fs[0].charpoly, Some(CycloPoly::from_ints(&[-1, 1]).pow(2)));
    }

    #[test]
    fn charpoly_product_of_members() {
        let a = branch("a", 1, 1, t(-1), 1, &[-1, 1]);
        let mut b = branch("b", 1, 1, t(-1), 1, &[1, 1]);
        b.delta = LaurentPoly::constant(CycloNum::from_int(2));
        let d = decompose(&[a, b]).unwrap();
        assert_eq!(d.factors[0].charpoly, Some(CycloPoly::from_ints(&[-1, 0, 1])));
    }

    #[test]
    fn char_polys_requires_star() {
        let a = branch("a", 1, 1, t(-1), 1, &[-1, 1]);
        let ub = unramify_with(&[a.clone(), a], 1).unwrap();
        let mut fs = exponential_factors(&ub);
        assert!(matches!(char_polys(&mut fs, &ub), Err(DecompositionError::StarFails(..))));
    }
}
