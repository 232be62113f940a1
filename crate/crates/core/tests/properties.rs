mod common;

use common::*;
use exptype::cyclotomic::{CycloNum, CycloPoly, RatFunc};
use exptype::decomposition::decompose;
use exptype::laurent::LaurentPoly;
use exptype::newton::NewtonPolygon;
use exptype::pipeline::{run_point, Options};
use exptype::realization::{canonicalize, realize, FormalModuleSpec, Summand};
use proptest::prelude::*;

fn cyclo() -> impl Strategy<Value = CycloNum> {
    (
        prop::sample::select(ORDERS.to_vec()),
        prop::collection::vec((0u32..24, -9i64..=9, 1i64..=5), 0..4),
    )
        .prop_map(|(n, terms)| CycloNum::from_terms(n, terms.into_iter().map(|(k, a, b)| (k, q(a, b)))))
}

fn nonzero() -> impl Strategy<Value = CycloNum> {
    cyclo().prop_filter("nonzero", |c| !c.is_zero())
}

fn alpha() -> impl Strategy<Value = LaurentPoly> {
    (1i64..=5, nonzero(), prop::collection::vec(cyclo(), 0..4)).prop_map(|(qq, lead, rest)| {
        let mut terms = vec![(-qq, lead)];
        terms.extend(rest.into_iter().enumerate().map(|(i, c)| (-(i as i64 % qq) - 1, c)));
        // the leading coefficient must survive the sum
        let a = LaurentPoly::from_terms(terms);
        if a.coeff(-qq).is_zero() {
            LaurentPoly::tau_pow(-qq)
        } else {
            a
        }
    })
}

fn edges() -> impl Strategy<Value = Vec<(i64, i64, i64, i64)>> {
    prop::collection::vec((1i64..=6, 1i64..=3, 1i64..=6, 1i64..=3), 0..6)
}

fn polygon(e: &[(i64, i64, i64, i64)]) -> NewtonPolygon {
    NewtonPolygon::from_edges(e.iter().map(|&(a, b, c, d)| (q(a, b), q(c, d)))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn inverse(a in nonzero()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert_eq!(a.pow(-2).unwrap(), a.inv().unwrap().pow(2).unwrap());
    }

    #[test]
    fn lifting_keeps_the_value(a in cyclo(), k in 1u32..=4) {
        let lifted = a.lift(a.order() * k).unwrap();
        prop_assert_eq!(&lifted, &a);
        prop_assert_eq!(lifted.key_at(a.order() * k * 2), a.key_at(a.order() * k * 2));
    }

    #[test]
    fn roots_of_unity(n in 1u32..=30, k in -40i64..40) {
        let z = CycloNum::root_of_unity(n, k);
        prop_assert!(z.pow(n as i64).unwrap().is_one());
        prop_assert!(z.is_root_of_unity());
    }

    #[test]
    fn cyclo_json_round_trip(a in cyclo()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: CycloNum = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back.order(), a.order());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn laurent_json_round_trip(a in alpha()) {
        let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn substitution_composes(a in alpha(), n in 1u32..=6, i in 0i64..6, k in 1i64..=3) {
        let xi = CycloNum::root_of_unity(n, i);
        let once = a.subst_root_power(&xi, k).unwrap();
        prop_assert_eq!(once.pole_order(), a.pole_order() * k as u32);
        // τ ↦ ξτ repeated n times is the identity
        let mut b = a.clone();
        for _ in 0..n {
            b = b.subst_root_power(&xi, 1).unwrap();
        }
        prop_assert_eq!(b, a);
    }

    #[test]
    fn minkowski_sum_is_commutative_and_additive(a in edges(), b in edges(), c in edges()) {
        let (pa, pb, pc) = (polygon(&a), polygon(&b), polygon(&c));
        let ab = NewtonPolygon::minkowski_sum([&pa, &pb]);
        prop_assert_eq!(&ab, &NewtonPolygon::minkowski_sum([&pb, &pa]));
        let abc = NewtonPolygon::minkowski_sum([&ab, &pc]);
        let bc = NewtonPolygon::minkowski_sum([&pb, &pc]);
        prop_assert_eq!(&abc, &NewtonPolygon::minkowski_sum([&pa, &bc]));
        prop_assert_eq!(ab.width(), pa.width() + pb.width());
        prop_assert_eq!(ab.irregularity(), pa.irregularity() + pb.irregularity());
        let slopes = ab.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dilation_scales_heights(a in edges(), n in 1i64..=5, d in 1i64..=5) {
        let p = polygon(&a);
        let r = q(n, d);
        let dil = p.dilate_vertical(&r).unwrap();
        prop_assert_eq!(dil.irregularity(), p.irregularity() * &r);
        prop_assert_eq!(dil.width(), p.width());
        prop_assert_eq!(dil.vertices().len(), p.vertices().len());
    }

    #[test]
    fn ratfunc_cancels(a in 1u32..=3, b in 1u32..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = rand_charpoly(&mut r, a);
        let g = rand_charpoly(&mut r, b);
        let h = RatFunc::from_poly(f.clone()).mul(&RatFunc::from_poly(g.clone()).pow(-1).unwrap());
        let back = h.mul(&RatFunc::from_poly(g));
        prop_assert_eq!(back, RatFunc::from_poly(f));
        prop_assert!(h.den().is_monic());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_counts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bs = rand_branch_set(&mut r, 4, 4, 4, 3);
        let d = decompose(&bs).unwrap();
        let members: usize = d.factors.iter().map(|f| f.members.len()).sum();
        prop_assert_eq!(members, bs.iter().map(|b| b.p as usize).sum::<usize>());
        let rank: u32 = d.factors.iter().map(|f| f.rank_branchwise).sum();
        prop_assert_eq!(rank, bs.iter().map(|b| b.m * b.p).sum::<u32>());
        prop_assert!(d.factors.iter().all(|f| f.rank_paper <= f.rank_branchwise));
        prop_assert_eq!(d.rank_divergence, d.factors.iter().any(|f| f.rank_paper != f.rank_branchwise));
        if d.star_holds {
            for f in &d.factors {
                let cp = f.charpoly.as_ref().unwrap();
                prop_assert_eq!(cp.degree(), Some(f.rank_branchwise as usize));
            }
        } else {
            prop_assert!(d.star_witness.is_some());
        }
    }

    #[test]
    fn pipeline_output_is_stable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (bs, _) = rand_unramified_set(&mut r, 3, 3, 4);
        let opts = Options { truncation: 4, ..Options::default() };
        let a = serde_json::to_string(&run_point("0", 0, &bs, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_point("0", 0, &bs, &opts).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn realized_branches_are_primitive(seed in any::<u64>(), p in 1u32..=6) {
        let mut r = rng(seed);
        let a = rand_alpha(&mut r, 1 + (seed % 6) as u32);
        let (pp, ac) = canonicalize(p, &a);
        prop_assert_eq!(ac.support_gcd(pp as i64), 1);
        let spec = FormalModuleSpec {
            p: pp,
            summands: vec![Summand { alpha: ac, rank: 1, charpoly: CycloPoly::from_ints(&[-1, 1]) }],
            regular_rank: 0,
        };
        let bs = realize(&spec).unwrap();
        prop_assert!(bs.iter().all(|b| b.validate(0).unwrap().warnings.is_empty()));
    }
}
