#![allow(dead_code)]

use exptype::branch::Branch;
use exptype::cyclotomic::{CycloNum, CycloPoly, Rational};
use exptype::laurent::LaurentPoly;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const ORDERS: [u32; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_rational(r: &mut ChaCha8Rng) -> Rational {
    q(r.gen_range(-6..=6), r.gen_range(1..=4))
}

pub fn nonzero_rational(r: &mut ChaCha8Rng) -> Rational {
    let n = *[-3i64, -2, -1, 1, 2, 3].choose(r).unwrap();
    q(n, r.gen_range(1..=3))
}

/// Random element of `Q(ζ_order)` with up to `max_terms` power-basis terms.
pub fn rand_cyclo_at(r: &mut ChaCha8Rng, order: u32, max_terms: usize) -> CycloNum {
    let n = r.gen_range(0..=max_terms);
    let terms: Vec<(u32, Rational)> = (0..n).map(|_| (r.gen_range(0..order), rand_rational(r))).collect();
    CycloNum::from_terms(order, terms)
}

pub fn rand_cyclo(r: &mut ChaCha8Rng) -> CycloNum {
    let order = *ORDERS.choose(r).unwrap();
    rand_cyclo_at(r, order, 3)
}

pub fn nonzero_cyclo(r: &mut ChaCha8Rng) -> CycloNum {
    loop {
        let c = rand_cyclo(r);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Small "nice" coefficients: rationals and roots of unity of low order.
pub fn simple_coeff(r: &mut ChaCha8Rng) -> CycloNum {
    match r.gen_range(0..4) {
        0 => CycloNum::from_rational(nonzero_rational(r)),
        1 => CycloNum::root_of_unity(*[2u32, 3, 4, 6].choose(r).unwrap(), r.gen_range(1..6)),
        2 => CycloNum::from_int(r.gen_range(1..=3)),
        _ => nonzero_cyclo(r),
    }
}

/// Polar part of pole order exactly `q`.
pub fn rand_alpha(r: &mut ChaCha8Rng, q: u32) -> LaurentPoly {
    let mut terms = vec![(-(q as i64), simple_coeff(r))];
    for e in 1..q as i64 {
        if r.gen_bool(0.5) {
            terms.push((-e, simple_coeff(r)));
        }
    }
    LaurentPoly::from_terms(terms)
}

/// Monic polynomial of degree `m`.
pub fn rand_monic(r: &mut ChaCha8Rng, m: u32) -> CycloPoly {
    let mut c: Vec<CycloNum> = (0..m).map(|_| rand_cyclo(r)).collect();
    c.push(CycloNum::one());
    CycloPoly::new(c)
}

/// Product of `λ - ζ` over random roots of unity, as a monodromy would give.
pub fn rand_charpoly(r: &mut ChaCha8Rng, m: u32) -> CycloPoly {
    (0..m).fold(CycloPoly::one(), |acc, _| {
        let n = *[1u32, 2, 3, 4, 6].choose(r).unwrap();
        acc.mul(&CycloPoly::linear(&CycloNum::root_of_unity(n, r.gen_range(0..n as i64))))
    })
}

pub fn rand_delta(r: &mut ChaCha8Rng, d0: CycloNum, truncation: u32) -> LaurentPoly {
    let mut terms = vec![(0, d0)];
    for e in 1..=truncation as i64 {
        if r.gen_bool(0.4) {
            terms.push((e, rand_cyclo(r)));
        }
    }
    LaurentPoly::from_terms(terms)
}

pub fn branch(label: &str, p: u32, alpha: LaurentPoly, delta: LaurentPoly, m: u32, zeta: CycloPoly) -> Branch {
    Branch { label: label.into(), p, q: alpha.pole_order(), alpha, delta, m, zeta }
}

/// Random branch set: up to `max_branches` branches, `p <= max_p`,
/// `q <= max_q`, `m <= max_m`. Parametrizations are not forced primitive.
pub fn rand_branch_set(
    r: &mut ChaCha8Rng,
    max_branches: usize,
    max_p: u32,
    max_q: u32,
    max_m: u32,
) -> Vec<Branch> {
    let n = r.gen_range(1..=max_branches);
    (0..n)
        .map(|i| {
            let p = r.gen_range(1..=max_p);
            let q = r.gen_range(1..=max_q);
            let m = r.gen_range(1..=max_m);
            let alpha = rand_alpha(r, q);
            branch(&format!("b{i}"), p, alpha, LaurentPoly::zero(), m, rand_charpoly(r, m))
        })
        .collect()
}

/// Unramified branch set built from a small pool of polar parts and
/// constant terms, so that equal polar parts and equal points on the last
/// exceptional curve both occur often.
pub fn rand_unramified_set(r: &mut ChaCha8Rng, max_branches: usize, max_q: u32, truncation: u32) -> (Vec<Branch>, Vec<LaurentPoly>) {
    let pool: Vec<LaurentPoly> = (0..r.gen_range(1..=3)).map(|_| {
        let q = r.gen_range(1..=max_q);
        rand_alpha(r, q)
    }).collect();
    let d0s = [CycloNum::zero(), CycloNum::one(), CycloNum::root_of_unity(3, 1)];
    let n = r.gen_range(1..=max_branches);
    let branches = (0..n)
        .map(|i| {
            let alpha = pool.choose(r).unwrap().clone();
            let d0 = d0s.choose(r).unwrap().clone();
            let m = r.gen_range(1..=3);
            branch(&format!("b{i}"), 1, alpha, rand_delta(r, d0, truncation), m, rand_charpoly(r, m))
        })
        .collect();
    (branches, pool)
}

/// The worked instance: `(1, 1, τ⁻¹, 2, (λ-1)²)` and `(2, 3, τ⁻³, 1, λ+1)`.
pub fn e1() -> Vec<Branch> {
    vec![
        branch("l1", 1, LaurentPoly::tau_pow(-1), LaurentPoly::zero(), 2, CycloPoly::from_ints(&[1, -2, 1])),
        branch("l2", 2, LaurentPoly::tau_pow(-3), LaurentPoly::zero(), 1, CycloPoly::from_ints(&[1, 1])),
    ]
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
