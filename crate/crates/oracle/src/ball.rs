//! Fixed-point ball arithmetic.
//!
//! A [`RealBall`] at precision `P` stores integers `mid` and `rad >= 0` and
//! denotes the interval `[(mid - rad) / 2^P, (mid + rad) / 2^P]`. Every
//! operation rounds outwards, so the true value of an expression always lies
//! inside the ball computed for it.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Default working precision in bits (about 77 decimal digits).
pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone, Debug)]
pub struct RealBall {
    prec: u32,
    mid: BigInt,
    rad: BigInt,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl RealBall {
    pub fn zero(prec: u32) -> Self {
        RealBall { prec, mid: BigInt::zero(), rad: BigInt::zero() }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r.numer() << prec as usize;
        let mid = floor_div(&scaled, r.denom());
        let exact = (&mid * r.denom()) == scaled;
        RealBall { prec, mid, rad: if exact { BigInt::zero() } else { BigInt::one() } }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        RealBall { prec, mid: BigInt::from(n) << prec as usize, rad: BigInt::zero() }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn add(&self, o: &Self) -> Self {
        RealBall { prec: self.prec, mid: &self.mid + &o.mid, rad: &self.rad + &o.rad }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RealBall { prec: self.prec, mid: &self.mid - &o.mid, rad: &self.rad + &o.rad }
    }

    pub fn neg(&self) -> Self {
        RealBall { prec: self.prec, mid: -&self.mid, rad: self.rad.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let one = BigInt::one() << self.prec as usize;
        let mid = floor_div(&(&self.mid * &o.mid), &one);
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let rad = ceil_div(&err, &one) + 1u32;
        RealBall { prec: self.prec, mid, rad }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = &self.mid * r.numer();
        let mid = floor_div(&num, r.denom());
        let rad = ceil_div(&(&self.rad * r.numer().abs()), r.denom()) + 1u32;
        RealBall { prec: self.prec, mid, rad }
    }

    /// True when zero is certainly not in the ball.
    pub fn excludes_zero(&self) -> bool {
        self.mid.abs() > self.rad
    }

    /// Upper bound of `|x| * 2^P`.
    fn abs_upper(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    /// Radius widened by `extra` ulps.
    fn widen(mut self, extra: &BigInt) -> Self {
        self.rad += extra;
        self
    }

    /// Approximate value as `f64` (midpoint).
    pub fn to_f64(&self) -> f64 {
        let shift = self.prec.saturating_sub(60) as usize;
        let m = &self.mid >> shift;
        let (sign, digits) = m.to_u64_digits();
        let mut v = 0f64;
        for d in digits.iter().rev() {
            v = v * 18446744073709551616.0 + *d as f64;
        }
        if sign == Sign::Minus {
            v = -v;
        }
        v / 2f64.powi((self.prec as usize - shift) as i32)
    }
}

/// `pi` as a ball, by Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> RealBall {
    fn atan_inv(x: i64, prec: u32) -> RealBall {
        let one = BigInt::one() << prec as usize;
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = floor_div(&one, &x);
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !power.is_zero() {
            let term = floor_div(&power, &BigInt::from(2 * k + 1));
            if k.is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
            power = floor_div(&power, &x2);
            k += 1;
        }
        // two floors per term plus the discarded tail
        RealBall { prec, mid: sum, rad: BigInt::from(2 * k + 2) }
    }
    let a = atan_inv(5, prec);
    let b = atan_inv(239, prec);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    a.scale(&sixteen).sub(&b.scale(&four))
}

/// `(cos t, sin t)` for a ball `t` with `|t| <= 4`.
pub fn cos_sin(t: &RealBall) -> (RealBall, RealBall) {
    let prec = t.prec;
    let one = BigInt::one() << prec as usize;
    let tm = RealBall { prec, mid: t.mid.clone(), rad: BigInt::zero() };
    let t2 = &tm.mid * &tm.mid;
    let series = |start: BigInt, first_n: u64| -> (BigInt, u64) {
        let mut term = start;
        let mut sum = BigInt::zero();
        let mut n = first_n;
        let mut count = 0u64;
        let mut sign = true;
        while !term.is_zero() {
            if sign {
                sum += &term;
            } else {
                sum -= &term;
            }
            sign = !sign;
            let denom = BigInt::from((n + 1) * (n + 2)) * &one * &one;
            term = floor_div(&(&term * &t2), &denom);
            n += 2;
            count += 1;
        }
        (sum, count)
    };
    let (c, nc) = series(one.clone(), 0);
    // sin is odd; run the series on |t| so floored terms shrink to zero
    let (s, ns) = series(tm.mid.abs(), 1);
    let s = if tm.mid.is_negative() { -s } else { s };
    // Each term carries at most a few ulps of truncation; the alternating tail
    // is bounded by the first vanished term. Radius of `t` propagates with
    // Lipschitz constant 1.
    let cos = RealBall { prec, mid: c, rad: BigInt::from(4 * nc + 4) }.widen(&t.rad);
    let sin = RealBall { prec, mid: s, rad: BigInt::from(4 * ns + 4) }.widen(&t.rad);
    (cos, sin)
}

#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

/// Outcome of a numerical equality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericVerdict {
    /// The difference is certainly nonzero.
    Distinct,
    /// The difference is smaller than the requested number of digits.
    Equal,
    /// Neither could be certified at this precision.
    Undecided,
}

impl ComplexBall {
    pub fn zero(prec: u32) -> Self {
        ComplexBall { re: RealBall::zero(prec), im: RealBall::zero(prec) }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        ComplexBall { re: RealBall::from_rational(r, prec), im: RealBall::zero(prec) }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ComplexBall { re: self.re.scale(r), im: self.im.scale(r) }
    }

    pub fn excludes_zero(&self) -> bool {
        self.re.excludes_zero() || self.im.excludes_zero()
    }

    /// Certified `|re| < 10^-digits` and `|im| < 10^-digits`.
    pub fn smaller_than_digits(&self, digits: u32) -> bool {
        let prec = self.re.prec;
        let bound = (BigInt::one() << prec as usize) / BigInt::from(10u32).pow(digits);
        self.re.abs_upper() < bound && self.im.abs_upper() < bound
    }

    /// Classify `self` (typically a difference) against zero.
    pub fn verdict(&self, digits: u32) -> NumericVerdict {
        if self.excludes_zero() {
            NumericVerdict::Distinct
        } else if self.smaller_than_digits(digits) {
            NumericVerdict::Equal
        } else {
            NumericVerdict::Undecided
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `exp(2 pi i k / n)` as a complex ball.
pub fn root_of_unity(n: u32, k: i64, prec: u32) -> ComplexBall {
    let n_i = n as i64;
    let mut k = k.rem_euclid(n_i);
    if 2 * k > n_i {
        k -= n_i;
    }
    // angle = pi * 2k / n, |angle| <= pi
    let ratio = BigRational::new(BigInt::from(2 * k), BigInt::from(n_i));
    let theta = pi(prec).scale(&ratio);
    let (c, s) = cos_sin(&theta);
    ComplexBall { re: c, im: s }
}

/// Evaluate `sum c_k zeta_n^k` where `zeta_n = exp(2 pi i / n)`.
pub fn eval_cyclo(order: u32, coeffs: &[(u32, BigRational)], prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero(prec);
    for (k, c) in coeffs {
        let z = if *k == 0 {
            ComplexBall::from_rational(&BigRational::one(), prec)
        } else {
            root_of_unity(order, *k as i64, prec)
        };
        acc = acc.add(&z.scale(c));
    }
    acc
}

/// One Laurent term: exponent and a cyclotomic coefficient given as
/// `(order, [(k, c_k)])`.
pub type LaurentTerm = (i64, (u32, Vec<(u32, BigRational)>));

/// Evaluate `sum_j a_j tau^j` at a rational, nonzero `tau`.
pub fn eval_laurent(terms: &[LaurentTerm], tau: &BigRational, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero(prec);
    for (j, (order, coeffs)) in terms {
        let c = eval_cyclo(*order, coeffs, prec);
        let p = if *j >= 0 { tau.pow(*j as i32) } else { tau.recip().pow((-*j) as i32) };
        acc = acc.add(&c.scale(&p));
    }
    acc
}

/// Double-precision evaluation, for quick sanity checks.
pub fn eval_cyclo_f64(order: u32, coeffs: &[(u32, f64)]) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for (k, c) in coeffs {
        let t = 2.0 * std::f64::consts::PI * (*k as f64) / (order as f64);
        re += c * t.cos();
        im += c * t.sin();
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pi_digits() {
        let p = pi(DEFAULT_PREC);
        let approx = p.to_f64();
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
        // pi in [3.1415926535897932384626433832795028, ...029]
        let lo = BigRational::new(
            "31415926535897932384626433832795028".parse().unwrap(),
            BigInt::from(10u32).pow(34),
        );
        let hi = &lo + BigRational::new(BigInt::one(), BigInt::from(10u32).pow(34));
        let lo_b = RealBall::from_rational(&lo, DEFAULT_PREC);
        let hi_b = RealBall::from_rational(&hi, DEFAULT_PREC);
        assert!(p.sub(&lo_b).mid > BigInt::zero());
        assert!(hi_b.sub(&p).mid > BigInt::zero());
    }

    #[test]
    fn roots_of_unity_close() {
        for n in 1..=24u32 {
            for k in 0..n as i64 {
                let z = root_of_unity(n, k, DEFAULT_PREC);
                let mut acc = ComplexBall::from_rational(&q(1, 1), DEFAULT_PREC);
                for _ in 0..n {
                    acc = acc.mul(&z);
                }
                let diff = acc.sub(&ComplexBall::from_rational(&q(1, 1), DEFAULT_PREC));
                assert!(!diff.excludes_zero());
                assert_eq!(diff.verdict(40), NumericVerdict::Equal, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn distinct_values_are_certified() {
        // zeta_3 vs zeta_6
        let a = eval_cyclo(3, &[(1, q(1, 1))], DEFAULT_PREC);
        let b = eval_cyclo(6, &[(1, q(1, 1))], DEFAULT_PREC);
        assert_eq!(a.sub(&b).verdict(30), NumericVerdict::Distinct);
        // zeta_6^2 == zeta_3
        let c = eval_cyclo(6, &[(2, q(1, 1))], DEFAULT_PREC);
        assert_eq!(a.sub(&c).verdict(30), NumericVerdict::Equal);
    }

    #[test]
    fn laurent_eval() {
        // tau^-2 + 3 at tau = 1/2 -> 7
        let terms: Vec<LaurentTerm> =
            vec![(-2, (1, vec![(0, q(1, 1))])), (0, (1, vec![(0, q(3, 1))]))];
        let v = eval_laurent(&terms, &q(1, 2), DEFAULT_PREC);
        let d = v.sub(&ComplexBall::from_rational(&q(7, 1), DEFAULT_PREC));
        assert_eq!(d.verdict(40), NumericVerdict::Equal);
    }
}
