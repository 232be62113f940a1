//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A [`CycloNum`] lives at a declared order `N` and stores its power-basis
//! coordinates modulo the N-th cyclotomic polynomial. Values are never moved
//! to a smaller conductor automatically: binary operations lift both operands
//! to the lcm of their orders, and equality compares canonical forms there.

mod poly;
mod qpoly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use poly::{CycloPoly, RatFunc};
pub(crate) use qpoly::totient;
use qpoly::{phi, QPoly};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Default cap on cyclotomic orders.
pub const DEFAULT_MAX_ORDER: u32 = 10_000;

static MAX_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_MAX_ORDER);

/// Set the process-wide cap on cyclotomic orders.
pub fn set_max_order(n: u32) {
    MAX_ORDER.store(n.max(1), Ordering::Relaxed);
}

pub fn max_order() -> u32 {
    MAX_ORDER.load(Ordering::Relaxed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("order {from} does not divide {to}")]
    IncompatibleOrder { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {order} exceeds the configured limit {limit}")]
    OrderTooLarge { order: u32, limit: u32 },
    #[error("order must be positive")]
    ZeroOrder,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

pub(crate) fn check_order(order: u32) -> Result<(), CycloError> {
    if order == 0 {
        return Err(CycloError::ZeroOrder);
    }
    let limit = max_order();
    if order > limit {
        return Err(CycloError::OrderTooLarge { order, limit });
    }
    Ok(())
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Element of Q(zeta_N) at a fixed declared order N.
#[derive(Clone, Debug)]
pub struct CycloNum {
    order: u32,
    coeffs: BTreeMap<u32, Rational>,
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum { order: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        CycloNum { order: 1, coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(n.into(), d.into()))
    }

    /// `zeta_N^(k mod N)` at order N.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let e = k.rem_euclid(n as i64) as usize;
        let mut dense = vec![Rational::zero(); e + 1];
        dense[e] = Rational::one();
        Self::from_dense(n, dense)
    }

    /// Reduce `sum dense[k] zeta_N^k` to canonical form.
    pub fn from_dense(order: u32, dense: Vec<Rational>) -> Self {
        let p = QPoly::new(dense);
        let reduced = if p.degree().is_some_and(|d| d + 1 > totient(order)) {
            p.div_rem(&phi(order)).1
        } else {
            p
        };
        Self::from_reduced(order, reduced)
    }

    /// Build from `(k, c_k)` pairs with arbitrary `k`, reducing as needed.
    pub fn from_terms(order: u32, terms: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut dense: Vec<Rational> = Vec::new();
        for (k, c) in terms {
            let k = (k % order) as usize;
            if dense.len() <= k {
                dense.resize(k + 1, Rational::zero());
            }
            dense[k] += c;
        }
        Self::from_dense(order, dense)
    }

    fn from_reduced(order: u32, p: QPoly) -> Self {
        let coeffs = p
            .0
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u32, c))
            .collect();
        CycloNum { order, coeffs }
    }

    fn dense(&self) -> QPoly {
        let len = self.coeffs.keys().next_back().map_or(0, |&k| k as usize + 1);
        let mut v = vec![Rational::zero(); len];
        for (&k, c) in &self.coeffs {
            v[k as usize] = c.clone();
        }
        QPoly::new(v)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coordinates, zero entries absent.
    pub fn coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// Same value represented at order `m`; `order` must divide `m`.
    pub fn lift(&self, m: u32) -> Result<CycloNum, CycloError> {
        if m == 0 {
            return Err(CycloError::ZeroOrder);
        }
        if !m.is_multiple_of(self.order) {
            return Err(CycloError::IncompatibleOrder { from: self.order, to: m });
        }
        check_order(m)?;
        Ok(self.lift_unchecked(m))
    }

    fn lift_unchecked(&self, m: u32) -> CycloNum {
        if m == self.order {
            return self.clone();
        }
        let step = m / self.order;
        let terms = self.coeffs.iter().map(|(&k, c)| (k * step, c.clone()));
        CycloNum::from_terms(m, terms)
    }

    fn common(a: &CycloNum, b: &CycloNum) -> Result<(u32, CycloNum, CycloNum), CycloError> {
        let m = lcm(a.order, b.order);
        if m != a.order && m != b.order {
            check_order(m)?;
        }
        Ok((m, a.lift_unchecked(m), b.lift_unchecked(m)))
    }

    pub fn checked_add(&self, o: &CycloNum) -> Result<CycloNum, CycloError> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let (m, a, b) = Self::common(self, o)?;
        let mut coeffs = a.coeffs;
        for (k, c) in b.coeffs {
            let e = coeffs.entry(k).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                coeffs.remove(&k);
            }
        }
        Ok(CycloNum { order: m, coeffs })
    }

    pub fn checked_mul(&self, o: &CycloNum) -> Result<CycloNum, CycloError> {
        if self.is_zero() || o.is_zero() {
            return Ok(CycloNum::zero());
        }
        if let Some(r) = self.as_rational() {
            return Ok(o.scale(&r));
        }
        if let Some(r) = o.as_rational() {
            return Ok(self.scale(&r));
        }
        let (m, a, b) = Self::common(self, o)?;
        Ok(CycloNum::from_dense(m, a.dense().mul(&b.dense()).0))
    }

    pub fn scale(&self, r: &Rational) -> CycloNum {
        if r.is_zero() {
            return CycloNum::zero();
        }
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, c * r)).collect();
        CycloNum { order: self.order, coeffs }
    }

    pub fn inv(&self) -> Result<CycloNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycloNum { order: self.order, ..CycloNum::from_rational(r.recip()) });
        }
        let s = self
            .dense()
            .inverse_mod(&phi(self.order))
            .expect("nonzero element of a field is invertible");
        Ok(CycloNum::from_reduced(self.order, s))
    }

    pub fn checked_div(&self, o: &CycloNum) -> Result<CycloNum, CycloError> {
        self.checked_mul(&o.inv()?)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<CycloNum, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycloNum::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Lexicographic key of the canonical form at order `m` (a multiple of
    /// the element's order): dense coordinates `0..phi(m)`.
    pub fn key_at(&self, m: u32) -> Vec<Rational> {
        let lifted = self.lift_unchecked(m);
        let mut v = vec![Rational::zero(); totient(m)];
        for (k, c) in lifted.coeffs {
            v[k as usize] = c;
        }
        v
    }

    /// Roots of unity in Q(zeta_N) are `±zeta_N^k`, so their orders divide
    /// lcm(2, N).
    pub fn is_root_of_unity(&self) -> bool {
        let m = lcm(2, self.order) as i64;
        !self.is_zero() && self.pow(m).is_ok_and(|p| p.is_one())
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = lcm(self.order, other.order);
        self.lift_unchecked(m).coeffs == other.lift_unchecked(m).coeffs
    }
}

impl Eq for CycloNum {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("cyclotomic arithmetic: {e}"))
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
    };
}

impl CycloNum {
    pub fn checked_sub(&self, o: &CycloNum) -> Result<CycloNum, CycloError> {
        self.checked_add(&-o)
    }
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, -c)).collect();
        CycloNum { order: self.order, coeffs }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl From<i64> for CycloNum {
    fn from(n: i64) -> Self {
        CycloNum::from_int(n)
    }
}

impl From<Rational> for CycloNum {
    fn from(r: Rational) -> Self {
        CycloNum::from_rational(r)
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational, CycloError> {
    let bad = || CycloError::BadRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = match k {
                0 => None,
                1 => Some(format!("z{}", self.order)),
                _ => Some(format!("z{}^{}", self.order, k)),
            };
            match unit {
                None => write!(f, "{a}")?,
                Some(u) if a.is_one() => write!(f, "{u}")?,
                Some(u) => write!(f, "{a}*{u}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u32,
    coeffs: BTreeMap<String, String>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.to_string(), fmt_rational(c))).collect();
        CycloRepr { order: self.order, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CycloRepr::deserialize(d)?;
        check_order(repr.order).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(repr.coeffs.len());
        for (k, c) in &repr.coeffs {
            let k: u32 =
                k.parse().map_err(|_| D::Error::custom(format!("bad exponent key {k:?}")))?;
            terms.push((k, parse_rational(c).map_err(D::Error::custom)?));
        }
        Ok(CycloNum::from_terms(repr.order, terms))
    }
}

/// `Phi_N` as a polynomial with rational coefficients.
pub fn cyclotomic_polynomial(n: u32) -> CycloPoly {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    CycloPoly::new(phi(n).0.iter().cloned().map(CycloNum::from_rational).collect())
}
