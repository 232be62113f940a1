//! Finite Laurent polynomials in one local variable `τ` over Q(zeta), and
//! bivariate rational functions used along blow-up charts.

mod birational;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclotomic::{CycloError, CycloNum, Rational};

pub use birational::{
    classify_at_point, classify_generic_on_u0, AxisPoint, BiPoly, BiRational, ChartKind, ChartMap,
    NormalFormTag, Var,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError {
    #[error("exponent multiplier must be positive, got {0}")]
    InvalidExponent(i64),
    #[error("{0} is not a root of unity at its declared order")]
    NotRootOfUnity(String),
    #[error("classification failure at {point}: {expr}")]
    ClassificationFailure { point: String, expr: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// `Σ c_j τ^j` with finitely many nonzero `c_j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, CycloNum>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: CycloNum, e: i64) -> Self {
        Self::from_terms([(e, c)])
    }

    /// `τ^e`.
    pub fn tau_pow(e: i64) -> Self {
        Self::monomial(CycloNum::one(), e)
    }

    pub fn constant(c: CycloNum) -> Self {
        Self::monomial(c, 0)
    }

    /// Collect terms, summing repeated exponents and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, CycloNum)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: &CycloNum) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, CycloNum> {
        &self.terms
    }

    pub fn coeff(&self, e: i64) -> CycloNum {
        self.terms.get(&e).cloned().unwrap_or_else(CycloNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Order of the pole at `τ = 0`; zero when there are no negative exponents.
    pub fn pole_order(&self) -> u32 {
        self.min_exp().filter(|&e| e < 0).map_or(0, |e| (-e) as u32)
    }

    /// True when nonzero with only negative exponents.
    pub fn is_purely_polar(&self) -> bool {
        self.max_exp().is_some_and(|e| e < 0)
    }

    /// Lcm of the coefficient orders.
    pub fn order(&self) -> u32 {
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.order()))
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, a)| (e, a * c)))
    }

    /// Each `a τ^j` becomes `a ξ^j τ^(j k)`.
    pub fn subst_root_power(&self, xi: &CycloNum, k: i64) -> Result<Self, LaurentError> {
        if k <= 0 {
            return Err(LaurentError::InvalidExponent(k));
        }
        if !xi.is_root_of_unity() {
            return Err(LaurentError::NotRootOfUnity(xi.to_string()));
        }
        let mut out = LaurentPoly::zero();
        for (&e, a) in &self.terms {
            out.add_term(e * k, &(a * &xi.pow(e)?));
        }
        Ok(out)
    }

    pub fn polar_part(&self) -> Self {
        Self { terms: self.terms.range(..0).map(|(&e, c)| (e, c.clone())).collect() }
    }

    pub fn const_term(&self) -> CycloNum {
        self.coeff(0)
    }

    /// Terms with strictly positive exponent.
    pub fn positive_part(&self) -> Self {
        Self { terms: self.terms.range(1..).map(|(&e, c)| (e, c.clone())).collect() }
    }

    /// Gcd of `|extra|` and the absolute values of all support exponents.
    pub fn support_gcd(&self, extra: i64) -> u64 {
        self.terms.keys().fold(extra.unsigned_abs(), |g, &e| g.gcd(&e.unsigned_abs()))
    }

    /// Divide every exponent by `d`; `None` unless `d` divides all of them.
    pub fn compress_exponents(&self, d: i64) -> Option<Self> {
        if d <= 0 || self.terms.keys().any(|e| e % d != 0) {
            return None;
        }
        Some(Self { terms: self.terms.iter().map(|(&e, c)| (e / d, c.clone())).collect() })
    }

    /// Sort key: coefficients from the lowest exponent upward, each as dense
    /// coordinates at the common order `m`.
    pub fn lex_key(&self, m: u32) -> Vec<(i64, Vec<Rational>)> {
        self.terms.iter().map(|(&e, c)| (e, c.key_at(m))).collect()
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, a) in &self.terms {
            for (&e2, b) in &rhs.terms {
                out.add_term(e1 + e2, &(a * b));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| {
                let mono = match e {
                    0 => String::new(),
                    1 => "τ".to_string(),
                    _ => format!("τ^{e}"),
                };
                let coeff = match c.as_rational() {
                    Some(r) if mono.is_empty() => r.to_string(),
                    Some(r) if r == Rational::from_integer(1.into()) => String::new(),
                    Some(r) if r == Rational::from_integer((-1).into()) => "-".to_string(),
                    Some(r) => format!("{r}*"),
                    None if mono.is_empty() => format!("({c})"),
                    None => format!("({c})*"),
                };
                format!("{coeff}{mono}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    terms: BTreeMap<String, CycloNum>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentRepr { terms: self.terms.iter().map(|(e, c)| (e.to_string(), c.clone())).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = LaurentRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (k, c) in repr.terms {
            let e: i64 =
                k.trim().parse().map_err(|_| D::Error::custom(format!("bad exponent key {k:?}")))?;
            terms.push((e, c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: i64) -> LaurentPoly {
        LaurentPoly::tau_pow(e)
    }

    fn z(n: u32, k: i64) -> CycloNum {
        CycloNum::root_of_unity(n, k)
    }

    #[test]
    fn arithmetic() {
        assert!((&t(-1) + &(-&t(-1))).is_zero());
        assert_eq!(&t(-1) * &t(-2), t(-3));
        let a = &t(0) + &t(1);
        let b = &t(0) - &t(1);
        assert_eq!(&a * &b, &t(0) - &t(2));
    }

    #[test]
    fn substitution_examples() {
        let minus_one = CycloNum::from_int(-1);
        assert_eq!(t(-3).subst_root_power(&minus_one, 1).unwrap(), -&t(-3));
        assert_eq!(t(-1).subst_root_power(&CycloNum::one(), 2).unwrap(), t(-2));
        let f = &t(-2) + &t(-1);
        let g = f.subst_root_power(&z(4, 1), 3).unwrap();
        let expected = &(-&t(-6)) + &LaurentPoly::monomial(z(4, 3), -3);
        assert_eq!(g, expected);
        assert_eq!(t(-1).subst_root_power(&z(4, 1), 0), Err(LaurentError::InvalidExponent(0)));
        assert!(matches!(
            t(-1).subst_root_power(&CycloNum::from_int(2), 1),
            Err(LaurentError::NotRootOfUnity(_))
        ));
    }

    #[test]
    fn polar_and_constant() {
        let f = &(&t(-2) + &LaurentPoly::constant(CycloNum::from_int(3))) + &t(1);
        assert_eq!(f.polar_part(), t(-2));
        assert_eq!(f.const_term(), CycloNum::from_int(3));
        assert_eq!(f.positive_part(), t(1));
        assert!(LaurentPoly::zero().polar_part().is_zero());
        assert!(LaurentPoly::zero().const_term().is_zero());
        let g = LaurentPoly::monomial(CycloNum::from_int(2), -1);
        assert_eq!(g.polar_part(), g);
        assert!(g.const_term().is_zero());
    }

    #[test]
    fn support_gcd_examples() {
        assert_eq!((&t(-3) + &t(-1)).support_gcd(2), 1);
        assert_eq!(t(-4).support_gcd(2), 2);
        assert_eq!(LaurentPoly::zero().support_gcd(5), 5);
    }

    #[test]
    fn json_round_trip() {
        let f = &LaurentPoly::monomial(z(3, 1), -2) + &t(0);
        let s = serde_json::to_string(&f).unwrap();
        let g: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(s.contains("\"-2\""));
    }

    #[test]
    fn display() {
        let f = &(&t(-2) - &t(-1)) + &LaurentPoly::monomial(CycloNum::from_frac(1, 2), 0);
        assert_eq!(f.to_string(), "τ^-2 + -τ^-1 + 1/2");
    }
}
