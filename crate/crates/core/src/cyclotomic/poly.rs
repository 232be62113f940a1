//! Univariate polynomials and reduced polynomial ratios over Q(zeta).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CycloError, CycloNum, Rational};

/// Polynomial with [`CycloNum`] coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CycloPoly {
    coeffs: Vec<CycloNum>,
}

impl<'de> Deserialize<'de> for CycloPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(CycloPoly::new(Vec::<CycloNum>::deserialize(d)?))
    }
}

impl CycloPoly {
    pub fn new(mut coeffs: Vec<CycloNum>) -> Self {
        while coeffs.last().is_some_and(CycloNum::is_zero) {
            coeffs.pop();
        }
        CycloPoly { coeffs }
    }

    pub fn zero() -> Self {
        CycloPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycloNum::one())
    }

    pub fn constant(c: CycloNum) -> Self {
        Self::new(vec![c])
    }

    /// Monic linear polynomial `x - root`.
    pub fn linear(root: &CycloNum) -> Self {
        Self::new(vec![-root, CycloNum::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| CycloNum::from_int(v)).collect())
    }

    /// `x^k · p`.
    pub fn monomial_shift(p: &CycloPoly, k: usize) -> CycloPoly {
        if p.is_zero() {
            return p.clone();
        }
        let mut coeffs = vec![CycloNum::zero(); k];
        coeffs.extend(p.coeffs.iter().cloned());
        CycloPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycloNum {
        self.coeffs.get(k).cloned().unwrap_or_else(CycloNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycloNum> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(CycloNum::is_one)
    }

    /// Lcm of all coefficient orders (1 for the zero polynomial).
    pub fn order(&self) -> u32 {
        self.coeffs.iter().fold(1, |acc, c| super::lcm(acc, c.order()))
    }

    pub fn add(&self, o: &CycloPoly) -> CycloPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &CycloPoly) -> CycloPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn neg(&self) -> CycloPoly {
        CycloPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &CycloPoly) -> CycloPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![CycloNum::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &CycloNum) -> CycloPoly {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> CycloPoly {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &CycloPoly) -> Result<(CycloPoly, CycloPoly), CycloError> {
        let dd = d.degree().ok_or(CycloError::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), Self::new(rem)));
        }
        let mut quot = vec![CycloNum::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let f = &rem[i] * &lead_inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = &rem[i - dd + j] - &(&f * c);
            }
            quot[i - dd] = f;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Scale to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> CycloPoly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.inv().expect("leading coefficient is nonzero")),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &CycloPoly) -> CycloPoly {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            // monic remainders keep coefficient growth in check
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            if r.degree() == Some(0) {
                return Self::one();
            }
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &CycloNum) -> CycloNum {
        self.coeffs.iter().rev().fold(CycloNum::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Multiplicity of `root` as a root.
    pub fn root_multiplicity(&self, root: &CycloNum) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear(root);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("linear divisor");
            if !r.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// Render with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let (neg, body) = match c.as_rational() {
                Some(r) => {
                    let neg = r < Rational::from_integer(0.into());
                    let a = if neg { -r } else { r };
                    let s = if a.is_integer() { a.numer().to_string() } else { a.to_string() };
                    (neg, s)
                }
                None => (false, format!("({c})")),
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            parts.push(if parts.is_empty() {
                if neg { format!("-{term}") } else { term }
            } else {
                format!("{} {term}", if neg { "-" } else { "+" })
            });
        }
        parts.join(" ")
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

/// Reduced ratio `num / den` of polynomials, `den` monic and coprime to `num`.
/// Zeta functions of monodromy are stored in this form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunc {
    num: CycloPoly,
    den: CycloPoly,
}

impl RatFunc {
    pub fn new(num: CycloPoly, den: CycloPoly) -> Result<Self, CycloError> {
        if den.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: CycloPoly::one() });
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let l = den.leading().expect("nonzero").inv()?;
        Ok(RatFunc { num: num.scale(&l), den: den.scale(&l) })
    }

    pub fn from_poly(p: CycloPoly) -> Self {
        RatFunc { num: p, den: CycloPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(CycloPoly::one())
    }

    pub fn num(&self) -> &CycloPoly {
        &self.num
    }

    pub fn den(&self) -> &CycloPoly {
        &self.den
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<RatFunc, CycloError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents need a nonzero numerator.
    pub fn pow(&self, e: i64) -> Result<RatFunc, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) })
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
