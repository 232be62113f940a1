//! Dense univariate polynomials over Q, used for reduction modulo cyclotomic
//! polynomials and for inversion in Q(zeta_N).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::Rational;

/// Coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly(pub(crate) Vec<Rational>);

impl QPoly {
    pub(crate) fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub(crate) fn from_i64(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub(crate) fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub(crate) fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub(crate) fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in o.0.iter().enumerate() {
            out[i] -= b;
        }
        QPoly::new(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub(crate) fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.0[dd].recip();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (QPoly(Vec::new()), QPoly::new(rem));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let f = &rem[i] * &lead_inv;
            for (j, c) in d.0.iter().enumerate() {
                rem[i - dd + j] -= &f * c;
            }
            quot[i - dd] = f;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// `s` with `s * self = 1 mod m`, for `self` coprime to `m`.
    pub(crate) fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        // extended Euclid on (m, self), tracking the coefficient of `self`
        let mut r0 = m.clone();
        let mut r1 = self.div_rem(m).1;
        let mut t0 = QPoly(Vec::new());
        let mut t1 = QPoly::from_i64(&[1]);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.0[0].recip();
        let scaled = QPoly::new(t0.0.into_iter().map(|x| x * &c).collect());
        Some(scaled.div_rem(m).1)
    }
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<QPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<QPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, `(x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub(crate) fn phi(n: u32) -> Arc<QPoly> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let mut c = vec![Rational::zero(); n as usize + 1];
    c[0] = -Rational::one();
    c[n as usize] = Rational::one();
    let mut acc = QPoly::new(c);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = acc.div_rem(&phi(d));
            debug_assert!(r.is_zero());
            acc = q;
        }
    }
    let acc = Arc::new(acc);
    phi_cache().lock().expect("cache poisoned").insert(n, Arc::clone(&acc));
    acc
}

/// Euler's totient, read off as the degree of Phi_n.
pub(crate) fn totient(n: u32) -> usize {
    phi(n).degree().unwrap_or(0)
}
