//! Bivariate polynomials and monomial-normalized rational functions in
//! chart coordinates `(u, v)`, with the two affine blow-up charts and local
//! normal-form classification at points on the coordinate axes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LaurentError;
use crate::cyclotomic::{CycloNum, CycloPoly};

/// Polynomial in `u, v`; keys are `(deg_u, deg_v)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), CycloNum>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CycloNum::one())
    }

    pub fn constant(c: CycloNum) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: CycloNum, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, &c);
        p
    }

    pub fn u() -> Self {
        Self::monomial(CycloNum::one(), 1, 0)
    }

    pub fn v() -> Self {
        Self::monomial(CycloNum::one(), 0, 1)
    }

    /// Embed a univariate polynomial in `u`.
    pub fn from_poly_in_u(p: &CycloPoly) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(i as u32, 0, c);
        }
        out
    }

    fn add_term(&mut self, i: u32, j: u32, c: &CycloNum) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&(i, j)) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), CycloNum> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> CycloNum {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(CycloNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.scale(&CycloNum::from_int(-1)))
    }

    pub fn scale(&self, c: &CycloNum) -> BiPoly {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            out.add_term(i, j, &(a * c));
        }
        out
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = Self::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &o.terms {
                out.add_term(i1 + i2, j1 + j2, &(a * b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `P(f_u(u, v), f_v(u, v))`.
    pub fn subst(&self, fu: &BiPoly, fv: &BiPoly) -> BiPoly {
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let powers = |f: &BiPoly, n: u32| {
            let mut v = vec![BiPoly::one()];
            for k in 1..=n as usize {
                let next = v[k - 1].mul(f);
                v.push(next);
            }
            v
        };
        let pu = powers(fu, max_i);
        let pv = powers(fv, max_j);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let t = pu[i as usize].mul(&pv[j as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    /// Largest `(a, b)` with `u^a v^b` dividing the polynomial.
    fn monomial_content(&self) -> (u32, u32) {
        let a = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (a, b)
    }

    fn div_monomial(&self, a: u32, b: u32) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i - a, j - b), c.clone())).collect() }
    }

    /// `P(0, v)` as a polynomial in `v`.
    pub fn restrict_u0(&self) -> CycloPoly {
        let deg = self.terms.keys().filter(|k| k.0 == 0).map(|k| k.1).max();
        let Some(deg) = deg else { return CycloPoly::zero() };
        CycloPoly::new((0..=deg).map(|j| self.coeff(0, j)).collect())
    }

    pub fn eval(&self, u: &CycloNum, v: &CycloNum) -> CycloNum {
        self.terms.iter().fold(CycloNum::zero(), |acc, (&(i, j), c)| {
            let m = &(c * &u.pow(i as i64).expect("nonnegative power"))
                * &v.pow(j as i64).expect("nonnegative power");
            &acc + &m
        })
    }

    pub fn display_with(&self, x: &str, y: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let mut mono = Vec::new();
                match i {
                    0 => {}
                    1 => mono.push(x.to_string()),
                    _ => mono.push(format!("{x}^{i}")),
                }
                match j {
                    0 => {}
                    1 => mono.push(y.to_string()),
                    _ => mono.push(format!("{y}^{j}")),
                }
                if mono.is_empty() {
                    format!("({c})")
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("u", "v"))
    }
}

#[derive(Serialize, Deserialize)]
struct BiPolyRepr {
    terms: Vec<(u32, u32, CycloNum)>,
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BiPolyRepr { terms: self.terms.iter().map(|(&(i, j), c)| (i, j, c.clone())).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BiPolyRepr::deserialize(d)?;
        let mut p = BiPoly::zero();
        for (i, j, c) in repr.terms {
            p.add_term(i, j, &c);
        }
        Ok(p)
    }
}

/// `u^a v^b · num / den` with `num`, `den` not divisible by `u` or `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiRational {
    pub u_exp: i64,
    pub v_exp: i64,
    pub num: BiPoly,
    pub den: BiPoly,
}

impl BiRational {
    /// `num / den` with all common monomial factors cancelled.
    pub fn from_parts(num: BiPoly, den: BiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return BiRational { u_exp: 0, v_exp: 0, num, den: BiPoly::one() };
        }
        let (na, nb) = num.monomial_content();
        let (da, db) = den.monomial_content();
        BiRational {
            u_exp: na as i64 - da as i64,
            v_exp: nb as i64 - db as i64,
            num: num.div_monomial(na, nb),
            den: den.div_monomial(da, db),
        }
    }

    pub fn from_poly(p: BiPoly) -> Self {
        Self::from_parts(p, BiPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &BiRational) -> BiRational {
        let mut r = Self::from_parts(self.num.mul(&o.num), self.den.mul(&o.den));
        if !r.is_zero() {
            r.u_exp += self.u_exp + o.u_exp;
            r.v_exp += self.v_exp + o.v_exp;
        }
        r
    }

    /// Pull back along `u ↦ f_u`, `v ↦ f_v`.
    pub fn subst(&self, fu: &BiPoly, fv: &BiPoly) -> BiRational {
        let mut num = self.num.subst(fu, fv);
        let mut den = self.den.subst(fu, fv);
        let apply = |p: &mut BiPoly, f: &BiPoly, e: i64| {
            if e != 0 {
                *p = p.mul(&f.pow(e.unsigned_abs() as u32));
            }
        };
        if self.u_exp >= 0 {
            apply(&mut num, fu, self.u_exp);
        } else {
            apply(&mut den, fu, self.u_exp);
        }
        if self.v_exp >= 0 {
            apply(&mut num, fv, self.v_exp);
        } else {
            apply(&mut den, fv, self.v_exp);
        }
        Self::from_parts(num, den)
    }

    pub fn compose(&self, map: &ChartMap) -> BiRational {
        let (fu, fv) = map.polys();
        self.subst(&fu, &fv)
    }

    /// `g(cu + u, cv + v)`.
    pub fn translate(&self, cu: &CycloNum, cv: &CycloNum) -> BiRational {
        let fu = BiPoly::constant(cu.clone()).add(&BiPoly::u());
        let fv = BiPoly::constant(cv.clone()).add(&BiPoly::v());
        self.subst(&fu, &fv)
    }

    /// Value at a point where both `u` and `v` are nonzero or carry
    /// nonnegative exponents; `None` at a pole.
    pub fn eval(&self, u: &CycloNum, v: &CycloNum) -> Option<CycloNum> {
        let d = self.den.eval(u, v);
        if d.is_zero() {
            return None;
        }
        let mu = u.pow(self.u_exp).ok()?;
        let mv = v.pow(self.v_exp).ok()?;
        Some(&(&mu * &mv) * &self.num.eval(u, v).checked_div(&d).ok()?)
    }

    /// Exponents `(a, b)` with `g = u^a v^b · unit` near the origin, if the
    /// numerator and denominator are both units there.
    pub fn monomial_at_origin(&self) -> Option<(i64, i64)> {
        let n0 = self.num.coeff(0, 0);
        let d0 = self.den.coeff(0, 0);
        (!n0.is_zero() && !d0.is_zero()).then_some((self.u_exp, self.v_exp))
    }

    /// Restriction to `u = 0` when `g` has no zero or pole along it:
    /// `v^b · num(0, v)`, `den(0, v)`.
    pub fn restrict_u0(&self) -> Option<(i64, CycloPoly, CycloPoly)> {
        (self.u_exp == 0).then(|| (self.v_exp, self.num.restrict_u0(), self.den.restrict_u0()))
    }
}

impl fmt::Display for BiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = match (self.u_exp, self.v_exp) {
            (0, 0) => String::new(),
            (a, 0) => format!("u^{a} * "),
            (0, b) => format!("v^{b} * "),
            (a, b) => format!("u^{a} * v^{b} * "),
        };
        if self.den == BiPoly::one() {
            write!(f, "{mono}[{}]", self.num)
        } else {
            write!(f, "{mono}[{}] / [{}]", self.num, self.den)
        }
    }
}

/// The two affine charts of the blow-up of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// `(u, v) ↦ (u, u v)`; the exceptional curve is `u = 0`.
    A,
    /// `(u, v) ↦ (u v, v)`; the exceptional curve is `v = 0`.
    B,
}

/// Blow-up chart at `center`, expressed in the previous chart's coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartMap {
    pub kind: ChartKind,
    pub center: (CycloNum, CycloNum),
}

impl ChartMap {
    pub fn new(kind: ChartKind, cu: CycloNum, cv: CycloNum) -> Self {
        ChartMap { kind, center: (cu, cv) }
    }

    pub fn at_origin(kind: ChartKind) -> Self {
        Self::new(kind, CycloNum::zero(), CycloNum::zero())
    }

    /// Old coordinates as polynomials in the new ones.
    pub fn polys(&self) -> (BiPoly, BiPoly) {
        let uv = BiPoly::u().mul(&BiPoly::v());
        let (a, b) = match self.kind {
            ChartKind::A => (BiPoly::u(), uv),
            ChartKind::B => (uv, BiPoly::v()),
        };
        (
            BiPoly::constant(self.center.0.clone()).add(&a),
            BiPoly::constant(self.center.1.clone()).add(&b),
        )
    }

    /// Image of a point given in the new chart.
    pub fn apply(&self, u: &CycloNum, v: &CycloNum) -> (CycloNum, CycloNum) {
        let (a, b) = self.polys();
        (a.eval(u, v), b.eval(u, v))
    }
}

/// A chart coordinate function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    U,
    V,
}

/// Point on a coordinate axis of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisPoint {
    /// `(0, v)`.
    OnU0 { v: CycloNum },
    /// `(u, 0)`.
    OnV0 { u: CycloNum },
}

impl AxisPoint {
    pub fn origin() -> Self {
        AxisPoint::OnU0 { v: CycloNum::zero() }
    }

    pub fn coords(&self) -> (CycloNum, CycloNum) {
        match self {
            AxisPoint::OnU0 { v } => (CycloNum::zero(), v.clone()),
            AxisPoint::OnV0 { u } => (u.clone(), CycloNum::zero()),
        }
    }
}

impl fmt::Display for AxisPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.coords();
        write!(f, "(u, v) = ({u}, {v})")
    }
}

/// Local shape of a function at a point, in coordinates centred there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum NormalFormTag {
    /// `a + (local coordinate)`, the coordinate being transverse to `u = 0`.
    HolomorphicUnitPlusCoordinate { a: CycloNum },
    /// Unit times `1 / var^order`.
    MonomialPoleOneVar { var: Var, order: u32 },
    /// Unit times `1 / (u^u_order v^v_order)`.
    MonomialPoleTwoVar { u_order: u32, v_order: u32 },
    NotNormalForm { point: String, reason: String },
}

/// Classify `g` at the axis point `p`.
///
/// Fails when the denominator does not reduce to a monomial times a unit.
pub fn classify_at_point(g: &BiRational, p: &AxisPoint) -> Result<NormalFormTag, LaurentError> {
    let (cu, cv) = p.coords();
    let h = g.translate(&cu, &cv);
    let d0 = h.den.coeff(0, 0);
    if d0.is_zero() {
        return Err(LaurentError::ClassificationFailure {
            point: p.to_string(),
            expr: h.to_string(),
        });
    }
    let n0 = h.num.coeff(0, 0);
    let not_normal = |reason: &str| NormalFormTag::NotNormalForm {
        point: p.to_string(),
        reason: reason.to_string(),
    };
    let (a, b) = (h.u_exp, h.v_exp);
    if a >= 0 && b >= 0 {
        // holomorphic; case (c) needs a nonzero derivative in v
        let value = if a == 0 && b == 0 { n0.checked_div(&d0)? } else { CycloNum::zero() };
        let dv = match (a, b) {
            (0, 0) => {
                let n1 = h.num.coeff(0, 1);
                let d1 = h.den.coeff(0, 1);
                (&(&n1 * &d0) - &(&n0 * &d1)).checked_div(&(&d0 * &d0))?
            }
            (0, 1) => n0.checked_div(&d0)?,
            _ => CycloNum::zero(),
        };
        return Ok(if dv.is_zero() {
            not_normal("holomorphic without a transverse linear term")
        } else {
            NormalFormTag::HolomorphicUnitPlusCoordinate { a: value }
        });
    }
    if n0.is_zero() {
        return Ok(not_normal("pole meets the zero locus"));
    }
    Ok(match (a, b) {
        (a, b) if a < 0 && b < 0 => {
            NormalFormTag::MonomialPoleTwoVar { u_order: (-a) as u32, v_order: (-b) as u32 }
        }
        (a, 0) if a < 0 => NormalFormTag::MonomialPoleOneVar { var: Var::U, order: (-a) as u32 },
        (0, b) if b < 0 => NormalFormTag::MonomialPoleOneVar { var: Var::V, order: (-b) as u32 },
        _ => not_normal("pole along one axis and zero along the other"),
    })
}

/// Shape of `g` at a general point of the axis `u = 0`, when it has a pole
/// along the axis. Holomorphic restrictions depend on the point and are
/// reported as not being in normal form here; classify them pointwise.
pub fn classify_generic_on_u0(g: &BiRational) -> NormalFormTag {
    let point = "generic point of u = 0".to_string();
    match g.u_exp {
        a if a < 0 => NormalFormTag::MonomialPoleOneVar { var: Var::U, order: (-a) as u32 },
        0 => NormalFormTag::NotNormalForm { point, reason: "holomorphic along the axis".into() },
        _ => NormalFormTag::NotNormalForm { point, reason: "vanishes along the axis".into() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> CycloNum {
        CycloNum::from_int(n)
    }

    #[test]
    fn pole_in_v() {
        let g = BiRational::from_parts(BiPoly::one(), BiPoly::v());
        assert_eq!(
            classify_at_point(&g, &AxisPoint::origin()).unwrap(),
            NormalFormTag::MonomialPoleOneVar { var: Var::V, order: 1 }
        );
    }

    #[test]
    fn constant_plus_coordinate() {
        // (3 + v)(1 + u)
        let num = BiPoly::constant(c(3)).add(&BiPoly::v()).mul(&BiPoly::one().add(&BiPoly::u()));
        let g = BiRational::from_poly(num);
        assert_eq!(
            classify_at_point(&g, &AxisPoint::origin()).unwrap(),
            NormalFormTag::HolomorphicUnitPlusCoordinate { a: c(3) }
        );
    }

    /// `(x^2 - y(1 + x)) / (x^2 y)` in the chart `x = u, y = u v`.
    fn sample() -> BiRational {
        let x = BiPoly::u();
        let y = BiPoly::v();
        let num = x.pow(2).sub(&y.mul(&BiPoly::one().add(&x)));
        let den = x.pow(2).mul(&y);
        BiRational::from_parts(num, den).compose(&ChartMap::at_origin(ChartKind::A))
    }

    #[test]
    fn chart_a_substitution() {
        let g = sample();
        // (u - v - u v) / (u^2 v)
        assert_eq!((g.u_exp, g.v_exp), (-2, -1));
        let expected = BiPoly::u().sub(&BiPoly::v()).sub(&BiPoly::u().mul(&BiPoly::v()));
        assert_eq!(g.num, expected);
        assert_eq!(g.den, BiPoly::one());
    }

    #[test]
    fn generic_exceptional_point_is_one_variable_pole() {
        let g = sample();
        let want = NormalFormTag::MonomialPoleOneVar { var: Var::U, order: 2 };
        assert_eq!(classify_generic_on_u0(&g), want);
        assert_eq!(classify_at_point(&g, &AxisPoint::OnU0 { v: c(5) }).unwrap(), want);
        // the origin of this chart is the next center
        assert!(matches!(
            classify_at_point(&g, &AxisPoint::origin()).unwrap(),
            NormalFormTag::NotNormalForm { .. }
        ));
    }

    #[test]
    fn crossing_with_strict_transform_of_x_axis_is_two_variable_pole() {
        let x = BiPoly::u();
        let y = BiPoly::v();
        let num = x.pow(2).sub(&y.mul(&BiPoly::one().add(&x)));
        let den = x.pow(2).mul(&y);
        let g = BiRational::from_parts(num, den).compose(&ChartMap::at_origin(ChartKind::B));
        assert_eq!(
            classify_at_point(&g, &AxisPoint::origin()).unwrap(),
            NormalFormTag::MonomialPoleTwoVar { u_order: 2, v_order: 2 }
        );
    }

    #[test]
    fn non_monomial_denominator_fails() {
        let den = BiPoly::u().add(&BiPoly::v());
        let g = BiRational::from_parts(BiPoly::one(), den);
        assert!(matches!(
            classify_at_point(&g, &AxisPoint::origin()),
            Err(LaurentError::ClassificationFailure { .. })
        ));
    }

    #[test]
    fn compose_preserves_values() {
        let g = sample();
        let map = ChartMap::new(ChartKind::B, c(0), CycloNum::from_frac(1, 3));
        let h = g.compose(&map);
        for (u, v) in [(2, 3), (-1, 5), (7, -2)] {
            let (u, v) = (c(u), c(v));
            let (ou, ov) = map.apply(&u, &v);
            assert_eq!(h.eval(&u, &v), g.eval(&ou, &ov));
        }
    }
}
