//! Blow-up resolution of `g = 1/y - α(x)` near the origin, used as an
//! independent check of the exponential-factor grouping.
//!
//! Writing `α(x) = β(x)/x^q`, the function is `g = (x^q - yβ(x))/(x^q y)`. The
//! chain blows up `2q` points, each the intersection of the newest exceptional
//! curve with the strict transform of the numerator curve. All centers sit in
//! the `A` chart `(u, v) ↦ (u, uv)` of the previous step, so the exceptional
//! curve `E_k` is `u = 0` in chart `A_k`; its remaining point lies at the origin
//! of the `B` chart. The last curve `E_{2q}` carries `g = a + (coordinate)`.

mod euler;
mod strict;

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycloError, CycloNum, CycloPoly};
use crate::decomposition::DecompositionError;
use crate::laurent::{
    classify_at_point, classify_generic_on_u0, AxisPoint, BiPoly, BiRational, ChartKind, ChartMap,
    LaurentError, LaurentPoly, NormalFormTag, Var,
};

pub use euler::{chi_psi, local_chi, zeta_psi};
pub use strict::{
    plane_branches, strict_transform, verify_corollary, verify_corollary_with, CorollaryReport,
    StrictTransformResult,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResolutionError {
    #[error("alpha must be nonzero with only negative exponents")]
    NotPolar,
    #[error("structural failure at {at}: {reason}; expression {expr}")]
    Structural { at: String, reason: String, expr: String },
    #[error("branch {label:?}: delta truncation {truncation} is too short, need at least {needed}")]
    Truncation { label: String, truncation: u32, needed: u32 },
    #[error("branch {label:?} has p = {p}; unramify it first")]
    Ramified { label: String, p: u32 },
    #[error("zeta assembly needs distinct intersection points on the last exceptional curve")]
    StarRequired,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

/// The local cases of the resolution lemma, in coordinates where the
/// relevant curves are coordinate axes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LemmaCase {
    /// `π₁ = u^m`, `g ∼ 1/u^k`.
    SmoothPole { m: u32, k: u32 },
    /// `π₁ = u^m v^n`, `g ∼ 1/(u^k v^l)`.
    CrossingPole { m: u32, n: u32, k: u32, l: u32 },
    /// The point `P`: `π₁ = u v^n`, `g ∼ 1/v`, with `u = 0` the last curve.
    PPoint { n: u32 },
    /// `π₁ = u`, `g = a + v`; `a` is absent at a general point.
    OnEd {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        a: Option<CycloNum>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpStep {
    pub index: usize,
    /// Chart of the previous surface holding the center.
    pub chart: String,
    pub center: (CycloNum, CycloNum),
    /// `g` in the new `A` chart.
    pub g: BiRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub index: usize,
    /// Order of vanishing of `π₁` along the curve.
    pub multiplicity: u32,
    pub generic: LemmaCase,
    pub adjacent: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub label: String,
    pub chart: String,
    pub coords: (CycloNum, CycloNum),
    pub components: Vec<usize>,
    pub tag: NormalFormTag,
    /// Exponents of `π₁ ∼ u^a v^b` at the point, in chart coordinates.
    pub pi1: (i64, i64),
    pub case: LemmaCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionTree {
    pub alpha: LaurentPoly,
    pub q: u32,
    /// `β(x) = x^q α(x)`.
    pub beta: CycloPoly,
    pub steps: Vec<BlowUpStep>,
    pub components: Vec<Component>,
    pub points: Vec<MarkedPoint>,
    /// Index of the last exceptional curve `E_d`.
    pub ed: usize,
    /// Position of `P` in `points`.
    pub p_point: usize,
    /// `g = c0 + c1 v` along `E_d` in its `A` chart.
    pub ed_law: (CycloNum, CycloNum),
}

impl ResolutionTree {
    pub fn blowups(&self) -> usize {
        self.steps.len()
    }

    /// Value of `g` at the point `(0, v)` of `E_d`.
    pub fn g_on_ed(&self, v: &CycloNum) -> CycloNum {
        &self.ed_law.0 + &(&self.ed_law.1 * v)
    }

    /// Number of curves whose general point is of the `g = a + v` type.
    pub fn ed_count(&self) -> usize {
        self.components.iter().filter(|c| matches!(c.generic, LemmaCase::OnEd { .. })).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alpha = {}   (q = {}, beta = {})", self.alpha, self.q, self.beta.display_with("x"));
        let _ = writeln!(s, "blow-ups: {}", self.steps.len());
        for st in &self.steps {
            let _ = writeln!(
                s,
                "  {:>2}. center ({}, {}) in {}  ->  g = {}",
                st.index, st.center.0, st.center.1, st.chart, st.g
            );
        }
        let _ = writeln!(s, "components:");
        for c in &self.components {
            let mark = if c.index == self.ed { "  [E_d]" } else { "" };
            let _ = writeln!(
                s,
                "  E{}: mult {}, generic {}, adjacent {:?}{mark}",
                c.index,
                c.multiplicity,
                case_text(&c.generic),
                c.adjacent
            );
        }
        let _ = writeln!(s, "special points:");
        for (i, p) in self.points.iter().enumerate() {
            let mark = if i == self.p_point { "  [P]" } else { "" };
            let _ = writeln!(
                s,
                "  {} in {} at ({}, {}): {}{mark}",
                p.label,
                p.chart,
                p.coords.0,
                p.coords.1,
                case_text(&p.case)
            );
        }
        let _ = writeln!(s, "on E_d: g = {} + ({})*v", self.ed_law.0, self.ed_law.1);
        s
    }
}

fn case_text(c: &LemmaCase) -> String {
    match c {
        LemmaCase::SmoothPole { m, k } => format!("pi1 = u^{m}, g ~ 1/u^{k}"),
        LemmaCase::CrossingPole { m, n, k, l } => format!("pi1 = u^{m} v^{n}, g ~ 1/(u^{k} v^{l})"),
        LemmaCase::PPoint { n } => format!("P: pi1 = u v^{n}, g ~ 1/v"),
        LemmaCase::OnEd { a: Some(a) } => format!("pi1 = u, g = {a} + v"),
        LemmaCase::OnEd { a: None } => "pi1 = u, g = a + v".to_string(),
    }
}

fn structural(at: impl Into<String>, reason: impl Into<String>, g: &BiRational) -> ResolutionError {
    ResolutionError::Structural { at: at.into(), reason: reason.into(), expr: g.to_string() }
}

/// Translate a normal-form tag and the local shape of `π₁` into a lemma
/// case. `ed_var` names the coordinate cutting out `E_d` when the point
/// lies on it.
fn lemma_case(
    tag: &NormalFormTag,
    pi1: (i64, i64),
    ed_var: Option<Var>,
) -> Option<LemmaCase> {
    let along = |v: Var| match v {
        Var::U => pi1.0,
        Var::V => pi1.1,
    };
    let other = |v: Var| match v {
        Var::U => Var::V,
        Var::V => Var::U,
    };
    match tag {
        NormalFormTag::HolomorphicUnitPlusCoordinate { a } => {
            (ed_var == Some(Var::U) && pi1 == (1, 0)).then(|| LemmaCase::OnEd { a: Some(a.clone()) })
        }
        NormalFormTag::MonomialPoleOneVar { var, order } => match ed_var {
            Some(e) if e != *var && *order == 1 => {
                let n = along(*var);
                (along(e) == 1 && n >= 1).then_some(LemmaCase::PPoint { n: n as u32 })
            }
            Some(_) => None,
            None => {
                let m = along(*var);
                (m >= 1 && along(other(*var)) == 0)
                    .then_some(LemmaCase::SmoothPole { m: m as u32, k: *order })
            }
        },
        NormalFormTag::MonomialPoleTwoVar { u_order, v_order } => {
            if ed_var.is_some() || pi1.0 < 0 || pi1.1 < 0 {
                return None;
            }
            let (m, n, k, l) = if pi1.0 >= 1 {
                (pi1.0, pi1.1, *u_order, *v_order)
            } else {
                (pi1.1, pi1.0, *v_order, *u_order)
            };
            (m >= 1).then_some(LemmaCase::CrossingPole { m: m as u32, n: n as u32, k, l })
        }
        NormalFormTag::NotNormalForm { .. } => None,
    }
}

struct PointSpec<'a> {
    label: String,
    chart: String,
    g: &'a BiRational,
    pi1: &'a BiRational,
    at: AxisPoint,
    components: Vec<usize>,
    ed_var: Option<Var>,
}

fn classify_point(spec: PointSpec<'_>) -> Result<MarkedPoint, ResolutionError> {
    let where_ = format!("{} in chart {} at {}", spec.label, spec.chart, spec.at);
    let tag = classify_at_point(spec.g, &spec.at)?;
    let (cu, cv) = spec.at.coords();
    let pi1 = spec
        .pi1
        .translate(&cu, &cv)
        .monomial_at_origin()
        .ok_or_else(|| structural(&where_, "pi1 is not a monomial times a unit", spec.pi1))?;
    let case = lemma_case(&tag, pi1, spec.ed_var)
        .ok_or_else(|| structural(&where_, format!("no lemma case for {tag:?} with pi1 exponents {pi1:?}"), spec.g))?;
    Ok(MarkedPoint {
        label: spec.label,
        chart: spec.chart,
        coords: (cu, cv),
        components: spec.components,
        tag,
        pi1,
        case,
    })
}

/// Strip every factor `(v - c)` from `r`, returning the multiplicity.
fn strip_root(r: &mut CycloPoly, c: &CycloNum) -> usize {
    let k = r.root_multiplicity(c);
    if k > 0 {
        let lin = CycloPoly::linear(c).pow(k as u32);
        *r = r.div_rem(&lin).expect("linear divisor").0;
    }
    k
}

/// `β` with `α(x) = β(x)/x^q`.
pub fn beta_of(alpha: &LaurentPoly) -> Result<(u32, CycloPoly), ResolutionError> {
    if !alpha.is_purely_polar() {
        return Err(ResolutionError::NotPolar);
    }
    let q = alpha.pole_order();
    let beta = CycloPoly::new((0..q).map(|j| alpha.coeff(j as i64 - q as i64)).collect());
    Ok((q, beta))
}

/// Run the `2q`-step chain for `α` and classify every special point.
pub fn build_resolution(alpha: &LaurentPoly) -> Result<ResolutionTree, ResolutionError> {
    let (q, beta) = beta_of(alpha)?;
    let n = 2 * q as usize;
    let x = BiPoly::u();
    let y = BiPoly::v();
    let xq = x.pow(q);
    let g0 = BiRational::from_parts(xq.sub(&y.mul(&BiPoly::from_poly_in_u(&beta))), xq.mul(&y));
    let pi0 = BiRational::from_poly(x);

    // charts[k] = (g, π₁) in A_k; b_charts[k] likewise in B_k (k >= 1)
    let mut a_charts: Vec<(BiRational, BiRational)> = vec![(g0, pi0)];
    let mut b_charts: Vec<(BiRational, BiRational)> = vec![];
    let mut steps = Vec::with_capacity(n);
    for k in 1..=n {
        let (g, pi) = a_charts[k - 1].clone();
        let center = if k == 1 {
            (CycloNum::zero(), CycloNum::zero())
        } else {
            // a factor v^b with b > 0 is part of the zero curve
            let n0 = CycloPoly::monomial_shift(&g.num.restrict_u0(), g.v_exp.max(0) as usize);
            if n0.degree() != Some(1) {
                return Err(structural(
                    format!("chart A{}", k - 1),
                    "numerator does not meet the exceptional curve in a single simple point",
                    &g,
                ));
            }
            let root = (-&n0.coeff(0)).checked_div(&n0.coeff(1))?;
            (CycloNum::zero(), root)
        };
        let ma = ChartMap::new(ChartKind::A, center.0.clone(), center.1.clone());
        let mb = ChartMap::new(ChartKind::B, center.0.clone(), center.1.clone());
        let ga = g.compose(&ma);
        steps.push(BlowUpStep { index: k, chart: format!("A{}", k - 1), center, g: ga.clone() });
        a_charts.push((ga, pi.compose(&ma)));
        b_charts.push((g.compose(&mb), pi.compose(&mb)));
    }

    let mut components = Vec::with_capacity(n);
    let mut points = Vec::new();
    for k in 1..=n {
        let (g, pi) = &a_charts[k];
        let chart = format!("A{k}");
        let adjacent: Vec<usize> = [k.checked_sub(1).filter(|&j| j >= 1), (k < n).then_some(k + 1)]
            .into_iter()
            .flatten()
            .collect();
        if pi.u_exp < 1 || pi.v_exp != 0 || pi.monomial_at_origin().is_none() {
            return Err(structural(&chart, "pi1 is not a power of u", pi));
        }
        let multiplicity = pi.u_exp as u32;
        if k < n {
            let generic = match classify_generic_on_u0(g) {
                NormalFormTag::MonomialPoleOneVar { var: Var::U, order } => {
                    LemmaCase::SmoothPole { m: multiplicity, k: order }
                }
                other => {
                    return Err(structural(&chart, format!("general point has shape {other:?}"), g))
                }
            };
            components.push(Component { index: k, multiplicity, generic, adjacent });
            // special points in the finite part of E_k
            let next = &steps[k].center.1;
            let mut r = g.num.restrict_u0().mul(&g.den.restrict_u0());
            strip_root(&mut r, next);
            let at_zero = strip_root(&mut r, &CycloNum::zero());
            if r.degree() != Some(0) {
                return Err(structural(&chart, "unexpected special point on the exceptional curve", g));
            }
            if (g.v_exp != 0 || at_zero > 0) && !next.is_zero() {
                let label = if k <= q as usize {
                    format!("E{k} ∩ strict transform of y = 0")
                } else {
                    format!("E{k} ∩ {{v = 0}}")
                };
                points.push(classify_point(PointSpec {
                    label,
                    chart: chart.clone(),
                    g,
                    pi1: pi,
                    at: AxisPoint::origin(),
                    components: vec![k],
                    ed_var: None,
                })?);
            }
        } else {
            let (b, n0, d0) = g.restrict_u0().ok_or_else(|| structural(&chart, "g has a pole or zero along E_d", g))?;
            if b < 0 {
                return Err(structural(&chart, "g has a pole at a point of E_d", g));
            }
            let n0 = CycloPoly::monomial_shift(&n0, b as usize);
            if d0.degree() != Some(0) || n0.degree() != Some(1) {
                return Err(structural(&chart, "g is not affine along E_d", g));
            }
            let d = d0.coeff(0);
            components.push(Component {
                index: k,
                multiplicity,
                generic: LemmaCase::OnEd { a: None },
                adjacent,
            });
            let law = (n0.coeff(0).checked_div(&d)?, n0.coeff(1).checked_div(&d)?);
            // every finite point of E_d is of type (c); check the one at v = 0
            let probe = classify_point(PointSpec {
                label: format!("E{k} at v = 0"),
                chart: chart.clone(),
                g,
                pi1: pi,
                at: AxisPoint::origin(),
                components: vec![k],
                ed_var: Some(Var::U),
            })?;
            if probe.case != (LemmaCase::OnEd { a: Some(law.0.clone()) }) {
                return Err(structural(&chart, "E_d probe disagrees with the affine law", g));
            }
            let last = build_b_points(&b_charts, k, n, &mut points)?;
            return Ok(ResolutionTree {
                alpha: alpha.clone(),
                q,
                beta,
                steps,
                components,
                points,
                ed: n,
                p_point: last,
                ed_law: law,
            });
        }
        build_b_points(&b_charts, k, n, &mut points)?;
    }
    unreachable!("the loop returns at the last component")
}

/// Classify the origin of chart `B_k`, where `E_k` meets the previous curve.
fn build_b_points(
    b_charts: &[(BiRational, BiRational)],
    k: usize,
    n: usize,
    points: &mut Vec<MarkedPoint>,
) -> Result<usize, ResolutionError> {
    let (g, pi) = &b_charts[k - 1];
    let label = if k == 1 {
        "E1 ∩ strict transform of x = 0".to_string()
    } else {
        format!("E{} ∩ E{k}", k - 1)
    };
    let components = if k == 1 { vec![1] } else { vec![k - 1, k] };
    let pt = classify_point(PointSpec {
        label,
        chart: format!("B{k}"),
        g,
        pi1: pi,
        at: AxisPoint::origin(),
        components,
        ed_var: (k == n).then_some(Var::V),
    })?;
    if k == n && !matches!(pt.case, LemmaCase::PPoint { .. }) {
        return Err(structural(format!("B{k}"), "crossing with E_d is not of type P", g));
    }
    points.push(pt);
    Ok(points.len() - 1)
}
