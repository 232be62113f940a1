//! Newton polygons as multisets of finite edges.
//!
//! The unbounded part (a horizontal ray to the left of the first vertex and a
//! vertical ray above the last one) is implicit. Edges are stored merged by
//! slope and sorted by increasing slope, starting from the vertex `(0, 0)`.

mod svg;

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::branch::{ramification_order, Branch, BranchError};
use crate::cyclotomic::Rational;

pub use svg::{format_decimal, to_svg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewtonError {
    #[error("dilation ratio must be positive")]
    NonPositiveRatio,
    #[error("edge ({w}, {h}) must have positive width and height")]
    BadEdge { w: String, h: String },
}

/// One finite edge, `(width, height)`.
pub type Edge = (Rational, Rational);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NewtonPolygon {
    edges: Vec<Edge>,
}

fn int(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

impl NewtonPolygon {
    /// Polygon of the quadrant alone: no finite edges.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Result<Self, NewtonError> {
        let mut by_slope: BTreeMap<Rational, Edge> = BTreeMap::new();
        for (w, h) in edges {
            if !w.is_positive() || !h.is_positive() {
                return Err(NewtonError::BadEdge { w: w.to_string(), h: h.to_string() });
            }
            let e = by_slope.entry(&h / &w).or_insert_with(|| (Rational::zero(), Rational::zero()));
            e.0 += w;
            e.1 += h;
        }
        Ok(NewtonPolygon { edges: by_slope.into_values().collect() })
    }

    /// Region attached to one branch: the single edge `(m p, m q)`.
    pub fn elementary_region(m: u32, p: u32, q: u32) -> Self {
        assert!(m >= 1 && p >= 1 && q >= 1, "elementary region needs m, p, q >= 1");
        let (m, p, q) = (m as u64, p as u64, q as u64);
        NewtonPolygon { edges: vec![(int(m * p), int(m * q))] }
    }

    pub fn minkowski_sum<'a>(polys: impl IntoIterator<Item = &'a NewtonPolygon>) -> Self {
        let all = polys.into_iter().flat_map(|p| p.edges.iter().cloned());
        Self::from_edges(all).expect("edges of valid polygons are positive")
    }

    /// Sum of the regions `(m_ℓ p_ℓ, m_ℓ q_ℓ) + Q` over the branches.
    pub fn from_branches(branches: &[Branch]) -> Self {
        let parts: Vec<_> =
            branches.iter().map(|b| Self::elementary_region(b.m, b.p, b.q)).collect();
        Self::minkowski_sum(&parts)
    }

    /// Polygon after the base change of order `p`: edges `(m_ℓ p_ℓ, p m_ℓ q_ℓ)`.
    pub fn ramified_from_branches(branches: &[Branch], p: u32) -> Self {
        let edges = branches.iter().map(|b| {
            let (m, pl, q) = (b.m as u64, b.p as u64, b.q as u64);
            (int(m * pl), int(p as u64 * m * q))
        });
        Self::from_edges(edges).expect("branch data is positive")
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Slopes in increasing order, each a reduced fraction.
    pub fn slopes(&self) -> Vec<Rational> {
        self.edges.iter().map(|(w, h)| h / w).collect()
    }

    /// Total height.
    pub fn irregularity(&self) -> Rational {
        self.edges.iter().map(|e| e.1.clone()).sum()
    }

    pub fn width(&self) -> Rational {
        self.edges.iter().map(|e| e.0.clone()).sum()
    }

    pub fn dilate_vertical(&self, ratio: &Rational) -> Result<Self, NewtonError> {
        if !ratio.is_positive() {
            return Err(NewtonError::NonPositiveRatio);
        }
        Ok(NewtonPolygon { edges: self.edges.iter().map(|(w, h)| (w.clone(), h * ratio)).collect() })
    }

    /// Vertices from `(0, 0)`, the cumulative sums of the edges.
    pub fn vertices(&self) -> Vec<(Rational, Rational)> {
        let mut out = vec![(Rational::zero(), Rational::zero())];
        for (w, h) in &self.edges {
            let (x, y) = out.last().expect("nonempty").clone();
            out.push((x + w, y + h));
        }
        out
    }
}

/// Branches grouped by the slope `s = p q_ℓ / p_ℓ` they produce after the base
/// change, with the group height `Σ p q_ℓ m_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeGroup {
    pub labels: Vec<String>,
    pub height: u64,
}

pub fn one_slope_decomposition(branches: &[Branch]) -> Result<BTreeMap<u64, SlopeGroup>, BranchError> {
    let mut out: BTreeMap<u64, SlopeGroup> = BTreeMap::new();
    if branches.is_empty() {
        return Ok(out);
    }
    let p = ramification_order(branches)? as u64;
    for b in branches {
        let s = p * b.q as u64 / b.p as u64;
        let g = out.entry(s).or_insert_with(|| SlopeGroup { labels: Vec::new(), height: 0 });
        g.labels.push(b.label.clone());
        g.height += p * b.q as u64 * b.m as u64;
    }
    Ok(out)
}

fn to_i64(r: &num_bigint::BigInt) -> Result<i64, String> {
    r.to_i64().ok_or_else(|| format!("{r} does not fit in 64 bits"))
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    edges: Vec<[i64; 4]>,
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let mut edges = Vec::with_capacity(self.edges.len());
        for (w, h) in &self.edges {
            let row = [w.numer(), w.denom(), h.numer(), h.denom()]
                .map(to_i64);
            let mut out = [0i64; 4];
            for (slot, v) in out.iter_mut().zip(row) {
                *slot = v.map_err(S::Error::custom)?;
            }
            edges.push(out);
        }
        PolygonRepr { edges }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PolygonRepr::deserialize(d)?;
        let mut edges = Vec::new();
        for [wn, wd, hn, hd] in repr.edges {
            if wd == 0 || hd == 0 {
                return Err(D::Error::custom("zero denominator in polygon edge"));
            }
            edges.push((Rational::new(wn.into(), wd.into()), Rational::new(hn.into(), hd.into())));
        }
        NewtonPolygon::from_edges(edges).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::tests::branch;
    use crate::laurent::LaurentPoly;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn edges(p: &NewtonPolygon) -> Vec<(i64, i64)> {
        p.edges().iter().map(|(w, h)| (w.to_integer().try_into().unwrap(), h.to_integer().try_into().unwrap())).collect()
    }

    fn e1() -> Vec<Branch> {
        vec![
            branch("l1", 1, 1, LaurentPoly::tau_pow(-1), 2, &[1, -2, 1]),
            branch("l2", 2, 3, LaurentPoly::tau_pow(-3), 1, &[1, 1]),
        ]
    }

    #[test]
    fn elementary_regions() {
        assert_eq!(edges(&NewtonPolygon::elementary_region(1, 1, 1)), vec![(1, 1)]);
        assert_eq!(edges(&NewtonPolygon::elementary_region(2, 1, 1)), vec![(2, 2)]);
        assert_eq!(edges(&NewtonPolygon::elementary_region(1, 2, 3)), vec![(2, 3)]);
    }

    #[test]
    fn sums() {
        assert!(NewtonPolygon::minkowski_sum(&[]).is_empty());
        let a = NewtonPolygon::elementary_region(1, 1, 1);
        assert_eq!(edges(&NewtonPolygon::minkowski_sum([&a, &a])), vec![(2, 2)]);
        let b = NewtonPolygon::elementary_region(1, 2, 3);
        let c = NewtonPolygon::elementary_region(2, 1, 1);
        let s = NewtonPolygon::minkowski_sum([&b, &c]);
        assert_eq!(edges(&s), vec![(2, 2), (2, 3)]);
        assert_eq!(s.slopes(), vec![r(1, 1), r(3, 2)]);
    }

    #[test]
    fn slopes_and_irregularity() {
        let s = NewtonPolygon::from_branches(&e1());
        assert_eq!(s.slopes(), vec![r(1, 1), r(3, 2)]);
        assert_eq!(s.irregularity(), r(5, 1));
        assert!(NewtonPolygon::empty().slopes().is_empty());
        assert!(NewtonPolygon::empty().irregularity().is_zero());
        assert_eq!(NewtonPolygon::elementary_region(1, 3, 1).slopes(), vec![r(1, 3)]);
        assert_eq!(NewtonPolygon::elementary_region(1, 1, 4).irregularity(), r(4, 1));
    }

    #[test]
    fn dilation() {
        let p = NewtonPolygon::from_edges([(r(2, 1), r(6, 1))]).unwrap();
        assert_eq!(edges(&p.dilate_vertical(&r(1, 2)).unwrap()), vec![(2, 3)]);
        assert_eq!(p.dilate_vertical(&r(1, 1)).unwrap(), p);
        assert_eq!(p.dilate_vertical(&r(0, 1)), Err(NewtonError::NonPositiveRatio));
        let ramified = NewtonPolygon::ramified_from_branches(&e1(), 2);
        assert_eq!(edges(&ramified), vec![(2, 4), (2, 6)]);
        assert_eq!(ramified.dilate_vertical(&r(1, 2)).unwrap(), NewtonPolygon::from_branches(&e1()));
    }

    #[test]
    fn one_slope_groups() {
        let g = one_slope_decomposition(&e1()).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[&2], SlopeGroup { labels: vec!["l1".into()], height: 4 });
        assert_eq!(g[&3], SlopeGroup { labels: vec!["l2".into()], height: 6 });
        let single = one_slope_decomposition(&[branch("a", 1, 1, LaurentPoly::tau_pow(-1), 1, &[-1, 1])]).unwrap();
        assert_eq!(single[&1].height, 1);
        let same = vec![
            branch("a", 1, 1, LaurentPoly::tau_pow(-1), 1, &[-1, 1]),
            branch("b", 2, 2, LaurentPoly::tau_pow(-2), 1, &[-1, 1]),
        ];
        assert_eq!(one_slope_decomposition(&same).unwrap().len(), 1);
    }

    #[test]
    fn vertices_and_json() {
        let p = NewtonPolygon::from_branches(&e1());
        let v: Vec<_> = p.vertices();
        assert_eq!(v, vec![(r(0, 1), r(0, 1)), (r(2, 1), r(2, 1)), (r(4, 1), r(5, 1))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"edges":[[2,1,2,1],[2,1,3,1]]}"#);
        assert_eq!(serde_json::from_str::<NewtonPolygon>(&s).unwrap(), p);
    }
}
