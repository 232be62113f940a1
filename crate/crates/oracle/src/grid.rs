//! Brute-force lattice Minkowski sums of elementary Newton regions.
//!
//! The region attached to an integer edge `(w, h)` is the convex hull of the
//! quadrant `{u <= 0, v >= 0}` and its translate by `(w, h)`. Its lattice
//! points are closed under moving left and moving up, so the point set is
//! determined by the lowest occupied row in every column. Summing two point
//! sets is then a (min, +) convolution over columns. The lower convex hull of
//! the resulting columns gives the vertices of the summed polygon.

/// Lowest lattice row per column `i in [-span, w]` for one region, as a vector
/// indexed by `i + span`.
fn region_columns(w: i64, h: i64, span: i64) -> Vec<Option<i64>> {
    (-span..=w)
        .map(|i| {
            if i <= 0 {
                Some(0)
            } else {
                // smallest j with j * w >= h * i
                Some((h * i + w - 1).div_euclid(w))
            }
        })
        .collect()
}

/// Vertices `(0,0), ..., (W, H)` of the Minkowski sum of the regions for the
/// given integer edges, recovered from rasterized point sets.
pub fn lattice_minkowski_vertices(edges: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let total_w: i64 = edges.iter().map(|e| e.0).sum();
    let span = total_w;
    // Columns of the running sum over i in [-span, total_w]; `None` = empty.
    let width = (span + total_w + 1) as usize;
    let mut acc: Vec<Option<i64>> = vec![None; width];
    for (idx, slot) in acc.iter_mut().enumerate() {
        let i = idx as i64 - span;
        if i <= 0 {
            *slot = Some(0);
        }
    }
    for &(w, h) in edges {
        assert!(w > 0 && h > 0, "edges must be positive");
        let cols = region_columns(w, h, span);
        let mut next: Vec<Option<i64>> = vec![None; width];
        for (a_idx, a) in acc.iter().enumerate() {
            let Some(a) = a else { continue };
            let ia = a_idx as i64 - span;
            for (b_idx, b) in cols.iter().enumerate() {
                let Some(b) = b else { continue };
                let ib = b_idx as i64 - span;
                let i = ia + ib;
                // points left of -span can never come back into [0, total_w]
                if i < -span || i > total_w {
                    continue;
                }
                let slot = &mut next[(i + span) as usize];
                let j = a + b;
                if slot.is_none_or(|s| j < s) {
                    *slot = Some(j);
                }
            }
        }
        acc = next;
    }
    let pts: Vec<(i64, i64)> = (0..=total_w)
        .map(|i| (i, acc[(i + span) as usize].expect("column inside the sum is occupied")))
        .collect();
    lower_hull(&pts)
}

/// Lower convex hull of points sorted by x, collinear points removed.
fn lower_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}
