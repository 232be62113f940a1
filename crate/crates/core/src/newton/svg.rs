//! SVG rendering of a Newton polygon: exact vertex coordinates inside a
//! flipped, scaled group, the two implicit rays, and slope labels.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::NewtonPolygon;
use crate::cyclotomic::Rational;

const SIGNIFICANT: usize = 15;

/// Decimal rendering: exact for terminating fractions within `SIGNIFICANT`
/// significant digits, otherwise rounded to that many.
pub fn format_decimal(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = Rational::from_integer(10.into());
    let mut e: i64 = 0;
    let mut probe = a.clone();
    while probe >= ten {
        probe /= &ten;
        e += 1;
    }
    while probe < Rational::from_integer(1.into()) {
        probe *= &ten;
        e -= 1;
    }
    let shift = SIGNIFICANT as i64 - 1 - e;
    let scale = BigInt::from(10).pow(shift.unsigned_abs() as u32);
    let scaled = if shift >= 0 { &a * &scale } else { &a / &scale };
    // round half up
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let digits = if &rem * 2 >= *scaled.denom() { q + 1 } else { q };
    let mut s = digits.to_string();
    let out = if shift <= 0 {
        s.push_str(&"0".repeat((-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        let (int_part, frac) = s.split_at(s.len() - shift);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() { int_part.to_string() } else { format!("{int_part}.{frac}") }
    };
    if neg { format!("-{out}") } else { out }
}

fn fmt_fraction(r: &Rational) -> String {
    if r.is_integer() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) }
}

/// Standalone SVG document for the polygon.
pub fn to_svg(poly: &NewtonPolygon) -> String {
    let verts = poly.vertices();
    let w = poly.width().to_f64().unwrap_or(0.0).max(1.0);
    let h = poly.irregularity().to_f64().unwrap_or(0.0).max(1.0);
    let scale = 360.0 / w.max(h);
    let margin = 60.0;
    let width = w * scale + 2.0 * margin + 40.0;
    let height = h * scale + 2.0 * margin + 40.0;
    let ray = 30.0 / scale;
    let (lx, ly) = verts.last().cloned().expect("at least the origin");

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let exact: Vec<String> =
        verts.iter().map(|(x, y)| format!("{},{}", fmt_fraction(x), fmt_fraction(y))).collect();
    let _ = writeln!(s, r#"  <desc>vertices {}</desc>"#, exact.join(" "));
    let _ = writeln!(
        s,
        r#"  <g transform="translate({:.1} {:.1}) scale({scale:.6} {:.6})" fill="none" stroke-linejoin="round">"#,
        margin + 40.0,
        height - margin,
        -scale
    );
    let _ = writeln!(
        s,
        r#"    <line class="ray" x1="0" y1="0" x2="{}" y2="0" stroke="gray" vector-effect="non-scaling-stroke"/>"#,
        format_decimal(&-Rational::from_float(ray).unwrap_or_default())
    );
    let points: Vec<String> = verts
        .iter()
        .map(|(x, y)| format!("{},{}", format_decimal(x), format_decimal(y)))
        .collect();
    let _ = writeln!(
        s,
        r#"    <polyline class="boundary" points="{}" stroke="black" stroke-width="2" vector-effect="non-scaling-stroke"/>"#,
        points.join(" ")
    );
    let top = &ly + Rational::from_float(ray).unwrap_or_default();
    let _ = writeln!(
        s,
        r#"    <line class="ray" x1="{lx}" y1="{ly}" x2="{lx}" y2="{}" stroke="gray" vector-effect="non-scaling-stroke"/>"#,
        format_decimal(&top),
        lx = format_decimal(&lx),
        ly = format_decimal(&ly),
    );
    for (x, y) in &verts {
        let _ = writeln!(
            s,
            r#"    <circle class="vertex" cx="{}" cy="{}" r="{:.6}" fill="black"/>"#,
            format_decimal(x),
            format_decimal(y),
            3.0 / scale
        );
    }
    let _ = writeln!(s, "  </g>");
    for (i, (w, h)) in poly.edges().iter().enumerate() {
        let (x0, y0) = &verts[i];
        let mx = (x0 + w / Rational::from_integer(2.into())).to_f64().unwrap_or(0.0);
        let my = (y0 + h / Rational::from_integer(2.into())).to_f64().unwrap_or(0.0);
        let px = margin + 40.0 + mx * scale + 8.0;
        let py = height - margin - my * scale + 14.0;
        let slope = h / w;
        let _ = writeln!(
            s,
            r#"  <text class="slope" x="{px:.1}" y="{py:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
            fmt_fraction(&slope)
        );
    }
    if poly.is_empty() && verts.len() == 1 && lx.is_zero() {
        let _ = writeln!(s, r#"  <!-- no finite edges -->"#);
    }
    s.push_str("</svg>\n");
    s
}
