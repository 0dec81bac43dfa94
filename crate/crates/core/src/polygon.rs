//! Piecewise-linear polygons attached to strata: breakpoints at cumulative
//! block dimensions and cumulative slope totals, convexity, and CSV/SVG
//! export. Coordinates stay exact; only the SVG renderer converts to
//! decimals.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::strata::{in_gamma, Stratum};

/// A polygon given by breakpoints with strictly increasing integer
/// x-coordinates, starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    breakpoints: Vec<(usize, Rat)>,
}

impl Polygon {
    pub fn new(breakpoints: Vec<(usize, Rat)>) -> Result<Polygon> {
        if breakpoints.is_empty() || breakpoints[0] != (0, Rat::zero()) {
            return Err(Error::Parse("polygon must start at (0,0)".into()));
        }
        if !breakpoints.windows(2).all(|p| p[0].0 < p[1].0) {
            return Err(Error::NotSorted(
                "polygon x-coordinates must strictly increase".into(),
            ));
        }
        Ok(Polygon { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(usize, Rat)] {
        &self.breakpoints
    }

    pub fn endpoint(&self) -> &(usize, Rat) {
        self.breakpoints.last().unwrap()
    }

    /// Slopes of the consecutive segments.
    pub fn segment_slopes(&self) -> Vec<Rat> {
        self.breakpoints
            .windows(2)
            .map(|p| {
                let dy = &p[1].1 - &p[0].1;
                let dx = Rat::from_int((p[1].0 - p[0].0) as i64);
                &dy / &dx
            })
            .collect()
    }
}

/// The polygon of a stratum: breakpoints at the cumulative block boundaries
/// and cumulative lambda totals.
pub fn polygon_of(s: &Stratum) -> Result<Polygon> {
    if !in_gamma(s) {
        return Err(Error::NotInGamma);
    }
    let mut points = vec![(0usize, Rat::zero())];
    let mut y = Rat::zero();
    for (j, block) in s.lambda_blocks().iter().enumerate() {
        y = y + block.total();
        points.push((s.t_cum()[j + 1], y.clone()));
    }
    Polygon::new(points)
}

/// True iff the segment slopes strictly decrease from left to right.
pub fn is_convex(p: &Polygon) -> bool {
    p.segment_slopes().windows(2).all(|s| s[0] > s[1])
}

/// Two-column exact CSV, header "x,y".
pub fn export_csv(p: &Polygon) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in &p.breakpoints {
        writeln!(out, "{},{}", x, y).unwrap();
    }
    out
}

/// Formats with at most 12 significant digits, trimming trailing zeros.
fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A standalone SVG rendering: axes, the polyline through the breakpoints
/// scaled to the viewport, and a label at each breakpoint. Byte output is
/// deterministic for fixed input.
pub fn export_svg(p: &Polygon, width: u32, height: u32) -> Result<String> {
    if width == 0 || height == 0 {
        return Err(Error::Parse("viewport must be positive".into()));
    }
    let margin = 40.0;
    let w = width as f64;
    let hgt = height as f64;
    let max_x = p.endpoint().0 as f64;
    let ys: Vec<f64> = p.breakpoints.iter().map(|(_, y)| y.to_f64()).collect();
    let min_y = ys.iter().cloned().fold(0.0f64, f64::min);
    let max_y = ys.iter().cloned().fold(0.0f64, f64::max);
    let span_y = if max_y > min_y { max_y - min_y } else { 1.0 };
    let span_x = if max_x > 0.0 { max_x } else { 1.0 };
    let sx = |x: f64| margin + (x / span_x) * (w - 2.0 * margin);
    let sy = |y: f64| hgt - margin - ((y - min_y) / span_y) * (hgt - 2.0 * margin);

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        width, height, width, height
    )
    .unwrap();
    // axes through the origin of the data
    writeln!(
        svg,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt_sig(sx(0.0)),
        fmt_sig(sy(0.0)),
        fmt_sig(sx(max_x)),
        fmt_sig(sy(0.0))
    )
    .unwrap();
    writeln!(
        svg,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt_sig(sx(0.0)),
        fmt_sig(sy(min_y)),
        fmt_sig(sx(0.0)),
        fmt_sig(sy(max_y))
    )
    .unwrap();
    let points: Vec<String> = p
        .breakpoints
        .iter()
        .map(|(x, y)| format!("{},{}", fmt_sig(sx(*x as f64)), fmt_sig(sy(y.to_f64()))))
        .collect();
    writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"2\"/>",
        points.join(" ")
    )
    .unwrap();
    for (x, y) in &p.breakpoints {
        let px = sx(*x as f64);
        let py = sy(y.to_f64());
        writeln!(
            svg,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"crimson\"/>",
            fmt_sig(px),
            fmt_sig(py)
        )
        .unwrap();
        writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\">({},{})</text>",
            fmt_sig(px + 5.0),
            fmt_sig(py - 5.0),
            x,
            y
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::{hodge_from_tuple, newton_from_slopes};
    use crate::perm::{Composition, Perm};
    use crate::rational::RatTuple;
    use crate::strata::{build_stratum, enumerate_gamma};

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn d3_gamma4() -> Stratum {
        let n = newton_from_slopes(&[rat(1, 2), rat(0, 1)]).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(&[4, 1, 0])).unwrap();
        let p = Composition::new(vec![1, 1]).unwrap();
        let w = Perm::from_cycles(3, &[vec![2, 3]]).unwrap();
        build_stratum(&p, &Perm::identity(2), &w, &n, &h).unwrap()
    }

    #[test]
    fn polygon_examples() {
        let n = newton_from_slopes(&[rat(1, 2), rat(0, 1)]).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(&[4, 1, 0])).unwrap();
        let p = Composition::new(vec![2]).unwrap();
        let s = build_stratum(&p, &Perm::identity(2), &Perm::identity(3), &n, &h).unwrap();
        let poly = polygon_of(&s).unwrap();
        assert_eq!(poly.breakpoints(), &[(0, Rat::zero()), (3, rat(4, 1))]);
        assert!(is_convex(&poly));

        let poly4 = polygon_of(&d3_gamma4()).unwrap();
        assert_eq!(
            poly4.breakpoints(),
            &[(0, Rat::zero()), (2, rat(3, 1)), (3, rat(4, 1))]
        );
        assert!(is_convex(&poly4));
        // segment slopes equal the average slopes of the stratum
        assert_eq!(poly4.segment_slopes(), vec![rat(3, 2), rat(1, 1)]);
    }

    #[test]
    fn convexity_rejects_increasing_slopes() {
        let poly = Polygon::new(vec![(0, Rat::zero()), (1, rat(0, 1)), (2, rat(1, 1))]).unwrap();
        assert!(!is_convex(&poly));
    }

    #[test]
    fn endpoint_is_total_difference() {
        let n = newton_from_slopes(&[rat(1, 2), rat(0, 1)]).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(&[4, 1, 0])).unwrap();
        let diff = &h.mu_tuple().total() - &n.nu_tuple().total();
        for s in enumerate_gamma(&n, &h).unwrap() {
            let poly = polygon_of(&s).unwrap();
            assert_eq!(poly.endpoint(), &(3, diff.clone()));
            assert!(is_convex(&poly));
        }
    }

    #[test]
    fn csv_format() {
        let poly = Polygon::new(vec![(0, Rat::zero()), (3, rat(4, 1))]).unwrap();
        assert_eq!(export_csv(&poly), "x,y\n0,0\n3,4\n");
        let poly = Polygon::new(vec![(0, Rat::zero()), (2, rat(7, 2))]).unwrap();
        assert!(export_csv(&poly).contains("2,7/2"));
    }

    #[test]
    fn svg_is_deterministic_and_wellformed() {
        let poly = polygon_of(&d3_gamma4()).unwrap();
        let a = export_svg(&poly, 480, 320).unwrap();
        let b = export_svg(&poly, 480, 320).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        // one polyline, breakpoint count circles
        assert_eq!(a.matches("<polyline").count(), 1);
        assert_eq!(a.matches("<circle").count(), poly.breakpoints().len());
        // crude XML balance check
        let opens = a.matches('<').count();
        let closes = a.matches('>').count();
        assert_eq!(opens, closes);
    }

    #[test]
    fn single_segment_polyline() {
        let poly = Polygon::new(vec![(0, Rat::zero()), (3, rat(4, 1))]).unwrap();
        let svg = export_svg(&poly, 200, 200).unwrap();
        let line = svg.lines().find(|l| l.contains("<polyline")).unwrap();
        let pts = line.split("points=\"").nth(1).unwrap();
        let pts = pts.split('"').next().unwrap();
        assert_eq!(pts.split(' ').count(), 2);
    }

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(40.0), "40");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
    }
}
