//! Deterministic SVG output: plane polygons with their diagonals, and the
//! circle construction of one leapfrog step.
//!
//! Coordinates are written with six decimals and the y axis points up. The
//! viewport is the bounding box of the drawn data with a 5% margin.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::PlanePolygon;
use crate::leapfrog::{construction_circles, leapfrog_point, GenCircle, SPairState};
use crate::scalar::{Complex64, Scalar};

const CANVAS: f64 = 800.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Clone, Copy, Debug)]
struct Bounds {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Bounds {
    fn of(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut b = Bounds {
            x0: f64::INFINITY,
            y0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for (x, y) in points {
            b.x0 = b.x0.min(x);
            b.y0 = b.y0.min(y);
            b.x1 = b.x1.max(x);
            b.y1 = b.y1.max(y);
        }
        if !b.x0.is_finite() {
            return Bounds {
                x0: -1.0,
                y0: -1.0,
                x1: 1.0,
                y1: 1.0,
            };
        }
        // square box, padded by 5% of its side
        let side = (b.x1 - b.x0).max(b.y1 - b.y0).max(1e-9);
        let (cx, cy) = ((b.x0 + b.x1) / 2.0, (b.y0 + b.y1) / 2.0);
        let half = side * 0.55;
        Bounds {
            x0: cx - half,
            y0: cy - half,
            x1: cx + half,
            y1: cy + half,
        }
    }

    fn scale(&self) -> f64 {
        CANVAS / (self.x1 - self.x0)
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let s = self.scale();
        ((x - self.x0) * s, (self.y1 - y) * s)
    }
}

struct Svg {
    out: String,
    bounds: Bounds,
}

impl Svg {
    fn new(bounds: Bounds, title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
        );
        let _ = writeln!(out, "<title>{title}</title>");
        let _ = writeln!(
            out,
            "<rect width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\"/>"
        );
        Svg { out, bounds }
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str, width: f64, class: &str) {
        let (p, q) = (self.bounds.map(a), self.bounds.map(b));
        let _ = writeln!(
            self.out,
            "<line class=\"{class}\" x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"{color}\" stroke-width=\"{width}\"/>",
            p.0, p.1, q.0, q.1
        );
    }

    fn dot(&mut self, a: (f64, f64), color: &str, class: &str) {
        let p = self.bounds.map(a);
        let _ = writeln!(
            self.out,
            "<circle class=\"{class}\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"3\" fill=\"{color}\"/>",
            p.0, p.1
        );
    }

    fn label(&mut self, a: (f64, f64), text: &str) {
        let p = self.bounds.map(a);
        let _ = writeln!(
            self.out,
            "<text x=\"{:.6}\" y=\"{:.6}\" font-size=\"14\" font-family=\"sans-serif\">{text}</text>",
            p.0 + 5.0,
            p.1 - 5.0
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Seed lifts `(0, 0, 1), (1, 0, 1), (0, 1, 1)`: the first three vertices
/// land on a unit right triangle of the affine chart.
pub fn affine_seed<S: Scalar>() -> Vec<Vec<S>> {
    let (o, l) = (S::zero(), S::one());
    vec![
        vec![o.clone(), o.clone(), l.clone()],
        vec![l.clone(), o.clone(), l.clone()],
        vec![o, l.clone(), l],
    ]
}

/// Chart point of `V_i` for any `i >= 0`.
fn chart_point<S: Scalar>(p: &PlanePolygon<S>, i: usize) -> Result<(f64, f64)> {
    let v = p.lift(i);
    let z = v[2].to_complex();
    let size = v.iter().map(Scalar::magnitude).fold(1e-300, f64::max);
    if z.norm() <= 1e-12 * size {
        return Err(Error::DegenerateConfiguration(i % p.n() + 1));
    }
    let (a, b) = (v[0].to_complex() / z, v[1].to_complex() / z);
    if a.im.abs() > 1e-9 * a.norm().max(1.0) || b.im.abs() > 1e-9 * b.norm().max(1.0) {
        return Err(Error::BadParams(format!("vertex {} is not real", i + 1)));
    }
    Ok((a.re, b.re))
}

/// One `<g class="layer">` per polygon: vertices `V_0..V_{n-1}`, edges
/// `V_i V_{i+1}` and diagonals `V_i V_{i+k-1}`, `0 <= i < n`. The edge and
/// diagonal leaving the last vertices end at monodromy images, so a twisted
/// polygon is drawn as the open chain it is.
pub fn render_polygon_layers<S: Scalar>(layers: &[PlanePolygon<S>]) -> Result<String> {
    if layers.is_empty() {
        return Err(Error::BadParams("nothing to render".into()));
    }
    let mut pts = Vec::with_capacity(layers.len());
    for p in layers {
        let span = p.n() + p.k() - 1;
        pts.push(
            (0..span)
                .map(|i| chart_point(p, i))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let bounds = Bounds::of(pts.iter().flat_map(|l| l[..layers[0].n()].iter().copied()));
    let mut svg = Svg::new(bounds, &format!("{} polygon layers", layers.len()));
    for (t, (p, l)) in layers.iter().zip(&pts).enumerate() {
        let color = PALETTE[t % PALETTE.len()];
        let _ = writeln!(svg.out, "<g class=\"layer\" id=\"layer-{t}\">");
        let (n, k) = (p.n(), p.k());
        for i in 0..n {
            svg.line(l[i], l[i + 1], color, 1.5, "edge");
        }
        for i in 0..n {
            svg.line(l[i], l[i + k - 1], color, 0.5, "diagonal");
        }
        for &v in &l[..n] {
            svg.dot(v, color, "vertex");
        }
        svg.out.push_str("</g>\n");
    }
    Ok(svg.finish())
}

/// The four circles of one leapfrog step at site `i` (lines when a triple
/// is collinear), with `S`, `S^-_i` and `S^+_i` marked.
pub fn render_circle_pattern(st: &SPairState<Complex64>, i: usize) -> Result<String> {
    let n = st.n();
    if i >= n {
        return Err(Error::BadParams(format!(
            "site {} out of range 1..={n}",
            i + 1
        )));
    }
    let finite = |p: &crate::leapfrog::ProjPoint<Complex64>, site: usize| {
        p.value()
            .map(|z| (z.re, z.im))
            .map_err(|_| Error::DegenerateConfiguration(site + 1))
    };
    let s: Vec<(f64, f64)> =
        st.s.iter()
            .enumerate()
            .map(|(j, p)| finite(p, j))
            .collect::<Result<_>>()?;
    let plus_pt = leapfrog_point(st, i)?;
    let minus = finite(&st.sminus[i], i)?;
    let plus = finite(&plus_pt, i)?;
    let circles = construction_circles(st, &plus_pt, i)?;

    let mut extent: Vec<(f64, f64)> = s.clone();
    extent.extend([minus, plus]);
    for c in &circles {
        if let GenCircle::Circle { center, radius } = c {
            extent.push((center.re - radius, center.im - radius));
            extent.push((center.re + radius, center.im + radius));
        }
    }
    let bounds = Bounds::of(extent);
    let mut svg = Svg::new(bounds, &format!("leapfrog circles at site {}", i + 1));
    let colors = ["#1f77b4", "#1f77b4", "#d62728", "#d62728"];
    for (c, color) in circles.iter().zip(colors) {
        match *c {
            GenCircle::Circle { center, radius } => {
                let p = bounds.map((center.re, center.im));
                let _ = writeln!(
                    svg.out,
                    "<circle class=\"construction\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\"/>",
                    p.0,
                    p.1,
                    radius * bounds.scale()
                );
            }
            GenCircle::Line { point, dir } => {
                // long enough to cross the viewport
                let reach = 4.0 * (bounds.x1 - bounds.x0) / dir.norm();
                let (a, b) = (point - dir * reach, point + dir * reach);
                svg.line((a.re, a.im), (b.re, b.im), color, 1.0, "construction");
            }
        }
    }
    for (j, &p) in s.iter().enumerate() {
        svg.dot(p, "black", "point");
        svg.label(p, &format!("S{}", j + 1));
    }
    svg.dot(minus, "#2ca02c", "point");
    svg.label(minus, "S-");
    svg.dot(plus, "#9467bd", "point");
    svg.label(plus, "S+");
    Ok(svg.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{gk_step, plane_polygon_from_xy};
    use crate::lax::Matrix;
    use crate::states::{MapParams, XYState};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pentagon_layers() {
        let params = MapParams::new(3, 5).unwrap();
        let s = XYState::new(
            params,
            vec![0.3, 0.35, 0.32, 0.31, 0.29],
            vec![-0.2, -0.25, -0.22, -0.21, -0.2],
        )
        .unwrap();
        let mut layers = vec![plane_polygon_from_xy(&s, &affine_seed::<f64>()).unwrap()];
        for _ in 0..2 {
            layers.push(gk_step(layers.last().unwrap()).unwrap());
        }
        let svg = render_polygon_layers(&layers).unwrap();
        assert_eq!(svg.matches("class=\"layer\"").count(), 3);
        assert_eq!(svg.matches("class=\"edge\"").count(), 15);
        assert_eq!(svg.matches("class=\"diagonal\"").count(), 15);
        assert_eq!(
            render_polygon_layers(&layers[..1])
                .unwrap()
                .matches("class=\"layer\"")
                .count(),
            1
        );
        assert!(render_polygon_layers::<f64>(&[]).is_err());
    }

    #[test]
    fn circle_pattern_is_stable() {
        let id = Matrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let s = [c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(3.0, 1.0)];
        let sm = [c(-2.0, 1.0), c(0.0, 1.0), c(2.0, 1.0), c(3.0, 2.0)];
        let st = SPairState::from_values(&sm, &s, id).unwrap();
        let a = render_circle_pattern(&st, 1).unwrap();
        assert_eq!(a, render_circle_pattern(&st, 1).unwrap());
        assert_eq!(a.matches("class=\"construction\"").count(), 4);
        assert!(a.contains(">S+<"));
        assert!(render_circle_pattern(&st, 9).is_err());
    }
}
