//! Deterministic SVG rendering of drawings.
//!
//! Exact coordinates become floats only when written, rounded to 15 significant digits.
//! The y axis points up, and the view box is the bounding box of the vertices padded by
//! 5% on each side.

use std::fmt::Write as _;

use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::geom::{to_f64, upper_envelope, Line, Point, Rational};

#[derive(Clone, Debug, Default)]
pub struct RenderOptions {
    /// Vertex ids of a path to highlight.
    pub path: Option<Vec<usize>>,
    /// Shade the slab of every highlighted path edge.
    pub shade_slabs: bool,
    /// Lines whose upper envelope is drawn dashed across the view.
    pub envelope: Vec<Line>,
}

/// Fill color by role tag prefix.
fn role_color(role: Option<&str>) -> &'static str {
    match role.and_then(|r| r.split(':').next()) {
        Some("root") => "#d62728",
        Some("s" | "t" | "terminal") => "#1f77b4",
        Some("p" | "pprime") => "#2ca02c",
        Some("peak") => "#9467bd",
        Some("lit" | "qpt") => "#ff7f0e",
        Some("anchor") => "#8c564b",
        Some("sseg") => "#17becf",
        _ => "#333333",
    }
}

/// Shortest decimal that equals the value rounded to 15 significant digits.
fn num(v: f64) -> String {
    let rounded: f64 = format!("{v:.14e}").parse().expect("float literal");
    let out = format!("{rounded}");
    if out == "-0" {
        "0".to_string()
    } else {
        out
    }
}

struct View {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl View {
    fn corners(&self) -> Vec<(f64, f64)> {
        vec![
            (self.min_x, self.min_y),
            (self.max_x, self.min_y),
            (self.max_x, self.max_y),
            (self.min_x, self.max_y),
        ]
    }
}

fn bounds(d: &Drawing) -> View {
    let min = |f: fn(&Point) -> &Rational| d.vertices().iter().map(f).min().expect("non-empty");
    let max = |f: fn(&Point) -> &Rational| d.vertices().iter().map(f).max().expect("non-empty");
    let (x0, x1) = (to_f64(min(|p| &p.x)), to_f64(max(|p| &p.x)));
    let (y0, y1) = (to_f64(min(|p| &p.y)), to_f64(max(|p| &p.y)));
    let (w, h) = (x1 - x0, y1 - y0);
    let span = w.max(h).max(1e-9);
    let pad_x = 0.05 * if w > 0.0 { w } else { span };
    let pad_y = 0.05 * if h > 0.0 { h } else { span };
    View {
        min_x: x0 - pad_x,
        max_x: x1 + pad_x,
        min_y: y0 - pad_y,
        max_y: y1 + pad_y,
    }
}

/// Keeps the part of a convex polygon where `(p - o) . n >= 0`.
fn clip(poly: &[(f64, f64)], o: (f64, f64), n: (f64, f64)) -> Vec<(f64, f64)> {
    let side = |p: (f64, f64)| (p.0 - o.0) * n.0 + (p.1 - o.1) * n.1;
    let mut out = Vec::new();
    for (i, &p) in poly.iter().enumerate() {
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

fn points_attr(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|&(x, y)| format!("{},{}", num(x), num(-y)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg(d: &Drawing, options: &RenderOptions) -> Result<String> {
    if d.is_empty() {
        return Err(Error::InvalidDrawing("nothing to render".into()));
    }
    let view = bounds(d);
    let (w, h) = (view.max_x - view.min_x, view.max_y - view.min_y);
    let unit = w.max(h);
    let stroke = unit / 500.0;
    let radius = unit / 200.0;
    let f = |p: &Point| p.to_f64();

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        num(view.min_x),
        num(-view.max_y),
        num(w),
        num(h)
    )
    .unwrap();

    if let Some(path) = &options.path {
        if path.iter().any(|&v| v >= d.len()) {
            return Err(Error::InvalidPath("path vertex outside the drawing".into()));
        }
        if options.shade_slabs {
            writeln!(out, r##"<g class="slabs" fill="#1f77b4" fill-opacity="0.12" stroke="none">"##).unwrap();
            for e in path.windows(2) {
                let (a, b) = (f(d.vertex(e[0])), f(d.vertex(e[1])));
                let dir = (b.0 - a.0, b.1 - a.1);
                let strip = clip(&view.corners(), a, dir);
                let strip = clip(&strip, b, (-dir.0, -dir.1));
                if strip.len() >= 3 {
                    writeln!(out, r#"<polygon points="{}"/>"#, points_attr(&strip)).unwrap();
                }
            }
            writeln!(out, "</g>").unwrap();
        }
    }

    if !options.envelope.is_empty() {
        let env = upper_envelope(&options.envelope)?;
        let lo = Rational::from_float(view.min_x).expect("finite");
        let hi = Rational::from_float(view.max_x).expect("finite");
        let mut xs = vec![lo.clone()];
        xs.extend(env.breakpoints().into_iter().map(|p| p.x).filter(|x| *x > lo && *x < hi));
        xs.push(hi);
        let chain: Vec<(f64, f64)> = xs.iter().map(|x| (to_f64(x), to_f64(&env.height_at(x)))).collect();
        writeln!(
            out,
            r##"<polyline class="envelope" points="{}" fill="none" stroke="#7f7f7f" stroke-width="{}" stroke-dasharray="{} {}"/>"##,
            points_attr(&chain),
            num(stroke),
            num(4.0 * stroke),
            num(3.0 * stroke)
        )
        .unwrap();
    }

    writeln!(out, r##"<g class="edges" stroke="#555555" stroke-width="{}">"##, num(stroke)).unwrap();
    for &(u, v) in d.edges() {
        let (a, b) = (f(d.vertex(u)), f(d.vertex(v)));
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(a.0),
            num(-a.1),
            num(b.0),
            num(-b.1)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if let Some(path) = &options.path {
        let pts: Vec<(f64, f64)> = path.iter().map(|&v| f(d.vertex(v))).collect();
        writeln!(
            out,
            r##"<polyline class="path" points="{}" fill="none" stroke="#d62728" stroke-width="{}"/>"##,
            points_attr(&pts),
            num(3.0 * stroke)
        )
        .unwrap();
    }

    writeln!(out, r#"<g class="vertices">"#).unwrap();
    for (id, p) in d.vertices().iter().enumerate() {
        let (x, y) = f(p);
        let role = d.label(id);
        write!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}">"#,
            num(x),
            num(-y),
            num(radius),
            role_color(role)
        )
        .unwrap();
        writeln!(out, "<title>{id}{}</title></circle>", role.map(|r| format!(" {r}")).unwrap_or_default()).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::CnfInstance;
    use crate::reduction::{build_arrangement, build_gamma};

    fn segment_drawing() -> Drawing {
        Drawing::from_parts(
            vec![(Point::from_ints(0, 0), Some("s".into())), (Point::from_ints(3, 4), Some("t".into()))],
            vec![(0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn two_vertices_one_edge() {
        let svg = render_svg(&segment_drawing(), &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<line ").count(), 1);
        assert!(svg.contains(r#"viewBox="-0.15 -4.2 3.3 4.4""#), "{svg}");
    }

    #[test]
    fn rendering_is_deterministic() {
        let inst = CnfInstance::from_ints(2, &[&[1, 2]]).unwrap();
        let gamma = build_gamma(&inst).unwrap();
        let options = RenderOptions {
            path: Some(vec![0, 1]),
            shade_slabs: true,
            envelope: build_arrangement(3).unwrap().lines().iter().map(|l| l.line.clone()).collect(),
        };
        let a = render_svg(&gamma.drawing, &options).unwrap();
        let b = render_svg(&gamma.drawing, &options).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches(r#"class="envelope""#).count(), 1);
        assert!(a.contains("stroke-dasharray"));
        assert_eq!(a.matches("<circle").count(), gamma.drawing.len());
        assert_eq!(a.matches("<line ").count(), gamma.drawing.edges().len());
    }

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(2.5), "2.5");
    }

    #[test]
    fn empty_drawing_is_rejected() {
        assert!(render_svg(&Drawing::new(), &RenderOptions::default()).is_err());
    }
}
