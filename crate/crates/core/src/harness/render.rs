use std::cmp::Ordering;
use std::fmt::Write;

use crate::certificates::TverbergCertificate;
use crate::error::{input, Result};
use crate::geometry::point::QPoint;
use crate::join::Instance;
use crate::rational::Rational;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Optional certificate geometry drawn over the instance.
#[derive(Clone, Debug, Default)]
pub struct Overlays {
    pub star_center: Option<QPoint>,
    pub tverberg: Option<TverbergCertificate>,
    pub core: Option<QPoint>,
}

fn cross(o: &QPoint, a: &QPoint, b: &QPoint) -> Rational {
    let (o, a, b) = (o.coords(), a.coords(), b.coords());
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Counterclockwise hull vertices, exact. Collinear inputs give the two
/// extreme points; a single distinct point gives itself.
pub fn convex_hull_2d(points: &[QPoint]) -> Vec<QPoint> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.coords().cmp(b.coords()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<QPoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &QPoint>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).cmp(&Rational::zero()) != Ordering::Greater
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

struct View {
    min: [f64; 2],
    scale: f64,
}

impl View {
    fn fit(points: &[Vec<f64>]) -> View {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let pad = [(span - (max[0] - min[0])) / 2.0, (span - (max[1] - min[1])) / 2.0];
        View { min: [min[0] - pad[0], min[1] - pad[1]], scale }
    }

    fn map(&self, p: &QPoint) -> (f64, f64) {
        let c = p.to_f64();
        (MARGIN + (c[0] - self.min[0]) * self.scale, SIZE - MARGIN - (c[1] - self.min[1]) * self.scale)
    }

    fn path(&self, pts: &[QPoint]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Deterministic SVG of a planar instance: basis hulls, points colored by
/// class, and the requested overlays.
pub fn render_svg(instance: &Instance, overlays: &Overlays) -> Result<String> {
    if instance.dimension() != 2 {
        return input(format!("rendering needs dimension 2, got {}", instance.dimension()));
    }
    let mut all: Vec<Vec<f64>> = instance.ground().points().iter().map(QPoint::to_f64).collect();
    all.extend(overlays.star_center.iter().chain(&overlays.core).map(QPoint::to_f64));
    if let Some(tv) = &overlays.tverberg {
        all.push(tv.point.to_f64());
    }
    let view = View::fit(&all);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<g id="bases" fill="#888888" fill-opacity="0.12" stroke="#555555" stroke-width="1">"##);
    for simplex in instance.basis_simplices() {
        let hull = convex_hull_2d(&simplex);
        match hull.len() {
            1 => {
                let (x, y) = view.map(&hull[0]);
                let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2"/>"#);
            }
            2 => {
                let _ = writeln!(out, r#"<polyline points="{}" fill="none"/>"#, view.path(&hull));
            }
            _ => {
                let _ = writeln!(out, r#"<polygon points="{}"/>"#, view.path(&hull));
            }
        }
    }
    let _ = writeln!(out, "</g>");

    if let Some(tv) = &overlays.tverberg {
        let _ = writeln!(out, r#"<g id="tverberg" fill="none" stroke-width="2" stroke-dasharray="6 4">"#);
        for (j, part) in tv.parts.iter().enumerate() {
            let pts = instance.points_of(part)?;
            let hull = convex_hull_2d(&pts);
            let color = PALETTE[j % PALETTE.len()];
            let tag = if hull.len() > 2 { "polygon" } else { "polyline" };
            let _ = writeln!(out, r#"<{tag} points="{}" stroke="{color}"/>"#, view.path(&hull));
        }
        let (x, y) = view.map(&tv.point);
        let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#000000"/>"##);
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r##"<g id="points" stroke="#000000" stroke-width="0.5">"##);
    let ground = instance.ground();
    let class_of = |i: usize| -> usize {
        instance.class_indices().and_then(|cs| cs.iter().position(|c| c.contains(&i))).unwrap_or(0)
    };
    for (i, (label, p)) in ground.labels().iter().zip(ground.points()).enumerate() {
        let (x, y) = view.map(p);
        let color = PALETTE[class_of(i) % PALETTE.len()];
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="{color}"><title>{label}</title></circle>"#);
    }
    let _ = writeln!(out, "</g>");

    if let Some(c) = &overlays.star_center {
        let (x, y) = view.map(c);
        let _ = writeln!(
            out,
            r##"<path id="star-center" d="M {:.3} {y:.3} L {:.3} {y:.3} M {x:.3} {:.3} L {x:.3} {:.3}" stroke="#d62728" stroke-width="3"/>"##,
            x - 8.0,
            x + 8.0,
            y - 8.0,
            y + 8.0
        );
    }
    if let Some(c) = &overlays.core {
        let (x, y) = view.map(c);
        let _ = writeln!(
            out,
            r##"<polygon id="core-point" points="{x:.3},{:.3} {:.3},{y:.3} {x:.3},{:.3} {:.3},{y:.3}" fill="#2ca02c"/>"##,
            y - 7.0,
            x + 7.0,
            y + 7.0,
            x - 7.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
