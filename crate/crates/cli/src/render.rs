//! SVG pictures of realized polygons.
//!
//! Sides are drawn as geodesics of the chosen model: arcs of circles
//! orthogonal to the unit circle in the disk, semicircles centred on the
//! real axis in the half-plane.

use std::fmt::Write;

use hypangle::embed::{halfplane_to_disk, Isometry, Model, PlanePolygon, C64};

/// Arcs with a larger radius than this (in model units) are drawn straight.
pub const STRAIGHT_RADIUS: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    pub model: Model,
    pub size: u32,
    pub stroke: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            model: Model::Disk,
            size: 512,
            stroke: 1.5,
        }
    }
}

/// Vertices moved so `center` lands on `i`, expressed in `model`.
pub fn layout(pp: &PlanePolygon, center: C64, model: Model) -> Vec<C64> {
    let back = Isometry::lift(center).inverse();
    pp.vertices
        .iter()
        .map(|v| {
            let z = back.apply(v.to_complex());
            match model {
                Model::Disk => halfplane_to_disk(z),
                Model::HalfPlane => z,
            }
        })
        .collect()
}

/// Maps model coordinates to SVG user space (y down).
struct Screen {
    scale: f64,
    ox: f64,
    oy: f64,
}

impl Screen {
    fn map(&self, z: C64) -> (f64, f64) {
        (self.ox + self.scale * z.re, self.oy - self.scale * z.im)
    }
}

/// Centre of the geodesic circle through `p` and `q`, or `None` for a straight geodesic.
fn geodesic_center(p: C64, q: C64, model: Model) -> Option<C64> {
    let c = match model {
        Model::Disk => {
            // 2⟨c, p⟩ = |p|² + 1 and 2⟨c, q⟩ = |q|² + 1
            let det = p.re * q.im - p.im * q.re;
            if det.abs() < 1e-15 {
                return None;
            }
            let (u, v) = ((p.norm_sqr() + 1.0) / 2.0, (q.norm_sqr() + 1.0) / 2.0);
            C64::new((u * q.im - v * p.im) / det, (p.re * v - q.re * u) / det)
        }
        Model::HalfPlane => {
            let dx = q.re - p.re;
            if dx.abs() < 1e-15 {
                return None;
            }
            C64::new((q.norm_sqr() - p.norm_sqr()) / (2.0 * dx), 0.0)
        }
    };
    ((p - c).norm() <= STRAIGHT_RADIUS).then_some(c)
}

fn side_path(p: C64, q: C64, model: Model, screen: &Screen) -> String {
    let (px, py) = screen.map(p);
    let (qx, qy) = screen.map(q);
    match geodesic_center(p, q, model) {
        None => format!("M {px:.4} {py:.4} L {qx:.4} {qy:.4}"),
        Some(c) => {
            let r = (p - c).norm() * screen.scale;
            let (cx, cy) = screen.map(c);
            let cross = (px - cx) * (qy - cy) - (py - cy) * (qx - cx);
            let sweep = u8::from(cross > 0.0);
            format!("M {px:.4} {py:.4} A {r:.4} {r:.4} 0 0 {sweep} {qx:.4} {qy:.4}")
        }
    }
}

/// Render `pp` with `center` moved to the middle of the picture.
pub fn render_svg(pp: &PlanePolygon, center: C64, opts: &RenderOptions) -> String {
    let size = opts.size as f64;
    let pts = layout(pp, center, opts.model);
    let screen = match opts.model {
        Model::Disk => Screen {
            scale: 0.45 * size,
            ox: size / 2.0,
            oy: size / 2.0,
        },
        Model::HalfPlane => {
            let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
            for z in &pts {
                x0 = x0.min(z.re);
                x1 = x1.max(z.re);
                y1 = y1.max(z.im);
            }
            let span = (x1 - x0).max(y1).max(1e-9);
            let scale = 0.8 * size / span;
            Screen {
                scale,
                ox: size / 2.0 - scale * (x0 + x1) / 2.0,
                oy: 0.9 * size,
            }
        }
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    );
    let _ = writeln!(
        s,
        r#"<rect width="{0}" height="{0}" fill="white"/>"#,
        opts.size
    );
    match opts.model {
        Model::Disk => {
            let _ = writeln!(
                s,
                r##"<circle class="boundary" cx="{:.4}" cy="{:.4}" r="{:.4}" fill="none" stroke="#888888" stroke-width="1"/>"##,
                screen.ox, screen.oy, screen.scale
            );
        }
        Model::HalfPlane => {
            let _ = writeln!(
                s,
                r##"<line class="boundary" x1="0" y1="{0:.4}" x2="{1}" y2="{0:.4}" stroke="#888888" stroke-width="1"/>"##,
                screen.oy, opts.size
            );
        }
    }
    let n = pts.len();
    let _ = writeln!(
        s,
        r#"<g fill="none" stroke="black" stroke-width="{:.4}">"#,
        opts.stroke
    );
    for k in 0..n {
        // side a_{k+1} joins Q_k and Q_{k+1}
        let (p, q) = (pts[(k + n - 1) % n], pts[k]);
        let _ = writeln!(
            s,
            r#"<path class="side" d="{}"/>"#,
            side_path(p, q, opts.model, &screen)
        );
    }
    let _ = writeln!(s, "</g>");
    let (mx, my) = match opts.model {
        Model::Disk => (screen.ox, screen.oy),
        Model::HalfPlane => screen.map(C64::new(0.0, 1.0)),
    };
    let _ = writeln!(
        s,
        r#"<g font-family="serif" font-size="12" text-anchor="middle" fill="black">"#
    );
    for (k, z) in pts.iter().enumerate() {
        let (x, y) = screen.map(*z);
        let (dx, dy) = (x - mx, y - my);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (lx, ly) = (x + 14.0 * dx / len, y + 14.0 * dy / len + 4.0);
        let _ = writeln!(s, r#"<circle cx="{x:.4}" cy="{y:.4}" r="2"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.4}" y="{ly:.4}">Q<tspan baseline-shift="sub" font-size="9">{}</tspan></text>"#,
            k + 1
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypangle::embed::{disk_to_halfplane, PlanePoint};

    fn polygon_from_disk(pts: &[C64]) -> PlanePolygon {
        PlanePolygon {
            genus: 1,
            model: Model::HalfPlane,
            vertices: pts
                .iter()
                .map(|w| PlanePoint::from_complex(disk_to_halfplane(*w)))
                .collect(),
        }
    }

    #[test]
    fn side_through_center_is_straight() {
        let pts = [
            C64::new(-0.5, 0.0),
            C64::new(0.0, 0.6),
            C64::new(0.5, 0.0),
            C64::new(0.0, -0.6),
        ];
        let pp = polygon_from_disk(&pts);
        let svg = render_svg(&pp, C64::new(0.0, 1.0), &RenderOptions::default());
        // a_1 joins Q_4 and Q_1, not through 0; the diameter case is Q_1 to Q_3
        assert!(side_path(
            pts[0],
            pts[2],
            Model::Disk,
            &Screen {
                scale: 1.0,
                ox: 0.0,
                oy: 0.0
            }
        )
        .contains(" L "));
        assert_eq!(svg.matches("class=\"side\"").count(), 4);
        assert_eq!(svg.matches(" A ").count(), 4);
    }

    #[test]
    fn disk_arcs_are_orthogonal_to_the_boundary() {
        let (p, q) = (C64::new(0.3, 0.1), C64::new(-0.2, 0.5));
        let c = geodesic_center(p, q, Model::Disk).unwrap();
        let r = (p - c).norm();
        assert!((c.norm_sqr() - r * r - 1.0).abs() < 1e-12);
        assert!(((q - c).norm() - r).abs() < 1e-12);
    }

    #[test]
    fn halfplane_arcs_are_centred_on_the_axis() {
        let (p, q) = (C64::new(0.3, 1.1), C64::new(-0.7, 0.5));
        let c = geodesic_center(p, q, Model::HalfPlane).unwrap();
        assert_eq!(c.im, 0.0);
        assert!(((p - c).norm() - (q - c).norm()).abs() < 1e-12);
        assert!(
            geodesic_center(C64::new(0.2, 1.0), C64::new(0.2, 3.0), Model::HalfPlane).is_none()
        );
    }
}
