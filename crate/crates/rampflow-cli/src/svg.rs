//! Hand-emitted SVG plots: axis-true scaling, shaded bulk regions, the wall
//! body, concentration curves, contact lines and blow-up/collision markers.
//! No external plotting dependency and no timestamps, so output is
//! byte-reproducible.

use rampflow::solution::{Boundary, Classification, CurveSegment, MeasureSolution};
use std::fmt::Write as _;

const WIDTH: f64 = 900.0;
const MARGIN: f64 = 50.0;

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Frame {
        let scale = (WIDTH - 2.0 * MARGIN) / (x_hi - x_lo).max(1e-9);
        Frame {
            x0: x_lo,
            y0: y_hi,
            scale,
            height: (y_hi - y_lo) * scale + 2.0 * MARGIN,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.y0 - y) * self.scale
    }

    fn pt(&self, x: f64, y: f64) -> String {
        format!("{:.3},{:.3}", self.px(x), self.py(y))
    }
}

fn boundary_polyline(b: &Boundary, x_from: f64, x_to: f64, n: usize) -> Vec<(f64, f64)> {
    (0..=n)
        .filter_map(|i| {
            let x = x_from + (x_to - x_from) * i as f64 / n as f64;
            b.y(x).ok().map(|y| (x, y))
        })
        .collect()
}

fn region_fill(name: &str) -> &'static str {
    match name {
        n if n.starts_with("upstream") => "#e8f0f8",
        "static_gas" => "#f6e8d8",
        n if n.starts_with("jet") => "#e4f2e4",
        "vacuum" => "#f7f7f7",
        _ => "#eeeeee",
    }
}

/// Render one solution.
pub fn render(sol: &MeasureSolution) -> String {
    let ext = sol.extent;
    let f = Frame::new(0.0, ext.x_max, ext.y_min, ext.y_max);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        WIDTH, f.height, WIDTH, f.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Bulk regions.
    for r in &sol.regions {
        let lower = boundary_polyline(&r.lower, r.x_from, r.x_to, 160);
        let mut upper = boundary_polyline(&r.upper, r.x_from, r.x_to, 160);
        upper.reverse();
        if lower.is_empty() || upper.is_empty() {
            continue;
        }
        let mut d = String::from("M");
        for (x, y) in lower.iter().chain(upper.iter()) {
            let _ = write!(d, " {}", f.pt(*x, y.clamp(ext.y_min, ext.y_max)));
        }
        d.push_str(" Z");
        let _ = writeln!(s, r#"<path d="{d}" fill="{}" stroke="none"/>"#, region_fill(&r.name));
    }

    // Solid body under the wall.
    if let Some(wall) = sol.curves.iter().flat_map(|c| c.segments.iter()).find_map(|seg| {
        if let CurveSegment::Wall(w) = seg {
            Some(w)
        } else {
            None
        }
    }) {
        let mut d = format!("M {}", f.pt(wall.x_from, 0.0));
        let n = 160;
        for i in 0..=n {
            let x = wall.x_from + (wall.x_to - wall.x_from) * i as f64 / n as f64;
            if let Ok((b, _, _)) = wall.geometry.eval(x) {
                let _ = write!(d, " L {}", f.pt(x, b));
            }
        }
        let _ = write!(d, " L {} Z", f.pt(wall.x_to, 0.0));
        let _ = writeln!(s, r##"<path d="{d}" fill="#d4d4d4" stroke="#555555" stroke-width="1"/>"##);
    }

    // Contact lines come through vacuum-region lower boundaries.
    for r in &sol.regions {
        if r.name == "vacuum" {
            if let Boundary::Line { .. } = r.lower {
                let pts = boundary_polyline(&r.lower, r.x_from, r.x_to, 2);
                let _ = writeln!(
                    s,
                    r##"<polyline points="{} {}" fill="none" stroke="#2c6fa8" stroke-width="1.5" stroke-dasharray="7,4"/>"##,
                    f.pt(pts[0].0, pts[0].1),
                    f.pt(pts[2].0, pts[2].1)
                );
            }
        }
    }

    // Concentration curves.
    for curve in &sol.curves {
        for seg in &curve.segments {
            let (t0, t1) = seg.span();
            let n = 240;
            let mut pts = String::new();
            for i in 0..=n {
                let t = t0 + (t1 - t0) * i as f64 / n as f64;
                if let Ok(p) = seg.at(t) {
                    let _ = write!(pts, "{} ", f.pt(p.pos.0, p.pos.1));
                }
            }
            let color = match seg {
                CurveSegment::Wall(_) => "#333333",
                _ => "#c0392b",
            };
            let _ = writeln!(
                s,
                r#"<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>"#
            );
        }
    }

    // Terminal markers.
    match &sol.classification {
        Classification::BlowsUp { x, y, .. } => {
            let _ = writeln!(
                s,
                r##"<circle cx="{:.3}" cy="{:.3}" r="5" fill="#c0392b" stroke="black"/>"##,
                f.px(*x),
                f.py(*y)
            );
        }
        Classification::VacuumBounded { collision } => {
            let _ = writeln!(
                s,
                r##"<circle cx="{:.3}" cy="{:.3}" r="5" fill="#2c6fa8" stroke="black"/>"##,
                f.px(collision.x),
                f.py(collision.y)
            );
        }
        _ => {}
    }

    // Axes.
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1"/>"#,
        f.px(0.0),
        f.py(0.0),
        f.px(ext.x_max),
        f.py(0.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1"/>"#,
        f.px(0.0),
        f.py(ext.y_min),
        f.px(0.0),
        f.py(ext.y_max)
    );
    s.push_str("</svg>\n");
    s
}

/// Overlay of the free layers of several solutions in one frame.
pub fn render_overlay(solutions: &[(String, MeasureSolution)]) -> String {
    let mut x_hi = 1.0f64;
    let mut y_hi = 1.0f64;
    for (_, sol) in solutions {
        x_hi = x_hi.max(sol.extent.x_max);
        y_hi = y_hi.max(sol.extent.y_max - 0.0);
    }
    let f = Frame::new(0.0, x_hi, 0.0, y_hi);
    let palette = ["#c0392b", "#2c6fa8", "#27ae60", "#8e44ad", "#d68910", "#16a085"];
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        WIDTH, f.height, WIDTH, f.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, (label, sol)) in solutions.iter().enumerate() {
        let color = palette[k % palette.len()];
        for curve in &sol.curves {
            for seg in &curve.segments {
                let (t0, t1) = seg.span();
                let mut pts = String::new();
                for i in 0..=240 {
                    let t = t0 + (t1 - t0) * i as f64 / 240.0;
                    if let Ok(p) = seg.at(t) {
                        let _ = write!(pts, "{} ", f.pt(p.pos.0, p.pos.1));
                    }
                }
                let (color, width) = match seg {
                    CurveSegment::Wall(_) => ("#333333", 1.0),
                    _ => (color, 2.0),
                };
                let _ = writeln!(
                    s,
                    r#"<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>"#
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.0}" y="{:.0}" font-family="monospace" font-size="14" fill="{color}">{label}</text>"#,
            WIDTH - 220.0,
            30.0 + 18.0 * k as f64
        );
    }
    s.push_str("</svg>\n");
    s
}
