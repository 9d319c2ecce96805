//! Deterministic SVG rendering of a fan and, optionally, a divisor polytope.
//!
//! All geometry is placed on an integer pixel grid: the lattice is scaled by
//! a whole number of pixels per unit (at most 48, shrinking for large
//! scenes), so identical inputs produce byte-identical files. Floating point
//! appears only in label offsets along ray directions, printed with a fixed
//! one-decimal format.

use std::fmt::Write as _;

use toric::{CompleteSmoothFan, LatticeVector};

const MARGIN: i128 = 40;
const TARGET_EXTENT: i128 = 960;
const MAX_UNIT: i128 = 48;
const MAX_GRID_DOTS: i128 = 2500;

pub fn render(fan: &CompleteSmoothFan, polytope: Option<&[LatticeVector]>) -> String {
    let mut xs: Vec<i128> = vec![0];
    let mut ys: Vec<i128> = vec![0];
    for u in fan.rays() {
        xs.push(i128::from(u.x));
        ys.push(i128::from(u.y));
    }
    for v in polytope.unwrap_or_default() {
        xs.push(i128::from(v.x));
        ys.push(i128::from(v.y));
    }
    let xmin = xs.iter().min().expect("nonempty") - 1;
    let xmax = xs.iter().max().expect("nonempty") + 1;
    let ymin = ys.iter().min().expect("nonempty") - 1;
    let ymax = ys.iter().max().expect("nonempty") + 1;
    let (dx, dy) = (xmax - xmin, ymax - ymin);
    let scale = (TARGET_EXTENT / dx.max(dy)).clamp(1, MAX_UNIT);
    let px = |x: i128| MARGIN + (x - xmin) * scale;
    let py = |y: i128| MARGIN + (ymax - y) * scale;
    let (width, height) = (2 * MARGIN + dx * scale, 2 * MARGIN + dy * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r##"<defs><marker id="arrowhead" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#1c4e80"/></marker></defs>"##
    );
    let _ = writeln!(
        s,
        r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##
    );

    if (dx + 1) * (dy + 1) <= MAX_GRID_DOTS {
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                let _ = writeln!(
                    s,
                    r##"<circle cx="{}" cy="{}" r="1.5" fill="#cccccc"/>"##,
                    px(x),
                    py(y)
                );
            }
        }
    }

    if xmin <= 0 && 0 <= xmax {
        let _ = writeln!(
            s,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#9e9e9e" stroke-width="1"/>"##,
            px(0),
            py(ymax),
            py(ymin)
        );
    }
    if ymin <= 0 && 0 <= ymax {
        let _ = writeln!(
            s,
            r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#9e9e9e" stroke-width="1"/>"##,
            py(0),
            px(xmin),
            px(xmax)
        );
    }

    if let Some(vertices) = polytope {
        let points = vertices
            .iter()
            .map(|v| format!("{},{}", px(i128::from(v.x)), py(i128::from(v.y))))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            s,
            r##"<polygon points="{points}" fill="#a7d7b4" fill-opacity="0.5" stroke="#2e7d32" stroke-width="2"/>"##
        );
        for (i, v) in vertices.iter().enumerate() {
            let (cx, cy) = (px(i128::from(v.x)), py(i128::from(v.y)));
            let _ = writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="3" fill="#2e7d32"/>"##);
            let _ = writeln!(
                s,
                r##"<text x="{}" y="{}" font-family="sans-serif" font-size="13" fill="#1b5e20">m{i}</text>"##,
                cx + 7,
                cy - 7
            );
        }
    }

    for (i, u) in fan.rays().iter().enumerate() {
        let (tx, ty) = (px(i128::from(u.x)), py(i128::from(u.y)));
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{tx}" y2="{ty}" stroke="#1c4e80" stroke-width="2" marker-end="url(#arrowhead)"/>"##,
            px(0),
            py(0)
        );
        // Nudge the label a fixed distance past the arrow tip, along the ray.
        let (ux, uy) = (u.x as f64, -(u.y as f64));
        let len = (ux * ux + uy * uy).sqrt();
        let lx = tx as f64 + 16.0 * ux / len;
        let ly = ty as f64 + 16.0 * uy / len + 4.5;
        let _ = writeln!(
            s,
            r##"<text x="{lx:.1}" y="{ly:.1}" font-family="sans-serif" font-size="14" fill="#1c4e80" text-anchor="middle">u{i}</text>"##
        );
    }

    s.push_str("</svg>\n");
    s
}
