//! Static SVG rendering of a numerical-range region.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use jordanlens::numrange::{ConvexRegion, EllipticDisk};
use jordanlens::Complex64;

/// Renders the hull filled at low opacity, each disk outlined, and the foci
/// marked, over real/imaginary axes with unit ticks.
///
/// Plot coordinates are `(re, −im)` so the imaginary axis points up. The
/// viewBox is the hull's bounding box padded by 10% on every side.
pub fn render_svg(region: &ConvexRegion, disks: &[EllipticDisk]) -> String {
    let (x0, x1, y0, y1) = region.bounding_box();
    let extent = (x1 - x0).max(y1 - y0).max(1e-3);
    let pad_x = 0.1 * (x1 - x0).max(extent * 0.1);
    let pad_y = 0.1 * (y1 - y0).max(extent * 0.1);
    let (vx0, vx1) = (x0 - pad_x, x1 + pad_x);
    let (vy0, vy1) = (y0 - pad_y, y1 + pad_y);
    let stroke = extent * 0.004;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        vx0,
        -vy1,
        vx1 - vx0,
        vy1 - vy0
    );

    // axes
    let _ = writeln!(
        s,
        r##"<g class="axes" stroke="#555" stroke-width="{stroke}">"##
    );
    if vy0 <= 0.0 && 0.0 <= vy1 {
        let _ = writeln!(s, r#"<line x1="{vx0}" y1="0" x2="{vx1}" y2="0"/>"#);
    }
    if vx0 <= 0.0 && 0.0 <= vx1 {
        let _ = writeln!(s, r#"<line x1="0" y1="{}" x2="0" y2="{}"/>"#, -vy1, -vy0);
    }
    let tick = extent * 0.02;
    for k in (vx0.ceil() as i64)..=(vx1.floor() as i64) {
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{k}" y1="{}" x2="{k}" y2="{}"/>"#,
            -tick, tick
        );
    }
    for k in (vy0.ceil() as i64)..=(vy1.floor() as i64) {
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            -tick, -k, tick, -k
        );
    }
    s.push_str("</g>\n");

    let points: Vec<String> = region
        .vertices
        .iter()
        .map(|z| format!("{},{}", z.re, -z.im))
        .collect();
    let _ = writeln!(
        s,
        r##"<polygon class="hull" points="{}" fill="#3b6fb6" fill-opacity="0.2" stroke="#3b6fb6" stroke-width="{stroke}"/>"##,
        points.join(" ")
    );

    for d in disks {
        let _ = writeln!(
            s,
            r##"<ellipse cx="{}" cy="{}" rx="{}" ry="{}" fill="none" stroke="#b63b3b" stroke-width="{stroke}"/>"##,
            d.center.re, -d.center.im, d.semi_major, d.semi_minor
        );
    }
    let r = extent * 0.008;
    for d in disks {
        let (f0, f1) = d.foci();
        for f in [f0, f1] {
            mark(&mut s, f, r);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn mark(s: &mut String, z: Complex64, r: f64) {
    let _ = writeln!(
        s,
        r#"<circle class="focus" cx="{}" cy="{}" r="{r}"/>"#,
        z.re, -z.im
    );
}

pub fn emit_svg(region: &ConvexRegion, disks: &[EllipticDisk], path: &Path) -> io::Result<()> {
    if region.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "cannot plot an empty region",
        ));
    }
    std::fs::write(path, render_svg(region, disks))
}
