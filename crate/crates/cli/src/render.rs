//! SVG rendering of virtual Newton polygons.
//!
//! The picture shows the virtual vertex chain of a `KN` element with both
//! axes; everything is laid out with integer arithmetic so the byte
//! output is a deterministic function of the input.

use newton_aj::{Int, Rat};
use num_traits::{Signed, Zero};
use std::fmt::Write;

const UNIT: i64 = 40;
const MARGIN: i64 = 30;

/// Fixed-point decimal with two digits, computed by exact rounding
/// (ties away from zero).
fn dec(v: &Rat) -> String {
    let scaled = (v * Rat::from_integer(Int::from(100))).round();
    let n = scaled.to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let abs = n.abs();
    let whole = &abs / Int::from(100);
    let frac = &abs % Int::from(100);
    format!("{sign}{whole}.{frac:02}")
}

fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// Render the virtual vertex chain as a standalone SVG document.
pub fn render_svg(points: &[(Rat, Rat)]) -> String {
    let zero = Rat::zero();
    let min_x = points.iter().map(|(x, _)| x).min().unwrap_or(&zero).min(&zero).clone();
    let max_x = points.iter().map(|(x, _)| x).max().unwrap_or(&zero).max(&zero).clone();
    let min_y = points.iter().map(|(_, y)| y).min().unwrap_or(&zero).min(&zero).clone();
    let max_y = points.iter().map(|(_, y)| y).max().unwrap_or(&zero).max(&zero).clone();

    let width = (&max_x - &min_x) * rat(UNIT) + rat(2 * MARGIN);
    let height = (&max_y - &min_y) * rat(UNIT) + rat(2 * MARGIN);
    let px = |x: &Rat| -> Rat { (x - &min_x) * rat(UNIT) + rat(MARGIN) };
    let py = |y: &Rat| -> Rat { (&max_y - y) * rat(UNIT) + rat(MARGIN) };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        dec(&width),
        dec(&height),
        dec(&width),
        dec(&height)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    // Axes through the origin.
    let _ = writeln!(
        svg,
        r##"<line x1="0" y1="{0}" x2="{1}" y2="{0}" stroke="#b0b0b0" stroke-width="1"/>"##,
        dec(&py(&zero)),
        dec(&width)
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{0}" y1="0" x2="{0}" y2="{1}" stroke="#b0b0b0" stroke-width="1"/>"##,
        dec(&px(&zero)),
        dec(&height)
    );
    if points.len() > 1 {
        let chain: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", dec(&px(x)), dec(&py(y))))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#1f3a5f" stroke-width="2"/>"##,
            chain.join(" ")
        );
    }
    for (x, y) in points {
        let _ = writeln!(
            svg,
            r##"<circle cx="{}" cy="{}" r="3.5" fill="#a23b2e"/>"##,
            dec(&px(x)),
            dec(&py(y))
        );
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{}" font-size="11" font-family="monospace" fill="#333">({},{})</text>"##,
            dec(&(px(x) + rat(5))),
            dec(&(py(y) - rat(5))),
            crate::output::rat_str(x),
            crate::output::rat_str(y)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
