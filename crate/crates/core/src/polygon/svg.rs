use std::fmt::Write;

use crate::field::rat::fmt_rat;
use crate::mpoly::Monomial;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// Standalone 640×480 SVG of the support points, labelled `(b,a)`, with the
/// lower hull chain drawn over them. `b` runs right, `a` runs up.
pub fn polygon_svg(points: &[Monomial], chain: &[Monomial], title: &str) -> String {
    let max_b = points.iter().map(|p| p.y).max().unwrap_or(0).max(1) as f64;
    let max_a = points.iter().map(|p| p.x.to_f64()).fold(1.0, f64::max);
    let sx = (WIDTH - 2.0 * MARGIN) / max_b;
    let sy = (HEIGHT - 2.0 * MARGIN) / max_a;
    let px = |p: &Monomial| (MARGIN + p.y as f64 * sx, HEIGHT - MARGIN - p.x.to_f64() * sy);
    let origin = (MARGIN, HEIGHT - MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for b in 0..=max_b as u32 {
        let x = MARGIN + b as f64 * sx;
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{MARGIN}" stroke="#eee"/>"##,
            origin.1
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{b}</text>"#,
            origin.1 + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        origin.0,
        origin.1,
        WIDTH - MARGIN / 2.0,
        origin.1
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        origin.0,
        origin.1,
        origin.0,
        MARGIN / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">b (y-exponent)</text>"#,
        WIDTH - MARGIN / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" font-family="sans-serif" font-size="12">a (x-exponent)</text>"#,
        MARGIN / 2.0 - 6.0
    );

    if chain.len() >= 2 {
        let path: Vec<String> = chain
            .iter()
            .map(|p| {
                let (x, y) = px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
            path.join(" ")
        );
    }
    for p in points {
        let (x, y) = px(p);
        let on_chain = chain.contains(p);
        let fill = if on_chain { "#c0392b" } else { "#2c3e50" };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">({},{})</text>"#,
            x + 6.0,
            y - 6.0,
            p.y,
            fmt_rat(&p.x)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat::{int, rat};

    #[test]
    fn labels_points_and_draws_chain() {
        let points = vec![
            Monomial::new(0, int(4)),
            Monomial::new(1, int(2)),
            Monomial::new(2, int(1)),
            Monomial::new(3, int(0)),
            Monomial::new(0, rat(2, 3)),
        ];
        let chain = vec![Monomial::new(0, rat(2, 3)), Monomial::new(3, int(0))];
        let svg = polygon_svg(&points, &chain, "f & g");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains(r#"width="640" height="480""#));
        for label in ["(0,4)", "(1,2)", "(2,1)", "(3,0)", "(0,2/3)"] {
            assert!(svg.contains(label), "{label}");
        }
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("f &amp; g"));
    }
}
