//! Static SVG 1.1 figures: polylines, junction markers and text labels.

use std::fmt::Write;

use elastnet::Vec2;

const STROKE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Default)]
pub struct Figure {
    pub polylines: Vec<Vec<Vec2>>,
    pub markers: Vec<Vec2>,
    pub labels: Vec<(Vec2, String)>,
}

impl Figure {
    pub fn render(&self) -> String {
        let pts = self
            .polylines
            .iter()
            .flatten()
            .chain(&self.markers)
            .chain(self.labels.iter().map(|l| &l.0));
        let (mut lo, mut hi) = (Vec2::new(f64::MAX, f64::MAX), Vec2::new(f64::MIN, f64::MIN));
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if lo.x > hi.x {
            lo = Vec2::new(-1.0, -1.0);
            hi = Vec2::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let margin = 0.05 * span;
        let (w, h) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
        let stroke = span / 400.0;

        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        // y is flipped so the figure keeps the mathematical orientation
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            num((600.0 * h / w).round()),
            num(lo.x - margin),
            num(-hi.y - margin),
            num(w),
            num(h)
        );
        for (i, line) in self.polylines.iter().enumerate() {
            let coords: Vec<String> = line.iter().map(|p| format!("{},{}", num(p.x), num(-p.y))).collect();
            let _ = writeln!(
                out,
                "  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>",
                STROKE[i % STROKE.len()],
                num(stroke),
                coords.join(" ")
            );
        }
        for m in &self.markers {
            let _ = writeln!(
                out,
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
                num(m.x),
                num(-m.y),
                num(3.0 * stroke)
            );
        }
        for (p, text) in &self.labels {
            let _ = writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>",
                num(p.x),
                num(-p.y),
                num(span / 30.0),
                escape(text)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viewbox_has_margin() {
        let fig = Figure {
            polylines: vec![vec![Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0), Vec2::new(10.0, 10.0)]],
            markers: vec![Vec2::new(0.0, 0.0)],
            labels: vec![(Vec2::new(5.0, 5.0), "a<b".into())],
        };
        let svg = fig.render();
        assert!(svg.contains("viewBox=\"-0.5 -10.5 11 11\""), "{svg}");
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("points=\"0,0 10,0 10,-10\""));
    }

    #[test]
    fn numbers_are_trimmed() {
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(-0.0000001), "0");
        assert_eq!(num(2.0), "2");
    }
}
