//! Static SVG snapshot: the polygon as one stroked path, the hull boundary
//! dashed, and an optional highlighted sub-polygon.

use std::fmt::Write as _;

use eszk_core::{convex_hull, Point, Polygon};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    off_x: f64,
    off_y: f64,
}

impl Frame {
    fn fit(points: &[Point]) -> Self {
        let xs = points.iter().map(|p| p.x() as f64);
        let ys = points.iter().map(|p| p.y() as f64);
        let (min_x, max_x) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        let (min_y, max_y) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        let span = (max_x - min_x).max(max_y - min_y).max(1.0);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        // center the shorter side
        let off_x = MARGIN + (SIZE - 2.0 * MARGIN - (max_x - min_x) * scale) / 2.0;
        let off_y = MARGIN + (SIZE - 2.0 * MARGIN - (max_y - min_y) * scale) / 2.0;
        Frame {
            min_x,
            max_y,
            scale,
            off_x,
            off_y,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.off_x + (p.x() as f64 - self.min_x) * self.scale,
            self.off_y + (self.max_y - p.y() as f64) * self.scale,
        )
    }
}

fn path(frame: &Frame, pts: impl IntoIterator<Item = Point>) -> String {
    let mut d = String::new();
    for (i, p) in pts.into_iter().enumerate() {
        let (x, y) = frame.map(p);
        let _ = write!(d, "{}{x:.2} {y:.2} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

pub fn render(p: &Polygon, highlight: Option<&[usize]>) -> String {
    let frame = Frame::fit(p.vertices());
    let hull = convex_hull(p.vertices()).expect("polygons are nonempty");
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"  <path d="{}" fill="none" stroke="gray" stroke-width="1.5" stroke-dasharray="8 6"/>"#,
        path(&frame, hull.cycle.iter().copied())
    );
    let _ = writeln!(
        s,
        r#"  <path d="{}" fill="none" stroke="black" stroke-width="2" stroke-linejoin="round"/>"#,
        path(&frame, p.vertices().iter().copied())
    );
    if let Some(idx) = highlight {
        let _ = writeln!(
            s,
            r#"  <path d="{}" fill="none" stroke="crimson" stroke-width="3"/>"#,
            path(&frame, idx.iter().map(|&i| p.vertex(i)))
        );
    }
    for (i, &v) in p.vertices().iter().enumerate() {
        let (x, y) = frame.map(v);
        let _ = writeln!(s, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="14">{i}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    s.push_str("</svg>\n");
    s
}
