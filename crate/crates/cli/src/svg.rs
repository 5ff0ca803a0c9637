//! Static figure of base and platform with the six coloured directions.

use std::fmt::Write;

use pentapod_core::geometry::PlanarPoint;
use pentapod_core::moebius::special_directions;

const PANEL: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn colour(name: &str) -> &'static str {
    match name {
        "metallic" => "#8a8f98",
        "blue" => "#1f5fbf",
        "green" => "#2e9d3a",
        "orange" => "#f08a00",
        "yellow" => "#d9b800",
        "pink" => "#e0609e",
        _ => "#000000",
    }
}

struct Frame {
    min: [f64; 2],
    scale: f64,
    dx: f64,
}

impl Frame {
    fn fit(pts: &[[f64; 2]], dx: f64) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in pts {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-9);
        Frame { min, scale: (PANEL - 2.0 * MARGIN) / span, dx }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (self.dx + MARGIN + (p[0] - self.min[0]) * self.scale, PANEL - MARGIN - (p[1] - self.min[1]) * self.scale)
    }
}

fn panel(out: &mut String, pts: &[PlanarPoint; 5], label: &str, dx: f64, dirs: &[(&'static str, PlanarPoint)]) {
    let xy: Vec<[f64; 2]> = pts.iter().map(|p| p.to_f64()).collect();
    let f = Frame::fit(&xy, dx);
    writeln!(out, "<g id=\"{label}\">").unwrap();
    for (a, b) in [(0, 2), (2, 4), (1, 2), (2, 3)] {
        let (x1, y1) = f.map(xy[a]);
        let (x2, y2) = f.map(xy[b]);
        writeln!(out, "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#bbbbbb\"/>").unwrap();
    }
    // directions as short arrows from the centroid
    let c = [xy.iter().map(|p| p[0]).sum::<f64>() / 5.0, xy.iter().map(|p| p[1]).sum::<f64>() / 5.0];
    let (cx, cy) = f.map(c);
    for (name, d) in dirs {
        let v = d.to_f64();
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let (ex, ey) = (cx + 60.0 * v[0] / n, cy - 60.0 * v[1] / n);
        let col = colour(name);
        writeln!(out, "<line x1=\"{cx:.3}\" y1=\"{cy:.3}\" x2=\"{ex:.3}\" y2=\"{ey:.3}\" stroke=\"{col}\" stroke-width=\"2\"/>").unwrap();
        writeln!(out, "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"10\" fill=\"{col}\">{name}</text>", ex + 3.0, ey - 3.0).unwrap();
    }
    for (k, p) in xy.iter().enumerate() {
        let (x, y) = f.map(*p);
        writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"#000000\"/>").unwrap();
        writeln!(out, "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">{label}{}</text>", x + 6.0, y + 14.0, k + 1).unwrap();
    }
    writeln!(out, "</g>").unwrap();
}

pub fn render(base: &[PlanarPoint; 5], platform: &[PlanarPoint; 5]) -> String {
    let dirs = special_directions(base);
    let mut out = String::new();
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{PANEL}\">", 2.0 * PANEL).unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>").unwrap();
    panel(&mut out, base, "M", 0.0, &dirs);
    panel(&mut out, platform, "m", PANEL, &dirs);
    writeln!(out, "</svg>").unwrap();
    out
}
