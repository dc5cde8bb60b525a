//! CSV and SVG writers. Floats use Rust's shortest round-trip formatting,
//! poles are written as `NaN`; output is LF-terminated UTF-8.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;

/// A grid of values indexed `[t][x]`; `None` marks excluded points.
pub enum GridValues {
    Complex(Vec<Vec<Option<Complex64>>>),
    Real(Vec<Vec<Option<f64>>>),
}

impl GridValues {
    pub fn len(&self) -> usize {
        match self {
            GridValues::Complex(g) => g.iter().map(Vec::len).sum(),
            GridValues::Real(g) => g.iter().map(Vec::len).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn excluded(&self) -> usize {
        match self {
            GridValues::Complex(g) => g.iter().flatten().filter(|v| !v.is_some_and(|c| c.norm().is_finite())).count(),
            GridValues::Real(g) => g.iter().flatten().filter(|v| !v.is_some_and(f64::is_finite)).count(),
        }
    }

    /// Plotted scalar per point: `|ψ|` for complex grids, the value for real ones.
    fn scalar(&self, r: usize, c: usize) -> Option<f64> {
        let v = match self {
            GridValues::Complex(g) => g[r][c].map(|v| v.norm()),
            GridValues::Real(g) => g[r][c],
        };
        v.filter(|v| v.is_finite())
    }

    fn shape(&self) -> (usize, usize) {
        match self {
            GridValues::Complex(g) => (g.len(), g.first().map_or(0, Vec::len)),
            GridValues::Real(g) => (g.len(), g.first().map_or(0, Vec::len)),
        }
    }
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "NaN".to_string()
    }
}

/// `x,t,re,im,abs` or `x,t,value`, one row per grid point, time-major.
pub fn write_grid_csv(xs: &[f64], ts: &[f64], values: &GridValues, mut out: impl Write) -> io::Result<()> {
    let mut buf = String::new();
    match values {
        GridValues::Complex(g) => {
            buf.push_str("x,t,re,im,abs\n");
            for (i, &t) in ts.iter().enumerate() {
                for (j, &x) in xs.iter().enumerate() {
                    let v = g[i][j].unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                    let _ = writeln!(buf, "{},{},{},{},{}", num(x), num(t), num(v.re), num(v.im), num(v.norm()));
                }
            }
        }
        GridValues::Real(g) => {
            buf.push_str("x,t,value\n");
            for (i, &t) in ts.iter().enumerate() {
                for (j, &x) in xs.iter().enumerate() {
                    let _ = writeln!(buf, "{},{},{}", num(x), num(t), num(g[i][j].unwrap_or(f64::NAN)));
                }
            }
        }
    }
    out.write_all(buf.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, bytes)
}

/// Diverging blue-white-red for signed data, white-to-dark-red for
/// non-negative data; excluded points are grey.
fn color(v: Option<f64>, lo: f64, hi: f64, signed: bool) -> String {
    let Some(v) = v else {
        return "#808080".to_string();
    };
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round().clamp(0.0, 255.0) as u8;
    let (r, g, b) = if signed {
        let m = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let s = (v / m).clamp(-1.0, 1.0);
        if s >= 0.0 {
            (255, lerp(255.0, 0.0, s), lerp(255.0, 0.0, s))
        } else {
            (lerp(255.0, 0.0, -s), lerp(255.0, 0.0, -s), 255)
        }
    } else {
        let span = (hi - lo).max(f64::MIN_POSITIVE);
        let s = ((v - lo) / span).clamp(0.0, 1.0);
        (lerp(255.0, 128.0, s), lerp(255.0, 0.0, s), lerp(255.0, 0.0, s))
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// One rectangle per grid cell, time upwards, x to the right.
pub fn grid_svg(values: &GridValues, title: &str) -> String {
    let (rows, cols) = values.shape();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in 0..rows {
        for c in 0..cols {
            if let Some(v) = values.scalar(r, c) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    let signed = lo < 0.0;
    let cell = 3;
    let (w, h) = (cols * cell, rows * cell);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{}" viewBox="0 0 {w} {}">"#,
        h + 20,
        h + 20
    );
    let _ = writeln!(
        s,
        r#"<text x="2" y="14" font-family="monospace" font-size="11">{} [{}, {}]</text>"#,
        escape(title),
        num(lo),
        num(hi)
    );
    for r in 0..rows {
        let y = 20 + (rows - 1 - r) * cell;
        for c in 0..cols {
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{y}" width="{cell}" height="{cell}" fill="{}"/>"#,
                c * cell,
                color(values.scalar(r, c), lo, hi, signed)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
