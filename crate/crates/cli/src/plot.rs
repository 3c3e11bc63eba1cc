//! Deterministic SVG heat map of a planar minimal time function.

use std::fmt::Write;

use mintime_core::geometry::rat::vec_to_f64;
use mintime_core::scene::Scene;
use mintime_core::{Error, Result};

pub struct PlotOptions {
    /// The window is `[−half_width, half_width]²`.
    pub half_width: f64,
    /// Cells per side.
    pub resolution: usize,
}

const SIZE: f64 = 480.0;

/// Blue (fast) to yellow (slow); the target is drawn black and unreachable
/// cells light gray.
fn color(t: f64, t_max: f64) -> String {
    if !t.is_finite() {
        return "#dddddd".into();
    }
    if t <= 0.0 {
        return "#000000".into();
    }
    let s = if t_max > 0.0 { (t / t_max).clamp(0.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64| (a + (b - a) * s).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(40.0, 250.0), lerp(60.0, 220.0), lerp(200.0, 40.0))
}

pub fn svg(scene: &Scene, opts: &PlotOptions) -> Result<String> {
    if scene.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            operation: "plotting",
            dim: scene.dim(),
            limit: 2,
        });
    }
    if opts.resolution == 0 || !(opts.half_width > 0.0) {
        return Err(Error::InvalidInput("plot window and resolution must be positive".into()));
    }
    let t = scene.time_function()?;
    let n = opts.resolution;
    let w = opts.half_width;
    let step = 2.0 * w / n as f64;
    let values: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            // Row 0 is the top of the picture.
            t.eval(&[-w + (i as f64 + 0.5) * step, w - (j as f64 + 0.5) * step])
        })
        .collect();
    let t_max = values.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let cell = SIZE / n as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{} on [{:.3}, {:.3}]², max T {:.4}</title>", scene.name, -w, w, t_max);
    for (k, v) in values.iter().enumerate() {
        let (i, j) = (k % n, k / n);
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
            i as f64 * cell,
            j as f64 * cell,
            cell,
            cell,
            color(*v, t_max)
        );
    }
    for x in &scene.points {
        let p = vec_to_f64(x);
        let px = (p[0] + w) / (2.0 * w) * SIZE;
        let py = (w - p[1]) / (2.0 * w) * SIZE;
        let _ = writeln!(
            out,
            r##"<circle cx="{px:.3}" cy="{py:.3}" r="4" fill="#e03030" stroke="#ffffff" stroke-width="1"/>"##
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
