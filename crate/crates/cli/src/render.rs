//! Plot data: lattice CSV and a diverging-colour PPM of `q(p(s))`.

use std::fmt::Write as _;

use anyhow::Result;
use tri_implicit::implicitize::ErrorField;
use tri_implicit::{BarycentricPatch, ImplicitApprox};

pub fn csv(field: &ErrorField) -> String {
    let mut out = String::from("s2,s3,q_value,distance_estimate\n");
    for s in &field.samples {
        let d = s.distance.map(|d| d.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{}", s.s[1], s.s[2], s.value, d).unwrap();
    }
    out
}

const BACKGROUND: [u8; 3] = [128, 128, 128];

/// Symmetric diverging scale: white at zero, red for positive, blue for
/// negative, saturating at `±limit`.
pub fn diverging(v: f64, limit: f64) -> [u8; 3] {
    if limit <= 0.0 {
        return [255, 255, 255];
    }
    let t = (v / limit).clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - t.abs())).round() as u8;
    if t >= 0.0 {
        [255, fade, fade]
    } else {
        [fade, fade, 255]
    }
}

/// Binary PPM of the domain triangle `s₂, s₃ ≥ 0, s₂ + s₃ ≤ 1`, with `s₂`
/// to the right and `s₃` upwards. Pixels outside the triangle are grey.
pub fn ppm(approx: &ImplicitApprox, bp: &BarycentricPatch, size: usize) -> Result<Vec<u8>> {
    let q = approx.polynomial();
    let mut values = vec![None; size * size];
    let mut limit = 0.0f64;
    for row in 0..size {
        for col in 0..size {
            let s2 = (col as f64 + 0.5) / size as f64;
            let s3 = 1.0 - (row as f64 + 0.5) / size as f64;
            if s2 + s3 <= 1.0 {
                let v = q.evaluate(&bp.evaluate(&[1.0 - s2 - s3, s2, s3])?)?;
                limit = limit.max(v.abs());
                values[row * size + col] = Some(v);
            }
        }
    }
    let mut out = format!("P6\n{size} {size}\n255\n").into_bytes();
    for v in values {
        out.extend_from_slice(&v.map_or(BACKGROUND, |v| diverging(v, limit)));
    }
    Ok(out)
}
