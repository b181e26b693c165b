//! CSV and binary PPM encodings of a point cloud on the sphere.

use corrdyn_core::sphere::Chart;
use corrdyn_core::SpherePoint;
use std::fmt::Write;

/// `re,im,chart` rows: points with `|z| <= 1` in the `z` chart, the rest as
/// `u = 1/z` in the `u` chart, so every coordinate stays in the unit disk.
pub fn csv(points: &[SpherePoint]) -> String {
    let mut out = String::from("re,im,chart\n");
    for p in points {
        let (c, name) = match p.chart() {
            Chart::Z(z) => (z, "z"),
            Chart::U(u) => (u, "u"),
        };
        writeln!(out, "{},{},{name}", c.re, c.im).expect("writing to a string");
    }
    out
}

/// Square P6 image of `[-extent, extent]^2` in the `z` plane with
/// log-scaled hit counts, white on black. Points outside the window are
/// dropped. Returns the image and the number of points drawn.
pub fn ppm(points: &[SpherePoint], px: usize, extent: f64) -> (Vec<u8>, usize) {
    let mut counts = vec![0u32; px * px];
    let mut drawn = 0;
    for z in points.iter().filter_map(SpherePoint::affine) {
        let x = (z.re + extent) / (2.0 * extent) * px as f64;
        // image rows run top to bottom
        let y = (extent - z.im) / (2.0 * extent) * px as f64;
        if (0.0..px as f64).contains(&x) && (0.0..px as f64).contains(&y) {
            counts[y as usize * px + x as usize] += 1;
            drawn += 1;
        }
    }
    let top = counts.iter().copied().max().unwrap_or(0);
    let scale = if top > 0 {
        255.0 / (1.0 + top as f64).ln()
    } else {
        0.0
    };
    let mut out = format!("P6\n{px} {px}\n255\n").into_bytes();
    out.reserve(3 * px * px);
    for c in counts {
        let g = ((1.0 + c as f64).ln() * scale).round() as u8;
        out.extend([g, g, g]);
    }
    (out, drawn)
}
