//! Badly designed maps kept as negative examples for the analyzer.

use crate::catalog::{Attribute, ColorMap};
use crate::colorspace::RgbColor;

/// Fully saturated HSV hue circle, red → yellow → green → cyan → blue →
/// magenta → red.
pub fn hsv_hue_circle(n: usize) -> ColorMap {
    let entries = (0..n)
        .map(|i| hsv_to_rgb(360.0 * i as f64 / n as f64, 1.0, 1.0))
        .collect();
    ColorMap::new("hsv_hue_circle", entries, [Attribute::Cyclic])
}

/// Straight lines between RGB cube corners: blue → cyan → green → yellow →
/// red → magenta.
pub fn rgb_rainbow(n: usize) -> ColorMap {
    const CORNERS: [[f64; 3]; 6] = [
        [0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 0.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 1.0],
    ];
    let segs = (CORNERS.len() - 1) as f64;
    let entries = (0..n)
        .map(|i| {
            let x = if n > 1 { segs * i as f64 / (n - 1) as f64 } else { 0.0 };
            let k = (x.floor() as usize).min(CORNERS.len() - 2);
            let u = x - k as f64;
            let (a, b) = (CORNERS[k], CORNERS[k + 1]);
            RgbColor::new(
                a[0] + u * (b[0] - a[0]),
                a[1] + u * (b[1] - a[1]),
                a[2] + u * (b[2] - a[2]),
            )
        })
        .collect();
    ColorMap::new("rgb_rainbow", entries, [Attribute::Rainbow])
}

pub fn hsv_to_rgb(h: f64, s: f64, v: f64) -> RgbColor {
    let h = h.rem_euclid(360.0) / 60.0;
    let c = v * s;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    RgbColor::new(r + m, g + m, b + m)
}
