//! Test images for judging colour maps by eye.
//!
//! The linear image is a ramp with a superimposed sine grating whose
//! amplitude grows quadratically from nothing at the bottom row to full at
//! the top; flat spots in a colour map hide the grating. The cyclic image is
//! a spiral ramp of polar angle carrying a sine grating that fades to
//! nothing at the centre.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::grid::ScalarGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearTestSpec {
    pub width: usize,
    pub height: usize,
    /// Sine wavelength in pixels.
    pub wavelength: f64,
    /// Peak-to-trough sine amplitude as a fraction of the data range.
    pub amplitude: f64,
}

impl Default for LinearTestSpec {
    fn default() -> Self {
        LinearTestSpec {
            width: 512,
            height: 256,
            wavelength: 8.0,
            amplitude: 0.10,
        }
    }
}

impl LinearTestSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 1 {
            return Err(Error::InvalidArgument(format!(
                "linear test image needs width >= 2 and height >= 1, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.wavelength >= 2.0) || !self.wavelength.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "wavelength must be at least 2 pixels, got {}",
                self.wavelength
            )));
        }
        if !(self.amplitude > 0.0 && self.amplitude < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "amplitude must lie in (0, 0.5), got {}",
                self.amplitude
            )));
        }
        Ok(())
    }
}

/// Values before the per-row normalization to 0..255.
///
/// `v = (1 - A) x / (W - 1) + (A / 2) m(y) sin(2 pi x / lambda)` with
/// `m = (d / (H - 1))^2` and `d` the distance from the bottom row. The ramp is
/// shortened by the sine's peak-to-trough so the top row still spans about
/// unit range.
pub fn linear_test_value(spec: &LinearTestSpec, x: usize, y: usize) -> f64 {
    let a = spec.amplitude;
    let ramp = x as f64 / (spec.width - 1) as f64;
    let m = if spec.height > 1 {
        let d = (spec.height - 1 - y) as f64 / (spec.height - 1) as f64;
        d * d
    } else {
        1.0
    };
    (1.0 - a) * ramp + 0.5 * a * m * (TAU * x as f64 / spec.wavelength).sin()
}

pub fn linear_test_image(spec: &LinearTestSpec) -> Result<ScalarGrid> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let mut values = Vec::with_capacity(w * h);
    for y in 0..h {
        let row: Vec<f64> = (0..w).map(|x| linear_test_value(spec, x, y)).collect();
        let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        values.extend(row.iter().map(|v| (v - lo) / (hi - lo) * 255.0));
    }
    ScalarGrid::new(w, h, values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicTestSpec {
    pub size: usize,
    pub cycles: u32,
    /// Sine amplitude in radians.
    pub amplitude: f64,
}

impl Default for CyclicTestSpec {
    fn default() -> Self {
        CyclicTestSpec {
            size: 512,
            cycles: 100,
            amplitude: PI / 10.0,
        }
    }
}

impl CyclicTestSpec {
    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::InvalidArgument(format!(
                "cyclic test image needs size >= 2, got {}",
                self.size
            )));
        }
        if self.cycles < 1 {
            return Err(Error::InvalidArgument("cycles must be at least 1".into()));
        }
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "amplitude must be a non-negative number, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }
}

/// Value at polar angle `theta` (anticlockwise from the rightward direction)
/// and radius `rho` relative to the rim, in `[0, 2 pi)`.
pub fn cyclic_test_value(spec: &CyclicTestSpec, rho: f64, theta: f64) -> f64 {
    let theta = theta.rem_euclid(TAU);
    let m = rho * rho;
    wrap_tau(theta + spec.amplitude * m * (spec.cycles as f64 * theta).sin())
}

/// Square spiral image; pixels further than `size / 2` from the centre are
/// masked.
pub fn cyclic_test_image(spec: &CyclicTestSpec) -> Result<ScalarGrid> {
    spec.validate()?;
    let s = spec.size;
    let c = (s - 1) as f64 / 2.0;
    let radius = s as f64 / 2.0;
    ScalarGrid::from_fn(s, s, |x, y| {
        let dx = x as f64 - c;
        let dy = c - y as f64;
        let r = dx.hypot(dy);
        if r > radius {
            f64::NAN
        } else {
            cyclic_test_value(spec, r / radius, dy.atan2(dx))
        }
    })
}

fn wrap_tau(v: f64) -> f64 {
    let w = v.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2 pi for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}
