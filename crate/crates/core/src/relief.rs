//! Relief shading, colour draping and power-law noise.
//!
//! Shading is Lambertian with no shadows or ambient term. Coordinates are
//! east = +x and north = -y (rows run southward), with the light azimuth
//! measured clockwise from north.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::catalog::ColorMap;
use crate::error::{Error, Result};
use crate::grid::{RgbImage, ScalarGrid};
use crate::render::{render, RenderPolicy, Rendered};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadingParams {
    /// Degrees clockwise from north.
    pub azimuth: f64,
    /// Degrees above the horizon.
    pub elevation: f64,
    pub gradient_scale: f64,
}

impl Default for ShadingParams {
    fn default() -> Self {
        ShadingParams {
            azimuth: 135.0,
            elevation: 45.0,
            gradient_scale: 1.0,
        }
    }
}

impl ShadingParams {
    pub fn validate(&self) -> Result<()> {
        if !self.azimuth.is_finite() {
            return Err(Error::NonFinite("azimuth"));
        }
        if !(self.elevation > 0.0 && self.elevation <= 90.0) {
            return Err(Error::InvalidArgument(format!(
                "elevation must lie in (0, 90], got {}",
                self.elevation
            )));
        }
        if !(self.gradient_scale > 0.0) || !self.gradient_scale.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gradient scale must be positive, got {}",
                self.gradient_scale
            )));
        }
        Ok(())
    }

    /// Unit vector toward the light in (east, north, up).
    pub fn light_vector(&self) -> [f64; 3] {
        let (az, el) = (self.azimuth.to_radians(), self.elevation.to_radians());
        [az.sin() * el.cos(), az.cos() * el.cos(), el.sin()]
    }
}

/// Shading intensity in `[0, 1]`; masked cells, and cells whose gradient
/// needs a masked neighbour, stay masked.
pub fn shade(grid: &ScalarGrid, params: &ShadingParams) -> Result<ScalarGrid> {
    params.validate()?;
    let (w, h) = grid.dims();
    if w < 2 || h < 2 {
        return Err(Error::InvalidArgument(format!(
            "shading needs a grid of at least 2x2, got {w}x{h}"
        )));
    }
    let l = params.light_vector();
    let s = params.gradient_scale;
    ScalarGrid::from_fn(w, h, |x, y| {
        let dzdx = derivative(x, w, |i| grid.get(i, y));
        // rows increase southward
        let dzdn = -derivative(y, h, |j| grid.get(x, j));
        let n = [-s * dzdx, -s * dzdn, 1.0];
        let norm = (n[0] * n[0] + n[1] * n[1] + 1.0).sqrt();
        let i = (n[0] * l[0] + n[1] * l[1] + n[2] * l[2]) / norm;
        if i.is_nan() {
            f64::NAN
        } else {
            i.clamp(0.0, 1.0)
        }
    })
}

fn derivative(i: usize, len: usize, z: impl Fn(usize) -> f64) -> f64 {
    if i == 0 {
        z(1) - z(0)
    } else if i == len - 1 {
        z(len - 1) - z(len - 2)
    } else {
        0.5 * (z(i + 1) - z(i - 1))
    }
}

/// Darkens each channel by the shading intensity. Masked shading cells leave
/// the colour unchanged.
pub fn combine_multiplicative(color: &RgbImage, shading: &ScalarGrid) -> Result<RgbImage> {
    shading.check_same_dims(color.dims())?;
    if let Some(bad) = shading
        .values()
        .iter()
        .find(|v| !v.is_nan() && !(0.0..=1.0).contains(*v))
    {
        return Err(Error::Range(format!("shading value {bad} outside [0, 1]")));
    }
    let s = shading.values();
    Ok(color.map_pixels(|i, c| if s[i].is_nan() { *c } else { c.scale(s[i]) }))
}

/// Renders `grid` through `map` and drapes the result over its own shading.
pub fn shade_and_drape(
    grid: &ScalarGrid,
    map: &ColorMap,
    policy: &RenderPolicy,
    params: &ShadingParams,
) -> Result<Rendered> {
    let rendered = render(grid, map, policy)?;
    let shading = shade(grid, params)?;
    Ok(Rendered {
        image: combine_multiplicative(&rendered.image, &shading)?,
        warnings: rendered.warnings,
    })
}

/// Noise with amplitude spectrum `1 / f^p`, normalized to `[0, 1]`.
///
/// Every frequency bin gets amplitude `f^-p` and a uniformly random phase
/// drawn in row-major order from a ChaCha8 stream seeded with `seed`; the
/// DC term is zero. The real part of the inverse transform is kept.
pub fn one_on_f_noise(width: usize, height: usize, p: f64, seed: u64) -> Result<ScalarGrid> {
    if width < 16 || height < 16 {
        return Err(Error::InvalidArgument(format!(
            "noise needs at least 16x16 pixels, got {width}x{height}"
        )));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "exponent must be non-negative, got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(width * height);
    for ky in 0..height {
        let fy = signed_freq(ky, height);
        for kx in 0..width {
            let fx = signed_freq(kx, width);
            let f = fx.hypot(fy);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let amp = if f == 0.0 { 0.0 } else { f.powf(-p) };
            data.push(Complex::from_polar(amp, phase));
        }
    }
    fft2(&mut data, width, height, true);
    let re: Vec<f64> = data.iter().map(|c| c.re).collect();
    let lo = re.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = re.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    ScalarGrid::new(width, height, re.iter().map(|v| (v - lo) / span).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumFit {
    /// Exponent of the fitted power law; `-p` for `1/f^p` data.
    pub slope: f64,
    /// Natural-log amplitude at `f = 1` cycle/pixel.
    pub intercept: f64,
    pub band: (f64, f64),
    /// RMS deviation of the binned log amplitudes from the line.
    pub residual: f64,
    /// `(f, mean amplitude)` of each occupied bin.
    pub points: Vec<(f64, f64)>,
}

/// Fit band used when none is given: `(4 / size, 0.25)` cycles/pixel.
pub fn default_band(width: usize, height: usize) -> (f64, f64) {
    (4.0 / width.min(height) as f64, 0.25)
}

const SPECTRUM_BINS: usize = 24;

/// Log-log least-squares fit to the radially averaged amplitude spectrum.
///
/// The grid is mean-subtracted and Hann-windowed before the transform.
/// Frequencies in `band` are grouped into logarithmically spaced bins; each
/// occupied bin contributes its mean frequency and mean amplitude.
pub fn spectrum_slope(grid: &ScalarGrid, band: (f64, f64)) -> Result<SpectrumFit> {
    let (w, h) = grid.dims();
    let (f_lo, f_hi) = band;
    if !(f_lo > 0.0 && f_lo < f_hi && f_hi <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "fit band must satisfy 0 < lo < hi <= 0.5, got ({f_lo}, {f_hi})"
        )));
    }
    if w.max(h) > 2 * w.min(h) {
        return Err(Error::InvalidArgument(format!(
            "spectrum needs an aspect ratio within 2:1, got {w}x{h}"
        )));
    }
    if grid.values().iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("spectrum of a masked grid".into()));
    }
    let mean = grid.values().iter().sum::<f64>() / (w * h) as f64;
    let hx = hann(w);
    let hy = hann(h);
    let mut data: Vec<Complex<f64>> = grid
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| Complex::new((v - mean) * hx[i % w] * hy[i / w], 0.0))
        .collect();
    fft2(&mut data, w, h, false);

    let (ln_lo, ln_hi) = (f_lo.ln(), f_hi.ln());
    let mut sum_f = [0.0; SPECTRUM_BINS];
    let mut sum_a = [0.0; SPECTRUM_BINS];
    let mut count = [0usize; SPECTRUM_BINS];
    for ky in 0..h {
        let fy = signed_freq(ky, h);
        for kx in 0..w {
            let f = signed_freq(kx, w).hypot(fy);
            if f < f_lo || f > f_hi {
                continue;
            }
            let b = (((f.ln() - ln_lo) / (ln_hi - ln_lo)) * SPECTRUM_BINS as f64) as usize;
            let b = b.min(SPECTRUM_BINS - 1);
            sum_f[b] += f;
            sum_a[b] += data[ky * w + kx].norm();
            count[b] += 1;
        }
    }
    let points: Vec<(f64, f64)> = (0..SPECTRUM_BINS)
        .filter(|&b| count[b] > 0)
        .map(|b| (sum_f[b] / count[b] as f64, sum_a[b] / count[b] as f64))
        .filter(|&(_, a)| a > 0.0)
        .collect();
    if points.len() < 3 {
        return Err(Error::Range(format!(
            "fit band ({f_lo}, {f_hi}) holds {} usable frequency bins",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    Ok(SpectrumFit {
        slope,
        intercept,
        band,
        residual,
        points,
    })
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / (n - 1) as f64).cos())
        .collect()
}

fn signed_freq(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64 / n as f64
    } else {
        (k as f64 - n as f64) / n as f64
    }
}

/// In-place 2-D transform of a row-major array (unnormalized).
fn fft2(data: &mut [Complex<f64>], w: usize, h: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (row, col) = if inverse {
        (planner.plan_fft_inverse(w), planner.plan_fft_inverse(h))
    } else {
        (planner.plan_fft_forward(w), planner.plan_fft_forward(h))
    };
    for r in data.chunks_exact_mut(w) {
        row.process(r);
    }
    let mut buf = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            buf[y] = data[y * w + x];
        }
        col.process(&mut buf);
        for y in 0..h {
            data[y * w + x] = buf[y];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorspace::RgbColor;

    #[test]
    fn flat_surface() {
        let g = ScalarGrid::filled(5, 4, 2.0).unwrap();
        for &(az, el) in &[(0.0, 90.0), (135.0, 45.0), (300.0, 12.5)] {
            let p = ShadingParams {
                azimuth: az,
                elevation: el,
                gradient_scale: 1.0,
            };
            let s = shade(&g, &p).unwrap();
            for v in s.values() {
                assert!((v - el.to_radians().sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn facing_slope_is_fully_lit() {
        // z rises eastward so the surface faces west
        let k = 0.5;
        let g = ScalarGrid::from_fn(6, 6, |x, _| k * x as f64).unwrap();
        let el = (1.0 / k).atan().to_degrees();
        let lit = |az: f64| {
            shade(
                &g,
                &ShadingParams {
                    azimuth: az,
                    elevation: el,
                    gradient_scale: 1.0,
                },
            )
            .unwrap()
        };
        assert!(lit(270.0).values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let a = lit(240.0).get(2, 2);
        let b = lit(200.0).get(2, 2);
        assert!(a < 1.0 && b < a);
    }

    #[test]
    fn shading_rejects_bad_input() {
        let g = ScalarGrid::filled(1, 4, 0.0).unwrap();
        assert!(shade(&g, &ShadingParams::default()).is_err());
        let g = ScalarGrid::filled(3, 3, 0.0).unwrap();
        let p = ShadingParams {
            elevation: 0.0,
            ..Default::default()
        };
        assert!(shade(&g, &p).is_err());
        let p = ShadingParams {
            gradient_scale: 0.0,
            ..Default::default()
        };
        assert!(shade(&g, &p).is_err());
    }

    #[test]
    fn multiplicative_combination() {
        let white = RgbImage::filled(3, 2, RgbColor::WHITE).unwrap();
        let half = ScalarGrid::filled(3, 2, 0.5).unwrap();
        let out = combine_multiplicative(&white, &half).unwrap();
        assert!(out.pixels().iter().all(|p| *p == RgbColor::grey(0.5)));
        let one = ScalarGrid::filled(3, 2, 1.0).unwrap();
        assert_eq!(combine_multiplicative(&white, &one).unwrap(), white);
        assert!(combine_multiplicative(&white, &ScalarGrid::filled(2, 2, 1.0).unwrap()).is_err());
    }

    #[test]
    fn noise_is_deterministic_and_normalized() {
        let a = one_on_f_noise(32, 16, 1.0, 3).unwrap();
        let b = one_on_f_noise(32, 16, 1.0, 3).unwrap();
        let c = one_on_f_noise(32, 16, 1.0, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.min_max(), Some((0.0, 1.0)));
        assert!(one_on_f_noise(8, 16, 1.0, 0).is_err());
        assert!(one_on_f_noise(16, 16, -1.0, 0).is_err());
    }

    #[test]
    fn spectrum_of_sinusoid_has_large_residual() {
        let g = ScalarGrid::from_fn(128, 128, |x, _| (std::f64::consts::TAU * x as f64 / 8.0).sin()).unwrap();
        let fit = spectrum_slope(&g, default_band(128, 128)).unwrap();
        let noise = one_on_f_noise(128, 128, 1.2, 1).unwrap();
        let good = spectrum_slope(&noise, default_band(128, 128)).unwrap();
        assert!(
            fit.residual > 10.0 * good.residual,
            "{} vs {}",
            fit.residual,
            good.residual
        );
    }

    #[test]
    fn spectrum_band_checks() {
        let g = ScalarGrid::filled(64, 64, 0.0).unwrap();
        assert!(spectrum_slope(&g, (0.3, 0.2)).is_err());
        assert!(spectrum_slope(&g, (0.1, 0.6)).is_err());
        let tall = ScalarGrid::filled(16, 64, 0.0).unwrap();
        assert!(spectrum_slope(&tall, (0.1, 0.4)).is_err());
        let noise = one_on_f_noise(16, 16, 1.0, 0).unwrap();
        assert!(matches!(spectrum_slope(&noise, (0.30, 0.301)), Err(Error::Range(_))));
    }
}
