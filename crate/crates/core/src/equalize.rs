//! Perceptual contrast equalization of colour-map paths.
//!
//! The path is sampled densely, the cumulative contrast between successive
//! samples is formed, and the parameters that hit `n` equally spaced
//! cumulative-contrast levels are recovered by linear interpolation of that
//! curve. Each further pass resamples densely between the previous output
//! parameters and repeats the inversion, which removes the interpolation
//! error of the earlier pass.

use crate::colorspace::LabColor;
use crate::error::{Error, Result};
use crate::spline::{ContrastMetric, MapPath, SampledPath};

/// Number of dense samples taken along the path before each inversion.
pub const DENSE_SAMPLES: usize = 2048;

/// Default number of recursive equalization passes.
pub const DEFAULT_ITERATIONS: usize = 15;

/// Reference map length for smoothing widths.
pub const SIGMA_REFERENCE_LEN: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualizeSpec {
    pub n: usize,
    pub metric: ContrastMetric,
    pub iterations: usize,
    pub cyclic: bool,
}

impl EqualizeSpec {
    /// Spec with default iterations, matching the path's cyclicity.
    pub fn for_path(path: &MapPath, n: usize, metric: ContrastMetric) -> Self {
        EqualizeSpec {
            n,
            metric,
            iterations: DEFAULT_ITERATIONS,
            cyclic: path.is_cyclic(),
        }
    }

    fn validate(&self, path: &MapPath) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "equalized map needs at least 2 entries, got {}",
                self.n
            )));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        if self.cyclic != path.is_cyclic() {
            return Err(Error::InvalidArgument(
                "equalize spec cyclicity does not match the path".into(),
            ));
        }
        Ok(())
    }
}

/// Picks the lightness metric unless the path spans less than 10 L units.
pub fn auto_metric(path: &MapPath) -> ContrastMetric {
    let s = path.sample_at((0..=DENSE_SAMPLES).map(|i| i as f64 / DENSE_SAMPLES as f64).collect());
    let (lo, hi) = s
        .samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c.l), hi.max(c.l))
        });
    if hi - lo >= 10.0 {
        ContrastMetric::Lightness
    } else {
        ContrastMetric::Cie76
    }
}

/// Samples `spec.n` colours along `path` with equal successive contrast.
pub fn equalize(path: &MapPath, spec: &EqualizeSpec) -> Result<SampledPath> {
    equalize_between(path, spec, 0.0, 1.0)
}

/// As [`equalize`], restricted to the parameter interval `[t0, t1]` of an
/// open path.
pub fn equalize_between(path: &MapPath, spec: &EqualizeSpec, t0: f64, t1: f64) -> Result<SampledPath> {
    spec.validate(path)?;
    if !(0.0..=1.0).contains(&t0) || !(0.0..=1.0).contains(&t1) || t0 >= t1 {
        return Err(Error::InvalidArgument(format!(
            "invalid parameter interval [{t0}, {t1}]"
        )));
    }
    if path.is_cyclic() && (t0 != 0.0 || t1 != 1.0) {
        return Err(Error::InvalidArgument(
            "cyclic paths are equalized over their whole length".into(),
        ));
    }
    let uniform: Vec<f64> = (0..=DENSE_SAMPLES)
        .map(|i| t0 + (t1 - t0) * i as f64 / DENSE_SAMPLES as f64)
        .collect();
    // first pass treats the uniform dense grid as the current sampling
    let mut params = remap(path, &uniform, spec.n, spec.metric, (t0, t1), false)?;
    for _ in 1..spec.iterations {
        params = remap(path, &params, spec.n, spec.metric, (t0, t1), path.is_cyclic())?;
    }
    Ok(path.sample_at(params))
}

/// One further equalization pass starting from an existing sampling.
pub fn refine(path: &MapPath, sampled: &SampledPath, metric: ContrastMetric) -> Result<SampledPath> {
    if sampled.len() < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let domain = if path.is_cyclic() {
        (0.0, 1.0)
    } else {
        (sampled.params[0], sampled.params[sampled.len() - 1])
    };
    let params = remap(path, &sampled.params, sampled.len(), metric, domain, path.is_cyclic())?;
    Ok(path.sample_at(params))
}

/// Subdivides the current sampling, accumulates contrast and inverts the
/// cumulative curve at `n` equispaced levels.
///
/// `current` holds increasing parameters. For cyclic paths the sampling is
/// closed with `t = 1` unless `current` already ends there (`close` false).
fn remap(
    path: &MapPath,
    current: &[f64],
    n: usize,
    metric: ContrastMetric,
    domain: (f64, f64),
    close: bool,
) -> Result<Vec<f64>> {
    let cyclic = path.is_cyclic();
    let mut knots: Vec<f64> = current.to_vec();
    if close {
        knots.push(1.0);
    }
    let intervals = knots.len() - 1;
    let sub = DENSE_SAMPLES.div_ceil(intervals).max(1);
    let breaks = path.breakpoints();

    // segment joins go into the dense grid so chords never cut a corner
    let mut dense = Vec::with_capacity(intervals * sub + breaks.len() + 1);
    for w in knots.windows(2) {
        let first = dense.len();
        for k in 0..sub {
            dense.push(w[0] + (w[1] - w[0]) * k as f64 / sub as f64);
        }
        dense.extend(breaks.iter().filter(|&&t| t > w[0] && t < w[1]));
        dense[first..].sort_by(f64::total_cmp);
    }
    dense.push(knots[intervals]);

    let colours: Vec<LabColor> = dense.iter().map(|&t| path.point_at(t)).collect();
    let mut cumulative = Vec::with_capacity(dense.len());
    cumulative.push(0.0);
    let mut acc = 0.0;
    for w in colours.windows(2) {
        acc += metric.between(&w[0], &w[1]);
        cumulative.push(acc);
    }
    let total = acc;
    if !(total > 1e-9) {
        return Err(Error::DegeneratePath(format!(
            "total {} contrast along the path is zero; use the cie76 metric",
            match metric {
                ContrastMetric::Lightness => "lightness",
                ContrastMetric::Cie76 => "CIE76",
            }
        )));
    }

    let levels = if cyclic { n } else { n - 1 };
    let mut out = Vec::with_capacity(n);
    let mut j = 0usize;
    for i in 0..n {
        let target = total * i as f64 / levels as f64;
        while j + 1 < cumulative.len() - 1 && cumulative[j + 1] <= target {
            j += 1;
        }
        let (c0, c1) = (cumulative[j], cumulative[j + 1]);
        let u = if c1 > c0 {
            ((target - c0) / (c1 - c0)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(dense[j] + (dense[j + 1] - dense[j]) * u);
    }
    out[0] = domain.0;
    if !cyclic {
        out[n - 1] = domain.1;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothSpec {
    /// Gaussian standard deviation in entries of a 256-entry map.
    pub sigma: f64,
    pub cyclic: bool,
}

/// Effective standard deviation in entries for a map of `n` entries.
pub fn effective_sigma(sigma: f64, n: usize) -> f64 {
    sigma * n as f64 / SIGMA_REFERENCE_LEN
}

/// Gaussian smoothing of L, a and b along the map index.
///
/// Open maps are extended past each end by point reflection through the end
/// sample, which leaves constant and linear profiles untouched; cyclic maps
/// wrap around. Samples no longer lie exactly on the path afterwards; the
/// parameters are kept as a record of where they came from.
pub fn smooth_reversals(s: &SampledPath, spec: &SmoothSpec) -> Result<SampledPath> {
    if !(spec.sigma >= 0.0) || !spec.sigma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "sigma must be a non-negative number, got {}",
            spec.sigma
        )));
    }
    let n = s.len();
    if spec.sigma == 0.0 || n < 3 {
        return Ok(s.clone());
    }
    let sigma = effective_sigma(spec.sigma, n);
    let radius = (4.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = {
        let raw: Vec<f64> = (-radius..=radius)
            .map(|k| (-0.5 * (k as f64 / sigma).powi(2)).exp())
            .collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    };

    let channels: [Vec<f64>; 3] = [
        s.samples.iter().map(|c| c.l).collect(),
        s.samples.iter().map(|c| c.a).collect(),
        s.samples.iter().map(|c| c.b).collect(),
    ];
    let smoothed: Vec<Vec<f64>> = channels
        .iter()
        .map(|x| {
            (0..n as isize)
                .map(|i| {
                    kernel
                        .iter()
                        .zip(-radius..=radius)
                        .map(|(w, k)| w * extended(x, i + k, spec.cyclic))
                        .sum()
                })
                .collect()
        })
        .collect();

    Ok(SampledPath {
        samples: (0..n)
            .map(|i| LabColor::new(smoothed[0][i], smoothed[1][i], smoothed[2][i]))
            .collect(),
        params: s.params.clone(),
        cyclic: s.cyclic,
    })
}

fn extended(x: &[f64], i: isize, cyclic: bool) -> f64 {
    let n = x.len() as isize;
    if cyclic {
        return x[i.rem_euclid(n) as usize];
    }
    if i < 0 {
        let m = (-i).min(n - 1) as usize;
        2.0 * x[0] - x[m]
    } else if i >= n {
        let m = (2 * (n - 1) - i).max(0) as usize;
        2.0 * x[(n - 1) as usize] - x[m]
    } else {
        x[i as usize]
    }
}
