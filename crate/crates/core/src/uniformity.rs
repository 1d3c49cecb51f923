//! Perceptual-uniformity diagnostics for finished colour maps.
//!
//! A flat spot is a maximal run of steps whose `|ΔL|` falls below a quarter
//! of the map's mean `|ΔL|`. A jump is a step whose ΔE76 exceeds three times
//! the mean step. A gradient reversal is an unsmoothed sign flip of ΔL
//! between two steps that are both above the flat-spot threshold and at
//! most one flat step apart; it shows up as a false feature in rendered data.
//!
//! Short flat spots that straddle a lightness extremum are what smoothing a
//! reversal is expected to leave behind, and are reported but not counted
//! against the map. Maps spanning less than 10 L units are judged on ΔE76
//! instead of ΔL.

use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::{Attribute, ColorMap};
use crate::colorspace::LabColor;
use crate::equalize::effective_sigma;
use crate::error::{Error, Result};

pub const FLAT_FRACTION: f64 = 0.25;
pub const JUMP_FACTOR: f64 = 3.0;
/// Smoothing width assumed for maps without provenance.
pub const DEFAULT_REVERSAL_SIGMA: f64 = 7.0;
/// Lightness range below which a map counts as low-contrast.
pub const LOW_CONTRAST_RANGE: f64 = 10.0;
// floor for the flat-spot threshold so isoluminant maps read as one flat run
const MIN_FLAT_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub cov: f64,
}

impl StepStats {
    pub fn of(v: &[f64]) -> StepStats {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        StepStats {
            mean,
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            cov: if mean > 0.0 { var.sqrt() / mean } else { f64::INFINITY },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlatMeasure {
    Lightness,
    Colour,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatSpot {
    /// First step of the run; step `i` joins entry `i` to entry `i + 1`.
    pub start: usize,
    /// Number of steps in the run.
    pub len: usize,
    /// Extent as a fraction of the map's steps.
    pub fraction: f64,
    pub measure: FlatMeasure,
    /// Left by design: a smoothed lightness reversal or an isoluminant map.
    pub expected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscontinuityKind {
    Jump,
    GradientReversal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discontinuity {
    pub step: usize,
    pub kind: DiscontinuityKind,
    /// ΔE76 of the step for jumps, the smaller `|ΔL|` either side for reversals.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub name: String,
    pub n: usize,
    pub cyclic: bool,
    pub lightness: Vec<f64>,
    /// Signed lightness change per step.
    pub delta_l: Vec<f64>,
    pub delta_e: Vec<f64>,
    pub delta_l_stats: StepStats,
    pub delta_e_stats: StepStats,
    pub lightness_range: f64,
    pub low_contrast: bool,
    /// Half-width, in entries, allowed for flat spots left by smoothing.
    pub reversal_window: f64,
    pub flat_spots: Vec<FlatSpot>,
    pub discontinuities: Vec<Discontinuity>,
}

impl UniformityReport {
    pub fn unexpected_flat_spots(&self) -> impl Iterator<Item = &FlatSpot> {
        self.flat_spots.iter().filter(|f| !f.expected)
    }

    pub fn is_clean(&self) -> bool {
        self.unexpected_flat_spots().next().is_none() && self.discontinuities.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "map: {} ({} entries{})",
            self.name,
            self.n,
            if self.cyclic { ", cyclic" } else { "" }
        );
        let _ = writeln!(
            s,
            "lightness range: {:.3}{}",
            self.lightness_range,
            if self.low_contrast {
                " (low contrast: judged on dE76)"
            } else {
                ""
            }
        );
        for (label, st) in [("|dL|", &self.delta_l_stats), ("dE76", &self.delta_e_stats)] {
            let _ = writeln!(
                s,
                "{label}: mean {:.5} min {:.5} max {:.5} cov {:.5}",
                st.mean, st.min, st.max, st.cov
            );
        }
        let _ = writeln!(s, "flat spots: {}", self.flat_spots.len());
        for f in &self.flat_spots {
            let _ = writeln!(
                s,
                "  steps {}..{} ({:.1}% of map, {:?}){}",
                f.start,
                wrapped_end(f.start + f.len, self.delta_l.len()),
                100.0 * f.fraction,
                f.measure,
                if f.expected { " expected" } else { "" }
            );
        }
        let _ = writeln!(s, "discontinuities: {}", self.discontinuities.len());
        for d in &self.discontinuities {
            let _ = writeln!(s, "  step {} {:?} ({:.4})", d.step, d.kind, d.magnitude);
        }
        let _ = writeln!(s, "verdict: {}", if self.is_clean() { "clean" } else { "flagged" });
        s
    }

    /// `index,L,dL,dE` rows; the step columns are empty on the last entry of
    /// an open map.
    pub fn profile_csv(&self) -> String {
        let mut s = String::from("index,L,dL,dE\n");
        for i in 0..self.n {
            if i < self.delta_l.len() {
                let _ = writeln!(
                    s,
                    "{i},{:.6},{:.6},{:.6}",
                    self.lightness[i], self.delta_l[i], self.delta_e[i]
                );
            } else {
                let _ = writeln!(s, "{i},{:.6},,", self.lightness[i]);
            }
        }
        s
    }
}

pub fn analyze_uniformity(map: &ColorMap) -> Result<UniformityReport> {
    let sigma = map
        .provenance
        .as_ref()
        .map(|p| p.sigma)
        .filter(|&s| s > 0.0)
        .unwrap_or(DEFAULT_REVERSAL_SIGMA);
    analyze_with_sigma(map, sigma)
}

/// As [`analyze_uniformity`] with an explicit smoothing width (in entries of a
/// 256-entry map) for classifying reversal flat spots.
pub fn analyze_with_sigma(map: &ColorMap, sigma: f64) -> Result<UniformityReport> {
    let n = map.entries.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "uniformity analysis needs at least 2 entries, got {n}"
        )));
    }
    let cyclic = map.attributes.contains(&Attribute::Cyclic);
    let lab = map.lab_entries()?;
    let lightness: Vec<f64> = lab.iter().map(|c| c.l).collect();
    let pairs: Vec<(&LabColor, &LabColor)> = step_pairs(&lab, cyclic);
    let delta_l: Vec<f64> = pairs.iter().map(|(a, b)| b.l - a.l).collect();
    let delta_e: Vec<f64> = pairs.iter().map(|(a, b)| crate::colorspace::delta_e76(a, b)).collect();
    let abs_dl: Vec<f64> = delta_l.iter().map(|v| v.abs()).collect();
    let delta_l_stats = StepStats::of(&abs_dl);
    let delta_e_stats = StepStats::of(&delta_e);
    let lo = lightness.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lightness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lightness_range = hi - lo;
    let low_contrast = lightness_range < LOW_CONTRAST_RANGE;
    let window = 3.0 * effective_sigma(sigma, n);
    let steps = delta_l.len();

    let mut flat_spots = Vec::new();
    let l_threshold = (FLAT_FRACTION * delta_l_stats.mean).max(MIN_FLAT_THRESHOLD);
    for (start, len) in runs(&abs_dl, l_threshold, cyclic) {
        let at_reversal = (len as f64) <= window && contains_extremum(&delta_l, start, len, cyclic);
        flat_spots.push(FlatSpot {
            start,
            len,
            fraction: len as f64 / steps as f64,
            measure: FlatMeasure::Lightness,
            expected: low_contrast || at_reversal,
        });
    }
    if low_contrast {
        let e_threshold = FLAT_FRACTION * delta_e_stats.mean;
        for (start, len) in runs(&delta_e, e_threshold, cyclic) {
            flat_spots.push(FlatSpot {
                start,
                len,
                fraction: len as f64 / steps as f64,
                measure: FlatMeasure::Colour,
                expected: false,
            });
        }
    }

    let mut discontinuities = Vec::new();
    for (i, &de) in delta_e.iter().enumerate() {
        if de > JUMP_FACTOR * delta_e_stats.mean {
            discontinuities.push(Discontinuity {
                step: i,
                kind: DiscontinuityKind::Jump,
                magnitude: de,
            });
        }
    }
    if !low_contrast {
        // a sharp peak sampled symmetrically leaves one near-zero step between
        // the rising and falling steps, so look one step further as well
        let at = |i: usize| delta_l[i % steps];
        for i in 0..steps {
            for gap in 1..=2 {
                if !cyclic && i + gap >= steps {
                    break;
                }
                let (a, b) = (at(i), at(i + gap));
                let smaller = a.abs().min(b.abs());
                let bridged = gap == 1 || at(i + 1).abs() <= l_threshold;
                if a * b < 0.0 && smaller > l_threshold && bridged {
                    discontinuities.push(Discontinuity {
                        step: i,
                        kind: DiscontinuityKind::GradientReversal,
                        magnitude: smaller,
                    });
                    break;
                }
            }
        }
        discontinuities.sort_by_key(|d| d.step);
    }

    Ok(UniformityReport {
        name: map.name.clone(),
        n,
        cyclic,
        lightness,
        delta_l,
        delta_e,
        delta_l_stats,
        delta_e_stats,
        lightness_range,
        low_contrast,
        reversal_window: window,
        flat_spots,
        discontinuities,
    })
}

fn wrapped_end(end: usize, steps: usize) -> usize {
    if end > steps {
        end - steps
    } else {
        end
    }
}

fn step_pairs(lab: &[LabColor], cyclic: bool) -> Vec<(&LabColor, &LabColor)> {
    let mut v: Vec<_> = lab.windows(2).map(|w| (&w[0], &w[1])).collect();
    if cyclic {
        v.push((&lab[lab.len() - 1], &lab[0]));
    }
    v
}

/// Maximal runs of `values < threshold` as `(start, len)`; on cyclic maps a
/// run touching both ends is merged across the wrap.
fn runs(values: &[f64], threshold: f64, cyclic: bool) -> Vec<(usize, usize)> {
    let n = values.len();
    let mut out: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        if values[i] < threshold {
            let start = i;
            while i < n && values[i] < threshold {
                i += 1;
            }
            out.push((start, i - start));
        } else {
            i += 1;
        }
    }
    if cyclic && out.len() >= 2 {
        let first = out[0];
        let last = out[out.len() - 1];
        if first.0 == 0 && last.0 + last.1 == n {
            out.pop();
            out[0] = (last.0, last.1 + first.1);
        }
    }
    out
}

/// Whether ΔL changes sign within the run or against its neighbouring steps.
fn contains_extremum(delta_l: &[f64], start: usize, len: usize, cyclic: bool) -> bool {
    let n = delta_l.len() as isize;
    let idx: Vec<usize> = (start as isize - 1..=(start + len) as isize)
        .filter_map(|i| {
            if cyclic {
                Some(i.rem_euclid(n) as usize)
            } else if (0..n).contains(&i) {
                Some(i as usize)
            } else {
                None
            }
        })
        .collect();
    let signs: Vec<f64> = idx
        .iter()
        .map(|&i| delta_l[i])
        .filter(|v| v.abs() > 1e-12)
        .map(f64::signum)
        .collect();
    signs.windows(2).any(|w| w[0] != w[1])
}
