//! Mapping gridded data through colour maps.
//!
//! Lookup is nearest-entry: a value's affine position in index space is
//! rounded half away from zero and clamped, so images contain only map
//! colours.

use crate::catalog::{Attribute, ColorMap};
use crate::colorspace::RgbColor;
use crate::error::{Error, Result};
use crate::grid::{RgbImage, ScalarGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueRange {
    /// Grid minimum and maximum over unmasked cells.
    Auto,
    Explicit(f64, f64),
    /// `v mod period` spread over all entries with wraparound.
    Cyclic(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenderMode {
    Linear(ValueRange),
    /// Symmetric range about `reference`, which lands on the central entry.
    Diverging {
        reference: f64,
    },
    Cyclic {
        period: f64,
        origin: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderPolicy {
    pub mode: RenderMode,
    /// Colour for masked cells.
    pub background: RgbColor,
}

impl RenderPolicy {
    pub fn new(mode: RenderMode) -> Self {
        RenderPolicy {
            mode,
            background: RgbColor::MID_GREY,
        }
    }

    pub fn linear() -> Self {
        Self::new(RenderMode::Linear(ValueRange::Auto))
    }

    pub fn diverging(reference: f64) -> Self {
        Self::new(RenderMode::Diverging { reference })
    }

    pub fn cyclic(period: f64, origin: f64) -> Self {
        Self::new(RenderMode::Cyclic { period, origin })
    }
}

/// A rendered image plus any notes about questionable inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub image: RgbImage,
    pub warnings: Vec<String>,
}

/// Entry index for `v` on the affine range `[lo, hi]`.
pub fn linear_index(v: f64, lo: f64, hi: f64, n: usize) -> usize {
    let x = ((v - lo) / (hi - lo) * (n - 1) as f64).round();
    x.clamp(0.0, (n - 1) as f64) as usize
}

/// Entry index for `v` on the symmetric range `reference ± half_range`.
///
/// Positions below the reference are rounded as mirror images of those above
/// it, so equal deviations either side land on mirror-image entries.
pub fn diverging_index(v: f64, reference: f64, half_range: f64, n: usize) -> usize {
    let last = (n - 1) as f64;
    let c = last / 2.0;
    let x = if half_range > 0.0 {
        (v - reference) / half_range * c
    } else {
        0.0
    };
    let i = if x >= 0.0 {
        (c + x).round()
    } else {
        last - (c - x).round()
    };
    i.clamp(0.0, last) as usize
}

/// Entry index for `v` on a cyclic scale of the given period.
pub fn cyclic_index(v: f64, period: f64, origin: f64, n: usize) -> usize {
    let frac = (v - origin).rem_euclid(period) / period;
    ((frac * n as f64).round() as usize) % n
}

pub fn apply_map(grid: &ScalarGrid, map: &ColorMap, range: ValueRange, background: RgbColor) -> Result<RgbImage> {
    check_map(map)?;
    let n = map.len();
    let index: Box<dyn Fn(f64) -> usize> = match range {
        ValueRange::Auto => {
            let (lo, hi) = grid
                .min_max()
                .ok_or_else(|| Error::Range("grid has no unmasked cells".into()))?;
            if !(hi > lo) {
                return Err(Error::Range(format!("degenerate data range [{lo}, {hi}]")));
            }
            Box::new(move |v| linear_index(v, lo, hi, n))
        }
        ValueRange::Explicit(lo, hi) => {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Range(format!("explicit range needs lo < hi, got [{lo}, {hi}]")));
            }
            Box::new(move |v| linear_index(v, lo, hi, n))
        }
        ValueRange::Cyclic(period) => {
            check_period(period)?;
            Box::new(move |v| cyclic_index(v, period, 0.0, n))
        }
    };
    indexed(grid, map, background, index)
}

fn indexed(grid: &ScalarGrid, map: &ColorMap, background: RgbColor, index: impl Fn(f64) -> usize) -> Result<RgbImage> {
    check_map(map)?;
    let pixels = grid
        .values()
        .iter()
        .map(|&v| if v.is_nan() { background } else { map.entries[index(v)] })
        .collect();
    RgbImage::new(grid.width(), grid.height(), pixels)
}

pub fn render(grid: &ScalarGrid, map: &ColorMap, policy: &RenderPolicy) -> Result<Rendered> {
    let mut warnings = Vec::new();
    let image = match policy.mode {
        RenderMode::Linear(range) => apply_map(grid, map, range, policy.background)?,
        RenderMode::Diverging { reference } => {
            if !reference.is_finite() {
                return Err(Error::NonFinite("diverging reference"));
            }
            if !map.has(Attribute::Diverging) {
                warnings.push(format!("map `{}` is not marked diverging", map.name));
            }
            let (lo, hi) = grid
                .min_max()
                .ok_or_else(|| Error::Range("grid has no unmasked cells".into()))?;
            if reference < lo || reference > hi {
                warnings.push(format!(
                    "reference {reference} lies outside the data range [{lo}, {hi}]"
                ));
            }
            let h = (hi - reference).max(reference - lo);
            indexed(grid, map, policy.background, |v| {
                diverging_index(v, reference, h, map.len())
            })?
        }
        RenderMode::Cyclic { period, origin } => {
            check_period(period)?;
            if !origin.is_finite() {
                return Err(Error::NonFinite("cyclic origin"));
            }
            if !map.has(Attribute::Cyclic) {
                warnings.push(format!(
                    "map `{}` is not cyclic; expect a seam where the data wraps",
                    map.name
                ));
            }
            indexed(grid, map, policy.background, |v| {
                cyclic_index(v, period, origin, map.len())
            })?
        }
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Rendered { image, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulateDirection {
    TowardBlack,
    TowardWhite,
}

/// Scales colours toward black or white by per-pixel weights in `[0, 1]`;
/// a weight of 1 leaves the pixel unchanged.
pub fn modulate(img: &RgbImage, weights: &ScalarGrid, direction: ModulateDirection) -> Result<RgbImage> {
    weights.check_same_dims(img.dims())?;
    if let Some(bad) = weights.values().iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(Error::Range(format!("modulation weight {bad} outside [0, 1]")));
    }
    let w = weights.values();
    Ok(img.map_pixels(|i, c| match direction {
        ModulateDirection::TowardBlack => c.scale(w[i]),
        ModulateDirection::TowardWhite => c.scale(w[i]).add(&RgbColor::WHITE.scale(1.0 - w[i])),
    }))
}

fn check_map(map: &ColorMap) -> Result<()> {
    if map.is_empty() {
        return Err(Error::InvalidArgument(format!("map `{}` has no entries", map.name)));
    }
    Ok(())
}

fn check_period(period: f64) -> Result<()> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "cyclic period must be positive, got {period}"
        )));
    }
    Ok(())
}
