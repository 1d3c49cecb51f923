//! Colour-map families: linear, diverging, rainbow, cyclic and isoluminant.
//!
//! Every builder samples a CIELAB path with equal perceptual contrast,
//! optionally smooths lightness reversals, converts to sRGB and checks the
//! family constraints. Preset control points live in `data/presets.json`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::colorspace::{delta_e76, max_circle_chroma, LabColor, RgbColor, GAMUT_TOL};
use crate::equalize::{
    auto_metric, equalize, equalize_between, smooth_reversals, EqualizeSpec, SmoothSpec, DENSE_SAMPLES,
};
use crate::error::{Error, Result};
use crate::spline::{ContrastMetric, MapPath, PathDef, SampledPath, SplineOrder};

/// Largest sRGB clamp residual accepted for a map entry.
pub const ENTRY_GAMUT_TOL: f64 = 0.01;
pub const DEFAULT_N: usize = 256;
pub const DEFAULT_DIVERGING_SIGMA: f64 = 5.0;
pub const DEFAULT_SIGMA: f64 = 7.0;
/// Fraction of `n` by which a four-anchor cyclic map's extrema may miss the
/// quarter positions.
pub const ANCHOR_TOL: f64 = 0.02;
const NEUTRAL_CHROMA: f64 = 2.0;
const ISOLUMINANT_VERTICES: usize = 72;
const MIN_ISOLUMINANT_CHROMA: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attribute {
    Linear,
    Diverging,
    Rainbow,
    Cyclic,
    Isoluminant,
    LowContrast,
}

impl Attribute {
    pub const ALL: [Attribute; 6] = [
        Attribute::Linear,
        Attribute::Diverging,
        Attribute::Rainbow,
        Attribute::Cyclic,
        Attribute::Isoluminant,
        Attribute::LowContrast,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::Linear => "linear",
            Attribute::Diverging => "diverging",
            Attribute::Rainbow => "rainbow",
            Attribute::Cyclic => "cyclic",
            Attribute::Isoluminant => "isoluminant",
            Attribute::LowContrast => "low-contrast",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Attribute::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown attribute `{s}`")))
    }
}

/// How a map was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub path: PathDef,
    pub metric: ContrastMetric,
    pub iterations: usize,
    /// Smoothing width in entries of a 256-entry map; 0 when unsmoothed.
    pub sigma: f64,
    /// Parameter interval of an open path that was sampled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    /// Largest per-channel distance moved when clamping entries into sRGB.
    pub max_clamp_residual: f64,
    /// Accumulated rotation applied by [`cyclic_shift`], in map lengths.
    #[serde(default)]
    pub shift: f64,
    #[serde(default)]
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorMap {
    pub name: String,
    pub entries: Vec<RgbColor>,
    pub attributes: BTreeSet<Attribute>,
    pub provenance: Option<Provenance>,
}

impl ColorMap {
    pub fn new(
        name: impl Into<String>,
        entries: Vec<RgbColor>,
        attributes: impl IntoIterator<Item = Attribute>,
    ) -> Self {
        ColorMap {
            name: name.into(),
            entries,
            attributes: attributes.into_iter().collect(),
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has(&self, a: Attribute) -> bool {
        self.attributes.contains(&a)
    }

    pub fn lab_entries(&self) -> Result<Vec<LabColor>> {
        self.entries.iter().map(|c| c.to_lab()).collect()
    }

    pub fn lightness(&self) -> Result<Vec<f64>> {
        Ok(self.lab_entries()?.iter().map(|c| c.l).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergingStyle {
    /// Lightness rises to (or falls from) the centre on both sides.
    Reversing,
    /// Lightness monotone end to end through the neutral centre.
    LinearDiverging,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergingSpec {
    pub end_low: LabColor,
    pub centre: LabColor,
    pub end_high: LabColor,
    pub style: DivergingStyle,
}

impl DivergingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.centre.chroma() > NEUTRAL_CHROMA {
            return Err(Error::Constraint(format!(
                "diverging centre must be neutral, chroma is {:.3}",
                self.centre.chroma()
            )));
        }
        match self.style {
            DivergingStyle::Reversing => {
                let dc = (self.end_low.chroma() - self.end_high.chroma()).abs();
                let dl = (self.end_low.l - self.end_high.l).abs();
                if dc > 2.0 || dl > 2.0 {
                    return Err(Error::Constraint(format!(
                        "reversing diverging ends must match in chroma and lightness \
                         within 2 (dC = {dc:.3}, dL = {dl:.3})"
                    )));
                }
            }
            DivergingStyle::LinearDiverging => {
                let (a, c, b) = (self.end_low.l, self.centre.l, self.end_high.l);
                if !((a < c && c < b) || (a > c && c > b)) {
                    return Err(Error::Constraint(format!(
                        "linear-diverging lightness must pass monotonically through the \
                         centre ({a}, {c}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicStyle {
    /// Two light colours of equal L alternating with two dark ones.
    Zigzag,
    /// Light apex, dark apex and two mid-lightness colours.
    Diamond,
    /// White-colour-white-colour-white.
    DivergingCyclic,
    /// Reversing grey scale.
    Grey,
}

impl FromStr for CyclicStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zigzag" => Ok(CyclicStyle::Zigzag),
            "diamond" => Ok(CyclicStyle::Diamond),
            "diverging-cyclic" => Ok(CyclicStyle::DivergingCyclic),
            "grey" => Ok(CyclicStyle::Grey),
            _ => Err(Error::InvalidArgument(format!("unknown cyclic style `{s}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// builders

/// Linear map over the part of `path` whose lightness lies in `span`.
pub fn build_linear(path: &MapPath, n: usize, span: (f64, f64)) -> Result<ColorMap> {
    let (lo, hi) = span;
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "lightness span needs lo < hi, got ({lo}, {hi})"
        )));
    }
    if path.is_cyclic() {
        return Err(Error::InvalidArgument("linear maps need an open path".into()));
    }
    let dense = dense_lightness(path);
    let increasing = dense[dense.len() - 1] > dense[0];
    let monotone = dense
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
    if !monotone {
        return Err(Error::Constraint("path lightness is not strictly monotone".into()));
    }
    let (pmin, pmax) = if increasing {
        (dense[0], dense[dense.len() - 1])
    } else {
        (dense[dense.len() - 1], dense[0])
    };
    let eps = 1e-9;
    if lo < pmin - eps || hi > pmax + eps {
        return Err(Error::Range(format!(
            "span ({lo}, {hi}) exceeds path lightness range ({pmin:.4}, {pmax:.4})"
        )));
    }
    let ta = lightness_param(path, lo.max(pmin), increasing);
    let tb = lightness_param(path, hi.min(pmax), increasing);
    let (t0, t1) = if ta < tb { (ta, tb) } else { (tb, ta) };
    let spec = EqualizeSpec::for_path(path, n, ContrastMetric::Lightness);
    let sampled = equalize_between(path, &spec, t0, t1)?;
    let prov = provenance(path, &spec, 0.0, Some([t0, t1]));
    finish("linear", &sampled, [Attribute::Linear], prov)
}

pub fn build_diverging(spec: &DivergingSpec, n: usize, sigma: f64) -> Result<ColorMap> {
    spec.validate()?;
    let path = MapPath::linear(vec![spec.end_low, spec.centre, spec.end_high])?;
    let metric = auto_metric(&path);
    let eq = EqualizeSpec::for_path(&path, n, metric);
    let sampled = equalize(&path, &eq)?;
    let sampled = smooth(&sampled, sigma, false)?;
    let attrs: &[Attribute] = match spec.style {
        DivergingStyle::Reversing => &[Attribute::Diverging],
        DivergingStyle::LinearDiverging => &[Attribute::Diverging, Attribute::Linear],
    };
    let map = finish(
        "diverging",
        &sampled,
        attrs.iter().copied(),
        provenance(&path, &eq, sigma, None),
    )?;
    let lab = map.lab_entries()?;
    let de = centre_gap(&lab, |c| delta_e76(c, &spec.centre));
    if de > 2.0 {
        return Err(Error::Constraint(format!(
            "central entry is {de:.3} dE76 from the specified centre colour"
        )));
    }
    Ok(map)
}

pub fn build_rainbow(n: usize, sigma: f64) -> Result<ColorMap> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!("rainbow needs n >= 8, got {n}")));
    }
    let path = catalogue()
        .presets
        .iter()
        .find_map(|p| match &p.kind {
            PresetKind::Rainbow { path, .. } => Some(path),
            _ => None,
        })
        .ok_or_else(|| Error::UnknownPreset("rainbow".into()))?
        .to_path()?;
    build_from_path(&path, n, sigma, "rainbow", [Attribute::Rainbow])
}

pub fn build_cyclic(style: CyclicStyle, n: usize, sigma: f64) -> Result<ColorMap> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!("cyclic map needs n >= 8, got {n}")));
    }
    let path = cyclic_path(style)?;
    build_from_path(&path, n, sigma, "cyclic", [Attribute::Cyclic])
}

/// Control path for a cyclic style, from the preset data.
pub fn cyclic_path(style: CyclicStyle) -> Result<MapPath> {
    catalogue()
        .presets
        .iter()
        .find_map(|p| match &p.kind {
            PresetKind::Cyclic { style: s, path, .. } if *s == style => Some(path),
            _ => None,
        })
        .ok_or_else(|| Error::UnknownPreset(format!("{style:?}")))?
        .to_path()
}

/// Equalizes any path with the automatically chosen metric and smooths it.
pub fn build_from_path(
    path: &MapPath,
    n: usize,
    sigma: f64,
    name: &str,
    attributes: impl IntoIterator<Item = Attribute>,
) -> Result<ColorMap> {
    build_with_metric(path, n, sigma, auto_metric(path), name, attributes)
}

pub fn build_with_metric(
    path: &MapPath,
    n: usize,
    sigma: f64,
    metric: ContrastMetric,
    name: &str,
    attributes: impl IntoIterator<Item = Attribute>,
) -> Result<ColorMap> {
    let eq = EqualizeSpec::for_path(path, n, metric);
    let sampled = equalize(path, &eq)?;
    let sampled = smooth(&sampled, sigma, path.is_cyclic())?;
    finish(name, &sampled, attributes, provenance(path, &eq, sigma, None))
}

/// Constant-lightness hue circle with the largest chroma that fits the gamut.
pub fn build_isoluminant(lightness: f64, n: usize) -> Result<ColorMap> {
    let cmax = max_circle_chroma(lightness, GAMUT_TOL);
    if cmax < MIN_ISOLUMINANT_CHROMA {
        return Err(Error::OutOfGamut(format!(
            "no usable hue circle at L = {lightness}: maximum feasible chroma is {cmax:.2}"
        )));
    }
    build_isoluminant_with_chroma(lightness, 0.99 * cmax, n)
}

pub fn build_isoluminant_with_chroma(lightness: f64, chroma: f64, n: usize) -> Result<ColorMap> {
    if !lightness.is_finite() || !chroma.is_finite() {
        return Err(Error::NonFinite("isoluminant lightness or chroma"));
    }
    if chroma <= 0.0 {
        return Err(Error::InvalidArgument(format!("chroma must be positive, got {chroma}")));
    }
    let cmax = max_circle_chroma(lightness, GAMUT_TOL);
    if chroma > cmax {
        return Err(Error::OutOfGamut(format!(
            "chroma {chroma} at L = {lightness} exceeds the maximum feasible chroma {cmax:.2}"
        )));
    }
    let pts = (0..ISOLUMINANT_VERTICES)
        .map(|k| LabColor::from_lch(lightness, chroma, 360.0 * k as f64 / ISOLUMINANT_VERTICES as f64))
        .collect();
    let path = MapPath::new(pts, SplineOrder::Linear, true)?;
    build_with_metric(
        &path,
        n,
        0.0,
        ContrastMetric::Cie76,
        "isoluminant",
        [Attribute::Isoluminant, Attribute::Cyclic],
    )
}

/// Rotates a cyclic map so entry `round(fraction * n)` becomes entry 0.
pub fn cyclic_shift(map: &ColorMap, fraction: f64) -> Result<ColorMap> {
    if !map.has(Attribute::Cyclic) {
        return Err(Error::InvalidOperation(format!(
            "cannot rotate non-cyclic map `{}`",
            map.name
        )));
    }
    if !fraction.is_finite() {
        return Err(Error::NonFinite("shift fraction"));
    }
    let n = map.len();
    let mut out = map.clone();
    if n == 0 {
        return Ok(out);
    }
    let k = (fraction * n as f64).round().rem_euclid(n as f64) as usize;
    out.entries.rotate_left(k);
    if let Some(p) = out.provenance.as_mut() {
        p.shift = (p.shift + fraction).rem_euclid(1.0);
    }
    Ok(out)
}

pub fn reverse(map: &ColorMap) -> ColorMap {
    let mut out = map.clone();
    out.entries.reverse();
    if let Some(p) = out.provenance.as_mut() {
        p.reversed = !p.reversed;
    }
    out
}

// ---------------------------------------------------------------------------
// validation

/// Checks gamut and the constraints implied by each attribute; all
/// violations are reported together.
pub fn validate_attributes(map: &ColorMap) -> Result<()> {
    let mut problems = Vec::new();
    let n = map.len();
    if n < 2 {
        return Err(Error::Constraint(format!("map has {n} entries")));
    }
    if let Some(i) = map.entries.iter().position(|c| !c.in_unit_cube(ENTRY_GAMUT_TOL)) {
        problems.push(format!("entry {i} outside sRGB gamut"));
    }
    if let Some(p) = &map.provenance {
        if p.max_clamp_residual > ENTRY_GAMUT_TOL {
            problems.push(format!("clamp residual {:.4} exceeds tolerance", p.max_clamp_residual));
        }
    }
    let lab = map.lab_entries()?;
    let l: Vec<f64> = lab.iter().map(|c| c.l).collect();
    let dl: Vec<f64> = l.windows(2).map(|w| w[1] - w[0]).collect();

    if map.has(Attribute::Linear) {
        let inc = dl.iter().all(|&d| d > 0.0);
        let dec = dl.iter().all(|&d| d < 0.0);
        if !(inc || dec) {
            problems.push("linear map lightness is not strictly monotone".into());
        } else {
            let mean = dl.iter().map(|d| d.abs()).sum::<f64>() / dl.len() as f64;
            let worst = dl.iter().map(|d| (d.abs() - mean).abs()).fold(0.0, f64::max);
            if worst > 0.01 * mean {
                problems.push(format!(
                    "linear map |dL| deviates {:.3}% from its mean",
                    100.0 * worst / mean
                ));
            }
        }
    }
    if map.has(Attribute::Cyclic) {
        let steps: Vec<f64> = lab.windows(2).map(|w| delta_e76(&w[0], &w[1])).collect();
        let wrap = delta_e76(&lab[n - 1], &lab[0]);
        let mean = (steps.iter().sum::<f64>() + wrap) / n as f64;
        if wrap > 2.0 * mean {
            problems.push(format!("wrap step {wrap:.4} exceeds twice the mean step {mean:.4}"));
        }
    }
    if map.has(Attribute::Isoluminant) {
        let (lo, hi) = min_max(&l);
        if hi - lo > 2.0 {
            problems.push(format!("isoluminant lightness spread {:.3} exceeds 2", hi - lo));
        }
    }
    if map.has(Attribute::Diverging) {
        let c = centre_gap(&lab, |c| c.chroma());
        if c > NEUTRAL_CHROMA {
            problems.push(format!("diverging centre chroma {c:.3} is not neutral"));
        }
        if !map.has(Attribute::Linear) {
            let dc = (lab[0].chroma() - lab[n - 1].chroma()).abs();
            if dc > 2.0 {
                problems.push(format!("diverging end chromas differ by {dc:.3}"));
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Constraint(format!("{}: {}", map.name, problems.join("; "))))
    }
}

/// How far the middle of a map is from a target, by `dist`. An even-length
/// map has no middle entry, so the closest point on the segment between its
/// two middle entries is used.
fn centre_gap(lab: &[LabColor], dist: impl Fn(&LabColor) -> f64) -> f64 {
    let n = lab.len();
    if n % 2 == 1 {
        return dist(&lab[n / 2]);
    }
    let (a, b) = (&lab[n / 2 - 1], &lab[n / 2]);
    // the distances used are convex along the segment, so a ternary search finds the minimum
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if dist(&a.lerp(b, m1)) <= dist(&a.lerp(b, m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist(&a.lerp(b, 0.5 * (lo + hi)))
}

/// Positions of the lightness maximum and minimum of a cyclic map, checked
/// against multiples of `n / 4`.
pub fn check_quarter_anchors(map: &ColorMap) -> Result<(usize, usize)> {
    let l = map.lightness()?;
    let n = l.len();
    let argmax = (0..n).max_by(|&i, &j| l[i].total_cmp(&l[j])).unwrap_or(0);
    let argmin = (0..n).min_by(|&i, &j| l[i].total_cmp(&l[j])).unwrap_or(0);
    for (what, i) in [("maximum", argmax), ("minimum", argmin)] {
        let off = quarter_offset(i, n);
        if off > ANCHOR_TOL * n as f64 {
            return Err(Error::Constraint(format!(
                "lightness {what} at entry {i} is {off:.2} entries from a quarter position"
            )));
        }
    }
    Ok((argmax, argmin))
}

/// Distance in entries from index `i` to the nearest multiple of `n / 4`.
pub fn quarter_offset(i: usize, n: usize) -> f64 {
    let q = n as f64 / 4.0;
    let x = i as f64 / q;
    (x - x.round()).abs() * q
}

// ---------------------------------------------------------------------------
// presets

#[derive(Debug, Clone, Deserialize)]
struct Catalogue {
    #[allow(dead_code)]
    version: u32,
    presets: Vec<PresetEntry>,
}

#[derive(Debug, Clone, Deserialize)]
struct PresetEntry {
    name: String,
    #[serde(flatten)]
    kind: PresetKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
enum PresetKind {
    Linear {
        path: PathDef,
        span: [f64; 2],
    },
    Diverging {
        style: DivergingStyle,
        end_low: [f64; 3],
        centre: [f64; 3],
        end_high: [f64; 3],
        sigma: f64,
    },
    Rainbow {
        path: PathDef,
        sigma: f64,
    },
    Cyclic {
        style: CyclicStyle,
        path: PathDef,
        sigma: f64,
    },
    Isoluminant {
        lightness: f64,
        chroma: f64,
    },
}

fn catalogue() -> &'static Catalogue {
    static CAT: OnceLock<Catalogue> = OnceLock::new();
    CAT.get_or_init(|| {
        serde_json::from_str(include_str!("../data/presets.json")).expect("bundled preset data is valid")
    })
}

pub fn preset_names() -> Vec<&'static str> {
    catalogue().presets.iter().map(|p| p.name.as_str()).collect()
}

/// Default smoothing width of a preset.
pub fn preset_sigma(name: &str) -> Result<f64> {
    let p = find_preset(name)?;
    Ok(match &p.kind {
        PresetKind::Diverging { sigma, .. } | PresetKind::Rainbow { sigma, .. } | PresetKind::Cyclic { sigma, .. } => {
            *sigma
        }
        PresetKind::Linear { .. } | PresetKind::Isoluminant { .. } => 0.0,
    })
}

/// Builds a named preset with `n` entries, overriding its smoothing width if
/// `sigma` is given.
pub fn preset(name: &str, n: usize, sigma: Option<f64>) -> Result<ColorMap> {
    let p = find_preset(name)?;
    let mut map = match &p.kind {
        PresetKind::Linear { path, span } => build_linear(&path.to_path()?, n, (span[0], span[1]))?,
        PresetKind::Diverging {
            style,
            end_low,
            centre,
            end_high,
            sigma: s,
        } => {
            let spec = DivergingSpec {
                end_low: LabColor::from_array(*end_low),
                centre: LabColor::from_array(*centre),
                end_high: LabColor::from_array(*end_high),
                style: *style,
            };
            build_diverging(&spec, n, sigma.unwrap_or(*s))?
        }
        PresetKind::Rainbow { sigma: s, .. } => build_rainbow(n, sigma.unwrap_or(*s))?,
        PresetKind::Cyclic { style, sigma: s, .. } => build_cyclic(*style, n, sigma.unwrap_or(*s))?,
        PresetKind::Isoluminant { lightness, chroma } => build_isoluminant_with_chroma(*lightness, *chroma, n)?,
    };
    map.name = p.name.clone();
    Ok(map)
}

fn find_preset(name: &str) -> Result<&'static PresetEntry> {
    catalogue()
        .presets
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

// ---------------------------------------------------------------------------
// helpers

fn smooth(s: &SampledPath, sigma: f64, cyclic: bool) -> Result<SampledPath> {
    smooth_reversals(s, &SmoothSpec { sigma, cyclic })
}

fn provenance(path: &MapPath, eq: &EqualizeSpec, sigma: f64, domain: Option<[f64; 2]>) -> Provenance {
    Provenance {
        path: PathDef::from(path),
        metric: eq.metric,
        iterations: eq.iterations,
        sigma,
        domain,
        max_clamp_residual: 0.0,
        shift: 0.0,
        reversed: false,
    }
}

fn finish(
    name: &str,
    sampled: &SampledPath,
    attributes: impl IntoIterator<Item = Attribute>,
    mut prov: Provenance,
) -> Result<ColorMap> {
    let mut entries = Vec::with_capacity(sampled.len());
    let mut worst = 0.0f64;
    for (i, lab) in sampled.samples.iter().enumerate() {
        let (c, r) = lab.to_srgb()?.clamped();
        if r > ENTRY_GAMUT_TOL {
            return Err(Error::OutOfGamut(format!(
                "entry {i} (L={:.2}, a={:.2}, b={:.2}) is {r:.4} outside sRGB",
                lab.l, lab.a, lab.b
            )));
        }
        worst = worst.max(r);
        entries.push(c);
    }
    prov.max_clamp_residual = worst;
    let map = ColorMap {
        name: name.to_string(),
        entries,
        attributes: attributes.into_iter().collect(),
        provenance: Some(prov),
    };
    validate_attributes(&map)?;
    Ok(map)
}

fn dense_lightness(path: &MapPath) -> Vec<f64> {
    (0..=DENSE_SAMPLES)
        .map(|i| path.point_at(i as f64 / DENSE_SAMPLES as f64).l)
        .collect()
}

/// Parameter at which a lightness-monotone open path reaches `target`.
fn lightness_param(path: &MapPath, target: f64, increasing: bool) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let l = path.point_at(mid).l;
        if (l < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (l0, l1) = (path.point_at(0.0).l, path.point_at(1.0).l);
    if target == l0 {
        0.0
    } else if target == l1 {
        1.0
    } else {
        0.5 * (lo + hi)
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}
