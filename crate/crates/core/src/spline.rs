//! Colour-map paths: 1st or 2nd order B-splines through CIELAB control points.
//!
//! Open paths use a clamped uniform knot vector so the curve starts and ends
//! on its first and last control points. Cyclic paths use periodic uniform
//! knots; a periodic quadratic is centred so that `t = i / n` is the curve
//! point nearest control point `i`.

use serde::{Deserialize, Serialize};

use crate::colorspace::{delta_e76, in_gamut, LabColor};
use crate::error::{Error, Result};

/// Gamut tolerance applied to designer-supplied control points.
pub const CONTROL_POINT_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplineOrder {
    Linear,
    Quadratic,
}

impl SplineOrder {
    pub fn from_degree(d: u8) -> Result<Self> {
        match d {
            1 => Ok(SplineOrder::Linear),
            2 => Ok(SplineOrder::Quadratic),
            _ => Err(Error::InvalidArgument(format!("spline order must be 1 or 2, got {d}"))),
        }
    }

    pub fn degree(self) -> u8 {
        match self {
            SplineOrder::Linear => 1,
            SplineOrder::Quadratic => 2,
        }
    }
}

/// How contrast between neighbouring colours is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContrastMetric {
    /// `|ΔL|`, appropriate whenever lightness variation dominates.
    Lightness,
    /// Euclidean CIELAB distance, for isoluminant and low-contrast paths.
    Cie76,
}

impl ContrastMetric {
    pub fn between(self, c1: &LabColor, c2: &LabColor) -> f64 {
        match self {
            ContrastMetric::Lightness => (c2.l - c1.l).abs(),
            ContrastMetric::Cie76 => delta_e76(c1, c2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapPath {
    control_points: Vec<LabColor>,
    order: SplineOrder,
    cyclic: bool,
}

impl MapPath {
    pub fn new(control_points: Vec<LabColor>, order: SplineOrder, cyclic: bool) -> Result<Self> {
        let min = match order {
            SplineOrder::Linear => 2,
            SplineOrder::Quadratic => 3,
        };
        if control_points.len() < min {
            return Err(Error::InvalidArgument(format!(
                "order {} path needs at least {min} control points, got {}",
                order.degree(),
                control_points.len()
            )));
        }
        for (i, p) in control_points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite("control point"));
            }
            if !in_gamut(p, CONTROL_POINT_TOL) {
                return Err(Error::OutOfGamut(format!(
                    "control point {i} ({:.2}, {:.2}, {:.2}) is outside the sRGB gamut",
                    p.l, p.a, p.b
                )));
            }
        }
        Ok(MapPath {
            control_points,
            order,
            cyclic,
        })
    }

    pub fn linear(control_points: Vec<LabColor>) -> Result<Self> {
        Self::new(control_points, SplineOrder::Linear, false)
    }

    pub fn control_points(&self) -> &[LabColor] {
        &self.control_points
    }

    pub fn order(&self) -> SplineOrder {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// Point on the path at parameter `t ∈ [0, 1]`.
    pub fn evaluate(&self, t: f64) -> Result<LabColor> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterRange(t));
        }
        Ok(self.point_at(t))
    }

    /// Evaluation without range checking; `t` is clamped into `[0, 1]`.
    pub(crate) fn point_at(&self, t: f64) -> LabColor {
        let t = t.clamp(0.0, 1.0);
        let p = &self.control_points;
        let n = p.len();
        if !self.cyclic {
            // open paths pass exactly through their end points
            if t == 0.0 {
                return p[0];
            } else if t == 1.0 {
                return p[n - 1];
            }
        }
        match (self.order, self.cyclic) {
            (SplineOrder::Linear, false) => {
                let (i, u) = segment(t * (n - 1) as f64, n - 1);
                p[i].lerp(&p[i + 1], u)
            }
            (SplineOrder::Linear, true) => {
                let (i, u) = segment(t * n as f64, n);
                p[i].lerp(&p[(i + 1) % n], u)
            }
            (SplineOrder::Quadratic, false) => de_boor_clamped(p, t),
            (SplineOrder::Quadratic, true) => {
                let x = t * n as f64 + 0.5;
                let i = (x.floor() as usize).min(n);
                let u = x - i as f64;
                let prev = &p[(i + n - 1) % n];
                let mid = &p[i % n];
                let next = &p[(i + 1) % n];
                quadratic_uniform(prev, mid, next, u)
            }
        }
    }

    /// Parameters strictly inside `(0, 1)` where the curve changes segment.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let n = self.control_points.len();
        match (self.order, self.cyclic) {
            (SplineOrder::Linear, false) => (1..n - 1).map(|i| i as f64 / (n - 1) as f64).collect(),
            (SplineOrder::Linear, true) => (1..n).map(|i| i as f64 / n as f64).collect(),
            (SplineOrder::Quadratic, false) => (1..n - 2).map(|i| i as f64 / (n - 2) as f64).collect(),
            (SplineOrder::Quadratic, true) => (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect(),
        }
    }

    /// Samples at equal parameter increments. Open paths include both ends;
    /// cyclic paths use `t = i / n` so the closing point is not duplicated.
    pub fn sample_uniform(&self, n: usize) -> Result<SampledPath> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
        }
        let params: Vec<f64> = if self.cyclic {
            (0..n).map(|i| i as f64 / n as f64).collect()
        } else {
            (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
        };
        Ok(self.sample_at(params))
    }

    pub(crate) fn sample_at(&self, params: Vec<f64>) -> SampledPath {
        let samples = params.iter().map(|&t| self.point_at(t)).collect();
        SampledPath {
            samples,
            params,
            cyclic: self.cyclic,
        }
    }
}

fn segment(x: f64, segments: usize) -> (usize, f64) {
    let i = (x.floor() as usize).min(segments - 1);
    (i, x - i as f64)
}

fn quadratic_uniform(p0: &LabColor, p1: &LabColor, p2: &LabColor, u: f64) -> LabColor {
    let w0 = 0.5 * (1.0 - u) * (1.0 - u);
    let w2 = 0.5 * u * u;
    let w1 = 1.0 - w0 - w2;
    LabColor::new(
        w0 * p0.l + w1 * p1.l + w2 * p2.l,
        w0 * p0.a + w1 * p1.a + w2 * p2.a,
        w0 * p0.b + w1 * p1.b + w2 * p2.b,
    )
}

/// Quadratic de Boor evaluation on the clamped uniform knot vector
/// `[0, 0, 0, 1, …, n-3, n-2, n-2, n-2]`.
fn de_boor_clamped(ctrl: &[LabColor], t: f64) -> LabColor {
    const P: usize = 2;
    let n = ctrl.len();
    let spans = n - P;
    let knot = |j: usize| -> f64 { j.saturating_sub(P).min(spans) as f64 };
    let x = t * spans as f64;
    // span index k with knot(k) <= x < knot(k + 1), k in [P, n - 1]
    let k = ((x.floor() as usize) + P).min(n - 1);
    let mut d: [LabColor; P + 1] = [ctrl[k - 2], ctrl[k - 1], ctrl[k]];
    for r in 1..=P {
        for j in (r..=P).rev() {
            let lo = knot(j + k - P);
            let hi = knot(j + 1 + k - r);
            let alpha = if hi > lo { (x - lo) / (hi - lo) } else { 0.0 };
            d[j] = d[j - 1].lerp(&d[j], alpha);
        }
    }
    d[P]
}

/// Serializable path definition: `{order, cyclic, control_points: [[L, a, b], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDef {
    pub order: u8,
    #[serde(default)]
    pub cyclic: bool,
    pub control_points: Vec<[f64; 3]>,
}

impl PathDef {
    pub fn to_path(&self) -> Result<MapPath> {
        MapPath::new(
            self.control_points.iter().map(|&c| LabColor::from_array(c)).collect(),
            SplineOrder::from_degree(self.order)?,
            self.cyclic,
        )
    }
}

impl From<&MapPath> for PathDef {
    fn from(p: &MapPath) -> Self {
        PathDef {
            order: p.order().degree(),
            cyclic: p.is_cyclic(),
            control_points: p.control_points().iter().map(|c| c.to_array()).collect(),
        }
    }
}

/// Path samples together with the spline parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    pub samples: Vec<LabColor>,
    pub params: Vec<f64>,
    pub cyclic: bool,
}

impl SampledPath {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Contrast between successive samples; cyclic paths append the
    /// wrap-around step from the last sample back to the first.
    pub fn arc_lengths(&self, metric: ContrastMetric) -> Vec<f64> {
        path_arc_lengths(&self.samples, self.cyclic, metric)
    }
}

pub fn path_arc_lengths(samples: &[LabColor], cyclic: bool, metric: ContrastMetric) -> Vec<f64> {
    let mut out: Vec<f64> = samples.windows(2).map(|w| metric.between(&w[0], &w[1])).collect();
    if cyclic && samples.len() >= 2 {
        out.push(metric.between(&samples[samples.len() - 1], &samples[0]));
    }
    out
}
