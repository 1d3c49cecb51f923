//! sRGB ↔ CIELAB conversion and colour-difference formulas.
//!
//! Conversions use the sRGB primaries with a D65 reference white. The sRGB
//! transfer function is extended to values outside `[0, 1]` by sign symmetry,
//! so the forward and inverse conversions are defined (and mutually inverse)
//! everywhere. Gamut clamping is never done here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Display-referred sRGB triplet. Components nominally lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RgbColor {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl RgbColor {
    pub const BLACK: RgbColor = RgbColor::new(0.0, 0.0, 0.0);
    pub const WHITE: RgbColor = RgbColor::new(1.0, 1.0, 1.0);
    pub const MID_GREY: RgbColor = RgbColor::new(0.5, 0.5, 0.5);

    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        RgbColor { r, g, b }
    }

    pub fn grey(v: f64) -> Self {
        RgbColor::new(v, v, v)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        RgbColor::new(c[0], c[1], c[2])
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.g.is_finite() && self.b.is_finite()
    }

    /// True when every channel lies in `[-tol, 1 + tol]`.
    pub fn in_unit_cube(&self, tol: f64) -> bool {
        self.to_array().iter().all(|&c| c >= -tol && c <= 1.0 + tol)
    }

    /// Clamp into the unit cube, returning the clamped colour and the largest
    /// per-channel correction that was applied.
    pub fn clamped(&self) -> (RgbColor, f64) {
        let mut residual = 0.0f64;
        let mut clamp = |c: f64| {
            let k = c.clamp(0.0, 1.0);
            residual = residual.max((k - c).abs());
            k
        };
        let out = RgbColor::new(clamp(self.r), clamp(self.g), clamp(self.b));
        (out, residual)
    }

    pub fn scale(&self, k: f64) -> RgbColor {
        RgbColor::new(self.r * k, self.g * k, self.b * k)
    }

    pub fn add(&self, o: &RgbColor) -> RgbColor {
        RgbColor::new(self.r + o.r, self.g + o.g, self.b + o.b)
    }

    pub fn to_lab(&self) -> Result<LabColor> {
        srgb_to_lab(*self)
    }
}

/// A point in CIELAB space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        LabColor { l, a, b }
    }

    /// Build from lightness, chroma and hue angle in degrees.
    pub fn from_lch(l: f64, chroma: f64, hue_deg: f64) -> Self {
        let h = hue_deg.to_radians();
        LabColor::new(l, chroma * h.cos(), chroma * h.sin())
    }

    pub fn chroma(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Hue angle in degrees, in `[0, 360)`. The neutral axis reports 0.
    pub fn hue(&self) -> f64 {
        if self.a == 0.0 && self.b == 0.0 {
            return 0.0;
        }
        let h = self.b.atan2(self.a).to_degrees();
        let h = if h < 0.0 { h + 360.0 } else { h };
        if h >= 360.0 {
            0.0
        } else {
            h
        }
    }

    pub fn is_finite(&self) -> bool {
        self.l.is_finite() && self.a.is_finite() && self.b.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.l, self.a, self.b]
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        LabColor::new(c[0], c[1], c[2])
    }

    pub(crate) fn lerp(&self, o: &LabColor, u: f64) -> LabColor {
        LabColor::new(
            self.l + (o.l - self.l) * u,
            self.a + (o.a - self.a) * u,
            self.b + (o.b - self.b) * u,
        )
    }

    pub fn to_srgb(&self) -> Result<RgbColor> {
        lab_to_srgb(*self)
    }
}

/// Reference-white tristimulus values with `y` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

// Row sums of RGB_TO_XYZ equal the D65 white exactly, so greys land on the
// neutral axis without residual chroma.
pub const D65: WhitePoint = WhitePoint {
    x: 0.950_470_0,
    y: 1.0,
    z: 1.088_830_0,
};

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_174_9],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = invert3(RGB_TO_XYZ);

const fn invert3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    let inv = 1.0 / det;
    [
        [
            c00 * inv,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
        ],
        [
            c01 * inv,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
        ],
        [
            c02 * inv,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
        ],
    ]
}

fn mul3(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

const DECODE_KNEE: f64 = 0.040_45;
const ENCODE_KNEE: f64 = DECODE_KNEE / 12.92;

/// sRGB electro-optical transfer, odd-extended to negative values.
pub fn srgb_decode(c: f64) -> f64 {
    let a = c.abs();
    let v = if a <= DECODE_KNEE {
        a / 12.92
    } else {
        ((a + 0.055) / 1.055).powf(2.4)
    };
    v.copysign(c)
}

pub fn srgb_encode(c: f64) -> f64 {
    let a = c.abs();
    let v = if a <= ENCODE_KNEE {
        a * 12.92
    } else {
        1.055 * a.powf(1.0 / 2.4) - 0.055
    };
    v.copysign(c)
}

const EPS_LAB: f64 = 6.0 / 29.0;

fn lab_f(t: f64) -> f64 {
    if t > EPS_LAB * EPS_LAB * EPS_LAB {
        t.cbrt()
    } else {
        t / (3.0 * EPS_LAB * EPS_LAB) + 4.0 / 29.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    if f > EPS_LAB {
        f * f * f
    } else {
        3.0 * EPS_LAB * EPS_LAB * (f - 4.0 / 29.0)
    }
}

pub fn srgb_to_lab(c: RgbColor) -> Result<LabColor> {
    srgb_to_lab_with(c, &D65)
}

pub fn srgb_to_lab_with(c: RgbColor, white: &WhitePoint) -> Result<LabColor> {
    if !c.is_finite() {
        return Err(Error::NonFinite("sRGB colour"));
    }
    let lin = [srgb_decode(c.r), srgb_decode(c.g), srgb_decode(c.b)];
    let xyz = mul3(&RGB_TO_XYZ, lin);
    let fx = lab_f(xyz[0] / white.x);
    let fy = lab_f(xyz[1] / white.y);
    let fz = lab_f(xyz[2] / white.z);
    Ok(LabColor::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)))
}

/// Inverse of [`srgb_to_lab`]. The result is not clamped.
pub fn lab_to_srgb(c: LabColor) -> Result<RgbColor> {
    lab_to_srgb_with(c, &D65)
}

pub fn lab_to_srgb_with(c: LabColor, white: &WhitePoint) -> Result<RgbColor> {
    if !c.is_finite() {
        return Err(Error::NonFinite("CIELAB colour"));
    }
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    let xyz = [
        lab_f_inv(fx) * white.x,
        lab_f_inv(fy) * white.y,
        lab_f_inv(fz) * white.z,
    ];
    let lin = mul3(&XYZ_TO_RGB, xyz);
    Ok(RgbColor::new(
        srgb_encode(lin[0]),
        srgb_encode(lin[1]),
        srgb_encode(lin[2]),
    ))
}

/// CIE76 colour difference: Euclidean distance in CIELAB.
pub fn delta_e76(c1: &LabColor, c2: &LabColor) -> f64 {
    let dl = c1.l - c2.l;
    let da = c1.a - c2.a;
    let db = c1.b - c2.b;
    (dl * dl + da * da + db * db).sqrt()
}

/// CIEDE2000 colour difference with unit parametric factors.
pub fn delta_e2000(c1: &LabColor, c2: &LabColor) -> f64 {
    const POW25_7: f64 = 6_103_515_625.0;

    let c_ab1 = c1.chroma();
    let c_ab2 = c2.chroma();
    let c_bar7 = ((c_ab1 + c_ab2) / 2.0).powi(7);
    let g = 0.5 * (1.0 - (c_bar7 / (c_bar7 + POW25_7)).sqrt());

    let a1 = (1.0 + g) * c1.a;
    let a2 = (1.0 + g) * c2.a;
    let cp1 = a1.hypot(c1.b);
    let cp2 = a2.hypot(c2.b);
    let hp1 = hue_deg(c1.b, a1);
    let hp2 = hue_deg(c2.b, a2);

    let dl = c2.l - c1.l;
    let dc = cp2 - cp1;
    let chroma_product = cp1 * cp2;
    let dh_angle = if chroma_product == 0.0 {
        0.0
    } else {
        let d = hp2 - hp1;
        if d > 180.0 {
            d - 360.0
        } else if d < -180.0 {
            d + 360.0
        } else {
            d
        }
    };
    let dh = 2.0 * chroma_product.sqrt() * (dh_angle.to_radians() / 2.0).sin();

    let l_bar = (c1.l + c2.l) / 2.0;
    let cp_bar = (cp1 + cp2) / 2.0;
    let hp_bar = if chroma_product == 0.0 {
        hp1 + hp2
    } else if (hp1 - hp2).abs() <= 180.0 {
        (hp1 + hp2) / 2.0
    } else if hp1 + hp2 < 360.0 {
        (hp1 + hp2 + 360.0) / 2.0
    } else {
        (hp1 + hp2 - 360.0) / 2.0
    };

    let t = 1.0 - 0.17 * (hp_bar - 30.0).to_radians().cos()
        + 0.24 * (2.0 * hp_bar).to_radians().cos()
        + 0.32 * (3.0 * hp_bar + 6.0).to_radians().cos()
        - 0.20 * (4.0 * hp_bar - 63.0).to_radians().cos();
    let d_theta = 30.0 * (-((hp_bar - 275.0) / 25.0).powi(2)).exp();
    let cp_bar7 = cp_bar.powi(7);
    let r_c = 2.0 * (cp_bar7 / (cp_bar7 + POW25_7)).sqrt();
    let l50 = (l_bar - 50.0).powi(2);
    let s_l = 1.0 + 0.015 * l50 / (20.0 + l50).sqrt();
    let s_c = 1.0 + 0.045 * cp_bar;
    let s_h = 1.0 + 0.015 * cp_bar * t;
    let r_t = -(2.0 * d_theta).to_radians().sin() * r_c;

    let tl = dl / s_l;
    let tc = dc / s_c;
    let th = dh / s_h;
    (tl * tl + tc * tc + th * th + r_t * tc * th).sqrt()
}

fn hue_deg(b: f64, a: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    let h = b.atan2(a).to_degrees();
    if h < 0.0 {
        h + 360.0
    } else {
        h
    }
}

/// Default gamut tolerance for library checks.
pub const GAMUT_TOL: f64 = 1e-6;

/// Whether `c` is displayable: every sRGB channel within `[-tol, 1 + tol]`.
pub fn in_gamut(c: &LabColor, tol: f64) -> bool {
    match lab_to_srgb(*c) {
        Ok(rgb) => rgb.in_unit_cube(tol),
        Err(_) => false,
    }
}

/// Largest chroma `C` such that the full circle of radius `C` at lightness `l`
/// stays in gamut (sampled every half degree of hue).
pub fn max_circle_chroma(l: f64, tol: f64) -> f64 {
    (0..720)
        .map(|k| max_chroma_at(l, k as f64 * 0.5, tol))
        .fold(f64::INFINITY, f64::min)
}

/// Largest in-gamut chroma at the given lightness and hue, by bisection.
pub fn max_chroma_at(l: f64, hue_deg: f64, tol: f64) -> f64 {
    if !in_gamut(&LabColor::new(l, 0.0, 0.0), tol) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 200.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if in_gamut(&LabColor::from_lch(l, mid, hue_deg), tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
