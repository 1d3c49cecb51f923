//! Ternary images: three data channels weighting three basis colours.
//!
//! The colours of [`paper_basis`] are close in lightness (and so are their
//! pairwise sums), so swapping which channel drives which colour changes the
//! lightness structure far less than with the RGB primaries.

use crate::colorspace::RgbColor;
use crate::error::{Error, Result};
use crate::grid::{RgbImage, ScalarGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TernaryBasis {
    pub red: RgbColor,
    pub green: RgbColor,
    pub blue: RgbColor,
}

impl TernaryBasis {
    /// Basis whose colours sum to white within 1e-9 in every channel.
    pub fn new(red: RgbColor, green: RgbColor, blue: RgbColor) -> Result<Self> {
        let b = TernaryBasis { red, green, blue };
        let s = b.red.add(&b.green).add(&b.blue);
        for v in s.to_array() {
            if (v - 1.0).abs() > 1e-9 {
                return Err(Error::Constraint(format!(
                    "basis colours must sum to white, got ({:.6}, {:.6}, {:.6})",
                    s.r, s.g, s.b
                )));
            }
        }
        Ok(b)
    }

    pub fn colors(&self) -> [RgbColor; 3] {
        [self.red, self.green, self.blue]
    }

    /// Pairwise sums: red + green, green + blue, red + blue.
    pub fn secondaries(&self) -> [RgbColor; 3] {
        [
            self.red.add(&self.green),
            self.green.add(&self.blue),
            self.red.add(&self.blue),
        ]
    }
}

pub fn paper_basis() -> TernaryBasis {
    TernaryBasis {
        red: RgbColor::new(0.90, 0.17, 0.00),
        green: RgbColor::new(0.00, 0.50, 0.00),
        blue: RgbColor::new(0.10, 0.33, 1.00),
    }
}

pub fn rgb_basis() -> TernaryBasis {
    TernaryBasis {
        red: RgbColor::new(1.0, 0.0, 0.0),
        green: RgbColor::new(0.0, 1.0, 0.0),
        blue: RgbColor::new(0.0, 0.0, 1.0),
    }
}

/// `c = v1 B1 + v2 B2 + v3 B3` per pixel. Channels must lie in `[0, 1]`.
pub fn compose(ch1: &ScalarGrid, ch2: &ScalarGrid, ch3: &ScalarGrid, basis: &TernaryBasis) -> Result<RgbImage> {
    ch2.check_same_dims(ch1.dims())?;
    ch3.check_same_dims(ch1.dims())?;
    for ch in [ch1, ch2, ch3] {
        if let Some(bad) = ch.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Range(format!("channel value {bad} outside [0, 1]")));
        }
    }
    let pixels = ch1
        .values()
        .iter()
        .zip(ch2.values())
        .zip(ch3.values())
        .map(|((&a, &b), &c)| {
            let p = basis.red.scale(a).add(&basis.green.scale(b)).add(&basis.blue.scale(c));
            // rounding can push a sum of weights that is exactly 1 past it
            RgbColor::new(p.r.min(1.0), p.g.min(1.0), p.b.min(1.0))
        })
        .collect();
    RgbImage::new(ch1.width(), ch1.height(), pixels)
}

/// Per-pixel CIELAB lightness.
pub fn lightness_image(img: &RgbImage) -> Result<ScalarGrid> {
    let values = img
        .pixels()
        .iter()
        .map(|c| c.to_lab().map(|l| l.l))
        .collect::<Result<Vec<_>>>()?;
    ScalarGrid::new(img.width(), img.height(), values)
}

/// Corners of the parallelepiped spanned by the basis:
/// `0, B1, B2, B3, B1+B2, B1+B3, B2+B3, B1+B2+B3`.
pub fn basis_gamut_vertices(basis: &TernaryBasis) -> [RgbColor; 8] {
    let [r, g, b] = basis.colors();
    [
        RgbColor::BLACK,
        r,
        g,
        b,
        r.add(&g),
        r.add(&b),
        g.add(&b),
        r.add(&g).add(&b),
    ]
}
