//! Design and evaluation of perceptually uniform colour maps.
//!
//! Paths through CIELAB are sampled with equal perceptual contrast between
//! successive entries, giving linear, diverging, rainbow, cyclic and
//! isoluminant maps. The crate also generates test images, renders and
//! relief-shades gridded data, and composes ternary images.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod colorspace;
pub mod equalize;
pub mod error;
pub mod fixtures;
pub mod grid;
pub mod io;
pub mod relief;
pub mod render;
pub mod spline;
pub mod ternary;
pub mod test_images;
pub mod uniformity;

pub use catalog::{Attribute, ColorMap, Provenance};
pub use colorspace::{LabColor, RgbColor};
pub use error::{Error, Result};
pub use grid::{RgbImage, ScalarGrid};
pub use spline::{ContrastMetric, MapPath, SampledPath, SplineOrder};
