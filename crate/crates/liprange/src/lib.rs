//! Grayscale dynamic-range enhancement over a logarithmic image model.
//!
//! Gray levels form a real algebra under nonlinear addition, scalar
//! multiplication and product parameterized by a ceiling M ([`lip`]);
//! images lift the operations pixelwise ([`image`]). Scalar multiplication
//! by λ is pixelwise the power law M·(v/M)^λ — a gamma correction — and the
//! crate computes two closed-form optimal exponents:
//!
//! * [`range::enhance`] maximizes the spread between the image's min and
//!   max values;
//! * [`moments::enhance`] maximizes the spread of a two-value summary that
//!   preserves the image's first three moments, which makes it robust to a
//!   few corrupted extreme pixels.
//!
//! [`pnm`] reads and writes 8-bit PGM files and maps integer codes into the
//! open interval (0, M) the model requires.
//!
//! With the default `parallel` feature the pixel maps, reductions and curve
//! sweeps run on rayon; results are bit-identical to the sequential builds
//! because every reduction uses a fixed tree shape.

pub mod error;
pub mod image;
pub mod lip;
pub mod moments;
pub mod pnm;
pub mod range;

mod sum;

pub use error::{Error, Result};
pub use image::{Bounds, GrayImage};
pub use lip::{GrayLevel, LipContext};
pub use moments::{ImageStats, TwoValueSummary};
pub use range::{CurveSample, GainMethod, GainReport, Sweep};
