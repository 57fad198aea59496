//! Error type shared by every module of the crate.

use std::fmt;

/// Everything that can go wrong in the library.
///
/// The math errors (`DegenerateRange`, `OutOfDomain`, `ZeroVariance`) are
/// recoverable conditions a caller may want to branch on; the rest are
/// contract violations or malformed input.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A gray level must be a finite, strictly positive real.
    InvalidGrayLevel { value: f64 },
    /// The model ceiling M must be a finite, strictly positive real.
    InvalidModelMax { value: f64 },
    /// A gain (homothety exponent) was non-finite, or non-positive where
    /// positivity is required.
    InvalidGain { value: f64 },
    /// A homothety left the representable range of gray levels.
    HomothetyOverflow { gain: f64 },
    /// The gray-level product overflowed: its exponent left the range
    /// representable by double-precision floats.
    ProductOverflow { exponent: f64 },
    /// Operand images do not have the same dimensions.
    DimensionMismatch { left: (u32, u32), right: (u32, u32) },
    /// Image construction with zero dimensions or a mismatched pixel count.
    InvalidDimensions { width: u32, height: u32, pixels: usize },
    /// A pixelwise operation failed at the given row-major pixel index.
    AtPixel { index: usize, source: Box<Error> },
    /// The bound pair is (near-)collapsed: no range left to optimize.
    DegenerateRange { lower: f64, upper: f64 },
    /// The bound pair does not satisfy 0 < lower < upper < M.
    OutOfDomain { lower: f64, upper: f64, max: f64 },
    /// The pixel distribution has (near-)zero variance; the two-value
    /// summary system is singular.
    ZeroVariance { sigma_sq: f64 },
    /// A curve sweep with a non-increasing interval or fewer than two steps.
    InvalidSweep { min: f64, max: f64, steps: u32 },
    /// The quantization offset must lie strictly inside (0, 1).
    InvalidOffset { offset: f64 },
    /// M leaves no headroom for the dequantization mapping to stay inside
    /// the open interval (0, M).
    QuantizationHeadroom { max: f64, offset: f64 },
    /// Malformed PGM stream; `offset` is the byte position of the problem.
    Parse { offset: usize, message: String },
    /// Well-formed Netpbm data of a kind this codec does not handle.
    Unsupported { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrayLevel { value } => {
                write!(f, "gray level must be finite and > 0, got {value}")
            }
            Error::InvalidModelMax { value } => {
                write!(f, "model ceiling M must be finite and > 0, got {value}")
            }
            Error::InvalidGain { value } => write!(f, "invalid gain {value}"),
            Error::HomothetyOverflow { gain } => {
                write!(f, "homothety with gain {gain} left the representable range")
            }
            Error::ProductOverflow { exponent } => write!(
                f,
                "gray-level product overflowed (exponent {exponent} is not representable)"
            ),
            Error::DimensionMismatch { left, right } => write!(
                f,
                "image dimensions differ: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::InvalidDimensions {
                width,
                height,
                pixels,
            } => write!(
                f,
                "invalid image: {width}x{height} with {pixels} pixel(s)"
            ),
            Error::AtPixel { index, source } => {
                write!(f, "pixel {index}: {source}")
            }
            Error::DegenerateRange { lower, upper } => {
                write!(f, "degenerate-range: bounds {lower} and {upper} are too close")
            }
            Error::OutOfDomain { lower, upper, max } => write!(
                f,
                "out-of-domain: bounds ({lower}, {upper}) must satisfy 0 < lower < upper < {max}"
            ),
            Error::ZeroVariance { sigma_sq } => {
                write!(f, "zero-variance: sigma^2 = {sigma_sq} is too small to summarize")
            }
            Error::InvalidSweep { min, max, steps } => write!(
                f,
                "invalid sweep: need 0 < min < max and steps >= 2, got [{min}, {max}] with {steps} step(s)"
            ),
            Error::InvalidOffset { offset } => {
                write!(f, "quantization offset must lie in (0, 1), got {offset}")
            }
            Error::QuantizationHeadroom { max, offset } => write!(
                f,
                "model ceiling {max} leaves no headroom for codes up to 255 + offset {offset}"
            ),
            Error::Parse { offset, message } => {
                write!(f, "parse error at byte {offset}: {message}")
            }
            Error::Unsupported { message } => write!(f, "unsupported format: {message}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::AtPixel { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
