//! The scalar algebra of gray levels.
//!
//! Gray levels live in the open half-line E = (0, ∞). A model constant M
//! turns E into a real algebra with a nonlinear addition, scalar
//! multiplication and product:
//!
//! ```text
//! a ⊕ b = a·b / M              (addition, neutral M)
//! λ ⊙ v = M·(v/M)^λ            (scalar multiplication)
//! a ⊗ b = M·e^(M·ln(a/M)·ln(b/M))   (product, neutral M·e^(1/M))
//! ```
//!
//! The map `v ↦ ln(v/M)` carries this structure onto ordinary real
//! arithmetic; [`LipContext::to_real`] / [`LipContext::from_real`] expose it
//! so tests can verify every law through an independent route.

use crate::error::{Error, Result};

/// Largest exponent `x` for which `exp(x)` is a normal finite f64.
const MAX_EXP: f64 = 709.78;

/// A strictly positive, finite gray value.
///
/// Values are not clamped to (0, M): the algebra is closed over all of
/// (0, ∞), and e.g. the opposite of a small value is a large one. Only the
/// codec clamps, at file-write time.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GrayLevel(f64);

impl GrayLevel {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(GrayLevel(value))
        } else {
            Err(Error::InvalidGrayLevel { value })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// For results of operations that preserve positivity by construction.
    #[inline]
    pub(crate) fn new_unchecked(value: f64) -> Self {
        debug_assert!(value > 0.0, "gray level must stay positive, got {value}");
        GrayLevel(value)
    }
}

/// The model constant M together with the operations it induces.
///
/// Immutable after construction; every method is a pure function, safe to
/// call concurrently from any number of threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipContext {
    max: f64,
}

impl Default for LipContext {
    /// M = 256, the ceiling matching 8-bit imagery dequantized with a
    /// half-code offset.
    fn default() -> Self {
        LipContext { max: 256.0 }
    }
}

impl LipContext {
    pub fn new(max: f64) -> Result<Self> {
        if max.is_finite() && max > 0.0 {
            Ok(LipContext { max })
        } else {
            Err(Error::InvalidModelMax { value: max })
        }
    }

    /// The gray-scale ceiling M.
    #[inline]
    pub fn max(&self) -> f64 {
        self.max
    }

    /// Neutral element of addition: M itself.
    #[inline]
    pub fn additive_neutral(&self) -> GrayLevel {
        GrayLevel(self.max)
    }

    /// Neutral element of the product: M·e^(1/M).
    #[inline]
    pub fn product_neutral(&self) -> GrayLevel {
        GrayLevel(self.max * (1.0 / self.max).exp())
    }

    /// Whether `v` can occur in an image under this model: 0 < v < M.
    #[inline]
    pub fn is_image_valid(&self, v: GrayLevel) -> bool {
        v.value() < self.max
    }

    /// a ⊕ b = a·b / M.
    #[inline]
    pub fn add(&self, a: GrayLevel, b: GrayLevel) -> GrayLevel {
        GrayLevel::new_unchecked(a.0 * b.0 / self.max)
    }

    /// The additive opposite M²/v, so that `add(v, opposite(v)) == M`.
    #[inline]
    pub fn opposite(&self, v: GrayLevel) -> GrayLevel {
        GrayLevel::new_unchecked(self.max * self.max / v.0)
    }

    /// a ⊖ b = a·M / b, equal to `add(a, opposite(b))`.
    #[inline]
    pub fn sub(&self, a: GrayLevel, b: GrayLevel) -> GrayLevel {
        GrayLevel::new_unchecked(a.0 * self.max / b.0)
    }

    /// λ ⊙ v = M·(v/M)^λ.
    ///
    /// Any finite λ is accepted; λ = 0 yields the additive neutral and
    /// λ = 1 is the identity.
    pub fn scalar_mul(&self, gain: f64, v: GrayLevel) -> Result<GrayLevel> {
        if !gain.is_finite() {
            return Err(Error::InvalidGain { value: gain });
        }
        let value = self.max * (v.0 / self.max).powf(gain);
        if value.is_finite() && value > 0.0 {
            Ok(GrayLevel(value))
        } else {
            Err(Error::HomothetyOverflow { gain })
        }
    }

    /// a ⊗ b = M·e^(M·ln(a/M)·ln(b/M)).
    ///
    /// The exponent grows with M and with the distance of both operands
    /// from M, so the result can leave the representable range for quite
    /// ordinary inputs; that is reported, never saturated.
    pub fn mul(&self, a: GrayLevel, b: GrayLevel) -> Result<GrayLevel> {
        let exponent = self.max * (a.0 / self.max).ln() * (b.0 / self.max).ln();
        if exponent.abs() > MAX_EXP {
            return Err(Error::ProductOverflow { exponent });
        }
        let value = self.max * exponent.exp();
        if value.is_finite() && value > 0.0 {
            Ok(GrayLevel(value))
        } else {
            Err(Error::ProductOverflow { exponent })
        }
    }

    /// The isomorphism φ(v) = ln(v/M) onto the reals.
    ///
    /// φ carries ⊕ to +, ⊙ to ·, and ⊗ to M-scaled real multiplication;
    /// the test suites use it as an independent oracle for the algebra laws.
    #[inline]
    pub fn to_real(&self, v: GrayLevel) -> f64 {
        (v.0 / self.max).ln()
    }

    /// Inverse of [`to_real`](Self::to_real): x ↦ M·e^x.
    pub fn from_real(&self, x: f64) -> Result<GrayLevel> {
        if !x.is_finite() {
            return Err(Error::InvalidGrayLevel { value: x });
        }
        GrayLevel::new(self.max * x.exp())
    }
}
