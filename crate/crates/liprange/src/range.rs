//! Optimal dynamic-range enhancement.
//!
//! For a bound pair 0 < a < b < M, the gray-level homothety with exponent λ
//! maps the pair to (M·(a/M)^λ, M·(b/M)^λ). The spread of the mapped pair,
//!
//! ```text
//! r(λ) = M·(b/M)^λ − M·(a/M)^λ,
//! ```
//!
//! has a unique maximizer over λ > 0 with the closed form
//!
//! ```text
//! λ* = ln( ln(M/a) / ln(M/b) ) / ln(b/a).
//! ```
//!
//! [`enhance`] applies λ* computed from an image's own bounds; the same
//! closed form applied to a two-value moment summary drives
//! [`moments::enhance`](crate::moments::enhance).

use crate::error::{Error, Result};
use crate::image::{self, GrayImage};
use crate::lip::{GrayLevel, LipContext};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Bound pairs closer than this fraction of M cannot be optimized stably.
const DEGENERATE_SPAN: f64 = 1e-9;

/// Which pair of values a gain was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainMethod {
    /// The image's own min/max bounds.
    Dynamic,
    /// The two-value moment summary.
    Mean,
}

impl GainMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GainMethod::Dynamic => "dynamic",
            GainMethod::Mean => "mean",
        }
    }
}

/// The gain applied by an enhancement together with the range it acted on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport {
    pub method: GainMethod,
    pub lambda: f64,
    pub range_before: f64,
    pub range_after: f64,
}

/// One point of a gain sweep: the range objective evaluated at `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub lambda: f64,
    pub range: f64,
}

/// A validated linear gain sweep, endpoints inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    min: f64,
    max: f64,
    steps: u32,
}

impl Sweep {
    pub fn new(min: f64, max: f64, steps: u32) -> Result<Self> {
        let valid = min.is_finite() && max.is_finite() && min > 0.0 && min < max && steps >= 2;
        if valid {
            Ok(Sweep { min, max, steps })
        } else {
            Err(Error::InvalidSweep { min, max, steps })
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// The k-th grid point; the last one is exactly `max`.
    fn lambda_at(&self, k: u32) -> f64 {
        if k == self.steps - 1 {
            self.max
        } else {
            let step = (self.max - self.min) / (self.steps - 1) as f64;
            self.min + step * k as f64
        }
    }
}

/// Checks 0 < lower < upper < M and returns the raw values.
fn checked_pair(ctx: &LipContext, lower: GrayLevel, upper: GrayLevel) -> Result<(f64, f64)> {
    let (a, b) = (lower.value(), upper.value());
    let max = ctx.max();
    if b >= max || a >= max {
        return Err(Error::OutOfDomain {
            lower: a,
            upper: b,
            max,
        });
    }
    // Also rejects reversed pairs and ratios so close to 1 that ln(b/a)
    // loses all precision.
    if b - a < DEGENERATE_SPAN * max || (b / a).ln() == 0.0 {
        return Err(Error::DegenerateRange { lower: a, upper: b });
    }
    Ok((a, b))
}

fn checked_gain(lambda: f64) -> Result<f64> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(lambda)
    } else {
        Err(Error::InvalidGain { value: lambda })
    }
}

/// The range objective r(λ) = M·(b/M)^λ − M·(a/M)^λ.
pub fn range_at(ctx: &LipContext, lower: GrayLevel, upper: GrayLevel, lambda: f64) -> Result<f64> {
    let (a, b) = checked_pair(ctx, lower, upper)?;
    let lambda = checked_gain(lambda)?;
    let max = ctx.max();
    Ok(max * (b / max).powf(lambda) - max * (a / max).powf(lambda))
}

/// First derivative of the range objective in λ.
pub fn range_derivative(
    ctx: &LipContext,
    lower: GrayLevel,
    upper: GrayLevel,
    lambda: f64,
) -> Result<f64> {
    let (a, b) = checked_pair(ctx, lower, upper)?;
    let lambda = checked_gain(lambda)?;
    let max = ctx.max();
    let (la, lb) = ((a / max).ln(), (b / max).ln());
    Ok(max * (b / max).powf(lambda) * lb - max * (a / max).powf(lambda) * la)
}

/// Second derivative of the range objective in λ.
///
/// It vanishes at exactly twice the optimal gain, is negative below and
/// positive above.
pub fn range_second_derivative(
    ctx: &LipContext,
    lower: GrayLevel,
    upper: GrayLevel,
    lambda: f64,
) -> Result<f64> {
    let (a, b) = checked_pair(ctx, lower, upper)?;
    let lambda = checked_gain(lambda)?;
    let max = ctx.max();
    let (la, lb) = ((a / max).ln(), (b / max).ln());
    Ok(max * (b / max).powf(lambda) * lb * lb - max * (a / max).powf(lambda) * la * la)
}

/// The unique λ > 0 maximizing the range objective of the pair.
///
/// This single implementation serves both enhancement methods: fed an
/// image's min/max bounds it is the dynamic-range gain, fed the two-value
/// summary it is the mean gain.
pub fn optimal_gain(ctx: &LipContext, lower: GrayLevel, upper: GrayLevel) -> Result<f64> {
    let (a, b) = checked_pair(ctx, lower, upper)?;
    let max = ctx.max();
    Ok(((max / a).ln() / (max / b).ln()).ln() / (b / a).ln())
}

/// Applies the optimal dynamic-range gain to the whole image.
pub fn enhance(ctx: &LipContext, f: &GrayImage) -> Result<(GrayImage, GainReport)> {
    let bounds = image::bounds(f);
    let lambda = optimal_gain(ctx, bounds.lower, bounds.upper)?;
    let range_before = bounds.upper.value() - bounds.lower.value();
    let out = image::scalar_mul(ctx, lambda, f)?;
    let range_after = image::dynamic_range(&out);
    Ok((
        out,
        GainReport {
            method: GainMethod::Dynamic,
            lambda,
            range_before,
            range_after,
        },
    ))
}

/// Samples the range objective over a linear λ grid, ascending.
pub fn curve(
    ctx: &LipContext,
    lower: GrayLevel,
    upper: GrayLevel,
    sweep: &Sweep,
) -> Result<Vec<CurveSample>> {
    let (a, b) = checked_pair(ctx, lower, upper)?;
    let max = ctx.max();
    let eval = |k: u32| {
        let lambda = sweep.lambda_at(k);
        CurveSample {
            lambda,
            range: max * (b / max).powf(lambda) - max * (a / max).powf(lambda),
        }
    };
    #[cfg(feature = "parallel")]
    let samples: Vec<CurveSample> = (0..sweep.steps).into_par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let samples: Vec<CurveSample> = (0..sweep.steps).map(eval).collect();
    Ok(samples)
}
