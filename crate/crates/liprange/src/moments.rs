//! Noise-robust enhancement through a two-value moment summary.
//!
//! A handful of corrupted pixels at the extremes of the code range pin an
//! image's min/max bounds and make the dynamic-range gain useless. Instead
//! of the bounds, this module summarizes the whole pixel distribution by a
//! pair of values (lower, upper) with weights (p_lower, p_upper) chosen so
//! that the first three raw moments are preserved:
//!
//! ```text
//! p_l + p_u               = 1
//! p_l·lower  + p_u·upper  = m1
//! p_l·lower² + p_u·upper² = m2
//! p_l·lower³ + p_u·upper³ = m3
//! ```
//!
//! The pair always lies inside the support of the distribution, so it is
//! insensitive to a few extreme outliers. Feeding it through the shared
//! [`optimal_gain`](crate::range::optimal_gain) formula yields the mean
//! gain and the transform applied by [`enhance`].

use crate::error::{Error, Result};
use crate::image::{self, GrayImage};
use crate::lip::{GrayLevel, LipContext};
use crate::range::{self, GainMethod, GainReport};
use crate::sum;

/// Relative σ² threshold below which the summary system is singular.
const ZERO_VARIANCE: f64 = 1e-12;

/// Raw and central moments of an image's pixel value distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageStats {
    /// Mean pixel value.
    pub m1: f64,
    /// Mean squared pixel value.
    pub m2: f64,
    /// Mean cubed pixel value.
    pub m3: f64,
    /// σ² = m2 − m1².
    pub variance: f64,
    /// μ³ = m3 − 3·m2·m1 + 2·m1³; its sign is the skew direction.
    pub third_central: f64,
}

/// The moment-matched pair and its weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoValueSummary {
    pub lower: GrayLevel,
    pub upper: GrayLevel,
    pub p_lower: f64,
    pub p_upper: f64,
}

/// First three raw moments plus the derived central moments.
///
/// Accumulation runs over the fixed reduction tree of [`crate::sum`], so
/// the result is reproducible across runs and thread schedules.
pub fn image_stats(f: &GrayImage) -> ImageStats {
    let sums = sum::moment_sums(f.pixels());
    let n = sums.count as f64;
    let m1 = sums.sum_v() / n;
    let m2 = sums.sum_v2() / n;
    let m3 = sums.sum_v3() / n;
    // Nonnegative in exact arithmetic; clamp away rounding noise.
    let variance = (m2 - m1 * m1).max(0.0);
    let third_central = m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1;
    ImageStats {
        m1,
        m2,
        m3,
        variance,
        third_central,
    }
}

/// Solves the moment system for the two-value summary.
///
/// With A = m1 − lower and B = upper − m1 the system reduces to A·B = σ²
/// and B − A = μ³/σ², whence
///
/// ```text
/// lower = m1 − (√(4σ⁶ + μ⁶) − μ³) / (2σ²)
/// upper = m1 + (√(4σ⁶ + μ⁶) + μ³) / (2σ²)
/// ```
///
/// and p_upper = A/(A + B). Whichever of the two numerators would cancel
/// is computed through its rationalized form 2σ⁴/(√(4σ⁶+μ⁶) ± μ³) instead.
pub fn two_value_summary(ctx: &LipContext, stats: &ImageStats) -> Result<TwoValueSummary> {
    let var = stats.variance;
    let max = ctx.max();
    if var <= ZERO_VARIANCE * max * max {
        return Err(Error::ZeroVariance { sigma_sq: var });
    }
    let skew = stats.third_central;
    let radical = (4.0 * var * var * var + skew * skew).sqrt();
    let (below, above) = if skew >= 0.0 {
        let wide = (radical + skew) / (2.0 * var);
        (2.0 * var * var / (radical + skew), wide)
    } else {
        let wide = (radical - skew) / (2.0 * var);
        (wide, 2.0 * var * var / (radical - skew))
    };
    let lower = GrayLevel::new(stats.m1 - below)?;
    let upper = GrayLevel::new(stats.m1 + above)?;
    let p_upper = below / (below + above);
    Ok(TwoValueSummary {
        lower,
        upper,
        p_lower: 1.0 - p_upper,
        p_upper,
    })
}

/// The spread upper − lower of the summary, as a plain real difference.
pub fn mean_dynamic_range(summary: &TwoValueSummary) -> f64 {
    summary.upper.value() - summary.lower.value()
}

/// Applies the optimal mean gain to the whole image.
///
/// The summary is computed once from the input; the gain maximizes the
/// spread of the summary pair under the homothety, not the spread of the
/// transformed image.
pub fn enhance(
    ctx: &LipContext,
    f: &GrayImage,
) -> Result<(GrayImage, GainReport, TwoValueSummary)> {
    let stats = image_stats(f);
    let summary = two_value_summary(ctx, &stats)?;
    let lambda = range::optimal_gain(ctx, summary.lower, summary.upper)?;
    let range_before = mean_dynamic_range(&summary);
    let range_after = range::range_at(ctx, summary.lower, summary.upper, lambda)?;
    let out = image::scalar_mul(ctx, lambda, f)?;
    Ok((
        out,
        GainReport {
            method: GainMethod::Mean,
            lambda,
            range_before,
            range_after,
        },
        summary,
    ))
}
