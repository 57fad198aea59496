//! Images over the gray-level algebra: pixelwise lifts of the scalar
//! operations, plus bounds and dynamic range.
//!
//! Every operation is pure and each output pixel depends only on the
//! corresponding input pixel(s), so the parallel path is bit-identical to
//! the sequential one.

use crate::error::{Error, Result};
use crate::lip::{GrayLevel, LipContext};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A width×height grid of gray levels, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<GrayLevel>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, pixels: Vec<GrayLevel>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width as usize * height as usize {
            return Err(Error::InvalidDimensions {
                width,
                height,
                pixels: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image from raw values, validating each one.
    pub fn from_values(width: u32, height: u32, values: &[f64]) -> Result<Self> {
        let pixels = values
            .iter()
            .map(|&v| GrayLevel::new(v))
            .collect::<Result<Vec<_>>>()?;
        GrayImage::new(width, height, pixels)
    }

    pub fn constant(width: u32, height: u32, value: GrayLevel) -> Result<Self> {
        GrayImage::new(
            width,
            height,
            vec![value; width as usize * height as usize],
        )
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[GrayLevel] {
        &self.pixels
    }

    #[inline]
    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    fn same_dimensions(&self, other: &GrayImage) -> Result<()> {
        if self.dimensions() == other.dimensions() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dimensions(),
                right: other.dimensions(),
            })
        }
    }
}

/// The minimum and maximum pixel values of an image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: GrayLevel,
    pub upper: GrayLevel,
}

#[cfg(feature = "parallel")]
fn zip_pixels<F>(a: &[GrayLevel], b: &[GrayLevel], f: F) -> Vec<GrayLevel>
where
    F: Fn(GrayLevel, GrayLevel) -> GrayLevel + Sync,
{
    a.par_iter().zip(b.par_iter()).map(|(&x, &y)| f(x, y)).collect()
}

#[cfg(not(feature = "parallel"))]
fn zip_pixels<F>(a: &[GrayLevel], b: &[GrayLevel], f: F) -> Vec<GrayLevel>
where
    F: Fn(GrayLevel, GrayLevel) -> GrayLevel + Sync,
{
    a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect()
}

/// Fallible pixel map; the reported error is always the one at the lowest
/// pixel index, independent of scheduling.
fn try_map_pixels<F>(pixels: &[GrayLevel], f: F) -> Result<Vec<GrayLevel>>
where
    F: Fn(GrayLevel) -> Result<GrayLevel> + Sync,
{
    #[cfg(feature = "parallel")]
    let attempts: Vec<Result<GrayLevel>> = pixels.par_iter().map(|&p| f(p)).collect();
    #[cfg(not(feature = "parallel"))]
    let attempts: Vec<Result<GrayLevel>> = pixels.iter().map(|&p| f(p)).collect();

    let mut out = Vec::with_capacity(attempts.len());
    for (index, attempt) in attempts.into_iter().enumerate() {
        match attempt {
            Ok(p) => out.push(p),
            Err(source) => {
                return Err(Error::AtPixel {
                    index,
                    source: Box::new(source),
                })
            }
        }
    }
    Ok(out)
}

fn try_zip_pixels<F>(a: &[GrayLevel], b: &[GrayLevel], f: F) -> Result<Vec<GrayLevel>>
where
    F: Fn(GrayLevel, GrayLevel) -> Result<GrayLevel> + Sync,
{
    #[cfg(feature = "parallel")]
    let attempts: Vec<Result<GrayLevel>> = a
        .par_iter()
        .zip(b.par_iter())
        .map(|(&x, &y)| f(x, y))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let attempts: Vec<Result<GrayLevel>> =
        a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect();

    let mut out = Vec::with_capacity(attempts.len());
    for (index, attempt) in attempts.into_iter().enumerate() {
        match attempt {
            Ok(p) => out.push(p),
            Err(source) => {
                return Err(Error::AtPixel {
                    index,
                    source: Box::new(source),
                })
            }
        }
    }
    Ok(out)
}

/// Pixelwise gray-level addition.
pub fn add(ctx: &LipContext, a: &GrayImage, b: &GrayImage) -> Result<GrayImage> {
    a.same_dimensions(b)?;
    let pixels = zip_pixels(a.pixels(), b.pixels(), |x, y| ctx.add(x, y));
    GrayImage::new(a.width, a.height, pixels)
}

/// Pixelwise gray-level subtraction.
pub fn sub(ctx: &LipContext, a: &GrayImage, b: &GrayImage) -> Result<GrayImage> {
    a.same_dimensions(b)?;
    let pixels = zip_pixels(a.pixels(), b.pixels(), |x, y| ctx.sub(x, y));
    GrayImage::new(a.width, a.height, pixels)
}

/// Pixelwise homothety λ ⊙ f; the power law M·(v/M)^λ at every pixel.
pub fn scalar_mul(ctx: &LipContext, gain: f64, f: &GrayImage) -> Result<GrayImage> {
    if !gain.is_finite() {
        return Err(Error::InvalidGain { value: gain });
    }
    let pixels = try_map_pixels(f.pixels(), |p| ctx.scalar_mul(gain, p))?;
    GrayImage::new(f.width, f.height, pixels)
}

/// Pixelwise gray-level product.
pub fn mul(ctx: &LipContext, a: &GrayImage, b: &GrayImage) -> Result<GrayImage> {
    a.same_dimensions(b)?;
    let pixels = try_zip_pixels(a.pixels(), b.pixels(), |x, y| ctx.mul(x, y))?;
    GrayImage::new(a.width, a.height, pixels)
}

/// Minimum and maximum pixel values.
pub fn bounds(f: &GrayImage) -> Bounds {
    // min/max are associative and commutative and no pixel is NaN, so the
    // parallel reduction is order-insensitive.
    #[cfg(feature = "parallel")]
    let (lo, hi) = f
        .pixels()
        .par_iter()
        .map(|p| (p.value(), p.value()))
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |(al, ah), (bl, bh)| (al.min(bl), ah.max(bh)),
        );
    #[cfg(not(feature = "parallel"))]
    let (lo, hi) = f.pixels().iter().map(|p| (p.value(), p.value())).fold(
        (f64::INFINITY, f64::NEG_INFINITY),
        |(al, ah), (bl, bh)| (al.min(bl), ah.max(bh)),
    );
    Bounds {
        lower: GrayLevel::new_unchecked(lo),
        upper: GrayLevel::new_unchecked(hi),
    }
}

/// The plain real difference max − min.
pub fn dynamic_range(f: &GrayImage) -> f64 {
    let b = bounds(f);
    b.upper.value() - b.lower.value()
}
