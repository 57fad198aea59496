//! Deterministic compensated accumulation of the first three raw moments.
//!
//! The reduction is a binary tree whose shape depends only on the slice
//! length: leaves of at most [`LEAF_LEN`] pixels are summed sequentially
//! with Neumaier compensation, and partial sums merge at fixed midpoints.
//! Whether the two subtrees of a node run on one thread or two therefore
//! cannot change a single bit of the result, which is what makes the
//! parallel feature safe to toggle.

use crate::lip::GrayLevel;

const LEAF_LEN: usize = 4096;

/// Compensated partial sums of v, v² and v³ over a pixel range.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct MomentSums {
    pub count: usize,
    sum1: f64,
    comp1: f64,
    sum2: f64,
    comp2: f64,
    sum3: f64,
    comp3: f64,
}

/// One Neumaier update: adds `x` into `(sum, comp)`.
#[inline]
fn accumulate(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl MomentSums {
    fn push(&mut self, value: f64) {
        accumulate(&mut self.sum1, &mut self.comp1, value);
        accumulate(&mut self.sum2, &mut self.comp2, value * value);
        accumulate(&mut self.sum3, &mut self.comp3, value * value * value);
        self.count += 1;
    }

    /// Folds `other` into `self`; the (sum, comp) pairs are absorbed in a
    /// fixed order so the merge is deterministic.
    fn merge(mut self, other: MomentSums) -> MomentSums {
        accumulate(&mut self.sum1, &mut self.comp1, other.sum1);
        accumulate(&mut self.sum1, &mut self.comp1, other.comp1);
        accumulate(&mut self.sum2, &mut self.comp2, other.sum2);
        accumulate(&mut self.sum2, &mut self.comp2, other.comp2);
        accumulate(&mut self.sum3, &mut self.comp3, other.sum3);
        accumulate(&mut self.sum3, &mut self.comp3, other.comp3);
        self.count += other.count;
        self
    }

    pub fn sum_v(&self) -> f64 {
        self.sum1 + self.comp1
    }

    pub fn sum_v2(&self) -> f64 {
        self.sum2 + self.comp2
    }

    pub fn sum_v3(&self) -> f64 {
        self.sum3 + self.comp3
    }
}

fn leaf(pixels: &[GrayLevel]) -> MomentSums {
    let mut sums = MomentSums::default();
    for p in pixels {
        sums.push(p.value());
    }
    sums
}

#[cfg(feature = "parallel")]
pub(crate) fn moment_sums(pixels: &[GrayLevel]) -> MomentSums {
    if pixels.len() <= LEAF_LEN {
        return leaf(pixels);
    }
    let (left, right) = pixels.split_at(pixels.len() / 2);
    let (a, b) = rayon::join(|| moment_sums(left), || moment_sums(right));
    a.merge(b)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn moment_sums(pixels: &[GrayLevel]) -> MomentSums {
    if pixels.len() <= LEAF_LEN {
        return leaf(pixels);
    }
    let (left, right) = pixels.split_at(pixels.len() / 2);
    moment_sums(left).merge(moment_sums(right))
}
