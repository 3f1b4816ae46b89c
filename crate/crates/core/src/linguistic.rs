//! Balanced linguistic term sets `h_0 .. h_{2Φ}` and their numeric scale.
//!
//! Term `h_j` maps to
//!
//! ```text
//!          a^Φ - a^(Φ-j)
//! θ_j =   ---------------          0 <= j <= Φ
//!           2a^Φ - 2
//!
//!          a^Φ + a^(j-Φ) - 2
//! θ_j =   -------------------      Φ < j <= 2Φ
//!            2a^Φ - 2
//! ```
//!
//! The two branches are mirror images (`θ_j + θ_{2Φ-j} = 1`), so the upper
//! half is stored as `1 - θ_{2Φ-j}`. That keeps the negation identity exact in
//! floating point instead of merely close.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticTermSet {
    phi: usize,
    base: f64,
    values: Vec<f64>,
}

impl LinguisticTermSet {
    pub fn new(phi: usize, base: f64) -> Result<Self> {
        if phi == 0 {
            return Err(Error::ZeroHalfWidth);
        }
        if !base.is_finite() || base <= 1.0 {
            return Err(Error::InvalidBase(base));
        }
        let t = phi as f64;
        let top = libm::pow(base, t);
        let denom = 2.0 * top - 2.0;

        let mut values = alloc::vec![0.0; 2 * phi + 1];
        for (j, v) in values.iter_mut().take(phi + 1).enumerate() {
            *v = (top - libm::pow(base, t - j as f64)) / denom;
        }
        for j in phi + 1..=2 * phi {
            values[j] = 1.0 - values[2 * phi - j];
        }

        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        if !increasing || !top.is_finite() {
            return Err(Error::DegenerateScale { phi, base });
        }
        Ok(Self { phi, base, values })
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Number of terms, `2Φ + 1`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_index(&self) -> usize {
        2 * self.phi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Result<f64> {
        self.check(index)?;
        Ok(self.values[index])
    }

    /// Index of the term closest to `value`. Exact ties go to the lower index.
    pub fn nearest(&self, value: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OpinionOutOfRange(value));
        }
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (j, &v) in self.values.iter().enumerate() {
            let d = (v - value).abs();
            if d < best_dist {
                best = j;
                best_dist = d;
            }
        }
        Ok(best)
    }

    pub fn negate(&self, index: usize) -> Result<usize> {
        self.check(index)?;
        Ok(self.max_index() - index)
    }

    pub fn max(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(i.max(j))
    }

    pub fn min(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(i.min(j))
    }

    /// Smallest distance between two adjacent term values.
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    fn check(&self, index: usize) -> Result<()> {
        if index > self.max_index() {
            return Err(Error::TermIndexOutOfRange {
                index,
                max: self.max_index(),
            });
        }
        Ok(())
    }
}
