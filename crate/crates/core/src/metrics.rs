//! Consensus measures over a vector of numeric opinions.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Default normaliser for the consensus index: the largest mean absolute
/// deviation attainable on `[0, 1]`.
pub const DEFAULT_MAX_DEVIATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsensusReport {
    pub variance: f64,
    pub range: f64,
    pub consensus_index: f64,
    pub cluster_count: usize,
    /// Largest per-agent change since the previous state; zero when there is
    /// no previous state.
    pub delta_max: f64,
}

fn non_empty(opinions: &[f64]) -> Result<()> {
    if opinions.is_empty() {
        Err(Error::EmptyOpinions)
    } else {
        Ok(())
    }
}

fn mean(opinions: &[f64]) -> f64 {
    opinions.iter().sum::<f64>() / opinions.len() as f64
}

/// Population variance (divides by `n`).
pub fn variance(opinions: &[f64]) -> Result<f64> {
    non_empty(opinions)?;
    let m = mean(opinions);
    Ok(opinions.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / opinions.len() as f64)
}

pub fn range(opinions: &[f64]) -> Result<f64> {
    non_empty(opinions)?;
    let (lo, hi) = opinions
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    Ok(hi - lo)
}

/// `1 - mean|x_i - x̄| / d_max`.
pub fn consensus_index(opinions: &[f64], d_max: f64) -> Result<f64> {
    non_empty(opinions)?;
    if d_max.is_nan() || d_max <= 0.0 {
        return Err(Error::InvalidMaxDeviation(d_max));
    }
    let m = mean(opinions);
    let mad = opinions.iter().map(|x| (x - m).abs()).sum::<f64>() / opinions.len() as f64;
    Ok(1.0 - mad / d_max)
}

/// Number of groups after sorting, where a gap wider than `tolerance`
/// between neighbouring values starts a new group.
pub fn cluster_count(opinions: &[f64], tolerance: f64) -> Result<usize> {
    non_empty(opinions)?;
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(Error::InvalidTolerance(tolerance));
    }
    let mut sorted: Vec<f64> = opinions.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(1 + sorted
        .windows(2)
        .filter(|w| w[1] - w[0] > tolerance)
        .count())
}

pub fn delta_max(previous: &[f64], next: &[f64]) -> Result<f64> {
    if previous.len() != next.len() {
        return Err(Error::LengthMismatch {
            expected: previous.len(),
            actual: next.len(),
        });
    }
    Ok(previous
        .iter()
        .zip(next)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

pub fn report(
    opinions: &[f64],
    previous: Option<&[f64]>,
    d_max: f64,
    cluster_tolerance: f64,
) -> Result<ConsensusReport> {
    Ok(ConsensusReport {
        variance: variance(opinions)?,
        range: range(opinions)?,
        consensus_index: consensus_index(opinions, d_max)?,
        cluster_count: cluster_count(opinions, cluster_tolerance)?,
        delta_max: match previous {
            Some(prev) => delta_max(prev, opinions)?,
            None => 0.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn split() -> Vec<f64> {
        let mut v = vec![0.0; 5];
        v.extend([0.5; 15]);
        v
    }

    #[test]
    fn variance_examples() {
        assert!((variance(&split()).unwrap() - 0.046875).abs() < 1e-12);
        assert_eq!(variance(&[0.3; 4]), Ok(0.0));
        assert_eq!(variance(&[0.0, 1.0]), Ok(0.25));
        assert_eq!(variance(&[]), Err(Error::EmptyOpinions));
    }

    #[test]
    fn range_examples() {
        assert_eq!(range(&split()), Ok(0.5));
        assert_eq!(range(&[0.7; 3]), Ok(0.0));
        assert!((range(&[0.2, 0.9]).unwrap() - 0.7).abs() < 1e-15);
        assert!(range(&[]).is_err());
    }

    #[test]
    fn consensus_index_examples() {
        assert!((consensus_index(&split(), 0.5).unwrap() - 0.625).abs() < 1e-12);
        assert_eq!(consensus_index(&[0.4; 5], 0.5), Ok(1.0));
        assert_eq!(consensus_index(&[0.0, 0.0, 1.0, 1.0], 0.5), Ok(0.0));
        assert_eq!(
            consensus_index(&[0.1], 0.0),
            Err(Error::InvalidMaxDeviation(0.0))
        );
    }

    #[test]
    fn cluster_count_examples() {
        assert_eq!(cluster_count(&[0.3; 6], 0.05), Ok(1));
        assert_eq!(cluster_count(&split(), 0.05), Ok(2));
        assert_eq!(cluster_count(&[0.0, 0.04, 0.08], 0.05), Ok(1));
        assert_eq!(cluster_count(&[0.2, 0.1, 0.2, 0.3], 0.0), Ok(3));
        assert!(cluster_count(&[0.1], -1.0).is_err());
    }

    #[test]
    fn delta_max_examples() {
        assert_eq!(delta_max(&[0.1, 0.2], &[0.1, 0.2]), Ok(0.0));
        assert!((delta_max(&[0.0, 0.5], &[0.2, 0.5]).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(
            delta_max(&[0.2, 0.5], &[0.0, 0.5]),
            delta_max(&[0.0, 0.5], &[0.2, 0.5])
        );
        assert_eq!(
            delta_max(&[0.0], &[0.0, 1.0]),
            Err(Error::LengthMismatch {
                expected: 1,
                actual: 2
            })
        );
    }

    #[test]
    fn report_without_previous_has_zero_delta() {
        let r = report(&split(), None, 0.5, 0.05).unwrap();
        assert_eq!(r.delta_max, 0.0);
        assert_eq!(r.cluster_count, 2);
    }
}
