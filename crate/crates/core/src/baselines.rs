//! Reference models run on the complete interaction graph: DeGroot averaging
//! and Hegselmann–Krause bounded confidence.

use alloc::vec::Vec;

use crate::trajectory::{RunSettings, TrajectoryRecord};
use crate::{metrics, Error, Result};

/// Tolerance on row sums.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightMode {
    /// Every entry `1/N`.
    Uniform,
    /// Row `i` proportional to `exp(-|θ_i - θ_j|)`, self included.
    Distance,
}

/// Row-stochastic `N × N` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DeGrootWeights {
    size: usize,
    entries: Vec<f64>,
}

impl DeGrootWeights {
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::LengthMismatch {
                expected: size * size,
                actual: entries.len(),
            });
        }
        for row in 0..size {
            let r = &entries[row * size..(row + 1) * size];
            for (col, &value) in r.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::WeightOutOfRange { row, col, value });
                }
            }
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::NotRowStochastic { row, sum });
            }
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }
}

pub fn degroot_weights(opinions: &[f64], mode: WeightMode) -> Result<DeGrootWeights> {
    let n = opinions.len();
    if n == 0 {
        return Err(Error::EmptyOpinions);
    }
    let mut entries = Vec::with_capacity(n * n);
    match mode {
        WeightMode::Uniform => entries.resize(n * n, 1.0 / n as f64),
        WeightMode::Distance => {
            for &xi in opinions {
                let start = entries.len();
                entries.extend(opinions.iter().map(|&xj| libm::exp(-(xi - xj).abs())));
                let row = &mut entries[start..];
                let total: f64 = row.iter().sum();
                row.iter_mut().for_each(|w| *w /= total);
            }
        }
    }
    DeGrootWeights::new(n, entries)
}

pub fn degroot_step(opinions: &[f64], weights: &DeGrootWeights) -> Result<Vec<f64>> {
    if opinions.len() != weights.size {
        return Err(Error::LengthMismatch {
            expected: weights.size,
            actual: opinions.len(),
        });
    }
    Ok((0..weights.size)
        .map(|i| {
            let v: f64 = weights
                .row(i)
                .iter()
                .zip(opinions)
                .map(|(w, x)| w * x)
                .sum();
            v.clamp(0.0, 1.0)
        })
        .collect())
}

/// Per-agent confidence bounds `ε_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBounds(Vec<f64>);

impl ConfidenceBounds {
    pub fn new(bounds: Vec<f64>) -> Result<Self> {
        if let Some(&value) = bounds.iter().find(|b| !(0.0..=1.0).contains(*b)) {
            return Err(Error::ProbabilityOutOfRange {
                name: "confidence bound",
                value,
            });
        }
        Ok(Self(bounds))
    }

    pub fn homogeneous(n: usize, bound: f64) -> Result<Self> {
        Self::new(alloc::vec![bound; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

/// Agents within `bound` of `agent`, the agent itself included.
pub fn hk_confidence_set(agent: usize, opinions: &[f64], bound: f64) -> Result<Vec<usize>> {
    if bound.is_nan() || bound < 0.0 {
        return Err(Error::InvalidTolerance(bound));
    }
    if agent >= opinions.len() {
        return Err(Error::VertexOutOfRange {
            vertex: agent,
            size: opinions.len(),
        });
    }
    let xi = opinions[agent];
    Ok((0..opinions.len())
        .filter(|&j| (xi - opinions[j]).abs() <= bound)
        .collect())
}

pub fn hk_step(opinions: &[f64], bounds: &ConfidenceBounds) -> Result<Vec<f64>> {
    if opinions.len() != bounds.len() {
        return Err(Error::LengthMismatch {
            expected: bounds.len(),
            actual: opinions.len(),
        });
    }
    (0..opinions.len())
        .map(|i| {
            let set = hk_confidence_set(i, opinions, bounds.0[i])?;
            Ok(set.iter().map(|&j| opinions[j]).sum::<f64>() / set.len() as f64)
        })
        .collect()
}

fn iterate<F>(initial: Vec<f64>, settings: &RunSettings, mut next: F) -> Result<TrajectoryRecord>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    settings.validate()?;
    let mut iterations = Vec::with_capacity(settings.t_max + 1);
    iterations.push(settings.record(0, initial, None, None, None)?);
    let mut converged = false;
    for k in 1..=settings.t_max {
        let prev = &iterations.last().expect("initial state recorded").values;
        let values = next(prev)?;
        let delta = metrics::delta_max(prev, &values)?;
        let prev = prev.clone();
        iterations.push(settings.record(k, values, Some(&prev), None, None)?);
        if delta < settings.epsilon {
            converged = true;
            break;
        }
    }
    Ok(TrajectoryRecord {
        iterations,
        converged,
    })
}

/// DeGroot run. With `freeze_weights` the matrix is built once from the
/// initial opinions; otherwise it is recomputed from the current opinions
/// every step (identical for [`WeightMode::Uniform`]).
pub fn degroot_run(
    initial: Vec<f64>,
    mode: WeightMode,
    freeze_weights: bool,
    settings: &RunSettings,
) -> Result<TrajectoryRecord> {
    let frozen = degroot_weights(&initial, mode)?;
    iterate(initial, settings, |x| {
        if freeze_weights || mode == WeightMode::Uniform {
            degroot_step(x, &frozen)
        } else {
            degroot_step(x, &degroot_weights(x, mode)?)
        }
    })
}

pub fn hk_run(
    initial: Vec<f64>,
    bounds: &ConfidenceBounds,
    settings: &RunSettings,
) -> Result<TrajectoryRecord> {
    if initial.len() != bounds.len() {
        return Err(Error::LengthMismatch {
            expected: initial.len(),
            actual: bounds.len(),
        });
    }
    iterate(initial, settings, |x| hk_step(x, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn uniform_weights_are_one_over_n() {
        let w = degroot_weights(&[0.1; 20], WeightMode::Uniform).unwrap();
        assert!((0..20).all(|i| w.row(i).iter().all(|&x| x == 0.05)));
    }

    #[test]
    fn distance_weights_row_zero() {
        // (1, e^-0.5, e^-1) normalised, computed by hand.
        let w = degroot_weights(&[0.0, 0.5, 1.0], WeightMode::Distance).unwrap();
        let expected = [0.50648, 0.30719, 0.18633];
        for (got, want) in w.row(0).iter().zip(expected) {
            assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        }
    }

    #[test]
    fn distance_weights_on_consensus_are_uniform() {
        let w = degroot_weights(&[0.3; 4], WeightMode::Distance).unwrap();
        assert!((0..4).all(|i| w.row(i).iter().all(|&x| (x - 0.25).abs() < 1e-15)));
    }

    #[test]
    fn weight_validation() {
        assert!(matches!(
            DeGrootWeights::new(2, vec![0.5, 0.5, 0.6, 0.6]),
            Err(Error::WeightOutOfRange { .. }) | Err(Error::NotRowStochastic { .. })
        ));
        assert_eq!(
            DeGrootWeights::new(2, vec![0.5, 0.4, 0.5, 0.5]),
            Err(Error::NotRowStochastic { row: 0, sum: 0.9 })
        );
        assert!(DeGrootWeights::new(2, vec![1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn identity_weights_leave_opinions() {
        let w = DeGrootWeights::new(3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            degroot_step(&[0.1, 0.5, 0.9], &w).unwrap(),
            vec![0.1, 0.5, 0.9]
        );
    }

    #[test]
    fn confidence_set_examples() {
        let x = [0.0, 0.5, 1.0];
        assert_eq!(hk_confidence_set(1, &x, 0.5).unwrap(), vec![0, 1, 2]);
        assert_eq!(hk_confidence_set(0, &x, 0.5).unwrap(), vec![0, 1]);
        assert_eq!(hk_confidence_set(2, &x, 0.0).unwrap(), vec![2]);
        assert!(hk_confidence_set(3, &x, 0.5).is_err());
        assert!(hk_confidence_set(0, &x, -0.1).is_err());
    }

    #[test]
    fn hk_step_examples() {
        let x = [0.0, 0.5, 1.0];
        let out = hk_step(&x, &ConfidenceBounds::homogeneous(3, 0.5).unwrap()).unwrap();
        assert_eq!(out, vec![0.25, 0.5, 0.75]);
        let out = hk_step(&x, &ConfidenceBounds::homogeneous(3, 1.0).unwrap()).unwrap();
        assert_eq!(out, vec![0.5; 3]);
        let out = hk_step(&x, &ConfidenceBounds::homogeneous(3, 0.0).unwrap()).unwrap();
        assert_eq!(out, x.to_vec());
        assert!(hk_step(&x, &ConfidenceBounds::homogeneous(2, 0.1).unwrap()).is_err());
    }

    #[test]
    fn bounds_validation() {
        assert!(ConfidenceBounds::new(vec![0.2, 1.2]).is_err());
        assert!(ConfidenceBounds::new(vec![0.2, 0.3]).is_ok());
        assert!(!ConfidenceBounds::new(vec![0.2, 0.3])
            .unwrap()
            .is_homogeneous());
    }
}
