//! Per-iteration records shared by the main engine and the baselines.

use alloc::vec::Vec;

use crate::metrics::{self, ConsensusReport, DEFAULT_MAX_DEVIATION};
use crate::{Error, LinguisticTermSet, Result, SocialNetwork};

/// Pair examinations performed during one step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounters {
    /// Ordered `(i, j)` pairs examined while screening neighbours.
    pub filter_visits: usize,
    /// Unordered pairs examined while rewiring.
    pub rewire_visits: usize,
}

impl StepCounters {
    pub fn total(&self) -> usize {
        self.filter_visits + self.rewire_visits
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationMetrics {
    pub consensus: ConsensusReport,
    pub average_degree: f64,
    pub isolated_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Number of completed steps; 0 is the initial state.
    pub iteration: usize,
    pub values: Vec<f64>,
    pub terms: Vec<usize>,
    /// Interaction network in force at this iteration. `None` for models that
    /// use the complete graph implicitly.
    pub network: Option<SocialNetwork>,
    pub metrics: IterationMetrics,
    pub counters: Option<StepCounters>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub iterations: Vec<IterationRecord>,
    pub converged: bool,
}

impl TrajectoryRecord {
    /// Steps actually taken.
    pub fn steps(&self) -> usize {
        self.iterations.len().saturating_sub(1)
    }

    pub fn initial(&self) -> &IterationRecord {
        &self.iterations[0]
    }

    pub fn last(&self) -> &IterationRecord {
        self.iterations
            .last()
            .expect("trajectory always holds the initial state")
    }
}

/// Termination and measurement settings common to every model.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub term_set: LinguisticTermSet,
    pub t_max: usize,
    /// Convergence tolerance on the largest per-agent change.
    pub epsilon: f64,
    pub d_max: f64,
    pub cluster_tolerance: f64,
}

impl RunSettings {
    /// Settings with `d_max = 0.5` and a cluster tolerance of half the
    /// smallest gap between adjacent term values.
    pub fn new(term_set: LinguisticTermSet, t_max: usize, epsilon: f64) -> Result<Self> {
        let cluster_tolerance = term_set.min_gap() / 2.0;
        let s = Self {
            term_set,
            t_max,
            epsilon,
            d_max: DEFAULT_MAX_DEVIATION,
            cluster_tolerance,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_max == 0 {
            return Err(Error::InvalidConfig {
                field: "t_max",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig {
                field: "epsilon",
                reason: alloc::format!("must be positive, got {}", self.epsilon),
            });
        }
        if !(self.d_max > 0.0 && self.d_max.is_finite()) {
            return Err(Error::InvalidMaxDeviation(self.d_max));
        }
        if !(self.cluster_tolerance >= 0.0 && self.cluster_tolerance.is_finite()) {
            return Err(Error::InvalidTolerance(self.cluster_tolerance));
        }
        Ok(())
    }

    pub(crate) fn record(
        &self,
        iteration: usize,
        values: Vec<f64>,
        previous: Option<&[f64]>,
        network: Option<SocialNetwork>,
        counters: Option<StepCounters>,
    ) -> Result<IterationRecord> {
        let terms = values
            .iter()
            .map(|&v| self.term_set.nearest(v))
            .collect::<Result<Vec<_>>>()?;
        let consensus = metrics::report(&values, previous, self.d_max, self.cluster_tolerance)?;
        let (average_degree, isolated_count) = match &network {
            Some(net) => {
                let s = net.stats();
                (s.average_degree, s.isolated_count)
            }
            None => {
                let n = values.len();
                if n > 1 {
                    ((n - 1) as f64, 0)
                } else {
                    (0.0, n)
                }
            }
        };
        Ok(IterationRecord {
            iteration,
            values,
            terms,
            network,
            metrics: IterationMetrics {
                consensus,
                average_degree,
                isolated_count,
            },
            counters,
        })
    }
}
