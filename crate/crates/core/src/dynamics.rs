//! The co-evolution engine.
//!
//! One step, for `N` agents at time `t`:
//!
//! 1. every agent screens its linked neighbours with the three-way rule on
//!    `d_ij = |θ_i(t) - θ_j(t)|` (agents ascending, neighbours ascending);
//! 2. agents with a non-empty accepted set move to
//!    `ω θ_i(t) + (1 - ω) mean(θ_j(t))`; the own opinion enters only through
//!    `ω`, and agents that accepted nobody keep their value;
//! 3. each new value is mapped to its nearest linguistic term;
//! 4. the network is rewired from the time-`t` opinions and adjacency.
//!
//! All reads in steps 1, 2 and 4 see time-`t` state only, so the update is
//! synchronous. Random draws happen in the order listed above. A run stops
//! after the first step whose largest opinion change is below `epsilon`, or
//! after `t_max` steps.

use alloc::vec::Vec;

use rand::Rng;

use crate::rng::{self, RandomSource};
use crate::threeway::classify_neighbor;
use crate::trajectory::{RunSettings, StepCounters, TrajectoryRecord};
use crate::{
    metrics, Error, LinguisticTermSet, Result, RewiringParams, SocialNetwork, ThreeWayThresholds,
};

pub mod defaults {
    pub const PHI: usize = 3;
    pub const BASE: f64 = 2.0;
    pub const ALPHA: f64 = 0.3;
    pub const BETA: f64 = 0.6;
    pub const LAMBDA: f64 = 10.0;
    pub const INERTIA: f64 = 0.0;
    pub const DELTA_ADD: f64 = 0.15;
    pub const DELTA_CUT: f64 = 0.45;
    pub const P_ADD: f64 = 0.5;
    pub const P_CUT: f64 = 0.5;
    pub const T_MAX: usize = 10;
    pub const EPSILON: f64 = 1e-3;
    pub const SEED: u64 = 0;
    /// Expected average degree `0.1 (N - 1)`, i.e. 1.9 for twenty agents.
    pub const EDGE_PROB: f64 = 0.1;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub term_index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialOpinions {
    /// Term index per agent.
    Terms(Vec<usize>),
    /// Uniformly random term per agent. `seed: None` derives it from the run
    /// seed.
    Random { seed: Option<u64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialNetwork {
    Edges(Vec<(usize, usize)>),
    /// Erdős–Rényi graph. `seed: None` derives it from the run seed.
    Random {
        edge_prob: f64,
        seed: Option<u64>,
    },
}

impl Default for InitialNetwork {
    fn default() -> Self {
        InitialNetwork::Random {
            edge_prob: defaults::EDGE_PROB,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub n_agents: usize,
    pub phi: usize,
    pub base: f64,
    pub thresholds: ThreeWayThresholds,
    pub inertia: f64,
    pub rewiring: RewiringParams,
    pub t_max: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub initial_opinions: InitialOpinions,
    pub initial_network: InitialNetwork,
    pub d_max: f64,
    /// `None` means half the smallest gap between adjacent term values.
    pub cluster_tolerance: Option<f64>,
}

impl SimulationConfig {
    /// Configuration with every parameter at its default.
    pub fn new(n_agents: usize, initial_opinions: InitialOpinions) -> Self {
        Self {
            n_agents,
            phi: defaults::PHI,
            base: defaults::BASE,
            thresholds: ThreeWayThresholds::new(defaults::ALPHA, defaults::BETA, defaults::LAMBDA)
                .expect("default thresholds are valid"),
            inertia: defaults::INERTIA,
            rewiring: RewiringParams::new(
                defaults::DELTA_ADD,
                defaults::DELTA_CUT,
                defaults::P_ADD,
                defaults::P_CUT,
            )
            .expect("default rewiring is valid"),
            t_max: defaults::T_MAX,
            epsilon: defaults::EPSILON,
            seed: defaults::SEED,
            initial_opinions,
            initial_network: InitialNetwork::default(),
            d_max: metrics::DEFAULT_MAX_DEVIATION,
            cluster_tolerance: None,
        }
    }

    pub fn term_set(&self) -> Result<LinguisticTermSet> {
        LinguisticTermSet::new(self.phi, self.base)
    }

    pub fn settings(&self) -> Result<RunSettings> {
        let term_set = self.term_set()?;
        let mut settings = RunSettings::new(term_set, self.t_max, self.epsilon)?;
        settings.d_max = self.d_max;
        if let Some(tol) = self.cluster_tolerance {
            settings.cluster_tolerance = tol;
        }
        settings.validate()?;
        Ok(settings)
    }

    pub fn model(&self) -> Result<ModelParams> {
        if !(0.0..=1.0).contains(&self.inertia) {
            return Err(Error::ProbabilityOutOfRange {
                name: "inertia",
                value: self.inertia,
            });
        }
        Ok(ModelParams {
            term_set: self.term_set()?,
            thresholds: self.thresholds,
            inertia: self.inertia,
            rewiring: self.rewiring,
        })
    }

    pub fn initial_terms(&self) -> Result<Vec<usize>> {
        let max = 2 * self.phi;
        match &self.initial_opinions {
            InitialOpinions::Terms(terms) => {
                if terms.len() != self.n_agents {
                    return Err(Error::LengthMismatch {
                        expected: self.n_agents,
                        actual: terms.len(),
                    });
                }
                if let Some(&index) = terms.iter().find(|&&t| t > max) {
                    return Err(Error::TermIndexOutOfRange { index, max });
                }
                Ok(terms.clone())
            }
            InitialOpinions::Random { seed } => {
                let mut rng = rng::seeded_stream(seed.unwrap_or(self.seed), rng::OPINION_STREAM);
                Ok((0..self.n_agents).map(|_| rng.gen_range(0..=max)).collect())
            }
        }
    }

    pub fn initial_values(&self) -> Result<Vec<f64>> {
        let set = self.term_set()?;
        self.initial_terms()?
            .into_iter()
            .map(|t| set.value(t))
            .collect()
    }

    pub fn build_initial_network(&self) -> Result<SocialNetwork> {
        match &self.initial_network {
            InitialNetwork::Edges(edges) => {
                SocialNetwork::from_edges(self.n_agents, edges.iter().copied())
            }
            InitialNetwork::Random { edge_prob, seed } => {
                let mut rng = rng::seeded_stream(seed.unwrap_or(self.seed), rng::NETWORK_STREAM);
                SocialNetwork::random(self.n_agents, *edge_prob, &mut rng)
            }
        }
    }

    /// Checks every constraint a run depends on, without running it.
    pub fn validate(&self) -> Result<()> {
        if self.n_agents == 0 {
            return Err(Error::TooFewAgents {
                required: 1,
                actual: 0,
            });
        }
        self.settings()?;
        self.model()?;
        self.initial_terms()?;
        self.build_initial_network()?;
        Ok(())
    }
}

/// Everything a single step needs besides state and randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub term_set: LinguisticTermSet,
    pub thresholds: ThreeWayThresholds,
    /// Weight `ω` an agent keeps on its own opinion.
    pub inertia: f64,
    pub rewiring: RewiringParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub values: Vec<f64>,
    pub terms: Vec<usize>,
    pub network: SocialNetwork,
    pub delta_max: f64,
    pub counters: StepCounters,
}

/// Accepted neighbours of `agent`, ascending.
pub fn filter_neighbors<R: Rng + ?Sized>(
    agent: usize,
    opinions: &[f64],
    net: &SocialNetwork,
    thresholds: &ThreeWayThresholds,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let mut accepted = Vec::new();
    filter_into(agent, opinions, net, thresholds, rng, &mut accepted)?;
    Ok(accepted)
}

fn filter_into<R: Rng + ?Sized>(
    agent: usize,
    opinions: &[f64],
    net: &SocialNetwork,
    thresholds: &ThreeWayThresholds,
    rng: &mut R,
    accepted: &mut Vec<usize>,
) -> Result<usize> {
    accepted.clear();
    let mut visits = 0;
    for j in 0..net.size() {
        if j == agent {
            continue;
        }
        visits += 1;
        if !net.is_linked(agent, j) {
            continue;
        }
        let d = (opinions[agent] - opinions[j]).abs();
        if classify_neighbor(d, thresholds, rng)? {
            accepted.push(j);
        }
    }
    Ok(visits)
}

pub fn update_value(current: f64, accepted: &[usize], opinions: &[f64], inertia: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&inertia));
    if accepted.is_empty() {
        return current;
    }
    let mean = accepted.iter().map(|&j| opinions[j]).sum::<f64>() / accepted.len() as f64;
    if inertia == 0.0 {
        mean
    } else {
        (inertia * current + (1.0 - inertia) * mean).clamp(0.0, 1.0)
    }
}

pub fn step<R: Rng + ?Sized>(
    opinions: &[f64],
    net: &SocialNetwork,
    params: &ModelParams,
    rng: &mut R,
) -> Result<StepOutcome> {
    let n = net.size();
    if opinions.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: opinions.len(),
        });
    }
    if let Some(&bad) = opinions.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OpinionOutOfRange(bad));
    }

    let mut counters = StepCounters::default();
    let mut accepted = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        counters.filter_visits +=
            filter_into(i, opinions, net, &params.thresholds, rng, &mut accepted)?;
        values.push(update_value(
            opinions[i],
            &accepted,
            opinions,
            params.inertia,
        ));
    }
    let terms = values
        .iter()
        .map(|&v| params.term_set.nearest(v))
        .collect::<Result<Vec<_>>>()?;

    let (network, rewire_visits) = net.rewire_counted(opinions, &params.rewiring, rng)?;
    counters.rewire_visits = rewire_visits;

    let delta_max = metrics::delta_max(opinions, &values)?;
    Ok(StepOutcome {
        values,
        terms,
        network,
        delta_max,
        counters,
    })
}

/// Runs from an explicit initial state.
pub fn run_from<R: Rng + ?Sized>(
    initial: Vec<f64>,
    network: SocialNetwork,
    params: &ModelParams,
    settings: &RunSettings,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    settings.validate()?;
    let mut iterations = Vec::with_capacity(settings.t_max + 1);
    iterations.push(settings.record(0, initial, None, Some(network), None)?);
    let mut converged = false;

    for k in 1..=settings.t_max {
        let prev = iterations.last().expect("initial state recorded");
        let net = prev.network.as_ref().expect("engine records every network");
        let out = step(&prev.values, net, params, rng)?;
        let prev_values = prev.values.clone();
        let rec = settings.record(
            k,
            out.values,
            Some(&prev_values),
            Some(out.network),
            Some(out.counters),
        )?;
        debug_assert_eq!(rec.terms, out.terms);
        iterations.push(rec);
        if out.delta_max < settings.epsilon {
            converged = true;
            break;
        }
    }
    Ok(TrajectoryRecord {
        iterations,
        converged,
    })
}

pub fn run(config: &SimulationConfig) -> Result<TrajectoryRecord> {
    config.validate()?;
    let settings = config.settings()?;
    let params = config.model()?;
    let initial = config.initial_values()?;
    let network = config.build_initial_network()?;
    let mut rng: RandomSource = rng::seeded(config.seed);
    run_from(initial, network, &params, &settings, &mut rng)
}

/// Current state of every agent at the end of a trajectory.
pub fn final_states(record: &TrajectoryRecord) -> Vec<AgentState> {
    let last = record.last();
    last.values
        .iter()
        .zip(&last.terms)
        .map(|(&value, &term_index)| AgentState { term_index, value })
        .collect()
}
