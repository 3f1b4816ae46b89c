//! JSON run configuration.
//!
//! Every field except `n_agents` and `initial_opinions` has a default, so a
//! minimal file looks like
//!
//! ```json
//! { "n_agents": 3, "initial_opinions": [0, 3, 6] }
//! ```
//!
//! Unknown keys are rejected. Parse errors carry the JSON path of the
//! offending field; semantic errors name the field and the violated rule.

use std::path::{Path, PathBuf};

use opinion3wd_core::dynamics::{defaults, InitialNetwork, InitialOpinions, SimulationConfig};
use opinion3wd_core::metrics::DEFAULT_MAX_DEVIATION;
use opinion3wd_core::{LinguisticTermSet, RewiringParams, RunSettings, ThreeWayThresholds};
use serde::{Deserialize, Serialize};

use crate::edgelist;
use crate::error::{CliError, CliResult};
use crate::models;

/// Opinions used by the worked example with twenty agents.
pub const REFERENCE_OPINIONS: [usize; 20] =
    [0, 3, 6, 0, 0, 0, 5, 3, 3, 3, 5, 1, 0, 5, 3, 0, 4, 3, 4, 3];

/// Homogeneous bounded-confidence values compared by default.
pub const DEFAULT_HK_EPSILONS: [f64; 6] = [0.35, 0.30, 0.25, 0.20, 0.15, 0.10];

/// Heterogeneous bounds for twenty agents.
pub const REFERENCE_HK_BOUNDS: [f64; 20] = [
    0.2, 0.5, 0.3, 0.4, 0.2, 0.1, 0.9, 0.6, 0.5, 0.3, 0.2, 0.1, 0.4, 0.4, 0.5, 0.3, 0.7, 0.4, 0.2,
    0.2,
];

/// The three reference heterogeneous cases: the base vector, then agent 10
/// lowered to 0.2, then agent 17 lowered to 0.3.
pub fn reference_hk_cases() -> Vec<Vec<f64>> {
    let base = REFERENCE_HK_BOUNDS.to_vec();
    let mut second = base.clone();
    second[9] = 0.2;
    let mut third = base.clone();
    third[16] = 0.3;
    vec![base, second, third]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_model")]
    pub model: String,
    pub n_agents: usize,
    #[serde(default)]
    pub term_set: TermSetSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default = "default_inertia")]
    pub inertia: f64,
    #[serde(default)]
    pub rewiring: RewiringSection,
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    pub initial_opinions: OpinionSource,
    #[serde(default)]
    pub initial_network: NetworkSource,
    #[serde(default)]
    pub metrics: MetricsSection,
    #[serde(default)]
    pub baselines: BaselineSection,
}

fn default_model() -> String {
    "threeway".into()
}
fn default_inertia() -> f64 {
    defaults::INERTIA
}
fn default_t_max() -> usize {
    defaults::T_MAX
}
fn default_epsilon() -> f64 {
    defaults::EPSILON
}
fn default_edge_prob() -> f64 {
    defaults::EDGE_PROB
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TermSetSection {
    pub phi: usize,
    pub base: f64,
}

impl Default for TermSetSection {
    fn default() -> Self {
        Self {
            phi: defaults::PHI,
            base: defaults::BASE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdSection {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self {
            alpha: defaults::ALPHA,
            beta: defaults::BETA,
            lambda: defaults::LAMBDA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RewiringSection {
    pub delta_add: f64,
    pub delta_cut: f64,
    pub p_add: f64,
    pub p_cut: f64,
}

impl Default for RewiringSection {
    fn default() -> Self {
        Self {
            delta_add: defaults::DELTA_ADD,
            delta_cut: defaults::DELTA_CUT,
            p_add: defaults::P_ADD,
            p_cut: defaults::P_CUT,
        }
    }
}

/// Either a list of term indices or `{"random": {"seed": ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OpinionSource {
    Terms(Vec<usize>),
    Random(RandomOpinions),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomOpinions {
    pub random: SeedOnly,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedOnly {
    /// Absent: derived from the run seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkSource {
    /// `[[i, j], ...]`, zero-based.
    Edges(Vec<(usize, usize)>),
    /// Whitespace-separated pairs, one per line; relative paths are resolved
    /// against the config file's directory.
    EdgeListFile(PathBuf),
    Random {
        #[serde(default = "default_edge_prob")]
        edge_prob: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl Default for NetworkSource {
    fn default() -> Self {
        NetworkSource::Random {
            edge_prob: defaults::EDGE_PROB,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsSection {
    pub d_max: f64,
    /// Absent: half the smallest gap between adjacent term values.
    pub cluster_tolerance: Option<f64>,
}

impl Default for MetricsSection {
    fn default() -> Self {
        Self {
            d_max: DEFAULT_MAX_DEVIATION,
            cluster_tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BaselineSection {
    pub hk_epsilons: Vec<f64>,
    /// One vector of per-agent bounds per heterogeneous case. Absent: the
    /// three reference cases when there are twenty agents, none otherwise.
    pub hk_bounds: Option<Vec<Vec<f64>>>,
    /// Build DeGroot distance weights once from the initial opinions instead
    /// of every step.
    pub degroot_freeze_weights: bool,
}

impl Default for BaselineSection {
    fn default() -> Self {
        Self {
            hk_epsilons: DEFAULT_HK_EPSILONS.to_vec(),
            hk_bounds: None,
            degroot_freeze_weights: false,
        }
    }
}

fn at<T>(field: &str, r: opinion3wd_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::config(format!("{field}: {e}")))
}

impl ConfigFile {
    /// Reads, parses and validates a config file. An `edge_list_file` network
    /// is loaded and embedded so the result no longer depends on other files.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base).map_err(|e| match e {
            CliError::Config(msg) => CliError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str, base_dir: &Path) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(format!("{path}: {}", e.into_inner()))
        })?;
        if let NetworkSource::EdgeListFile(file) = &cfg.initial_network {
            let full = base_dir.join(file);
            let text = std::fs::read_to_string(&full).map_err(|e| {
                CliError::config(format!(
                    "initial_network.edge_list_file: {}: {e}",
                    full.display()
                ))
            })?;
            let edges = edgelist::parse(&text)
                .map_err(|e| CliError::config(format!("initial_network.edge_list_file: {e}")))?;
            cfg.initial_network = NetworkSource::Edges(edges);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.n_agents == 0 {
            return Err(CliError::config("n_agents: must be at least 1"));
        }
        let t = &self.thresholds;
        at(
            "thresholds",
            ThreeWayThresholds::new(t.alpha, t.beta, t.lambda),
        )?;
        let r = &self.rewiring;
        at(
            "rewiring",
            RewiringParams::new(r.delta_add, r.delta_cut, r.p_add, r.p_cut),
        )?;
        at(
            "term_set",
            LinguisticTermSet::new(self.term_set.phi, self.term_set.base),
        )?;
        if !(0.0..=1.0).contains(&self.inertia) {
            return Err(CliError::config(format!(
                "inertia: must lie in [0, 1], got {}",
                self.inertia
            )));
        }
        if self.t_max == 0 {
            return Err(CliError::config("t_max: must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(CliError::config(format!(
                "epsilon: must be positive, got {}",
                self.epsilon
            )));
        }
        let d_max = self.metrics.d_max;
        if !(d_max > 0.0 && d_max.is_finite()) {
            return Err(CliError::config(format!(
                "metrics.d_max: must be positive, got {d_max}"
            )));
        }
        if let Some(tol) = self.metrics.cluster_tolerance {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(CliError::config(format!(
                    "metrics.cluster_tolerance: must be finite and non-negative, got {tol}"
                )));
            }
        }
        if let NetworkSource::Random { edge_prob, .. } = self.initial_network {
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(CliError::config(format!(
                    "initial_network.random.edge_prob: must lie in [0, 1], got {edge_prob}"
                )));
            }
        }
        for (k, &eps) in self.baselines.hk_epsilons.iter().enumerate() {
            if !(0.0..=1.0).contains(&eps) {
                return Err(CliError::config(format!(
                    "baselines.hk_epsilons[{k}]: must lie in [0, 1], got {eps}"
                )));
            }
        }
        for (k, case) in self.hk_cases().iter().enumerate() {
            if case.len() != self.n_agents {
                return Err(CliError::config(format!(
                    "baselines.hk_bounds[{k}]: expected {} entries to match n_agents, got {}",
                    self.n_agents,
                    case.len()
                )));
            }
            if let Some(b) = case.iter().find(|b| !(0.0..=1.0).contains(*b)) {
                return Err(CliError::config(format!(
                    "baselines.hk_bounds[{k}]: bounds must lie in [0, 1], got {b}"
                )));
            }
        }

        let sim = self.simulation();
        at("initial_opinions", sim.initial_terms())?;
        at("initial_network", sim.build_initial_network())?;
        at("metrics", sim.settings())?;
        models::parse(&self.model)?;
        Ok(())
    }

    /// Heterogeneous bounded-confidence cases in effect.
    pub fn hk_cases(&self) -> Vec<Vec<f64>> {
        match &self.baselines.hk_bounds {
            Some(cases) => cases.clone(),
            None if self.n_agents == REFERENCE_HK_BOUNDS.len() => reference_hk_cases(),
            None => Vec::new(),
        }
    }

    /// Engine configuration. Call only on a validated config.
    pub fn simulation(&self) -> SimulationConfig {
        let t = &self.thresholds;
        let r = &self.rewiring;
        let mut sim = SimulationConfig::new(
            self.n_agents,
            match &self.initial_opinions {
                OpinionSource::Terms(terms) => InitialOpinions::Terms(terms.clone()),
                OpinionSource::Random(r) => InitialOpinions::Random {
                    seed: r.random.seed,
                },
            },
        );
        sim.phi = self.term_set.phi;
        sim.base = self.term_set.base;
        sim.thresholds =
            ThreeWayThresholds::new(t.alpha, t.beta, t.lambda).expect("validated thresholds");
        sim.inertia = self.inertia;
        sim.rewiring = RewiringParams::new(r.delta_add, r.delta_cut, r.p_add, r.p_cut)
            .expect("validated rewiring");
        sim.t_max = self.t_max;
        sim.epsilon = self.epsilon;
        sim.seed = self.seed;
        sim.initial_network = match &self.initial_network {
            NetworkSource::Edges(edges) => InitialNetwork::Edges(edges.clone()),
            NetworkSource::Random { edge_prob, seed } => InitialNetwork::Random {
                edge_prob: *edge_prob,
                seed: *seed,
            },
            NetworkSource::EdgeListFile(_) => unreachable!("edge list files are embedded on load"),
        };
        sim.d_max = self.metrics.d_max;
        sim.cluster_tolerance = self.metrics.cluster_tolerance;
        sim
    }

    pub fn settings(&self) -> CliResult<RunSettings> {
        at("metrics", self.simulation().settings())
    }

    /// Copy with every defaulted value written out, suitable for echoing
    /// into a manifest.
    pub fn resolved(&self) -> CliResult<Self> {
        let mut out = self.clone();
        out.metrics.cluster_tolerance = Some(self.settings()?.cluster_tolerance);
        out.baselines.hk_bounds = Some(self.hk_cases());
        Ok(out)
    }
}
