//! Model selection strings.
//!
//! ```text
//! threeway
//! degroot-uniform | degroot-distance
//! hk-homogeneous[:<epsilon>]      every configured epsilon when omitted
//! hk-heterogeneous[:<case>]       case is 1-based, `2` or `case2`; every case when omitted
//! ```
//!
//! Lists are comma separated.

use opinion3wd_core::baselines::{self, ConfidenceBounds, WeightMode};
use opinion3wd_core::{dynamics, Result as CoreResult, TrajectoryRecord};

use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};

pub const MODEL_NAMES: [&str; 5] = [
    "threeway",
    "degroot-uniform",
    "degroot-distance",
    "hk-homogeneous",
    "hk-heterogeneous",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    ThreeWay,
    DeGroot(WeightMode),
    HkHomogeneous(Option<f64>),
    /// Zero-based case index.
    HkHeterogeneous(Option<usize>),
}

/// One concrete model run.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    ThreeWay,
    DeGroot(WeightMode),
    HkHomogeneous(f64),
    HkHeterogeneous { case: usize, bounds: Vec<f64> },
}

pub fn parse(text: &str) -> CliResult<ModelSpec> {
    let text = text.trim();
    let (name, param) = match text.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p.trim())),
        None => (text, None),
    };
    let no_param = |spec| match param {
        None => Ok(spec),
        Some(_) => Err(CliError::config(format!(
            "model `{name}` takes no parameter"
        ))),
    };
    match name {
        "threeway" => no_param(ModelSpec::ThreeWay),
        "degroot-uniform" => no_param(ModelSpec::DeGroot(WeightMode::Uniform)),
        "degroot-distance" => no_param(ModelSpec::DeGroot(WeightMode::Distance)),
        "hk-homogeneous" => match param {
            None => Ok(ModelSpec::HkHomogeneous(None)),
            Some(p) => match p.parse::<f64>() {
                Ok(eps) if (0.0..=1.0).contains(&eps) => Ok(ModelSpec::HkHomogeneous(Some(eps))),
                _ => Err(CliError::config(format!(
                    "model `{text}`: epsilon must be a number in [0, 1]"
                ))),
            },
        },
        "hk-heterogeneous" => match param {
            None => Ok(ModelSpec::HkHeterogeneous(None)),
            Some(p) => match p.strip_prefix("case").unwrap_or(p).parse::<usize>() {
                Ok(k) if k >= 1 => Ok(ModelSpec::HkHeterogeneous(Some(k - 1))),
                _ => Err(CliError::config(format!(
                    "model `{text}`: case must be a positive integer"
                ))),
            },
        },
        _ => Err(CliError::config(format!(
            "unknown model `{name}`; expected one of {}",
            MODEL_NAMES.join(", ")
        ))),
    }
}

pub fn parse_list(text: &str) -> CliResult<Vec<ModelSpec>> {
    let specs = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse)
        .collect::<CliResult<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(CliError::config("model list is empty"));
    }
    Ok(specs)
}

pub fn expand(spec: ModelSpec, cfg: &ConfigFile) -> CliResult<Vec<Variant>> {
    Ok(match spec {
        ModelSpec::ThreeWay => vec![Variant::ThreeWay],
        ModelSpec::DeGroot(mode) => vec![Variant::DeGroot(mode)],
        ModelSpec::HkHomogeneous(Some(eps)) => vec![Variant::HkHomogeneous(eps)],
        ModelSpec::HkHomogeneous(None) => {
            if cfg.baselines.hk_epsilons.is_empty() {
                return Err(CliError::config(
                    "baselines.hk_epsilons: empty, nothing to run",
                ));
            }
            cfg.baselines
                .hk_epsilons
                .iter()
                .map(|&e| Variant::HkHomogeneous(e))
                .collect()
        }
        ModelSpec::HkHeterogeneous(which) => {
            let cases = cfg.hk_cases();
            if cases.is_empty() {
                return Err(CliError::config(
                    "baselines.hk_bounds: no heterogeneous cases configured for this agent count",
                ));
            }
            match which {
                None => cases
                    .into_iter()
                    .enumerate()
                    .map(|(case, bounds)| Variant::HkHeterogeneous { case, bounds })
                    .collect(),
                Some(case) => match cases.into_iter().nth(case) {
                    Some(bounds) => vec![Variant::HkHeterogeneous { case, bounds }],
                    None => {
                        return Err(CliError::config(format!(
                            "hk-heterogeneous case {} not configured",
                            case + 1
                        )))
                    }
                },
            }
        }
    })
}

pub fn expand_all(specs: &[ModelSpec], cfg: &ConfigFile) -> CliResult<Vec<Variant>> {
    let mut out: Vec<Variant> = Vec::new();
    for &spec in specs {
        for v in expand(spec, cfg)? {
            if out.iter().any(|o| o.label() == v.label()) {
                return Err(CliError::config(format!(
                    "model `{}` listed twice",
                    v.label()
                )));
            }
            out.push(v);
        }
    }
    Ok(out)
}

impl Variant {
    /// Directory-safe name, e.g. `hk-homogeneous-eps0.35`.
    pub fn label(&self) -> String {
        match self {
            Variant::ThreeWay => "threeway".into(),
            Variant::DeGroot(WeightMode::Uniform) => "degroot-uniform".into(),
            Variant::DeGroot(WeightMode::Distance) => "degroot-distance".into(),
            Variant::HkHomogeneous(eps) => format!("hk-homogeneous-eps{eps}"),
            Variant::HkHeterogeneous { case, .. } => format!("hk-heterogeneous-case{}", case + 1),
        }
    }

    /// Model string that selects exactly this variant.
    pub fn label_spec(&self) -> String {
        match self {
            Variant::HkHomogeneous(eps) => format!("hk-homogeneous:{eps}"),
            Variant::HkHeterogeneous { case, .. } => format!("hk-heterogeneous:case{}", case + 1),
            other => other.label(),
        }
    }

    /// Only the co-evolution model changes the network.
    pub fn has_network(&self) -> bool {
        matches!(self, Variant::ThreeWay)
    }

    pub fn execute(&self, cfg: &ConfigFile) -> CoreResult<TrajectoryRecord> {
        let sim = cfg.simulation();
        if let Variant::ThreeWay = self {
            return dynamics::run(&sim);
        }
        let settings = sim.settings()?;
        let initial = sim.initial_values()?;
        match self {
            Variant::ThreeWay => unreachable!(),
            Variant::DeGroot(mode) => baselines::degroot_run(
                initial,
                *mode,
                cfg.baselines.degroot_freeze_weights,
                &settings,
            ),
            Variant::HkHomogeneous(eps) => {
                let bounds = ConfidenceBounds::homogeneous(sim.n_agents, *eps)?;
                baselines::hk_run(initial, &bounds, &settings)
            }
            Variant::HkHeterogeneous { bounds, .. } => {
                baselines::hk_run(initial, &ConfidenceBounds::new(bounds.clone())?, &settings)
            }
        }
    }
}
