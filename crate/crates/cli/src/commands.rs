use std::path::{Path, PathBuf};

use opinion3wd_core::{metrics, RunSettings, SocialNetwork, TrajectoryRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ConfigFile;
use crate::edgelist;
use crate::error::{CliError, CliResult};
use crate::models::{self, Variant};
use crate::output::{self, FinalMetrics, MetricsRow, Staging, Summary, MANIFEST_JSON};

pub const ENGINE: &str = concat!("opinion3wd ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub engine: String,
    pub command: String,
    /// Fully resolved configuration; running it again reproduces every output.
    pub config: ConfigFile,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Inclusive seed range of a sweep.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seeds: Option<(u64, u64)>,
    /// Paths relative to the output directory.
    pub outputs: Vec<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    fn new(command: &str, config: &ConfigFile, outputs: Vec<String>) -> CliResult<Self> {
        Ok(Self {
            engine: ENGINE.to_string(),
            command: command.to_string(),
            config: config.resolved()?,
            seed: Some(config.seed),
            seeds: None,
            outputs,
            timestamp: output::unix_timestamp(),
        })
    }
}

fn with_seed(config: &ConfigFile, seed: Option<u64>) -> ConfigFile {
    let mut cfg = config.clone();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg
}

fn execute(variant: &Variant, cfg: &ConfigFile) -> CliResult<TrajectoryRecord> {
    variant
        .execute(cfg)
        .map_err(|e| CliError::runtime(format!("{}: {e}", variant.label())))
}

fn single_variant(cfg: &ConfigFile, models: Option<&str>) -> CliResult<Variant> {
    let text = models.unwrap_or(&cfg.model);
    let mut variants = models::expand_all(&models::parse_list(text)?, cfg)?;
    if variants.len() != 1 {
        return Err(CliError::config(format!(
            "`{text}` expands to {} models; this command runs exactly one (use compare)",
            variants.len()
        )));
    }
    Ok(variants.remove(0))
}

/// Runs the configured model once and writes its trajectory to `out`.
pub fn run(
    config: &ConfigFile,
    out: &Path,
    seed: Option<u64>,
    models: Option<&str>,
) -> CliResult<RunManifest> {
    let cfg = with_seed(config, seed);
    let variant = single_variant(&cfg, models)?;
    let mut cfg = cfg;
    cfg.model = variant.label_spec();
    let rec = execute(&variant, &cfg)?;

    let staging = Staging::new(out)?;
    let mut outputs = output::write_trajectory(staging.path(), &variant.label(), &rec)?;
    outputs.push(MANIFEST_JSON.to_string());
    let manifest = RunManifest::new("run", &cfg, outputs)?;
    output::write_json(&staging.path().join(MANIFEST_JSON), &manifest)?;
    staging.commit()?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub converged: bool,
    pub iterations: usize,
    pub settled_at: Option<usize>,
    pub variance: f64,
    pub range: f64,
    pub c_aad: f64,
    pub cluster_count: usize,
    pub avg_degree: f64,
    pub isolated: usize,
    pub delta_max: f64,
}

impl ComparisonRow {
    fn of(label: String, rec: &TrajectoryRecord) -> Self {
        let f = FinalMetrics::of(rec.last());
        Self {
            model: label,
            converged: rec.converged,
            iterations: rec.steps(),
            settled_at: output::settled_at(rec),
            variance: f.variance,
            range: f.range,
            c_aad: f.c_aad,
            cluster_count: f.cluster_count,
            avg_degree: f.avg_degree,
            isolated: f.isolated,
            delta_max: f.delta_max,
        }
    }
}

pub const COMPARISON_CSV: &str = "comparison.csv";

/// Runs every listed model from the same initial state. Each model's files
/// go to `out/<label>/`, laid out exactly as `run` would write them.
pub fn compare(
    config: &ConfigFile,
    out: &Path,
    seed: Option<u64>,
    models: Option<&str>,
) -> CliResult<RunManifest> {
    let cfg = with_seed(config, seed);
    let default_list = models::MODEL_NAMES.join(",");
    let variants = models::expand_all(&models::parse_list(models.unwrap_or(&default_list))?, &cfg)?;

    let staging = Staging::new(out)?;
    let mut outputs = Vec::new();
    let mut rows = Vec::new();
    for v in &variants {
        let mut model_cfg = cfg.clone();
        model_cfg.model = v.label_spec();
        let rec = execute(v, &model_cfg)?;
        let label = v.label();
        let written = output::write_trajectory(&staging.path().join(&label), &label, &rec)?;
        outputs.extend(written.into_iter().map(|p| format!("{label}/{p}")));
        rows.push(ComparisonRow::of(label, &rec));
    }
    let path = staging.path().join(COMPARISON_CSV);
    let mut w = csv::Writer::from_path(&path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    for row in &rows {
        w.serialize(row)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    outputs.push(COMPARISON_CSV.to_string());
    outputs.push(MANIFEST_JSON.to_string());

    let mut echo = cfg.clone();
    echo.model = variants
        .iter()
        .map(Variant::label_spec)
        .collect::<Vec<_>>()
        .join(",");
    let manifest = RunManifest::new("compare", &echo, outputs)?;
    output::write_json(&staging.path().join(MANIFEST_JSON), &manifest)?;
    staging.commit()?;
    Ok(manifest)
}

/// Inclusive seed range written `a..b`, `a..=b` or `a`.
pub fn parse_seed_range(text: &str) -> CliResult<(u64, u64)> {
    let bad = || {
        CliError::config(format!(
            "--seeds `{text}`: expected <start>..<end> with start <= end"
        ))
    };
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim_start_matches('=').trim()),
        None => (text.trim(), text.trim()),
    };
    let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub seed: u64,
    pub status: String,
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
    pub variance: Option<f64>,
    pub range: Option<f64>,
    pub c_aad: Option<f64>,
    pub cluster_count: Option<usize>,
    pub avg_degree: Option<f64>,
    pub isolated: Option<usize>,
    pub delta_max: Option<f64>,
    pub error: String,
}

impl SweepRow {
    fn ok(seed: u64, s: &Summary) -> Self {
        let f = &s.final_metrics;
        Self {
            seed,
            status: "ok".into(),
            converged: Some(s.converged),
            iterations: Some(s.iterations),
            variance: Some(f.variance),
            range: Some(f.range),
            c_aad: Some(f.c_aad),
            cluster_count: Some(f.cluster_count),
            avg_degree: Some(f.avg_degree),
            isolated: Some(f.isolated),
            delta_max: Some(f.delta_max),
            error: String::new(),
        }
    }

    fn failed(seed: u64, e: &CliError) -> Self {
        Self {
            seed,
            status: "error".into(),
            converged: None,
            iterations: None,
            variance: None,
            range: None,
            c_aad: None,
            cluster_count: None,
            avg_degree: None,
            isolated: None,
            delta_max: None,
            error: e.to_string(),
        }
    }
}

pub const SWEEP_CSV: &str = "sweep.csv";

pub fn seed_dir_name(seed: u64) -> String {
    format!("seed_{seed}")
}

/// One run per seed. Seeds run in parallel; rows are written in seed order.
/// A failing seed is recorded in its row and does not stop the others.
pub fn sweep(
    config: &ConfigFile,
    out: &Path,
    seeds: (u64, u64),
    models: Option<&str>,
    per_seed: bool,
) -> CliResult<RunManifest> {
    let variant = single_variant(config, models)?;
    let mut base = config.clone();
    base.model = variant.label_spec();
    let staging = Staging::new(out)?;
    let label = variant.label();

    let rows: Vec<SweepRow> = (seeds.0..=seeds.1)
        .into_par_iter()
        .map(|seed| {
            let cfg = with_seed(&base, Some(seed));
            let result = execute(&variant, &cfg).and_then(|rec| {
                if per_seed {
                    output::write_trajectory(
                        &staging.path().join(seed_dir_name(seed)),
                        &label,
                        &rec,
                    )?;
                }
                Ok(Summary::of(&label, &rec))
            });
            match result {
                Ok(s) => SweepRow::ok(seed, &s),
                Err(e) => SweepRow::failed(seed, &e),
            }
        })
        .collect();

    let path = staging.path().join(SWEEP_CSV);
    let mut w = csv::Writer::from_path(&path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    for row in &rows {
        w.serialize(row)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let mut outputs = vec![SWEEP_CSV.to_string()];
    if per_seed {
        outputs.extend((seeds.0..=seeds.1).map(seed_dir_name));
    }
    outputs.push(MANIFEST_JSON.to_string());
    let mut manifest = RunManifest::new("sweep", &base, outputs)?;
    manifest.seed = None;
    manifest.seeds = Some(seeds);
    output::write_json(&staging.path().join(MANIFEST_JSON), &manifest)?;
    staging.commit()?;
    Ok(manifest)
}

/// Options for recomputing metrics from an opinions CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsOptions {
    pub input: PathBuf,
    /// Directory of `network_<k>.edges` files. Absent: the complete graph.
    pub networks: Option<PathBuf>,
    pub d_max: f64,
    /// Absent: half the smallest gap of the default term scale.
    pub cluster_tolerance: Option<f64>,
}

pub fn recompute_metrics(opts: &MetricsOptions) -> CliResult<Vec<MetricsRow>> {
    let default_tol = || -> CliResult<f64> {
        let set = opinion3wd_core::LinguisticTermSet::new(
            opinion3wd_core::dynamics::defaults::PHI,
            opinion3wd_core::dynamics::defaults::BASE,
        )?;
        Ok(RunSettings::new(set, 1, 1.0)?.cluster_tolerance)
    };
    let tol = match opts.cluster_tolerance {
        Some(t) => t,
        None => default_tol()?,
    };
    if !(opts.d_max > 0.0 && opts.d_max.is_finite()) {
        return Err(CliError::config(format!(
            "--d-max: must be positive, got {}",
            opts.d_max
        )));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::config(format!(
            "--cluster-tolerance: must be non-negative, got {tol}"
        )));
    }

    let series = output::read_opinions_csv(&opts.input)?;
    let mut rows = Vec::with_capacity(series.len());
    let mut previous: Option<&[f64]> = None;
    for (iteration, values) in &series {
        let report = metrics::report(values, previous, opts.d_max, tol)?;
        let (avg, isolated) = match &opts.networks {
            Some(dir) => {
                let path = dir.join(output::network_file_name(*iteration));
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                let edges = edgelist::parse(&text)
                    .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
                let net = SocialNetwork::from_edges(values.len(), edges)
                    .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
                let s = net.stats();
                (s.average_degree, s.isolated_count)
            }
            None if values.len() > 1 => ((values.len() - 1) as f64, 0),
            None => (0.0, values.len()),
        };
        rows.push(MetricsRow::new(*iteration, &report, avg, isolated));
        previous = Some(values);
    }
    Ok(rows)
}

pub fn metrics_command(opts: &MetricsOptions, out: Option<&Path>) -> CliResult<Vec<MetricsRow>> {
    let rows = recompute_metrics(opts)?;
    match out {
        Some(dir) => {
            let staging = Staging::new(dir)?;
            output::write_metrics_csv(&staging.path().join(output::METRICS_CSV), &rows)?;
            staging.commit()?;
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for row in &rows {
                w.serialize(row)
                    .map_err(|e| CliError::runtime(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::runtime(e.to_string()))?;
        }
    }
    Ok(rows)
}
