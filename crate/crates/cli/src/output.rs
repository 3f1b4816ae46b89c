//! Output files and the staging directory that keeps them all-or-nothing.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use opinion3wd_core::metrics::ConsensusReport;
use opinion3wd_core::{IterationRecord, TrajectoryRecord};
use serde::{Deserialize, Serialize};

use crate::edgelist;
use crate::error::{CliError, CliResult};

pub const OPINIONS_CSV: &str = "opinions.csv";
pub const TERMS_CSV: &str = "terms.csv";
pub const METRICS_CSV: &str = "metrics.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const MANIFEST_JSON: &str = "manifest.json";
pub const NETWORKS_DIR: &str = "networks";

pub fn network_file_name(iteration: usize) -> String {
    format!("network_{iteration}.edges")
}

/// Scratch directory inside the output directory. Entries are moved into
/// place by [`Staging::commit`]; if it is dropped uncommitted it is removed
/// along with everything written so far.
pub struct Staging {
    target: PathBuf,
    dir: PathBuf,
    committed: bool,
}

impl Staging {
    pub fn new(target: &Path) -> CliResult<Self> {
        fs::create_dir_all(target).map_err(|e| CliError::io(target, e))?;
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0);
        let dir = target.join(format!(".staging-{}-{nanos}", std::process::id()));
        fs::create_dir(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self {
            target: target.to_path_buf(),
            dir,
            committed: false,
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn commit(mut self) -> CliResult<()> {
        let entries = fs::read_dir(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| CliError::io(&self.dir, e))?;
            let dest = self.target.join(entry.file_name());
            if dest.is_dir() {
                fs::remove_dir_all(&dest).map_err(|e| CliError::io(&dest, e))?;
            }
            fs::rename(entry.path(), &dest).map_err(|e| CliError::io(&dest, e))?;
        }
        fs::remove_dir(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.dir);
        }
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::runtime(format!("{}: {other:?}", path.display())),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpinionRow {
    pub iteration: usize,
    pub agent: usize,
    pub value: f64,
    pub term_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub iteration: usize,
    pub variance: f64,
    pub range: f64,
    pub c_aad: f64,
    pub avg_degree: f64,
    pub isolated: usize,
    pub delta_max: f64,
}

impl MetricsRow {
    pub fn new(iteration: usize, c: &ConsensusReport, avg_degree: f64, isolated: usize) -> Self {
        Self {
            iteration,
            variance: c.variance,
            range: c.range,
            c_aad: c.consensus_index,
            avg_degree,
            isolated,
            delta_max: c.delta_max,
        }
    }

    fn from_record(it: &IterationRecord) -> Self {
        Self::new(
            it.iteration,
            &it.metrics.consensus,
            it.metrics.average_degree,
            it.metrics.isolated_count,
        )
    }
}

pub fn write_metrics_csv(path: &Path, rows: &[MetricsRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalMetrics {
    pub variance: f64,
    pub range: f64,
    pub c_aad: f64,
    pub cluster_count: usize,
    pub avg_degree: f64,
    pub isolated: usize,
    pub delta_max: f64,
}

impl FinalMetrics {
    pub fn of(it: &IterationRecord) -> Self {
        let c = &it.metrics.consensus;
        Self {
            variance: c.variance,
            range: c.range,
            c_aad: c.consensus_index,
            cluster_count: c.cluster_count,
            avg_degree: it.metrics.average_degree,
            isolated: it.metrics.isolated_count,
            delta_max: c.delta_max,
        }
    }
}

pub fn settled_at(rec: &TrajectoryRecord) -> Option<usize> {
    rec.converged.then(|| rec.steps() - 1)
}

/// Seed-free description of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub model: String,
    pub n_agents: usize,
    pub converged: bool,
    /// Steps taken.
    pub iterations: usize,
    /// For converged runs, the iteration from which no agent moved by
    /// `epsilon` or more.
    pub settled_at: Option<usize>,
    #[serde(rename = "final")]
    pub final_metrics: FinalMetrics,
    pub final_values: Vec<f64>,
    pub final_terms: Vec<usize>,
    /// Largest per-step pair count, for models that report one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_pair_visits: Option<usize>,
}

impl Summary {
    pub fn of(model: &str, rec: &TrajectoryRecord) -> Self {
        let last = rec.last();
        Self {
            model: model.to_string(),
            n_agents: last.values.len(),
            converged: rec.converged,
            iterations: rec.steps(),
            settled_at: settled_at(rec),
            final_metrics: FinalMetrics::of(last),
            final_values: last.values.clone(),
            final_terms: last.terms.clone(),
            max_pair_visits: rec
                .iterations
                .iter()
                .filter_map(|it| it.counters)
                .map(|c| c.total())
                .max(),
        }
    }
}

/// Writes the full file set for one trajectory into `dir` and returns the
/// written paths relative to `dir`.
pub fn write_trajectory(dir: &Path, model: &str, rec: &TrajectoryRecord) -> CliResult<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join(OPINIONS_CSV);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    for it in &rec.iterations {
        for (agent, (&value, &term_index)) in it.values.iter().zip(&it.terms).enumerate() {
            let row = OpinionRow {
                iteration: it.iteration,
                agent,
                value,
                term_index,
            };
            w.serialize(row).map_err(|e| csv_error(&path, e))?;
        }
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    written.push(OPINIONS_CSV.to_string());

    let path = dir.join(TERMS_CSV);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    let n = rec.initial().values.len();
    let mut header = vec!["iteration".to_string()];
    header.extend((0..n).map(|i| format!("agent_{i}")));
    w.write_record(&header).map_err(|e| csv_error(&path, e))?;
    for it in &rec.iterations {
        let mut row = vec![it.iteration.to_string()];
        row.extend(it.terms.iter().map(usize::to_string));
        w.write_record(&row).map_err(|e| csv_error(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    written.push(TERMS_CSV.to_string());

    let rows: Vec<MetricsRow> = rec.iterations.iter().map(MetricsRow::from_record).collect();
    write_metrics_csv(&dir.join(METRICS_CSV), &rows)?;
    written.push(METRICS_CSV.to_string());

    if rec.initial().network.is_some() {
        let nets = dir.join(NETWORKS_DIR);
        fs::create_dir_all(&nets).map_err(|e| CliError::io(&nets, e))?;
        for it in &rec.iterations {
            if let Some(net) = &it.network {
                let name = network_file_name(it.iteration);
                let path = nets.join(&name);
                fs::write(&path, edgelist::format(net)).map_err(|e| CliError::io(&path, e))?;
                written.push(format!("{NETWORKS_DIR}/{name}"));
            }
        }
    }

    write_json(&dir.join(SUMMARY_JSON), &Summary::of(model, rec))?;
    written.push(SUMMARY_JSON.to_string());
    Ok(written)
}

/// Opinion values grouped by iteration, as read back from an opinions CSV.
pub fn read_opinions_csv(path: &Path) -> CliResult<Vec<(usize, Vec<f64>)>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut out: Vec<(usize, Vec<f64>)> = Vec::new();
    for (line, row) in r.deserialize::<OpinionRow>().enumerate() {
        let row = row.map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        let bad = |what: &str| {
            CliError::runtime(format!("{}: data row {}: {what}", path.display(), line + 1))
        };
        if !(0.0..=1.0).contains(&row.value) {
            return Err(bad("value outside [0, 1]"));
        }
        match out.last_mut() {
            Some((it, values)) if *it == row.iteration => {
                if row.agent != values.len() {
                    return Err(bad(
                        "agents must be listed 0, 1, 2, ... within an iteration",
                    ));
                }
                values.push(row.value);
            }
            last => {
                if let Some((it, _)) = last {
                    if row.iteration <= *it {
                        return Err(bad("iterations must increase"));
                    }
                }
                if row.agent != 0 {
                    return Err(bad(
                        "agents must be listed 0, 1, 2, ... within an iteration",
                    ));
                }
                out.push((row.iteration, vec![row.value]));
            }
        }
    }
    let Some(n) = out.first().map(|(_, v)| v.len()) else {
        return Err(CliError::runtime(format!(
            "{}: no data rows",
            path.display()
        )));
    };
    if let Some((it, v)) = out.iter().find(|(_, v)| v.len() != n) {
        return Err(CliError::runtime(format!(
            "{}: iteration {it} lists {} agents, iteration {} lists {n}",
            path.display(),
            v.len(),
            out[0].0
        )));
    }
    Ok(out)
}

pub fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
