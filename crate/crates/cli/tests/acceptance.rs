//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use opinion3wd::commands;
use opinion3wd::config::{reference_hk_cases, ConfigFile, REFERENCE_OPINIONS};
use opinion3wd_core::baselines::{self, ConfidenceBounds, WeightMode};
use opinion3wd_core::dynamics::{self, InitialOpinions, ModelParams, SimulationConfig};
use opinion3wd_core::rng::seeded;
use opinion3wd_core::threeway::{self, LossMatrix, ThreeWayRegion};
use opinion3wd_core::{
    metrics, LinguisticTermSet, RewiringParams, RunSettings, SocialNetwork, ThreeWayThresholds,
};
use rand::Rng;

/// Term values for three terms per side and base 2, in fourteenths.
const FOURTEENTHS: [u32; 7] = [0, 4, 6, 7, 8, 10, 14];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn reference_values() -> Vec<f64> {
    REFERENCE_OPINIONS
        .iter()
        .map(|&t| f64::from(FOURTEENTHS[t]) / 14.0)
        .collect()
}

fn settings() -> RunSettings {
    RunSettings::new(LinguisticTermSet::new(3, 2.0).unwrap(), 10, 1e-3).unwrap()
}

fn lsf_exactness() -> Outcome {
    let set = LinguisticTermSet::new(3, 2.0).unwrap();
    let worst_value = FOURTEENTHS
        .iter()
        .enumerate()
        .map(|(j, &n)| (set.value(j).unwrap() - f64::from(n) / 14.0).abs())
        .fold(0.0, f64::max);
    let mut worst_sym = 0.0f64;
    for phi in 1..=6 {
        for base in [1.5, 2.0, 3.0] {
            let s = LinguisticTermSet::new(phi, base).unwrap();
            for j in 0..=2 * phi {
                let sum = s.value(j).unwrap() + s.value(2 * phi - j).unwrap();
                worst_sym = worst_sym.max((sum - 1.0).abs());
            }
        }
    }
    outcome(
        worst_value <= 1e-12 && worst_sym <= 1e-12,
        format!("max value error {worst_value:e}, max symmetry error {worst_sym:e}"),
    )
}

fn degroot_one_step() -> Outcome {
    let numerator: u32 = REFERENCE_OPINIONS.iter().map(|&t| FOURTEENTHS[t]).sum();
    let mean = f64::from(numerator) / 280.0;
    let rec = baselines::degroot_run(reference_values(), WeightMode::Uniform, false, &settings())
        .unwrap();
    let Some(step2) = rec.iterations.get(2) else {
        return outcome(false, format!("run stopped after {} steps", rec.steps()));
    };
    let step1 = &rec.iterations[1].values;
    let err = step1.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let same = *step1 == step2.values;
    outcome(
        err <= 1e-9 && same,
        format!("mean {mean:.6}, max error {err:e}, step 2 identical: {same}"),
    )
}

fn metric_cross_check() -> Outcome {
    let mut x = vec![0.0; 5];
    x.extend([0.5; 15]);
    let var = metrics::variance(&x).unwrap();
    let range = metrics::range(&x).unwrap();
    let c = metrics::consensus_index(&x, 0.5).unwrap();
    // Mean 0.375: five deviations of 0.375 and fifteen of 0.125.
    let var_oracle = (5.0 * 0.375f64.powi(2) + 15.0 * 0.125f64.powi(2)) / 20.0;
    let c_oracle = 1.0 - (5.0 * 0.375 + 15.0 * 0.125) / 20.0 / 0.5;
    let ok = (var - var_oracle).abs() <= 1e-12
        && (var - 0.046875).abs() <= 1e-12
        && (range - 0.5).abs() <= 1e-12
        && (c - c_oracle).abs() <= 1e-12
        && (c - 0.625).abs() <= 1e-12;
    outcome(ok, format!("variance {var}, range {range}, C_AAD {c}"))
}

fn hk_final(bounds: &ConfidenceBounds) -> (Vec<f64>, usize) {
    let rec = baselines::hk_run(reference_values(), bounds, &settings()).unwrap();
    let last = rec.last();
    (last.values.clone(), last.metrics.consensus.cluster_count)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn hk_homogeneous() -> Outcome {
    let h = |eps| hk_final(&ConfidenceBounds::homogeneous(20, eps).unwrap());
    let (a, ca) = h(0.35);
    let (b, cb) = h(0.30);
    let (_, c10) = h(0.10);
    let diff = max_diff(&a, &b);
    outcome(
        diff <= 1e-12 && c10 >= 3,
        format!(
            "eps 0.35 vs 0.30 max difference {diff:.4} ({ca} vs {cb} clusters); eps 0.10 gives {c10} clusters"
        ),
    )
}

fn hk_heterogeneous() -> Outcome {
    let cases = reference_hk_cases();
    let runs: Vec<_> = cases
        .into_iter()
        .map(|c| hk_final(&ConfidenceBounds::new(c).unwrap()))
        .collect();
    let d2 = max_diff(&runs[0].0, &runs[1].0);
    let d3 = max_diff(&runs[0].0, &runs[2].0);
    outcome(
        runs[0].1 == 2 && d2 > 1e-9 && d3 > 1e-9,
        format!(
            "case 1 has {} clusters; case 2 differs by {d2:.2e}, case 3 by {d3:.2e}",
            runs[0].1
        ),
    )
}

fn stochastic_reproduction() -> Outcome {
    let mut converged_clusters = Vec::new();
    let mut degree_grew = 0;
    let seeds = 200u64;
    for seed in 0..seeds {
        let mut cfg =
            SimulationConfig::new(20, InitialOpinions::Terms(REFERENCE_OPINIONS.to_vec()));
        cfg.seed = seed;
        let rec = dynamics::run(&cfg).unwrap();
        if rec.converged {
            converged_clusters.push(rec.last().metrics.consensus.cluster_count);
        }
        if rec.last().metrics.average_degree > rec.initial().metrics.average_degree {
            degree_grew += 1;
        }
    }
    converged_clusters.sort_unstable();
    // Lower median for an even count.
    let median = converged_clusters
        .get(converged_clusters.len().saturating_sub(1) / 2)
        .copied();
    let conv_rate = converged_clusters.len() as f64 / seeds as f64;
    let grow_rate = f64::from(degree_grew) / seeds as f64;
    let median_ok = matches!(median, Some(1..=3));
    outcome(
        conv_rate >= 0.70 && median_ok && grow_rate >= 0.70,
        format!(
            "converged {:.1}% (need >= 70%), median clusters among converged {median:?}, degree grew {:.1}% (need >= 70%)",
            100.0 * conv_rate,
            100.0 * grow_rate
        ),
    )
}

fn mechanism_slows_convergence() -> Outcome {
    let mean_steps = |alpha: f64, beta: f64| {
        let total: usize = (0..50u64)
            .map(|seed| {
                let mut cfg = SimulationConfig::new(40, InitialOpinions::Random { seed: None });
                cfg.seed = seed;
                cfg.thresholds = ThreeWayThresholds::new(alpha, beta, 10.0).unwrap();
                dynamics::run(&cfg).unwrap().steps()
            })
            .sum();
        total as f64 / 50.0
    };
    let with = mean_steps(0.3, 0.6);
    let without = mean_steps(0.6, 0.6);
    outcome(
        with >= without,
        format!("mean steps with hesitation zone {with:.2}, without {without:.2}"),
    )
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else if p.file_name().unwrap() != "manifest.json" {
                out.insert(
                    p.strip_prefix(root).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn deterministic_bytes() -> Outcome {
    let edges: Vec<[usize; 2]> = (0..20)
        .map(|i| [i, (i + 1) % 20])
        .chain((0..20).step_by(4).map(|i| [i, (i + 7) % 20]))
        .collect();
    let json = |seed: u64, beta: f64| {
        format!(
            r#"{{"n_agents":20,"seed":{seed},"thresholds":{{"alpha":{beta},"beta":{beta}}},
                "rewiring":{{"p_add":0,"p_cut":0}},"initial_opinions":{:?},
                "initial_network":{{"edges":{edges:?}}}}}"#,
            REFERENCE_OPINIONS
        )
    };
    let tmp = tempfile::TempDir::new().unwrap();
    let mut files = 0;
    let mut ok = true;
    for beta in [0.3, 0.6] {
        let mut snaps = Vec::new();
        for (k, seed) in [7u64, 7, 8, u64::MAX].into_iter().enumerate() {
            let cfg = ConfigFile::from_json(&json(seed, beta), Path::new(".")).unwrap();
            let out = tmp.path().join(format!("b{beta}-{k}"));
            commands::run(&cfg, &out, None, None).unwrap();
            snaps.push(snapshot(&out));
        }
        files = snaps[0].len();
        ok &= snaps.windows(2).all(|w| w[0] == w[1]);
    }
    outcome(
        ok,
        format!("{files} files per run compared across 2 repeats and 3 seeds, 2 configs"),
    )
}

fn invariant_suite() -> Outcome {
    let mut rng = seeded(0xACCE);
    let mut failures = Vec::new();

    let set = LinguisticTermSet::new(3, 2.0).unwrap();
    if !(0..set.len()).all(|j| set.nearest(set.value(j).unwrap()).unwrap() == j) {
        failures.push("nearest-term round trip");
    }

    let params = ModelParams {
        term_set: set.clone(),
        thresholds: ThreeWayThresholds::new(0.3, 0.6, 10.0).unwrap(),
        inertia: 0.0,
        rewiring: RewiringParams::new(0.15, 0.45, 0.5, 0.5).unwrap(),
    };
    let (mut range_ok, mut sym_ok, mut rows_ok) = (true, true, true);
    for trial in 0..200 {
        let n = rng.gen_range(2..=30);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let mut net = SocialNetwork::random(n, rng.gen_range(0.0..=1.0), &mut rng).unwrap();
        let mut p = params.clone();
        p.inertia = if trial % 2 == 0 {
            0.0
        } else {
            rng.gen_range(0.0..=1.0)
        };
        for _ in 0..5 {
            let out = dynamics::step(&x, &net, &p, &mut rng).unwrap();
            range_ok &= out.values.iter().all(|v| (0.0..=1.0).contains(v));
            sym_ok &= (0..n).all(|i| {
                !out.network.is_linked(i, i)
                    && (0..n).all(|j| out.network.is_linked(i, j) == out.network.is_linked(j, i))
            });
            x = out.values;
            net = out.network;
        }
        for mode in [WeightMode::Uniform, WeightMode::Distance] {
            let w = baselines::degroot_weights(&x, mode).unwrap();
            rows_ok &= (0..n).all(|i| (w.row(i).iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
    if !range_ok {
        failures.push("opinion range");
    }
    if !sym_ok {
        failures.push("adjacency symmetry");
    }
    if !rows_ok {
        failures.push("row-stochastic weights");
    }

    let mut mono_ok = true;
    for _ in 0..200 {
        let alpha = rng.gen_range(0.0..1.0);
        let beta = rng.gen_range(alpha..=1.0);
        let t = ThreeWayThresholds::new(alpha, beta, rng.gen_range(0.0..30.0)).unwrap();
        let mut d: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..1.2)).collect();
        d.sort_by(f64::total_cmp);
        let p: Vec<f64> = d
            .iter()
            .map(|&v| threeway::acceptance_probability(v, &t).unwrap())
            .collect();
        mono_ok &= p.windows(2).all(|w| w[0] >= w[1]);
        mono_ok &= threeway::acceptance_probability(alpha, &t).unwrap() == 1.0;
        if alpha < beta {
            let right = threeway::acceptance_probability(alpha + 1e-12, &t).unwrap();
            mono_ok &= (1.0 - right).abs() < 1e-9;
        }
    }
    if !mono_ok {
        failures.push("acceptance monotonicity/continuity");
    }

    let mut bayes_ok = true;
    for _ in 0..1000 {
        let l: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.0..10.0));
        let pr = rng.gen_range(0.0..=1.0);
        let m = LossMatrix::new(l[0], l[1], l[2], l[3], l[4], l[5]).unwrap();
        let risks = [
            (ThreeWayRegion::Positive, l[0] * pr + l[3] * (1.0 - pr)),
            (ThreeWayRegion::Boundary, l[1] * pr + l[4] * (1.0 - pr)),
            (ThreeWayRegion::Negative, l[2] * pr + l[5] * (1.0 - pr)),
        ];
        let best = risks.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let region = threeway::bayes_region(&m, pr).unwrap();
        bayes_ok &= risks
            .iter()
            .any(|r| r.0 == region && (r.1 - best).abs() < 1e-9);
    }
    if !bayes_ok {
        failures.push("bayes region");
    }

    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "all six invariant families hold".to_string()
        } else {
            format!("violated: {}", failures.join(", "))
        },
    )
}

fn complexity_contract() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [10usize, 20, 40, 80] {
        let mut cfg = SimulationConfig::new(n, InitialOpinions::Random { seed: Some(1) });
        cfg.epsilon = 1e-12;
        let rec = dynamics::run(&cfg).unwrap();
        let (mut filter, mut rewire, mut total) = (0, 0, 0);
        for c in rec.iterations.iter().filter_map(|it| it.counters) {
            filter = filter.max(c.filter_visits);
            rewire = rewire.max(c.rewire_visits);
            total = total.max(c.total());
        }
        ok &= total <= n * n;
        parts.push(format!(
            "N={n}: {total} (screening {filter} + rewiring {rewire}) vs N^2 {}",
            n * n
        ));
    }
    outcome(
        ok,
        format!("largest per-step pair visits: {}", parts.join("; ")),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Duration, Check); 10] = [
        (
            "term scale exactness",
            Duration::from_secs(1),
            lsf_exactness,
        ),
        (
            "uniform DeGroot one-step convergence",
            Duration::from_secs(1),
            degroot_one_step,
        ),
        (
            "consensus metric cross-check",
            Duration::from_secs(1),
            metric_cross_check,
        ),
        (
            "homogeneous HK reproduction",
            Duration::from_secs(1),
            hk_homogeneous,
        ),
        (
            "heterogeneous HK cases",
            Duration::from_secs(1),
            hk_heterogeneous,
        ),
        (
            "stochastic 20-agent reproduction",
            Duration::from_secs(30),
            stochastic_reproduction,
        ),
        (
            "hesitation zone slows convergence",
            Duration::from_secs(60),
            mechanism_slows_convergence,
        ),
        (
            "deterministic regime byte identity",
            Duration::from_secs(5),
            deterministic_bytes,
        ),
        ("invariant suite", Duration::from_secs(10), invariant_suite),
        (
            "per-step pair visits within N^2",
            Duration::from_secs(10),
            complexity_contract,
        ),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let Outcome { pass, detail } = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {detail} [{:.0?}{}]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            elapsed,
            if in_time {
                String::new()
            } else {
                format!(", budget {budget:?}")
            }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
