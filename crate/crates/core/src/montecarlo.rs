//! Seeded Monte-Carlo campaigns over topology families.
//!
//! Trials run in parallel but are reduced in trial order with compensated
//! sums, so a config and base seed always produce the same summary bits.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costs::{CostModel, CostSpec};
use crate::dynamics::{self, SimConfig, TrialTrace};
use crate::error::{Error, Result};
use crate::generators::{generate_ba, generate_hk, BaParams, HkParams};
use crate::graph::{Graph, DEFAULT_WEIGHT_RANGE};
use crate::rng::{self, mix64, substream};
use crate::scalar::CompensatedSum;
use crate::spectral;

const STREAM_GRAPH: u64 = 0;
const STREAM_WEIGHTS: u64 = 1;
const STREAM_COST: u64 = 2;
const STREAM_INIT: u64 = 3;
const STREAM_SHARED_COST: u64 = 0xC057;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Ba {
        n: usize,
        links: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed_size: Option<usize>,
    },
    Hk {
        n: usize,
        links: usize,
        triad_links: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed_size: Option<usize>,
    },
    /// A graph JSON document. Relative paths are resolved by [`McConfig::resolve_paths`].
    File { path: PathBuf },
}

impl GeneratorSpec {
    fn ba(&self) -> Option<BaParams> {
        match *self {
            GeneratorSpec::Ba { n, links, seed_size } => Some(BaParams { n, links, seed_size: seed_size.unwrap_or(links) }),
            _ => None,
        }
    }

    fn hk(&self) -> Option<HkParams> {
        match *self {
            GeneratorSpec::Hk { n, links, triad_links, seed_size } => {
                Some(HkParams { n, links, triad_links, seed_size: seed_size.unwrap_or(links) })
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Ba { .. } => self.ba().unwrap().validate(),
            GeneratorSpec::Hk { .. } => self.hk().unwrap().validate(),
            GeneratorSpec::File { .. } => Ok(()),
        }
    }

    /// Unweighted graph for one trial. File graphs are loaded by the caller.
    fn generate(&self, seed: u64) -> Result<Graph<f64>> {
        let mut r = rng::from_seed(seed);
        if let Some(p) = self.ba() {
            generate_ba(&p, &mut r)
        } else if let Some(p) = self.hk() {
            generate_hk(&p, &mut r)
        } else {
            Err(Error::InvalidParams("file topologies are loaded, not generated".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub label: String,
    pub generator: GeneratorSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResamplePolicy {
    /// A fresh cost model for every trial index (shared by all labels).
    #[default]
    PerTrial,
    /// One cost model per node count for the whole campaign.
    Once,
}

fn default_weight_range() -> (f64, f64) {
    DEFAULT_WEIGHT_RANGE
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub topologies: Vec<TopologySpec>,
    pub cost_spec: CostSpec,
    pub sim: SimConfig<f64>,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(default = "default_weight_range")]
    pub weight_range: (f64, f64),
    #[serde(default)]
    pub resample_cost: ResamplePolicy,
    /// Compute the algebraic connectivity of every trial graph.
    #[serde(default = "yes")]
    pub lambda2: bool,
    /// Compute the Jacobian convergence rate of every trial (dense, slow).
    #[serde(default)]
    pub rate: bool,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.topologies.is_empty() {
            return Err(Error::InvalidParams("no topologies".into()));
        }
        let mut labels = BTreeSet::new();
        let mut files = BTreeSet::new();
        for t in &self.topologies {
            if !labels.insert(t.label.as_str()) {
                return Err(Error::InvalidParams(format!("duplicate label {:?}", t.label)));
            }
            if !files.insert(file_stem(&t.label)) {
                return Err(Error::InvalidParams(format!("label {:?} clashes with another after sanitizing", t.label)));
            }
            t.generator.validate()?;
        }
        let (lo, hi) = self.weight_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidRange { low: lo, high: hi });
        }
        self.sim.validate()
    }

    /// Makes relative graph-file paths relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        for t in &mut self.topologies {
            if let GeneratorSpec::File { path } = &mut t.generator {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
    }
}

/// Seed of the cost model and initial state of trial `trial_index`. It does
/// not depend on the label, so every topology sees the same problems.
pub fn shared_trial_seed(base_seed: u64, trial_index: u64) -> u64 {
    substream(substream(base_seed, STREAM_SHARED_COST), trial_index)
}

/// Seed of one trial's graph and weights. The label enters through a hash
/// of its text, so reordering the topology list does not change any trial.
pub fn trial_seed(base_seed: u64, label_key: u64, trial_index: u64) -> u64 {
    substream(substream(base_seed, label_key), trial_index)
}

/// FNV-1a over the label bytes, finalized with [`mix64`].
pub fn label_key(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    mix64(h)
}

/// Label made safe for a file name.
pub fn file_stem(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanTrace {
    pub steps: Vec<usize>,
    pub gap: Vec<f64>,
    pub lyapunov: Vec<f64>,
    pub consensus_residual: Vec<f64>,
    pub tracking_residual: Vec<f64>,
}

impl MeanTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub clustering: f64,
    pub average_degree: f64,
    pub lambda2: Option<f64>,
    pub rate: Option<f64>,
    pub h: f64,
    pub final_gap: f64,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial: usize,
    pub seed: u64,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSummary {
    pub label: String,
    pub generator: GeneratorSpec,
    pub n: usize,
    pub mean_trace: MeanTrace,
    pub final_gap_mean: f64,
    pub final_gap_std: f64,
    pub mean_clustering: f64,
    pub mean_degree: f64,
    pub mean_lambda2: Option<f64>,
    pub mean_rate: Option<f64>,
    pub trials_used: usize,
    pub trials_diverged: usize,
    pub errors: Vec<TrialError>,
    pub trials: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub trial_count: usize,
    pub base_seed: u64,
    pub cost_spec: CostSpec,
    pub resample_cost: ResamplePolicy,
    pub weight_range: (f64, f64),
    pub sim: SimConfig<f64>,
    pub labels: Vec<LabelSummary>,
}

/// Record grid of a run that is not stopped early.
pub fn record_grid(sim: &SimConfig<f64>) -> Vec<usize> {
    let mut steps: Vec<usize> = (0..=sim.steps).step_by(sim.record_stride.max(1)).collect();
    if steps.last() != Some(&sim.steps) {
        steps.push(sim.steps);
    }
    steps
}

/// Samples `column` on `grid`, holding the last recorded value.
fn align(grid: &[usize], recorded: &[usize], column: &[f64]) -> Vec<f64> {
    let mut k = 0;
    grid.iter()
        .map(|&s| {
            while k + 1 < recorded.len() && recorded[k + 1] <= s {
                k += 1;
            }
            column[k]
        })
        .collect()
}

struct Outcome {
    record: TrialRecord,
    trace: TrialTrace<f64>,
}

fn run_trial(
    cfg: &McConfig,
    topo: &TopologySpec,
    loaded: Option<&Graph<f64>>,
    shared_cost: Option<&CostModel<f64>>,
    trial: usize,
    seed: u64,
    shared_seed: u64,
) -> Result<Outcome> {
    let g = match loaded {
        Some(g) => g.clone(),
        None => topo.generator.generate(substream(seed, STREAM_GRAPH))?,
    };
    let (lo, hi) = cfg.weight_range;
    let weighted = g.assign_random_weights(&mut rng::from_seed(substream(seed, STREAM_WEIGHTS)), lo, hi)?;
    let cost = match shared_cost {
        Some(c) => c.clone(),
        None => cfg.cost_spec.sample(g.n(), &mut rng::from_seed(substream(shared_seed, STREAM_COST)))?,
    };
    let trace = dynamics::run(&weighted, &cost, &cfg.sim, &mut rng::from_seed(substream(shared_seed, STREAM_INIT)))?;

    let lambda2 = if cfg.lambda2 { Some(spectral::lambda2_laplacian(&weighted)?) } else { None };
    let rate = if cfg.rate {
        let opt = cost.aggregate_optimum()?;
        Some(spectral::spectral_report(&weighted, cfg.sim.alpha, cost.hessians_at(opt.x_star))?.rate)
    } else {
        None
    };
    let record = TrialRecord {
        trial,
        seed,
        clustering: g.global_clustering().global,
        average_degree: g.degree_stats().average,
        lambda2,
        rate,
        h: trace.h,
        final_gap: trace.final_gap().unwrap_or(f64::NAN),
        diverged: trace.diverged,
    };
    Ok(Outcome { record, trace })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::new();
    let mut k = 0usize;
    for v in values {
        s.add(v);
        k += 1;
    }
    s.value() / k as f64
}

fn mean_opt(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = values.collect();
    v.filter(|v| !v.is_empty()).map(|v| mean(v.into_iter()))
}

/// Sample standard deviation (0 for a single value).
fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values.iter().copied());
    let ss = mean(values.iter().map(|v| (v - m) * (v - m))) * values.len() as f64;
    (ss / (values.len() - 1) as f64).sqrt()
}

fn summarize(cfg: &McConfig, topo: &TopologySpec, n: usize, results: Vec<(usize, u64, Result<Outcome>)>) -> Result<LabelSummary> {
    let grid = record_grid(&cfg.sim);
    let mut used = Vec::new();
    let mut trials = Vec::new();
    let mut errors = Vec::new();
    let mut diverged = 0;
    for (trial, seed, res) in results {
        match res {
            Ok(o) => {
                trials.push(o.record.clone());
                if o.trace.diverged {
                    diverged += 1;
                } else {
                    used.push(o);
                }
            }
            Err(e) => errors.push(TrialError { trial, seed, kind: e.kind().into(), message: e.to_string() }),
        }
    }
    if used.is_empty() {
        return Err(Error::AllTrialsFailed { label: topo.label.clone(), errors: errors.len(), diverged });
    }
    if diverged > 0 {
        log::warn!("{}: {diverged} diverged trial(s) excluded", topo.label);
    }
    if !errors.is_empty() {
        log::warn!("{}: {} trial(s) failed", topo.label, errors.len());
    }

    let columns = |pick: fn(&TrialTrace<f64>) -> &[f64]| -> Vec<f64> {
        let aligned: Vec<Vec<f64>> = used.iter().map(|o| align(&grid, &o.trace.recorded_steps, pick(&o.trace))).collect();
        (0..grid.len()).map(|k| mean(aligned.iter().map(|a| a[k]))).collect()
    };
    let mean_trace = MeanTrace {
        steps: grid.clone(),
        gap: columns(|t| &t.gap),
        lyapunov: columns(|t| &t.lyapunov),
        consensus_residual: columns(|t| &t.consensus_residual),
        tracking_residual: columns(|t| &t.tracking_residual),
    };
    let finals: Vec<f64> = used.iter().map(|o| *align(&grid, &o.trace.recorded_steps, &o.trace.gap).last().unwrap()).collect();

    Ok(LabelSummary {
        label: topo.label.clone(),
        generator: topo.generator.clone(),
        n,
        final_gap_mean: mean(finals.iter().copied()),
        final_gap_std: std_dev(&finals),
        mean_clustering: mean(used.iter().map(|o| o.record.clustering)),
        mean_degree: mean(used.iter().map(|o| o.record.average_degree)),
        mean_lambda2: mean_opt(used.iter().map(|o| o.record.lambda2)),
        mean_rate: mean_opt(used.iter().map(|o| o.record.rate)),
        mean_trace,
        trials_used: used.len(),
        trials_diverged: diverged,
        errors,
        trials,
    })
}

pub fn run_mc(cfg: &McConfig) -> Result<McSummary> {
    cfg.validate()?;

    let mut loaded = Vec::with_capacity(cfg.topologies.len());
    for t in &cfg.topologies {
        loaded.push(match &t.generator {
            GeneratorSpec::File { path } => Some(crate::io::read_graph_file(path)?),
            _ => None,
        });
    }
    let sizes: Vec<usize> = cfg
        .topologies
        .iter()
        .zip(&loaded)
        .map(|(t, g)| match (&t.generator, g) {
            (_, Some(g)) => g.n(),
            (GeneratorSpec::Ba { n, .. } | GeneratorSpec::Hk { n, .. }, None) => *n,
            (GeneratorSpec::File { .. }, None) => unreachable!(),
        })
        .collect();
    let shared: Vec<Option<CostModel<f64>>> = match cfg.resample_cost {
        ResamplePolicy::PerTrial => vec![None; sizes.len()],
        ResamplePolicy::Once => sizes
            .iter()
            .map(|&n| {
                let mut r = rng::from_seed(substream(cfg.base_seed, STREAM_SHARED_COST ^ STREAM_COST));
                cfg.cost_spec.sample(n, &mut r).map(Some)
            })
            .collect::<Result<_>>()?,
    };

    let jobs: Vec<(usize, usize, u64)> = cfg
        .topologies
        .iter()
        .enumerate()
        .flat_map(|(l, t)| {
            let key = label_key(&t.label);
            (0..cfg.trials).map(move |k| (l, k, trial_seed(cfg.base_seed, key, k as u64)))
        })
        .collect();
    let mut results: Vec<(usize, usize, u64, Result<Outcome>)> = jobs
        .par_iter()
        .map(|&(l, k, seed)| {
            let common = shared_trial_seed(cfg.base_seed, k as u64);
            let res = run_trial(cfg, &cfg.topologies[l], loaded[l].as_ref(), shared[l].as_ref(), k, seed, common);
            (l, k, seed, res)
        })
        .collect();

    let mut labels = Vec::with_capacity(cfg.topologies.len());
    for (l, t) in cfg.topologies.iter().enumerate().rev() {
        let split = results.iter().position(|r| r.0 == l).unwrap_or(results.len());
        let mine = results.split_off(split).into_iter().map(|(_, k, s, r)| (k, s, r)).collect();
        labels.push(summarize(cfg, t, sizes[l], mine)?);
    }
    labels.reverse();

    Ok(McSummary {
        trial_count: cfg.trials,
        base_seed: cfg.base_seed,
        cost_spec: cfg.cost_spec,
        resample_cost: cfg.resample_cost,
        weight_range: cfg.weight_range,
        sim: cfg.sim.clone(),
        labels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: String,
    pub gap: f64,
    pub mean_clustering: f64,
}

/// Labels ordered by mean gap at grid index `at_step` (ties by label).
pub fn compare_topologies(summary: &McSummary, at_step: usize) -> Result<Vec<Verdict>> {
    let mut out = Vec::with_capacity(summary.labels.len());
    for l in &summary.labels {
        let gap = *l.mean_trace.gap.get(at_step).ok_or(Error::IndexOutOfRange { index: at_step, len: l.mean_trace.len() })?;
        out.push(Verdict { label: l.label.clone(), gap, mean_clustering: l.mean_clustering });
    }
    out.sort_by(|a, b| a.gap.total_cmp(&b.gap).then_with(|| a.label.cmp(&b.label)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub name: String,
    pub n: usize,
    pub d: f64,
    pub c: f64,
    /// Absent for disconnected graphs.
    pub lambda2: Option<f64>,
    pub rate: Option<f64>,
}

/// Structural and spectral metrics per graph. The rate uses Hessians of a
/// cost sampled from `cost_seed`, evaluated at its aggregate optimum.
pub fn scatter_report(graphs: &[(String, Graph<f64>)], alpha: f64, cost_spec: &CostSpec, cost_seed: u64) -> Result<Vec<ScatterRow>> {
    graphs
        .par_iter()
        .enumerate()
        .map(|(k, (name, g))| {
            let mut row = ScatterRow {
                name: name.clone(),
                n: g.n(),
                d: g.degree_stats().average,
                c: g.global_clustering().global,
                lambda2: None,
                rate: None,
            };
            if !g.is_connected() {
                log::warn!("{name}: disconnected, spectral columns left empty");
                return Ok(row);
            }
            let cost: CostModel<f64> = cost_spec.sample(g.n(), &mut rng::from_seed(substream(cost_seed, k as u64)))?;
            let opt = cost.aggregate_optimum()?;
            let rep = spectral::spectral_report(g, alpha, cost.hessians_at(opt.x_star))?;
            row.lambda2 = Some(rep.lambda2_laplacian);
            row.rate = Some(rep.rate);
            Ok(row)
        })
        .collect()
}

/// One scatter row per label, from campaign means.
pub fn summary_scatter(summary: &McSummary) -> Vec<ScatterRow> {
    summary
        .labels
        .iter()
        .map(|l| ScatterRow {
            name: l.label.clone(),
            n: l.n,
            d: l.mean_degree,
            c: l.mean_clustering,
            lambda2: l.mean_lambda2,
            rate: l.mean_rate,
        })
        .collect()
}

/// Writes `summary.json`, `mean_trace_<label>.csv` and `scatter.csv`.
pub fn write_outputs(summary: &McSummary, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    crate::io::write_json_file(dir.join("summary.json"), summary)?;
    for l in &summary.labels {
        let path = dir.join(format!("mean_trace_{}.csv", file_stem(&l.label)));
        std::fs::write(path, crate::io::mean_trace_to_csv(&l.mean_trace))?;
    }
    std::fs::write(dir.join("scatter.csv"), crate::io::scatter_to_csv(&summary_scatter(summary)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> McConfig {
        let mut sim = SimConfig::new(1.0, 40);
        sim.record_stride = 10;
        McConfig {
            topologies: vec![
                TopologySpec { label: "SF".into(), generator: GeneratorSpec::Ba { n: 40, links: 2, seed_size: None } },
                TopologySpec { label: "CSF".into(), generator: GeneratorSpec::Hk { n: 40, links: 2, triad_links: 1, seed_size: None } },
            ],
            cost_spec: CostSpec::Quartic,
            sim,
            trials,
            base_seed: 11,
            weight_range: DEFAULT_WEIGHT_RANGE,
            resample_cost: ResamplePolicy::PerTrial,
            lambda2: true,
            rate: false,
        }
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(trial_seed(3, 0, 0), trial_seed(3, 0, 0));
        assert_ne!(trial_seed(3, 0, 1), trial_seed(3, 1, 0));
        let mut seen = BTreeSet::new();
        for l in 0..100 {
            for t in 0..100 {
                assert!(seen.insert(trial_seed(3, l, t)));
            }
        }
        for l in 0..100 {
            for t in 0..100 {
                assert!(!seen.contains(&trial_seed(4, l, t)));
            }
        }
    }

    #[test]
    fn grid_and_alignment() {
        let mut sim = SimConfig::new(1.0, 25);
        sim.record_stride = 10;
        assert_eq!(record_grid(&sim), vec![0, 10, 20, 25]);
        sim.steps = 0;
        assert_eq!(record_grid(&sim), vec![0]);
        assert_eq!(align(&[0, 10, 20, 25], &[0, 10, 13], &[3.0, 2.0, 1.0]), vec![3.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn single_trial_summary_is_the_trace() {
        let cfg = small(1);
        let s = run_mc(&cfg).unwrap();
        let topo = &cfg.topologies[0];
        let seed = trial_seed(cfg.base_seed, label_key(&topo.label), 0);
        let o = run_trial(&cfg, topo, None, None, 0, seed, shared_trial_seed(cfg.base_seed, 0)).unwrap();
        let l = &s.labels[0];
        assert_eq!(l.mean_trace.steps, o.trace.recorded_steps);
        assert_eq!(l.mean_trace.gap, o.trace.gap);
        assert_eq!(l.mean_trace.lyapunov, o.trace.lyapunov);
        assert_eq!(l.final_gap_std, 0.0);
        assert_eq!(l.mean_clustering, o.record.clustering);
    }

    #[test]
    fn label_order_does_not_change_values() {
        let cfg = small(3);
        let mut swapped = cfg.clone();
        swapped.topologies.reverse();
        let a = run_mc(&cfg).unwrap();
        let b = run_mc(&swapped).unwrap();
        assert_eq!(a.labels[0], b.labels[1]);
        assert_eq!(a.labels[1], b.labels[0]);
    }

    #[test]
    fn repeat_runs_are_identical() {
        let cfg = small(4);
        let a = serde_json::to_string(&run_mc(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_mc(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let mut cfg = small(1);
        cfg.trials = 0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidParams(_))));
        let mut cfg = small(1);
        cfg.topologies[1].label = "SF".into();
        assert!(matches!(cfg.validate(), Err(Error::InvalidParams(_))));
        let mut cfg = small(1);
        cfg.weight_range = (0.0, 1.0);
        assert!(matches!(cfg.validate(), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn divergence_is_excluded_and_counted() {
        let mut cfg = small(2);
        cfg.sim.h = Some(5.0);
        cfg.sim.steps = 200;
        let err = run_mc(&cfg).unwrap_err();
        assert!(matches!(err, Error::AllTrialsFailed { diverged: 2, .. }), "{err}");
    }

    #[test]
    fn compare_orders_and_breaks_ties() {
        let mut cfg = small(2);
        cfg.topologies[1] = TopologySpec { label: "A".into(), generator: cfg.topologies[0].generator.clone() };
        let s = run_mc(&cfg).unwrap();
        let last = s.labels[0].mean_trace.len() - 1;
        let v = compare_topologies(&s, last).unwrap();
        let names: Vec<&str> = v.iter().map(|v| v.label.as_str()).collect();
        assert!(v[0].gap <= v[1].gap);
        if v[0].gap == v[1].gap {
            assert_eq!(names, ["A", "SF"]);
        }
        assert!(matches!(compare_topologies(&s, last + 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn scatter_on_complete_graph() {
        let edges: Vec<_> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j, 1.0))).collect();
        let k6 = Graph::build(6, &edges).unwrap();
        let split = Graph::build(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let rows = scatter_report(&[("k6".into(), k6), ("split".into(), split)], 0.001, &CostSpec::Quartic, 1).unwrap();
        assert!((rows[0].lambda2.unwrap() - 6.0).abs() < 1e-10);
        assert_eq!(rows[0].c, 1.0);
        assert!(rows[0].rate.unwrap() > 0.0);
        assert_eq!((rows[1].lambda2, rows[1].rate), (None, None));
        assert!(scatter_report(&[], 1.0, &CostSpec::Quartic, 1).unwrap().is_empty());
    }

    #[test]
    fn config_json_shape() {
        let text = r#"{
            "topologies": [
                {"label": "SF", "generator": {"model": "ba", "n": 50, "links": 3}},
                {"label": "CSF", "generator": {"model": "hk", "n": 50, "links": 3, "triad_links": 1}},
                {"label": "disk", "generator": {"model": "file", "path": "g.json"}}
            ],
            "cost_spec": {"family": "quartic"},
            "sim": {"alpha": 1.0, "steps": 100},
            "trials": 5,
            "base_seed": 7,
            "resample_cost": "once"
        }"#;
        let mut cfg: McConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.weight_range, DEFAULT_WEIGHT_RANGE);
        assert_eq!(cfg.resample_cost, ResamplePolicy::Once);
        assert!(cfg.lambda2 && !cfg.rate);
        cfg.resolve_paths(Path::new("/data"));
        assert_eq!(cfg.topologies[2].generator, GeneratorSpec::File { path: "/data/g.json".into() });
    }
}
