//! Graph serialization, KONECT-style edge-list ingestion and CSV emitters.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{SimConfig, TrialTrace};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::montecarlo::{MeanTrace, ScatterRow};

pub const GRAPH_FORMAT_VERSION: u64 = 1;
pub const TRACE_HEADER: &str = "step,gap,lyapunov,consensus_residual,tracking_residual";
pub const SCATTER_HEADER: &str = "name,n,d,C,lambda2,rate";

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    version: u64,
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u64,
}

pub fn graph_to_json(g: &Graph<f64>) -> String {
    let doc = GraphDoc { version: GRAPH_FORMAT_VERSION, n: g.n(), edges: g.edges().collect() };
    serde_json::to_string(&doc).expect("graph document serializes")
}

pub fn graph_from_json(text: &str) -> Result<Graph<f64>> {
    let probe: VersionProbe = serde_json::from_str(text)?;
    if probe.version != GRAPH_FORMAT_VERSION {
        return Err(Error::VersionMismatch(probe.version));
    }
    let doc: GraphDoc = serde_json::from_str(text)?;
    Graph::build(doc.n, &doc.edges)
}

pub fn write_graph<W: Write>(mut w: W, g: &Graph<f64>) -> Result<()> {
    w.write_all(graph_to_json(g).as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_graph<R: Read>(mut r: R) -> Result<Graph<f64>> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    graph_from_json(&text)
}

pub fn write_graph_file(path: impl AsRef<Path>, g: &Graph<f64>) -> Result<()> {
    write_graph(fs::File::create(path)?, g)
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<Graph<f64>> {
    graph_from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightColumn {
    /// Every edge gets weight 1.
    #[default]
    Ignore,
    /// Third column is the weight; lines without one get 1.
    Use,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOptions {
    pub drop_self_loops: bool,
    /// Keep the first occurrence of a repeated pair instead of failing.
    pub merge_duplicate_edges: bool,
    pub largest_component_only: bool,
    pub weight_column: WeightColumn,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self { drop_self_loops: true, merge_duplicate_edges: true, largest_component_only: true, weight_column: WeightColumn::Ignore }
    }
}

/// Parses a whitespace-separated edge list (`u v [weight [timestamp]]`).
///
/// Lines starting with `%` or `#` are comments. Ids may be any non-negative
/// integers; they are compacted to `0..n` in order of first appearance, so
/// 0- and 1-based files give the same graph. Direction is ignored.
pub fn parse_edge_list(text: &str, opts: &IngestOptions) -> Result<Graph<f64>> {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::MalformedLine { line: lineno, msg };
        let mut fields = line.split_whitespace();
        let mut endpoint = || -> Result<u64> {
            let tok = fields.next().ok_or_else(|| bad("expected two node ids".into()))?;
            tok.parse::<u64>().map_err(|_| bad(format!("invalid node id {tok:?}")))
        };
        let (u, v) = (endpoint()?, endpoint()?);
        let w = match (opts.weight_column, fields.next()) {
            (WeightColumn::Use, Some(tok)) => {
                let w: f64 = tok.parse().map_err(|_| bad(format!("invalid weight {tok:?}")))?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(bad(format!("weight {w} is not positive")));
                }
                w
            }
            _ => 1.0,
        };

        let next = ids.len();
        let i = *ids.entry(u).or_insert(next);
        let next = ids.len();
        let j = *ids.entry(v).or_insert(next);
        if i == j {
            if opts.drop_self_loops {
                continue;
            }
            return Err(bad(format!("self-loop on node {u}")));
        }
        let key = (i.min(j), i.max(j));
        if let Some(&first) = seen.get(&key) {
            if opts.merge_duplicate_edges {
                continue;
            }
            return Err(bad(format!("edge {u}-{v} repeats line {first}")));
        }
        seen.insert(key, lineno);
        edges.push((i, j, w));
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let g = Graph::build(ids.len(), &edges)?;
    Ok(if opts.largest_component_only { g.largest_component() } else { g })
}

pub fn read_edge_list_file(path: impl AsRef<Path>, opts: &IngestOptions) -> Result<Graph<f64>> {
    parse_edge_list(&fs::read_to_string(path)?, opts)
}

/// Formats a float so that it parses back to the same value.
fn num(out: &mut String, v: f64) {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        let _ = write!(out, "{v}");
    } else {
        let _ = write!(out, "{v:e}");
    }
}

fn trace_csv(steps: &[usize], cols: [&[f64]; 4]) -> String {
    let mut out = String::with_capacity(64 * (steps.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (k, step) in steps.iter().enumerate() {
        let _ = write!(out, "{step}");
        for col in cols {
            out.push(',');
            num(&mut out, col[k]);
        }
        out.push('\n');
    }
    out
}

pub fn trace_to_csv(t: &TrialTrace<f64>) -> String {
    trace_csv(&t.recorded_steps, [&t.gap, &t.lyapunov, &t.consensus_residual, &t.tracking_residual])
}

pub fn mean_trace_to_csv(t: &MeanTrace) -> String {
    trace_csv(&t.steps, [&t.gap, &t.lyapunov, &t.consensus_residual, &t.tracking_residual])
}

pub fn write_trace<W: Write>(mut w: W, t: &TrialTrace<f64>) -> Result<()> {
    w.write_all(trace_to_csv(t).as_bytes())?;
    Ok(())
}

/// Sidecar written next to a trace CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub n: usize,
    pub family: String,
    pub config: SimConfig<f64>,
    pub h: f64,
    pub seed: Option<u64>,
    pub diverged: bool,
    pub records: usize,
}

/// `out/trace.csv` -> `out/trace.meta.json`
pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

pub fn scatter_to_csv(rows: &[ScatterRow]) -> String {
    let mut out = String::new();
    out.push_str(SCATTER_HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},", csv_field(&r.name), r.n);
        num(&mut out, r.d);
        out.push(',');
        num(&mut out, r.c);
        for v in [r.lambda2, r.rate] {
            out.push(',');
            if let Some(v) = v {
                num(&mut out, v);
            }
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_summary<W: Write, S: Serialize>(mut w: W, value: &S) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn write_json_file<S: Serialize>(path: impl AsRef<Path>, value: &S) -> Result<()> {
    write_summary(fs::File::create(path)?, value)
}
