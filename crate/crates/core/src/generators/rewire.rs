use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Above this edge count an exhaustive search for an improving swap is too
/// expensive; a long run of rejected proposals is taken as exhaustion instead.
const EXHAUSTIVE_SCAN_MAX_EDGES: usize = 2000;
const STALL_PER_EDGE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewireParams {
    pub target_clustering: f64,
    /// Maximum number of proposed swaps.
    pub max_swaps: usize,
    pub connectivity_check_interval: usize,
}

impl RewireParams {
    pub fn new(target_clustering: f64, max_swaps: usize) -> Self {
        Self { target_clustering, max_swaps, connectivity_check_interval: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_clustering > 0.0 && self.target_clustering <= 1.0) {
            return Err(Error::InvalidParams(format!("target clustering {} not in (0, 1]", self.target_clustering)));
        }
        if self.connectivity_check_interval == 0 {
            return Err(Error::InvalidParams("connectivity_check_interval must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewireReport {
    pub swaps_attempted: usize,
    /// Swaps present in the output (rolled-back swaps excluded).
    pub swaps_accepted: usize,
    pub initial_c: f64,
    pub final_c: f64,
    pub reached_target: bool,
    /// No improving swap remained.
    #[serde(skip)]
    pub exhausted: bool,
}

#[derive(Clone)]
struct SwapState {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    triangles: Vec<u64>,
    accepted: usize,
}

impl SwapState {
    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn common(&self, u: usize, v: usize) -> usize {
        crate::graph::sorted_intersection_len(&self.adj[u], &self.adj[v])
    }

    /// Triangle gain of replacing `(a,b),(c,d)` by `(a,c),(b,d)`, or `None`
    /// when the swap would not leave a simple graph.
    fn gain(&self, a: usize, b: usize, c: usize, d: usize) -> Option<i64> {
        if a == c || a == d || b == c || b == d || self.has(a, c) || self.has(b, d) {
            return None;
        }
        let removed = self.common(a, b) + self.common(c, d);
        let added = self.common(a, c) - usize::from(self.has(b, c)) - usize::from(self.has(a, d)) + self.common(b, d)
            - usize::from(self.has(a, d))
            - usize::from(self.has(b, c));
        Some(added as i64 - removed as i64)
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        let (nu, nv) = (&self.adj[u], &self.adj[v]);
        let shared = intersection(nu, nv);
        for w in shared {
            self.triangles[w] -= 1;
            self.triangles[u] -= 1;
            self.triangles[v] -= 1;
        }
        let p = self.adj[u].binary_search(&v).expect("edge present");
        self.adj[u].remove(p);
        let p = self.adj[v].binary_search(&u).expect("edge present");
        self.adj[v].remove(p);
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        let shared = intersection(&self.adj[u], &self.adj[v]);
        for w in shared {
            self.triangles[w] += 1;
            self.triangles[u] += 1;
            self.triangles[v] += 1;
        }
        let p = self.adj[u].binary_search(&v).expect_err("edge absent");
        self.adj[u].insert(p, v);
        let p = self.adj[v].binary_search(&u).expect_err("edge absent");
        self.adj[v].insert(p, u);
    }

    fn apply(&mut self, e1: usize, e2: usize, (a, b, c, d): (usize, usize, usize, usize)) {
        self.remove_edge(a, b);
        self.remove_edge(c, d);
        self.add_edge(a, c);
        self.add_edge(b, d);
        self.edges[e1] = (a.min(c), a.max(c));
        self.edges[e2] = (b.min(d), b.max(d));
        self.accepted += 1;
    }

    fn clustering(&self) -> f64 {
        let n = self.adj.len();
        if n == 0 {
            return 0.0;
        }
        let total: f64 = self
            .adj
            .iter()
            .zip(&self.triangles)
            .map(|(nb, &t)| {
                let d = nb.len() as f64;
                if nb.len() < 2 {
                    0.0
                } else {
                    2.0 * t as f64 / (d * (d - 1.0))
                }
            })
            .sum();
        total / n as f64
    }

    fn connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// First improving swap in a deterministic scan over all edge pairs.
    fn find_improving(&self) -> Option<(usize, usize, (usize, usize, usize, usize))> {
        for e1 in 0..self.edges.len() {
            for e2 in e1 + 1..self.edges.len() {
                let (a, b) = self.edges[e1];
                let (c, d) = self.edges[e2];
                for quad in [(a, b, c, d), (a, b, d, c)] {
                    if self.gain(quad.0, quad.1, quad.2, quad.3).is_some_and(|g| g > 0) {
                        return Some((e1, e2, quad));
                    }
                }
            }
        }
        None
    }
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut p, mut q, mut out) = (0, 0, Vec::new());
    while p < a.len() && q < b.len() {
        match a[p].cmp(&b[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[p]);
                p += 1;
                q += 1;
            }
        }
    }
    out
}

/// Greedy double-edge swaps that strictly increase the triangle count while
/// keeping every node degree. Connectivity is re-checked every
/// `connectivity_check_interval` accepted swaps and on exit; a failed check
/// rolls back to the last connected snapshot. Output edges get unit weight.
pub fn rewire_increase_clustering<T: Scalar, R: Rng + ?Sized>(
    g: &Graph<T>,
    p: &RewireParams,
    rng: &mut R,
) -> Result<(Graph<T>, RewireReport)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let initial_c = g.global_clustering().global.f64();
    let mut report = RewireReport {
        swaps_attempted: 0,
        swaps_accepted: 0,
        initial_c,
        final_c: initial_c,
        reached_target: initial_c >= p.target_clustering,
        exhausted: false,
    };
    if p.max_swaps == 0 {
        return Ok((g.clone(), report));
    }
    p.validate()?;

    let mut state = SwapState {
        adj: (0..g.n()).map(|i| g.neighbors(i).to_vec()).collect(),
        edges: g.edges().map(|(i, j, _)| (i, j)).collect(),
        triangles: g.triangles_per_node(),
        accepted: 0,
    };
    let m = state.edges.len();
    let mut snapshot = state.clone();
    let mut since_check = 0;
    let mut stall = 0;
    let stall_limit = (STALL_PER_EDGE * m).max(1000);
    let mut c = initial_c;

    while report.swaps_attempted < p.max_swaps && c < p.target_clustering && m >= 2 {
        report.swaps_attempted += 1;
        let e1 = rng.gen_range(0..m);
        let mut e2 = rng.gen_range(0..m - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let (a, b) = state.edges[e1];
        let (mut c2, mut d2) = state.edges[e2];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c2, &mut d2);
        }
        let improving = state.gain(a, b, c2, d2).is_some_and(|gain| gain > 0);
        if improving {
            state.apply(e1, e2, (a, b, c2, d2));
            stall = 0;
        } else {
            stall += 1;
            if stall < stall_limit {
                continue;
            }
            stall = 0;
            if m > EXHAUSTIVE_SCAN_MAX_EDGES {
                report.exhausted = true;
                break;
            }
            match state.find_improving() {
                Some((f1, f2, quad)) => state.apply(f1, f2, quad),
                None => {
                    report.exhausted = true;
                    break;
                }
            }
        }
        since_check += 1;
        if since_check >= p.connectivity_check_interval {
            since_check = 0;
            if state.connected() {
                snapshot = state.clone();
            } else {
                state = snapshot.clone();
            }
        }
        c = state.clustering();
    }
    if !state.connected() {
        state = snapshot;
    }

    let adj = state.adj;
    let out: Graph<T> = Graph::from_adjacency(adj);
    report.swaps_accepted = state.accepted;
    report.final_c = out.global_clustering().global.f64();
    report.reached_target = report.final_c >= p.target_clustering;
    Ok((out, report))
}
