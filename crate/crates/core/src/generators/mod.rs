//! Preferential-attachment graph growth with optional triad formation, and
//! clustering-increasing degree-preserving rewiring.

mod rewire;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

pub use rewire::{rewire_increase_clustering, RewireParams, RewireReport};

/// Barabási–Albert growth: each new node attaches `links` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaParams {
    pub n: usize,
    pub links: usize,
    /// Size of the initial clique; defaults to `links`.
    pub seed_size: usize,
}

impl BaParams {
    pub fn new(n: usize, links: usize) -> Self {
        Self { n, links, seed_size: links }
    }

    pub fn validate(&self) -> Result<()> {
        if self.links == 0 {
            return Err(Error::InvalidParams("links must be at least 1".into()));
        }
        if self.seed_size < self.links {
            return Err(Error::InvalidParams(format!("seed size {} is smaller than links {}", self.seed_size, self.links)));
        }
        if self.n < self.seed_size {
            return Err(Error::InvalidParams(format!("n {} is smaller than seed size {}", self.n, self.seed_size)));
        }
        Ok(())
    }

    pub fn expected_edges(&self) -> usize {
        self.seed_size * (self.seed_size - 1) / 2 + (self.n - self.seed_size) * self.links
    }
}

/// Holme–Kim style growth. Every preferential target `a` is followed by up to
/// `triad_links` edges to random neighbours of `a`, until the new node has
/// `links` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkParams {
    pub n: usize,
    pub links: usize,
    pub triad_links: usize,
    pub seed_size: usize,
}

impl HkParams {
    pub fn new(n: usize, links: usize, triad_links: usize) -> Self {
        Self { n, links, triad_links, seed_size: links }
    }

    pub fn validate(&self) -> Result<()> {
        BaParams { n: self.n, links: self.links, seed_size: self.seed_size }.validate()?;
        if self.triad_links >= self.links {
            return Err(Error::InvalidParams(format!("triad links {} must be below links {}", self.triad_links, self.links)));
        }
        Ok(())
    }

    pub fn expected_edges(&self) -> usize {
        BaParams { n: self.n, links: self.links, seed_size: self.seed_size }.expected_edges()
    }
}

pub fn generate_ba<T: Scalar, R: Rng + ?Sized>(p: &BaParams, rng: &mut R) -> Result<Graph<T>> {
    p.validate()?;
    Ok(Graph::from_adjacency(grow(p.n, p.links, 0, p.seed_size, rng)))
}

pub fn generate_hk<T: Scalar, R: Rng + ?Sized>(p: &HkParams, rng: &mut R) -> Result<Graph<T>> {
    p.validate()?;
    Ok(Graph::from_adjacency(grow(p.n, p.links, p.triad_links, p.seed_size, rng)))
}

/// Shared growth loop. Each new node repeatedly attaches preferentially to an
/// anchor and then makes up to `triad` links to distinct random neighbours of
/// that anchor, until it has `links` links. Attachment weights are the
/// degrees at the start of the node's step.
fn grow<R: Rng + ?Sized>(n: usize, links: usize, triad: usize, seed_size: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n);
    // every node appears once per incident edge end
    let mut ends: Vec<usize> = Vec::with_capacity(2 * (seed_size * seed_size / 2 + (n - seed_size) * links));
    for i in 0..seed_size {
        adj.push((0..seed_size).filter(|&j| j != i).collect());
        ends.extend(std::iter::repeat_n(i, seed_size - 1));
    }

    let mut chosen = vec![usize::MAX; n];
    let mut eligible: Vec<usize> = Vec::new();

    for v in seed_size..n {
        adj.push(Vec::with_capacity(links));
        let frozen = ends.len();
        let mut made = 0;
        while made < links {
            let anchor = preferential(&ends[..frozen], v, &chosen, rng);
            attach(&mut adj, &mut ends, &mut chosen, v, anchor);
            made += 1;
            eligible.clear();
            eligible.extend(adj[anchor].iter().copied().filter(|&w| w != v && chosen[w] != v));
            for _ in 0..triad.min(links - made) {
                // fall back to preferential attachment once the anchor's
                // neighbourhood is used up; the link still counts
                let u = if eligible.is_empty() {
                    preferential(&ends[..frozen], v, &chosen, rng)
                } else {
                    eligible.swap_remove(rng.gen_range(0..eligible.len()))
                };
                attach(&mut adj, &mut ends, &mut chosen, v, u);
                made += 1;
            }
        }
    }
    adj
}

fn attach(adj: &mut [Vec<usize>], ends: &mut Vec<usize>, chosen: &mut [usize], v: usize, u: usize) {
    adj[v].push(u);
    adj[u].push(v);
    ends.push(u);
    ends.push(v);
    chosen[u] = v;
}

/// Degree-proportional draw among nodes `0..v` not yet chosen by `v`.
fn preferential<R: Rng + ?Sized>(ends: &[usize], v: usize, chosen: &[usize], rng: &mut R) -> usize {
    if ends.is_empty() {
        loop {
            let u = rng.gen_range(0..v);
            if chosen[u] != v {
                return u;
            }
        }
    }
    loop {
        let u = ends[rng.gen_range(0..ends.len())];
        if chosen[u] != v {
            return u;
        }
    }
}
