#![allow(dead_code)]

use rand::Rng;
use sfconv::rng::{self, SimRng};
use sfconv::Graph;

pub fn rng(seed: u64) -> SimRng {
    rng::from_seed(seed)
}

/// Erdős–Rényi graph with unit weights.
pub fn gnp(n: usize, p: f64, r: &mut SimRng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::build(n, &edges).unwrap()
}

/// Random connected graph: a random spanning tree plus G(n, p) extras, with
/// weights in [0.5, 1.5].
pub fn connected(n: usize, p: f64, r: &mut SimRng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = r.gen_range(0..v);
        edges.push((u, v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if r.gen::<f64>() < p && !edges.contains(&(i, j)) {
                edges.push((i, j));
            }
        }
    }
    let weighted: Vec<_> = edges.into_iter().map(|(i, j)| (i, j, r.gen_range(0.5..1.5))).collect();
    Graph::build(n, &weighted).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
    Graph::build(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Graph::build(n, &edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    Graph::build(n, &edges).unwrap()
}
