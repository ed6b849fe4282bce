//! Undirected simple weighted graphs and the structural metrics computed on them.

mod clustering;
mod degree;

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::Matrix;

pub(crate) use clustering::sorted_intersection_len;
pub use clustering::{brute_force_global_clustering, predicted_c_ba, predicted_c_hk, ClusteringReport};
pub use degree::{powerlaw_tail_slope, DegreeStats};

/// Default sampling range for random link weights.
pub const DEFAULT_WEIGHT_RANGE: (f64, f64) = (0.5, 1.5);

/// Undirected simple graph with strictly positive symmetric link weights.
///
/// Neighbor lists are sorted and duplicate-free; `weights[i][k]` is the weight
/// of the link to `neighbors[i][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph<T> {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    weights: Vec<Vec<T>>,
}

impl<T: Scalar> Graph<T> {
    /// Builds a graph on `n` nodes from an edge list, rejecting anything that
    /// is not a simple graph.
    pub fn build(n: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        let mut pairs: Vec<(usize, usize, T)> = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, len: n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !(w > T::zero()) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { i, j, weight: w.f64() });
            }
            pairs.push((i.min(j), i.max(j), w));
        }
        pairs.sort_by_key(|&(i, j, _)| (i, j));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut neighbors = vec![Vec::new(); n];
        let mut weights = vec![Vec::new(); n];
        for &(i, j, w) in &pairs {
            neighbors[i].push(j);
            weights[i].push(w);
            neighbors[j].push(i);
            weights[j].push(w);
        }
        let mut g = Self { n, neighbors, weights };
        g.sort_lists();
        Ok(g)
    }

    /// Unit-weight graph from adjacency lists the caller guarantees to be
    /// symmetric, loop-free and duplicate-free. Lists need not be sorted.
    pub(crate) fn from_adjacency(mut neighbors: Vec<Vec<usize>>) -> Self {
        for list in neighbors.iter_mut() {
            list.sort_unstable();
        }
        let weights = neighbors.iter().map(|l| vec![T::one(); l.len()]).collect();
        let g = Self { n: neighbors.len(), neighbors, weights };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    fn sort_lists(&mut self) {
        for (nb, ws) in self.neighbors.iter_mut().zip(self.weights.iter_mut()) {
            if nb.windows(2).all(|w| w[0] < w[1]) {
                continue;
            }
            let mut paired: Vec<(usize, T)> = nb.iter().copied().zip(ws.iter().copied()).collect();
            paired.sort_by_key(|p| p.0);
            *nb = paired.iter().map(|p| p.0).collect();
            *ws = paired.iter().map(|p| p.1).collect();
        }
    }

    /// Verifies every structural invariant; used by tests and after decoding.
    pub fn check_invariants(&self) -> Result<()> {
        if self.neighbors.len() != self.n || self.weights.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: self.neighbors.len() });
        }
        for i in 0..self.n {
            let nb = &self.neighbors[i];
            if nb.len() != self.weights[i].len() {
                return Err(Error::DimensionMismatch { expected: nb.len(), got: self.weights[i].len() });
            }
            for (k, &j) in nb.iter().enumerate() {
                if j >= self.n {
                    return Err(Error::IndexOutOfRange { index: j, len: self.n });
                }
                if j == i {
                    return Err(Error::SelfLoop(i));
                }
                if k > 0 && nb[k - 1] >= j {
                    return Err(Error::DuplicateEdge(i, j));
                }
                let w = self.weights[i][k];
                if !(w > T::zero()) {
                    return Err(Error::NonPositiveWeight { i, j, weight: w.f64() });
                }
                if self.weight(j, i) != Some(w) {
                    return Err(Error::PreconditionViolated(format!("asymmetric link ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn neighbor_weights(&self, i: usize) -> &[T] {
        &self.weights[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn weighted_degree(&self, i: usize) -> T {
        self.weights[i].iter().copied().sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && self.neighbors[i].binary_search(&j).is_ok()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<T> {
        let k = self.neighbors.get(i)?.binary_search(&j).ok()?;
        Some(self.weights[i][k])
    }

    /// Edges as `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(move |(i, nb)| nb.iter().zip(self.weights[i].iter()).filter(move |(&j, _)| j > i).map(move |(&j, &w)| (i, j, w)))
    }

    /// Dense Laplacian `D - W`.
    pub fn laplacian(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let mut diag = T::zero();
            for (&j, &w) in self.neighbors[i].iter().zip(&self.weights[i]) {
                m[(i, j)] = -w;
                diag += w;
            }
            m[(i, i)] = diag;
        }
        m
    }

    /// `out = (D - W) x` without forming the matrix.
    pub fn laplacian_apply(&self, x: &[T], out: &mut [T]) {
        for i in 0..self.n {
            let xi = x[i];
            let mut acc = T::zero();
            for (&j, &w) in self.neighbors[i].iter().zip(&self.weights[i]) {
                acc += w * (xi - x[j]);
            }
            out[i] = acc;
        }
    }

    /// Breadth-first reachability from node 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    /// Component label per node; labels are numbered in order of first node.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Subgraph induced by `keep` (ascending node ids), relabelled to `0..keep.len()`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut neighbors = Vec::with_capacity(keep.len());
        let mut weights = Vec::with_capacity(keep.len());
        for &old in keep {
            let mut nb = Vec::new();
            let mut ws = Vec::new();
            for (&j, &w) in self.neighbors[old].iter().zip(&self.weights[old]) {
                if map[j] != usize::MAX {
                    nb.push(map[j]);
                    ws.push(w);
                }
            }
            neighbors.push(nb);
            weights.push(ws);
        }
        let mut g = Self { n: keep.len(), neighbors, weights };
        g.sort_lists();
        g
    }

    /// Largest connected component; ties go to the component containing the
    /// smallest node id. Node order is preserved.
    pub fn largest_component(&self) -> Self {
        if self.n == 0 {
            return self.clone();
        }
        let labels = self.components();
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        let best = (0..count).fold(0, |b, l| if sizes[l] > sizes[b] { l } else { b });
        let keep: Vec<usize> = (0..self.n).filter(|&i| labels[i] == best).collect();
        self.induced_subgraph(&keep)
    }

    /// Same topology with every link weight drawn once from `U[low, high]`.
    pub fn assign_random_weights<R: Rng + ?Sized>(&self, rng: &mut R, low: T, high: T) -> Result<Self> {
        if !(low > T::zero()) || !(high >= low) || !high.is_finite() {
            return Err(Error::InvalidRange { low: low.f64(), high: high.f64() });
        }
        let (lo, hi) = (low.f64(), high.f64());
        let edges: Vec<(usize, usize, T)> = self
            .edges()
            .map(|(i, j, _)| {
                let w = if hi == lo { low } else { T::of(rng.gen_range(lo..=hi)) };
                (i, j, w)
            })
            .collect();
        Ok(self.with_edge_weights(&edges))
    }

    /// Same topology with all weights set to one.
    pub fn unit_weights(&self) -> Self {
        Self::from_adjacency(self.neighbors.clone())
    }

    fn with_edge_weights(&self, edges: &[(usize, usize, T)]) -> Self {
        let mut weights: Vec<Vec<T>> = self.neighbors.iter().map(|l| vec![T::zero(); l.len()]).collect();
        for &(i, j, w) in edges {
            let a = self.neighbors[i].binary_search(&j).expect("edge of self");
            let b = self.neighbors[j].binary_search(&i).expect("edge of self");
            weights[i][a] = w;
            weights[j][b] = w;
        }
        Self { n: self.n, neighbors: self.neighbors.clone(), weights }
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let edges: Vec<(usize, usize, T)> = self.edges().map(|(i, j, w)| (perm[i], perm[j], w)).collect();
        Self::build(self.n, &edges).expect("permutation of a valid graph")
    }

    pub fn cast<U: Scalar>(&self) -> Graph<U> {
        Graph {
            n: self.n,
            neighbors: self.neighbors.clone(),
            weights: self.weights.iter().map(|ws| ws.iter().map(|w| U::of(w.f64())).collect()).collect(),
        }
    }
}
