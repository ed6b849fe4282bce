use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};

/// Per-node and network-average clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport<T> {
    pub local: Vec<T>,
    pub global: T,
    pub triangles_per_node: Vec<u64>,
}

/// Number of common entries of two ascending, duplicate-free slices.
pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut p, mut q, mut count) = (0, 0, 0);
    while p < a.len() && q < b.len() {
        match a[p].cmp(&b[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                p += 1;
                q += 1;
            }
        }
    }
    count
}

fn local_from_triangles<T: Scalar>(triangles: u64, degree: usize) -> T {
    if degree < 2 {
        return T::zero();
    }
    let pairs = (degree as u64) * (degree as u64 - 1);
    T::of(2.0 * triangles as f64 / pairs as f64)
}

impl<T: Scalar> Graph<T> {
    /// Triangles through every node, counting each triangle once per corner.
    pub fn triangles_per_node(&self) -> Vec<u64> {
        let mut tri = vec![0u64; self.n];
        for i in 0..self.n {
            let ni = &self.neighbors[i];
            for &j in ni.iter().filter(|&&j| j > i) {
                let nj = &self.neighbors[j];
                // third corners k > j so each triangle is visited once
                let a = &ni[ni.partition_point(|&k| k <= j)..];
                let b = &nj[nj.partition_point(|&k| k <= j)..];
                let (mut p, mut q) = (0, 0);
                while p < a.len() && q < b.len() {
                    match a[p].cmp(&b[q]) {
                        std::cmp::Ordering::Less => p += 1,
                        std::cmp::Ordering::Greater => q += 1,
                        std::cmp::Ordering::Equal => {
                            tri[i] += 1;
                            tri[j] += 1;
                            tri[a[p]] += 1;
                            p += 1;
                            q += 1;
                        }
                    }
                }
            }
        }
        tri
    }

    pub fn triangle_count(&self) -> u64 {
        self.triangles_per_node().iter().sum::<u64>() / 3
    }

    /// Local clustering `2 T_i / (d_i (d_i - 1))`; zero for degree below two.
    pub fn local_clustering(&self, i: usize) -> Result<T> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, len: self.n });
        }
        let ni = &self.neighbors[i];
        let twice: usize = ni.iter().map(|&j| sorted_intersection_len(ni, &self.neighbors[j])).sum();
        Ok(local_from_triangles(twice as u64 / 2, ni.len()))
    }

    pub fn global_clustering(&self) -> ClusteringReport<T> {
        let triangles = self.triangles_per_node();
        let local: Vec<T> = triangles.iter().zip(&self.neighbors).map(|(&t, nb)| local_from_triangles(t, nb.len())).collect();
        let global =
            if self.n == 0 { T::zero() } else { local.iter().copied().collect::<CompensatedSum<T>>().value() / T::of_usize(self.n) };
        ClusteringReport { local, global, triangles_per_node: triangles }
    }
}

/// Average local clustering by enumerating every node triple. Test oracle, O(n³).
pub fn brute_force_global_clustering<T: Scalar>(g: &Graph<T>) -> f64 {
    let n = g.n();
    if n == 0 {
        return 0.0;
    }
    let mut tri = vec![0u64; n];
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    tri[a] += 1;
                    tri[b] += 1;
                    tri[c] += 1;
                }
            }
        }
    }
    let total: f64 = (0..n)
        .map(|i| {
            let d = g.degree(i) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * tri[i] as f64 / (d * (d - 1.0))
            }
        })
        .sum();
    total / n as f64
}

/// Asymptotic clustering of a preferential-attachment graph with `links`
/// edges per new node: `(L - 1)/8 * ln(n)^2 / n`.
pub fn predicted_c_ba(n: usize, links: usize) -> f64 {
    let n = n as f64;
    let ln = n.ln();
    (links as f64 - 1.0) / 8.0 * ln * ln / n
}

/// Asymptotic clustering with `triad_links` triad-formation edges per node and
/// average degree `avg_degree`: `2 L2 / d + C_BA(n, L)`. Requires `L2 < d/2`.
pub fn predicted_c_hk(n: usize, links: usize, triad_links: usize, avg_degree: f64) -> Result<f64> {
    if !(avg_degree > 0.0) || triad_links as f64 >= avg_degree / 2.0 {
        return Err(Error::PreconditionViolated(format!("triad links {triad_links} must be below half the average degree {avg_degree}")));
    }
    Ok(2.0 * triad_links as f64 / avg_degree + predicted_c_ba(n, links))
}
