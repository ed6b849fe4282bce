use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub average: f64,
    pub max: usize,
}

impl<T: Scalar> Graph<T> {
    pub fn degree_stats(&self) -> DegreeStats {
        let degrees = self.degrees();
        let total: usize = degrees.iter().sum();
        let average = if self.n == 0 { 0.0 } else { total as f64 / self.n as f64 };
        let max = degrees.iter().copied().max().unwrap_or(0);
        DegreeStats { degrees, average, max }
    }

    /// Number of nodes per observed degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for nb in &self.neighbors {
            *hist.entry(nb.len()).or_insert(0) += 1;
        }
        hist
    }
}

/// Least-squares slope of `ln(count)` against `ln(degree)` over degrees at
/// or above `min_degree`.
pub fn powerlaw_tail_slope(hist: &BTreeMap<usize, usize>, min_degree: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        hist.range(min_degree.max(1)..).filter(|(_, &c)| c > 0).map(|(&d, &c)| ((d as f64).ln(), (c as f64).ln())).collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!("{} distinct tail degrees", pts.len())));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
