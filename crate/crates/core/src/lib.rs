//! Scale-free network generation, clustering metrics, and simulation of
//! continuous-time gradient tracking over weighted undirected graphs.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`). Campaign
//! orchestration and file I/O work in `f64`; the aliases below name the
//! concrete instantiations used there.

pub mod costs;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod montecarlo;
pub mod rng;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Graph = graph::Graph<f64>;
pub type Graph32 = graph::Graph<f32>;
pub type QuarticModel = costs::QuarticModel<f64>;
pub type MlLossModel = costs::MlLossModel<f64>;
pub type CostModel = costs::CostModel<f64>;
pub type SimConfig = dynamics::SimConfig<f64>;
pub type NodeState = dynamics::NodeState<f64>;
pub type TrialTrace = dynamics::TrialTrace<f64>;
pub type SpectralReport = spectral::SpectralReport<f64>;
pub type JacobianSpec = spectral::JacobianSpec<f64>;
pub type Matrix = spectral::Matrix<f64>;
