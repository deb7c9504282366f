//! Spectral irregularity of graphs.
//!
//! Computes `ε(G) = ρ − 2m/n` from a Perron solve, evaluates the degree
//! moment bounds and the Rayleigh residual bound
//! `ε ≤ √var(G)·√(n/S² − 1)`, estimates `S²` from below, and scans graph
//! corpora for violations.
//!
//! ```
//! use specirr::{conjecture_lab::analyze, graph::Graph, spectral::SolverConfig};
//!
//! let g = Graph::complete_bipartite(2, 3).unwrap();
//! let record = analyze(&g, &SolverConfig::default()).unwrap();
//! assert!((record.report.epsilon - record.report.main_bound).abs() < 1e-8);
//! ```

// Checks are written `!(lhs <= rhs)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conjecture_lab;
pub mod graph;
pub mod irregularity;
pub mod s2_bounds;
pub mod spectral;

pub use conjecture_lab::{analyze, GraphRecord, ScanSummary};
pub use graph::{FamilySpec, Graph, GraphError};
pub use irregularity::IrregularityReport;
pub use s2_bounds::S2Estimate;
pub use spectral::{SolverConfig, SpectralResult};
