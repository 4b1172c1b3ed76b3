//! Convexity-driven projection (CDP) of point clouds.
//!
//! CDP builds a mutual k-NN graph, finds point pairs whose straight chord is
//! much shorter than their graph shortest path (`r = ‖p_j − p_i‖ / S(i, j) ≤ τ`),
//! averages their weighted direction projectors into a PSD structure matrix,
//! and projects onto its top-`k` eigenvectors. After fitting, every such pair
//! gets a checkable certificate `ψ ≤ r̃/r ≤ 1/φ*` on its distortion.
//!
//! ```
//! use cdp::datasets::toy5;
//! use cdp::pipeline::{run_cdp, CdpConfig};
//!
//! let config = CdpConfig { k_nn: 2, tau: 0.75, k: 2, standardize: false, ..Default::default() };
//! let (state, eval) = run_cdp(&toy5(), &config).unwrap();
//! assert_eq!(state.admissible.len(), 5);
//! assert!(eval.certificates.iter().all(|c| c.holds));
//! ```

pub mod baselines;
pub mod cdp;
pub mod certificates;
pub mod cli;
pub mod datasets;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod shortest_paths;
pub mod svg;

pub use error::{CdpError, Result};
