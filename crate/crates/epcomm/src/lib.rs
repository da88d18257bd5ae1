//! Community detection by criterion maximization over extreme points.
//!
//! Finding two communities by maximizing a quality function over all 2^n
//! label vectors is intractable directly. This crate instead projects the
//! label cube [-1,1]^n onto a 2-dimensional spectral embedding of the graph;
//! the projection is a zonotope with at most 2n vertices, and only the label
//! vectors sitting at those vertices can maximize the criteria of interest.
//! Enumerating them takes O(n log n), which turns the search into a cheap
//! exact scan over O(n) candidates.
//!
//! The toolkit ships the detector ([`detect::ep_detect`]) for four criteria
//! (block-model and degree-corrected likelihoods, Newman-Girvan modularity,
//! community extraction), a closed-form geometric approximation
//! ([`detect::aep_detect`]), spectral-clustering and modularity baselines,
//! block-model generators, agreement metrics, and a benchmark harness.
//!
//! ```
//! use epcomm::{detect, models, metrics, objectives::Criterion};
//!
//! let cfg = models::SimConfig::balanced(120, (1.0, 1.0), 0.1, 12.0, 0.0, 7);
//! let (graph, truth, _) = models::sample_dcsbm(&cfg)?;
//! let found = detect::ep_detect(&graph, Criterion::Bm, 0.25, 1e-8, 1)?;
//! let agreement = metrics::nmi(&found.labels, &truth)?;
//! assert!(agreement > 0.9);
//! # Ok::<(), epcomm::Error>(())
//! ```
#![allow(clippy::needless_range_loop)] // index-coupled numeric kernels read better this way

pub mod baselines;
pub mod bench;
pub mod detect;
pub mod error;
pub mod graph;
pub mod label;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod objectives;
pub mod spectral;
pub mod zonotope;

pub use error::{Error, Result};
pub use graph::Graph;
pub use label::LabelVector;
pub use objectives::{BlockCounts, Criterion};
pub use spectral::Embedding;
