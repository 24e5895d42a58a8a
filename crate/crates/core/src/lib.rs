//! Statistical inference on random graphs.
//!
//! The crate covers the whole workflow: sample graphs from random graph
//! models ([`sims`]), clean them up ([`graph`]), embed one or many graphs
//! spectrally ([`embed`]), fit and compare random graph models ([`models`]),
//! test whether two graphs come from the same distribution ([`inference`]),
//! cluster embedded vertices ([`cluster`]) and draw the results as SVG
//! ([`viz`]). The [`cli`] module backs the `graphstats` binary.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod cli;
pub mod cluster;
pub mod embed;
pub mod error;
pub mod graph;
pub mod inference;
pub mod json;
pub mod linalg;
pub mod models;
pub mod rng;
pub mod sims;
pub mod viz;

pub use error::{Error, Result};
pub use graph::Graph;
