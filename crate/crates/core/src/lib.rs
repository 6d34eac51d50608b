//! Hierarchy-aware knowledge-graph recommendation on the Poincaré ball.
//!
//! The crate is organised around five subsystems:
//!
//! - [`geometry`] — numerically safe Poincaré-ball primitives (curvature −1)
//!   and entailment-cone geometry, in plain `f64`.
//! - [`data`] — loading, cleaning, splitting and indexing of the user–item
//!   interaction graph and the knowledge graph, including hierarchical
//!   relation tagging.
//! - [`model`] — the differentiable forward pass: relation-transitive KG
//!   aggregation, collaborative aggregation, gated fusion of the dual item
//!   embeddings, layer summation, scoring, and the angle constraint.
//! - [`training`] — contrastive optimisation with negative sampling, Adam on
//!   the tangent-space parameters, and early stopping.
//! - [`evaluation`] — all-ranking recall@K / ndcg@K with brute-force oracles
//!   used by the test-suite.
//!
//! All trainable parameters live in the tangent space at the origin;
//! hyperbolic points are only ever materialised through the exponential map
//! followed by a projection back into the open ball. Gradients are produced
//! by the reverse-mode tape in [`autodiff`].

pub mod autodiff;
pub mod checkpoint;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod export;
pub mod geometry;
pub mod model;
pub mod rng;
pub mod synthetic;
pub mod training;

pub use error::{Error, Result};
