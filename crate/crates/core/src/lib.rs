//! Claw-free lower-bound constructions and exact audits of independent-set
//! relaxations.
//!
//! The crate builds k-claw-free graphs out of Ramsey witnesses, computes their
//! invariants exactly, and checks LP/SDP-style relaxations of maximum-weight
//! independent set (the clique-constrained polytope, its Sherali–Adams lifts,
//! and sum-of-squares moment matrices) in exact rational arithmetic.

pub mod baselines;
pub mod construction;
pub mod dimacs;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod invariants;
pub mod lp;
pub mod ramsey;
pub mod rational;
pub mod relax;

pub use error::{Error, Result};
pub use graph::{Graph, VertexWeights};
pub use invariants::Limits;
pub use rational::Rational;
