//! Finite-dimensional certification toolkit for uncertain multi-objective
//! programs with objective-wise linear uncertainty.
//!
//! The crate computes polytope-valued subdifferentials for a structured
//! nonsmooth function class (affine + quadratic + weighted abs + finite
//! max) and refutes or certifies highly robust (weak/strict) efficiency of
//! candidate points via scenario oracles, necessary-condition refuters,
//! KKT feasibility LPs, and sufficiency certificates.
//!
//! All values are immutable after construction and the scenario/lattice
//! loops are data parallel (rayon behind the default `parallel` feature,
//! with an order-identical sequential fallback).

pub mod certify;
pub mod constants;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod linalg;
pub mod model;
pub mod scenarios;
pub mod subdiff;

pub use error::{Error, Result};
pub use exec::Threading;
