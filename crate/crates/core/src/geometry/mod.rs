//! Polytope and convex-set queries used by every certifier: LP feasibility
//! with strict inequalities, membership, Minkowski sums, support functions.

pub mod lp;
pub mod polytope;
pub mod strict;
pub mod support;

pub use polytope::{contains_point, membership_residual, minkowski_sum, Membership, Polytope};
pub use strict::{
    solve_strict_feasibility, solve_strict_feasibility_in_box, witness_satisfies, StrictWitness,
};
pub use support::{support_value, Support};
