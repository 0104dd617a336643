//! Problem representation: expression trees, parametric constraints,
//! uncertainty sets, candidate evaluation, and robust feasibility.

pub mod constraint;
pub mod expr;
pub mod problem;
pub mod uncertainty;

pub use constraint::{
    active_set, constraint_sup, Basis, BasisTerm, CoefFn, ConstraintKind, ConstraintSup,
    ParamConstraint, ParamDomain,
};
pub use expr::{eval_scalar, AbsTerm, FrozenSurrogate, MaxTerm, ScalarExpr, SmoothExpr};
pub use problem::{
    eval_objective_scenario, is_robust_feasible, is_robust_feasible_with_grid, UncertainMOP,
};
pub use uncertainty::UncertaintySet;
