//! Shared tolerances and caps. Every certifier records the values it used
//! in its verdict resolution, so reports stay auditable.

/// Absolute activity threshold: kink activity in subdifferentials and
/// membership of maximizers in active sets.
pub const ACT_TOL: f64 = 1e-8;

/// Margin below which a strict inequality is not considered satisfied.
/// "No strict solution" means the maximized margin is <= this.
pub const STRICT_TOL: f64 = 1e-9;

/// Componentwise symmetry tolerance for quadratic matrices.
pub const SYM_TOL: f64 = 1e-12;

/// Vertex deduplication tolerance (infinity norm).
pub const DEDUP_TOL: f64 = 1e-12;

/// Tolerance for scenario membership in uncertainty sets.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Default feasibility tolerance for the robust feasible set.
pub const FEAS_TOL: f64 = 1e-9;

/// Epsilon used when collecting active constraints for the linearization cone.
pub const CONE_EPS: f64 = 1e-6;

/// Default parameter-grid resolution for interval constraint domains.
pub const DEFAULT_V_GRID: usize = 1001;

/// Golden-section refinement tolerance in the constraint parameter.
pub const GOLDEN_TOL: f64 = 1e-10;

/// Default lattice resolution per axis for grid oracles.
pub const DEFAULT_GRID: usize = 101;

/// Lattice oracles are restricted to low dimension; larger problems must
/// supply explicit sample lists.
pub const MAX_LATTICE_DIM: usize = 3;

/// Generator-count cap for Minkowski sums.
pub const MINKOWSKI_CAP: usize = 200_000;

/// Scenario-product cap.
pub const SCENARIO_CAP: usize = 1_000_000;

/// Default ray scaling grid for polyhedral scenario construction.
pub const DEFAULT_GAMMA_GRID: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];

/// Default tradeoff-bound sweep for the properness refuter.
pub const DEFAULT_M_LIST: [f64; 4] = [1e1, 1e2, 1e3, 1e4];

/// Additive slack on the uncertainty norm bound in the isolated-efficiency
/// certificate (the bound must hold strictly).
pub const ISOLATED_L_SLACK: f64 = 1e-6;
