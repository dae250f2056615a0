//! Small-dimension solvers used by the base case, the wrapper and the oracle.

pub mod hull;
pub mod interior;
pub mod linalg;
pub mod lp;
pub mod qp;
pub mod simplex;

pub use hull::{
    affine_dimension, caratheodory_basis, convex_coefficients, enumerate_facets, hull_inequalities, point_in_hull,
    supporting_direction, HullTest,
};
pub use interior::{deep_interior_point, infeasibility_certificate, slacks, InteriorPoint};
pub use lp::{feasible_point, lex_min_in_box, solve_lp, solve_lp_in_box, LpBox, LpResult, LpStatus};
pub use qp::{closest_pair_hh, closest_pair_vh, closest_pair_vh_incremental, ClosestPair, PairOutcome, VhPair};
pub use simplex::nonneg_combination;
