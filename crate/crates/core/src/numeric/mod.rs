//! Numerical evaluation of residue pairings: fibre roots, principal values
//! over polar components, tube integrals and the operator formula.

mod config;
mod currents;
mod geometry;
pub mod quad;
mod roots;

pub use config::{richardson, LimitResult, QuadratureConfig};
pub use roots::{fiber_roots, poly_roots, FiberPoly, FiberRoots};
pub use currents::{
    component_chart, eval_formula_star, eval_reduced_residue, exactness_test, tube_integral, tube_residue,
    vp_on_component, vp_with_cutoff, ExactnessReport,
};
