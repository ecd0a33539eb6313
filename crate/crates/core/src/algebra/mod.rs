//! Exact arithmetic over the Gaussian rationals.

pub mod gcd;
pub mod poly;
pub mod ratfn;
pub mod rational;
pub mod resultant;
pub mod sqf;
pub mod wpoly;

pub use gcd::{gcd, gcd_poly, lcm};
pub use poly::{Monomial, MultiPoly, NumPoly};
pub use ratfn::{NumRatFn, RatFn};
pub use rational::GaussianRational;
pub use resultant::{discriminant, resultant};
pub use sqf::squarefree_decompose;
pub use wpoly::WPoly;

use crate::error::Result;

/// Operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    PartialDerivative(usize),
}

/// Binary arithmetic on polynomials of the same ring. For
/// `PartialDerivative` the second operand is ignored.
pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    match op {
        PolyOp::Add => p.checked_add(q),
        PolyOp::Mul => p.checked_mul(q),
        PolyOp::PartialDerivative(var) => p.partial_derivative(var),
    }
}
