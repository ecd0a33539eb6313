//! Pole-order lowering for closed meromorphic forms, residue forms on the
//! polar components, and their normal form modulo the component.

mod hypersurface;
mod lowering;
mod residue;

pub use hypersurface::{normalize_on_hypersurface, HypersurfaceForm};
pub use lowering::{check_closed, lower_pole_order, LerayData};
pub use residue::{
    denominator_factors, divisor_coefficients, reduced_residue, simple_pole_residue_form,
    ComponentResidue, ReducedResidue, SDescriptor,
};
pub(crate) use residue::numerator_form;
