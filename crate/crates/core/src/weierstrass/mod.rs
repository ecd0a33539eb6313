//! Per-variable factored denominators, partial fractions along the fibres
//! of a coordinate projection, and the transverse derivative operators used
//! to push residues onto the polar components.

mod denominator;
mod operator;
mod partial;

pub use denominator::{prepare_denominator, Factor, FactoredDenominator};
pub use operator::{
    apply_transposed, current_side_operator, operator_entry, residue_coefficient,
    residue_operator_data, transverse_operator, OperatorEntry, ResidueOperatorData,
    TransverseOperator,
};
pub use partial::{
    check_simple_pole_holomorphy, partial_fractions, HolomorphyReport, PartialFractionDecomp,
    PfEntry,
};
