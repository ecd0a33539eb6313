//! Exterior algebra of meromorphic forms and of smooth test forms.

pub mod basis;
pub mod bump;
pub mod form;
pub mod mero;
pub mod test_form;

pub use basis::Key;
pub use bump::{BumpFunction, NumBump, Support, Wirtinger};
pub use form::{Coefficient, Differentiable, Form};
pub use mero::MeroForm;
pub use test_form::TestForm;
