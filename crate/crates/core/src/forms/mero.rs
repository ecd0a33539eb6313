//! Meromorphic `(p, 0)`-forms with rational-function coefficients.

use num_complex::Complex64;

use super::form::Form;
use crate::algebra::{MultiPoly, RatFn};
use crate::error::{Error, Result};

pub type MeroForm = Form<RatFn>;

impl Form<RatFn> {
    /// `dz_var`.
    pub fn dz(nvars: usize, var: usize) -> Result<Self> {
        Self::from_terms(nvars, 1, [(vec![var], RatFn::one(nvars))])
    }

    /// `c · dz_I` for a holomorphic index list `I` (in any order).
    pub fn monomial(nvars: usize, indices: &[usize], c: RatFn) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&k| k >= nvars) {
            return Err(Error::VariableOutOfRange { var: bad, nvars });
        }
        Self::from_terms(nvars, indices.len(), [(indices.to_vec(), c)])
    }

    /// The 1-form `df`.
    pub fn differential(f: &RatFn) -> Result<Self> {
        Self::scalar(f.nvars(), f.clone()).exterior_d()
    }

    /// The logarithmic differential `df/f`.
    pub fn d_log(f: &MultiPoly) -> Result<Self> {
        let fr = RatFn::from_poly(f.clone());
        Self::differential(&fr)?.mul_fn(&fr.inv()?)
    }

    pub fn mul_fn(&self, r: &RatFn) -> Result<Self> {
        self.mul_coeff(r)
    }

    /// Whether every key is holomorphic, i.e. the form has type `(p, 0)`.
    pub fn is_holomorphic_type(&self) -> bool {
        self.terms().all(|(k, _)| k.iter().all(|&i| i < self.nvars()))
    }

    /// Whether no term contains `dz_var`.
    pub fn is_free_of_dz(&self, var: usize) -> bool {
        !self.contains_differential(var)
    }

    pub fn eval(&self, z: &[Complex64]) -> Form<Complex64> {
        self.map(|c| c.eval(z))
    }

    /// Product of the coefficient denominators, reduced.
    pub fn denominators(&self) -> Vec<&MultiPoly> {
        self.terms().map(|(_, c)| c.den()).collect()
    }
}
