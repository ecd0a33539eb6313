//! Smooth compactly supported test forms and the per-variable splitting of
//! `(q, n − 1)`-forms.

use num_complex::Complex64;

use super::bump::BumpFunction;
use super::form::Form;
use crate::error::{Error, Result};

pub type TestForm = Form<BumpFunction>;

impl Form<BumpFunction> {
    pub fn eval(&self, z: &[Complex64]) -> Form<Complex64> {
        self.map(|c| c.eval(z))
    }

    /// Splits `φ = Σ_j φ_j` where `φ_j` collects the terms whose
    /// antiholomorphic part misses exactly `dz̄_j`. Returned indices are
    /// 0-based; for `n = 1` the single entry is `(0, φ)`.
    pub fn split_phi_j(&self) -> Result<Vec<(usize, TestForm)>> {
        let n = self.nvars();
        for (k, _) in self.terms() {
            let anti = k.iter().filter(|&&i| i >= n).count();
            if anti != n - 1 {
                return Err(Error::WrongBidegree { expected: n - 1, found: anti });
            }
        }
        Ok((0..n)
            .map(|j| (j, self.filter_terms(|k| !k.contains(&(n + j)))))
            .collect())
    }
}
