//! Forms restricted to a hypersurface `Y = {ρ = 0}`, compared through a
//! normal form modulo `ρ` and `dρ`.

use std::fmt;

use crate::algebra::{GaussianRational, MultiPoly, RatFn, WPoly};
use crate::error::{Error, Result};
use crate::forms::MeroForm;

/// A meromorphic form on the component `{ρ = 0}`, represented by an ambient
/// form and read in the chart where `z_var` is the fibre coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceForm {
    pub component: usize,
    pub rho: MultiPoly,
    pub var: usize,
    pub form: MeroForm,
}

impl HypersurfaceForm {
    pub fn new(component: usize, rho: MultiPoly, var: usize, form: MeroForm) -> Self {
        Self { component, rho, var, form }
    }

    /// Canonical representative in this chart.
    pub fn normalized(&self) -> Result<Self> {
        normalize_on_hypersurface(self)
    }

    /// Canonical representative in the chart of `var`.
    pub fn in_chart(&self, var: usize) -> Result<Self> {
        normalize_on_hypersurface(&Self { var, ..self.clone() })
    }

    /// Equality on `Y`, decided in the chart of `self`.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        if self.rho != other.rho {
            return Ok(false);
        }
        let a = self.normalized()?;
        let b = other.in_chart(self.var)?;
        Ok(a.form == b.form)
    }

    /// The value of a degree-0 form that is constant on `Y`.
    pub fn constant_value(&self) -> Result<Option<GaussianRational>> {
        let h = self.normalized()?;
        if h.form.degree() != 0 {
            return Ok(None);
        }
        Ok(match h.form.get(&[]) {
            None => Some(GaussianRational::zero()),
            Some(c) => c.constant_value(),
        })
    }
}

impl fmt::Display for HypersurfaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {{{} = 0}}", self.form, self.rho)
    }
}

/// Reduction of rational functions modulo `ρ` in the chart variable.
pub(crate) struct Reducer {
    var: usize,
    modulus: WPoly,
}

impl Reducer {
    pub(crate) fn new(rho: &MultiPoly, var: usize) -> Result<Self> {
        rho.check_var(var)?;
        if rho.is_free_of(var) {
            return Err(Error::InvalidChart { var: var + 1 });
        }
        let out = Self { var, modulus: WPoly::from_poly(rho, var) };
        if out.reduce(&RatFn::from_poly(rho.partial_derivative(var)?))?.is_zero() {
            return Err(Error::InvalidChart { var: var + 1 });
        }
        Ok(out)
    }

    pub(crate) fn reduce(&self, r: &RatFn) -> Result<RatFn> {
        let num = WPoly::from_poly(r.num(), self.var).rem(&self.modulus)?;
        if num.is_zero() {
            return Ok(RatFn::zero(r.nvars()));
        }
        let den = WPoly::from_poly(r.den(), self.var);
        let inv = den.inv_mod(&self.modulus)?.ok_or_else(|| {
            Error::DenominatorMismatch(format!("denominator {} vanishes on the component", r.den()))
        })?;
        Ok(num.mul(&inv).rem(&self.modulus)?.to_ratfn())
    }

    pub(crate) fn reduce_form(&self, form: &MeroForm) -> Result<MeroForm> {
        form.try_map(|c| self.reduce(c))
    }
}

/// Replaces `dz_var` by `−(∂ρ/∂z_var)^{−1} Σ_{l≠var} (∂ρ/∂z_l) dz_l`.
fn eliminate_fibre_differential(form: &MeroForm, rho: &MultiPoly, var: usize) -> Result<MeroForm> {
    if !form.contains_differential(var) {
        return Ok(form.clone());
    }
    let n = form.nvars();
    let d1 = RatFn::from_poly(rho.partial_derivative(var)?);
    let mut sub = MeroForm::zero(n, 1);
    for l in (0..n).filter(|&l| l != var) {
        let c = RatFn::from_poly(rho.partial_derivative(l)?).div(&d1)?.neg();
        sub = sub.add(&MeroForm::monomial(n, &[l], c)?)?;
    }
    let rest = form.filter_terms(|k| !k.contains(&var));
    sub.wedge(&form.contract(var)?)?.add(&rest)
}

/// Canonical representative: coefficients reduced modulo `ρ` in `z_var`
/// (degree below `deg ρ`), no `dz_var`.
pub fn normalize_on_hypersurface(h: &HypersurfaceForm) -> Result<HypersurfaceForm> {
    if h.rho.nvars() != h.form.nvars() {
        return Err(Error::NvarsMismatch { left: h.rho.nvars(), right: h.form.nvars() });
    }
    let red = Reducer::new(&h.rho, h.var)?;
    let first = red.reduce_form(&h.form)?;
    let flat = eliminate_fibre_differential(&first, &h.rho, h.var)?;
    let form = red.reduce_form(&flat)?;
    Ok(HypersurfaceForm { form, ..h.clone() })
}
