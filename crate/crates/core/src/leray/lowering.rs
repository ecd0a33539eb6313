//! Integration by parts along `dρ`: a closed form with a pole of order `r`
//! along `ρ = 0` becomes a simple-pole part plus an exact form.

use crate::algebra::{gcd, GaussianRational, MultiPoly, RatFn};
use crate::error::{Error, Result};
use crate::forms::MeroForm;

/// `dω` and whether it vanishes.
pub fn check_closed(omega: &MeroForm) -> Result<(bool, MeroForm)> {
    let d = omega.exterior_d()?;
    Ok((d.is_zero(), d))
}

/// `ω_k = ρ^{−1} dρ ∧ a + β + dR` with `R = Σ_ν e_ν ρ^{−ν}`, all of `a`, `β`,
/// `e_ν` free of `dz_var`, and `da = dρ ∧ a′ + C ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LerayData {
    pub rho: MultiPoly,
    pub var: usize,
    pub order: u32,
    pub a: MeroForm,
    pub beta: MeroForm,
    /// `(ν, e_ν)` for `ν = 1..order−1`, ascending.
    pub r_terms: Vec<(u32, MeroForm)>,
    pub a_prime: MeroForm,
    pub c_cert: MeroForm,
    /// `da − dρ ∧ a′` was divisible by `ρ`.
    pub certificate_exact: bool,
    /// `β` has no pole along `ρ`; false only for non-closed input.
    pub beta_regular: bool,
}

impl LerayData {
    /// `R = Σ e_ν ρ^{−ν}`.
    pub fn r_form(&self) -> Result<MeroForm> {
        let n = self.rho.nvars();
        let rho = RatFn::from_poly(self.rho.clone());
        let mut acc = MeroForm::zero(n, self.a.degree());
        for (nu, e) in &self.r_terms {
            acc = acc.add(&e.mul_fn(&rho.pow(-(*nu as i32))?)?)?;
        }
        Ok(acc)
    }

    /// `ρ^{−1} dρ ∧ a + β + dR`.
    pub fn recombine(&self) -> Result<MeroForm> {
        let rho = RatFn::from_poly(self.rho.clone());
        let dlog = MeroForm::differential(&rho)?.mul_fn(&rho.inv()?)?;
        dlog.wedge(&self.a)?.add(&self.beta)?.add(&self.r_form()?.exterior_d()?)
    }

    /// Whether `a`, `β` and every `e_ν` avoid `dz_var`.
    pub fn is_fibre_free(&self) -> bool {
        self.a.is_free_of_dz(self.var)
            && self.beta.is_free_of_dz(self.var)
            && self.r_terms.iter().all(|(_, e)| e.is_free_of_dz(self.var))
    }
}

/// Exact quotient of every coefficient by `ρ`, when the numerators allow it.
fn divide_by(form: &MeroForm, rho: &MultiPoly) -> Option<MeroForm> {
    form.try_map(|c| {
        let q = c.num().div_exact(rho).ok_or(Error::DivisionByZero)?;
        RatFn::new(q, c.den().clone())
    })
    .ok()
}

/// `θ = dρ ∧ A + B` with `A = ι_var θ / ρ'`; both `A` and `B` avoid `dz_var`.
fn split_along(theta: &MeroForm, drho: &MeroForm, d1_inv: &RatFn, var: usize) -> Result<(MeroForm, MeroForm)> {
    let a = theta.contract(var)?.mul_fn(d1_inv)?;
    let b = theta.sub(&drho.wedge(&a)?)?;
    debug_assert!(b.is_free_of_dz(var));
    Ok((a, b))
}

/// Lowers the pole of `ω_k` along `ρ` from order `order` to one.
///
/// `ρ^order · ω_k` must have denominators coprime to `ρ`. A non-divisible
/// remainder at order `μ ≥ 2` is an obstruction and is reported with the
/// offending term.
pub fn lower_pole_order(omega: &MeroForm, rho: &MultiPoly, var: usize, order: u32) -> Result<LerayData> {
    let n = omega.nvars();
    if rho.nvars() != n {
        return Err(Error::NvarsMismatch { left: n, right: rho.nvars() });
    }
    rho.check_var(var)?;
    if order == 0 {
        return Err(Error::Unsupported("pole order must be at least 1".into()));
    }
    if omega.degree() == 0 {
        return Err(Error::DegreeMismatch("pole lowering needs a form of degree at least 1".into()));
    }
    let d1 = RatFn::from_poly(rho.partial_derivative(var)?);
    if d1.is_zero() {
        return Err(Error::FactorFreeOfVariable { index: 1, var: var + 1 });
    }
    let d1_inv = d1.inv()?;
    let rho_fn = RatFn::from_poly(rho.clone());
    let drho = MeroForm::differential(&rho_fn)?;

    let mut theta = omega.mul_fn(&rho_fn.pow(order as i32)?)?;
    for (_, c) in theta.terms() {
        if !gcd(c.den(), rho).is_constant() {
            return Err(Error::DenominatorMismatch(format!(
                "{} keeps a pole along {rho} beyond order {order}",
                c
            )));
        }
    }

    let mut r_terms = Vec::new();
    for mu in (2..=order).rev() {
        let (a_mu, b) = split_along(&theta, &drho, &d1_inv, var)?;
        let b1 = divide_by(&b, rho)
            .ok_or_else(|| Error::PoleReductionObstruction { order: mu, term: b.to_string() })?;
        let inv = GaussianRational::from_ratio(1, i64::from(mu - 1));
        r_terms.push((mu - 1, a_mu.scale(&inv).neg()));
        theta = a_mu.exterior_d()?.scale(&inv).add(&b1)?;
    }
    r_terms.reverse();

    let (a, b) = split_along(&theta, &drho, &d1_inv, var)?;
    let (beta, beta_regular) = match divide_by(&b, rho) {
        Some(q) => (q, true),
        None => (b.mul_fn(&rho_fn.inv()?)?, false),
    };

    let da = a.exterior_d()?;
    let a_prime = da.contract(var)?.mul_fn(&d1_inv)?;
    let rem = da.sub(&drho.wedge(&a_prime)?)?;
    let (c_cert, certificate_exact) = match divide_by(&rem, rho) {
        Some(c) => (c, true),
        None => (rem.mul_fn(&rho_fn.inv()?)?, false),
    };

    Ok(LerayData {
        rho: rho.clone(),
        var,
        order,
        a,
        beta,
        r_terms,
        a_prime,
        c_cert,
        certificate_exact,
        beta_regular,
    })
}
