//! Reduced residues of closed meromorphic forms: per-component residue
//! forms on `Y_k = {ρ_k = 0}` and the data of the exact correction term.

use rayon::prelude::*;

use super::hypersurface::{HypersurfaceForm, Reducer};
use super::lowering::{lower_pole_order, LerayData};
use crate::algebra::{lcm, resultant, squarefree_decompose, GaussianRational, MultiPoly, RatFn, WPoly};
use crate::error::{Error, Result};
use crate::forms::MeroForm;
use crate::weierstrass::{current_side_operator, prepare_denominator, residue_coefficient};

/// Squarefree factors `(ρ_k, r_k)` of the common denominator of `ω`,
/// split off one variable at a time.
pub fn denominator_factors(omega: &MeroForm) -> Result<Vec<(MultiPoly, u32)>> {
    let n = omega.nvars();
    let mut rest = MultiPoly::one(n);
    for (_, c) in omega.terms() {
        rest = lcm(&rest, c.den());
    }
    let mut out = Vec::new();
    for var in 0..n {
        if rest.is_constant() {
            break;
        }
        for (p, m) in squarefree_decompose(&rest, var)? {
            rest = rest.div_exact(&p.pow(m)).expect("squarefree factor divides");
            out.push((p, m));
        }
    }
    Ok(out)
}

/// `α = ω · ∏ ρ_k^{r_k}`, required to be polynomial.
pub(crate) fn numerator_form(omega: &MeroForm, factors: &[(MultiPoly, u32)]) -> Result<MeroForm> {
    let n = omega.nvars();
    let f = factors.iter().fold(MultiPoly::one(n), |acc, (p, r)| acc.mul(&p.pow(*r)));
    let alpha = omega.mul_fn(&RatFn::from_poly(f))?;
    for (_, c) in alpha.terms() {
        if !c.is_polynomial() {
            return Err(Error::DenominatorMismatch(format!("{c}")));
        }
    }
    Ok(alpha)
}

/// The polar part `ω_k = (α · u mod ρ_k^{r_k}) / ρ_k^{r_k}` along component
/// `k` in the chart `z_var`, where `u` inverts the other factors modulo
/// `ρ_k^{r_k}`.
fn polar_part(alpha: &MeroForm, factors: &[(MultiPoly, u32)], k: usize, var: usize) -> Result<MeroForm> {
    let (rho, r) = &factors[k];
    let n = rho.nvars();
    prepare_denominator(&[(rho.clone(), *r)], var).map_err(|e| reindex(e, k))?;
    Reducer::new(rho, var)?;
    let others = factors
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .fold(MultiPoly::one(n), |acc, (_, (p, m))| acc.mul(&p.pow(*m)));
    let power = rho.pow(*r);
    let Some(inv) = WPoly::from_poly(&others, var).inv_mod(&WPoly::from_poly(&power, var))? else {
        for (i, (p, _)) in factors.iter().enumerate() {
            if i != k && !p.is_free_of(var) && resultant(p, rho, var)?.is_zero() {
                return Err(Error::CoprimalityViolation { first: i.min(k) + 1, second: i.max(k) + 1, var: var + 1 });
            }
        }
        return Err(Error::CoprimalityViolation { first: k + 1, second: k + 1, var: var + 1 });
    };
    // reducing modulo ρ^r only drops a form that is regular along ρ
    let modulus = WPoly::from_poly(&power, var);
    let inv_power = RatFn::from_poly(power).inv()?;
    alpha.try_map(|c| {
        let theta = WPoly::from_ratfn(c, var).expect("polynomial numerator").mul(&inv).rem(&modulus)?;
        Ok(theta.to_ratfn().mul(&inv_power))
    })
}

/// Single-factor validation errors name factor 1; report the real index.
fn reindex(e: Error, k: usize) -> Error {
    match e {
        Error::FactorFreeOfVariable { var, .. } => Error::FactorFreeOfVariable { index: k + 1, var },
        Error::LeadingCoefficientVanishesAtOrigin { var, .. } => {
            Error::LeadingCoefficientVanishesAtOrigin { index: k + 1, var }
        }
        Error::NonSquarefreeFactor { var, .. } => Error::NonSquarefreeFactor { index: k + 1, var },
        other => other,
    }
}

fn check_factors(omega: &MeroForm, factors: &[(MultiPoly, u32)]) -> Result<()> {
    for (p, r) in factors {
        if p.nvars() != omega.nvars() {
            return Err(Error::NvarsMismatch { left: omega.nvars(), right: p.nvars() });
        }
        if p.is_constant() || *r == 0 {
            return Err(Error::Unsupported("factors must be nonconstant with positive multiplicity".into()));
        }
    }
    Ok(())
}

/// First chart in which component `k` is valid, with its polar part.
fn first_chart(alpha: &MeroForm, factors: &[(MultiPoly, u32)], k: usize) -> Result<(usize, MeroForm)> {
    let mut first_err = None;
    for var in 0..alpha.nvars() {
        match polar_part(alpha, factors, k, var) {
            Ok(w) => return Ok((var, w)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or(Error::InvalidChart { var: 1 }))
}

/// `A = c_1 · ι_var α / (∂ρ_k/∂z_var)` on `Y_k` for a simple pole.
pub fn simple_pole_residue_form(
    omega: &MeroForm,
    factors: &[(MultiPoly, u32)],
    k: usize,
    var: usize,
) -> Result<HypersurfaceForm> {
    check_factors(omega, factors)?;
    let (rho, r) = factors.get(k).ok_or(Error::VariableOutOfRange { var: k, nvars: factors.len() })?;
    if *r != 1 {
        return Err(Error::MultiplePole { component: k + 1, multiplicity: *r });
    }
    omega.contract(var)?;
    let alpha = numerator_form(omega, factors)?;
    let polar = polar_part(&alpha, factors, k, var)?;
    let d1 = RatFn::from_poly(rho.partial_derivative(var)?);
    let a = polar.mul_fn(&RatFn::from_poly(rho.clone()))?.contract(var)?.mul_fn(&d1.inv()?)?;
    Ok(HypersurfaceForm::new(k, rho.clone(), var, a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentResidue {
    pub component: usize,
    pub multiplicity: u32,
    pub var: usize,
    pub leray: LerayData,
    /// `A = a|_Y` in normal form.
    pub residue: HypersurfaceForm,
}

/// One term `Σ_t γ_t · T(F_t)` of the residue of `e_ν ρ^{−ν}`: `gamma` is
/// `e_ν` with each coefficient `c` replaced by its `l`-th residue
/// coefficient, `operator` the current-side operator acting on test data.
#[derive(Clone, Debug, PartialEq)]
pub struct SDescriptor {
    pub var: usize,
    pub component: usize,
    pub order: u32,
    pub l: u32,
    pub binomial: u64,
    pub numerator: MeroForm,
    pub gamma: MeroForm,
    pub operator: Vec<RatFn>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedResidue {
    pub nvars: usize,
    pub degree: usize,
    pub components: Vec<ComponentResidue>,
    pub s_descriptors: Vec<SDescriptor>,
}

impl ReducedResidue {
    pub fn rho(&self, component: usize) -> Option<&MultiPoly> {
        self.components.iter().find(|c| c.component == component).map(|c| &c.leray.rho)
    }
}

/// Reduced residue of a closed form `ω` with denominator `∏ ρ_k^{r_k}`.
///
/// Each component is read in the first chart where it is valid; pole orders
/// above one are lowered and the exact remainder `dR` is recorded as
/// [`SDescriptor`]s.
pub fn reduced_residue(omega: &MeroForm, factors: &[(MultiPoly, u32)]) -> Result<ReducedResidue> {
    check_factors(omega, factors)?;
    let alpha = numerator_form(omega, factors)?;
    let p = omega.degree();
    let components = (0..factors.len())
        .into_par_iter()
        .map(|k| {
            let (var, polar) = first_chart(&alpha, factors, k)?;
            let (rho, r) = &factors[k];
            let leray = lower_pole_order(&polar, rho, var, *r)?;
            let residue = HypersurfaceForm::new(k, rho.clone(), var, leray.a.clone()).normalized()?;
            Ok(ComponentResidue { component: k, multiplicity: *r, var, leray, residue })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut s_descriptors = Vec::new();
    for c in &components {
        for (nu, e) in &c.leray.r_terms {
            if e.is_zero() {
                continue;
            }
            for l in 0..*nu {
                let rho = &c.leray.rho;
                let (binomial, _) = residue_coefficient(rho, c.var, *nu, l, &RatFn::one(rho.nvars()))?;
                let gamma = e.try_map(|coeff| Ok(residue_coefficient(rho, c.var, *nu, l, coeff)?.1));
                s_descriptors.push(SDescriptor {
                    var: c.var,
                    component: c.component,
                    order: *nu,
                    l,
                    binomial,
                    numerator: e.clone(),
                    gamma: gamma?,
                    operator: current_side_operator(&c.leray.rho, c.var, *nu, l)?,
                });
            }
        }
    }
    Ok(ReducedResidue { nvars: omega.nvars(), degree: p, components, s_descriptors })
}

/// For `p = 1` the residue forms are functions; each must be constant on
/// its component. Returns `(k, A_k)` with 0-based `k`.
pub fn divisor_coefficients(rr: &ReducedResidue) -> Result<Vec<(usize, GaussianRational)>> {
    if rr.degree != 1 {
        return Err(Error::DegreeMismatch(format!(
            "divisor extraction needs a 1-form, got degree {}",
            rr.degree
        )));
    }
    rr.components
        .iter()
        .map(|c| match c.residue.constant_value()? {
            Some(v) => Ok((c.component, v)),
            None => Err(Error::NonConstantResidueForm {
                component: c.component + 1,
                form: c.residue.to_string(),
            }),
        })
        .collect()
}
