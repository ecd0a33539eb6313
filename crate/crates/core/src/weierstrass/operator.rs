use rayon::prelude::*;

use super::denominator::FactoredDenominator;
use super::partial::PartialFractionDecomp;
use crate::algebra::{GaussianRational, MultiPoly, RatFn};
use crate::error::{Error, Result};
use crate::forms::{BumpFunction, Coefficient};

/// `D_s = Σ_{α=1}^s β_α ∂^α/∂z_var^α`, with
/// `∂^s h/∂ρ^s = (∂ρ/∂z_var)^{−(2s−1)} D_s h` along the fibres of the
/// projection forgetting `z_var`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransverseOperator {
    pub var: usize,
    pub order: u32,
    /// `betas[α − 1] = β_α`.
    pub betas: Vec<RatFn>,
}

impl TransverseOperator {
    /// `Σ β_α ∂^α h/∂z_var^α` for a bump function `h`.
    pub fn apply(&self, h: &BumpFunction) -> Result<BumpFunction> {
        apply_coefficients(&self.betas, self.var, h)
    }
}

/// `Σ_α coeffs[α−1] ∂^α h/∂z_var^α`; the coefficients must be polynomials.
fn apply_coefficients(coeffs: &[RatFn], var: usize, h: &BumpFunction) -> Result<BumpFunction> {
    let n = h.nvars();
    let map: Vec<usize> = (0..n).collect();
    let mut acc = BumpFunction::zero(h.support().clone());
    let mut deriv = h.clone();
    for c in coeffs {
        deriv = deriv.derivative(crate::forms::Wirtinger::Holo(var))?;
        if c.is_zero() {
            continue;
        }
        if !c.is_polynomial() {
            return Err(Error::Unsupported("non-polynomial transverse coefficient".into()));
        }
        let scaled = c.num().scale(&c.den().constant_term().inv().expect("constant denominator"));
        acc = acc.add(&deriv.mul_poly(&scaled.embed(2 * n, &map))?)?;
    }
    Ok(acc)
}

/// Builds `D_s` for `ρ` in the chart `z_var` from the recursion
/// `β_α^{s+1} = −(2s−1) ρ'' β_α^s + ρ' ∂β_α^s + ρ' β_{α−1}^s`.
pub fn transverse_operator(rho: &MultiPoly, var: usize, order: u32) -> Result<TransverseOperator> {
    rho.check_var(var)?;
    if order == 0 {
        return Err(Error::Unsupported("transverse operators start at order 1".into()));
    }
    let d1 = rho.partial_derivative(var)?;
    if d1.is_zero() {
        return Err(Error::FactorFreeOfVariable { index: 1, var: var + 1 });
    }
    let d2 = d1.partial_derivative(var)?;
    let n = rho.nvars();
    let mut betas = vec![MultiPoly::one(n)];
    for s in 1..order {
        let curv = d2.scale(&GaussianRational::from(-(2 * i64::from(s) - 1)));
        let mut next = Vec::with_capacity(betas.len() + 1);
        for a in 0..=betas.len() {
            let mut b = MultiPoly::zero(n);
            if let Some(cur) = betas.get(a) {
                b = b.add(&curv.mul(cur)).add(&d1.mul(&cur.partial_derivative(var)?));
            }
            if a > 0 {
                b = b.add(&d1.mul(&betas[a - 1]));
            }
            next.push(b);
        }
        betas = next;
    }
    Ok(TransverseOperator { var, order, betas: betas.into_iter().map(RatFn::from_poly).collect() })
}

/// One `(k, μ, l)` entry: the coefficient `g_l^μ` and the current-side
/// operator `Σ_α (−1)^α β_α^{μ−1−l} ∂^α/∂z_var^α` (empty for the identity).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorEntry {
    pub factor: usize,
    pub order: u32,
    pub l: u32,
    pub binomial: u64,
    pub g: RatFn,
    pub op: Vec<RatFn>,
}

impl OperatorEntry {
    pub fn is_identity(&self) -> bool {
        self.op.is_empty()
    }

    /// Coefficients of the transpose acting on test data: the current-side
    /// signs `(−1)^α` are removed, coefficients stay outside the derivatives.
    pub fn test_side_coefficients(&self) -> Vec<RatFn> {
        self.op
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.neg() } else { c.clone() })
            .collect()
    }

    /// Applies the transposed operator to test data `h`.
    pub fn apply_to_test(&self, var: usize, h: &BumpFunction) -> Result<BumpFunction> {
        apply_transposed(&self.op, var, h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueOperatorData {
    pub var: usize,
    pub entries: Vec<OperatorEntry>,
}

impl ResidueOperatorData {
    pub fn get(&self, factor: usize, order: u32, l: u32) -> Option<&OperatorEntry> {
        self.entries.iter().find(|e| e.factor == factor && e.order == order && e.l == l)
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

/// Tabulates `g_l^μ` and the operators for every factor, pole order `μ ≤ r_k`
/// and `0 ≤ l ≤ μ − 1`.
pub fn residue_operator_data(
    pfd: &PartialFractionDecomp,
    fd: &FactoredDenominator,
) -> Result<ResidueOperatorData> {
    let var = fd.var;
    let mut jobs = Vec::new();
    for e in &pfd.entries {
        for l in 0..e.order {
            jobs.push((e, l));
        }
    }
    let entries = jobs
        .into_par_iter()
        .map(|(e, l)| operator_entry(&fd.factors[e.factor].poly, var, e.factor, e.order, l, &e.coeff))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidueOperatorData { var, entries })
}

/// `(binomial, g_l^μ)` for an arbitrary coefficient `c` in place of the
/// partial-fraction coefficient, so that
/// `Σ_l g_l^μ · T_l(F) = ∂^{μ−1}/∂ρ^{μ−1} ((c/ρ') F)` with `T_l` the
/// test-side operators of [`test_side_operator`].
pub fn residue_coefficient(rho: &MultiPoly, var: usize, order: u32, l: u32, c: &RatFn) -> Result<(u64, RatFn)> {
    if order == 0 || l >= order {
        return Err(Error::Unsupported(format!("no operator entry for order {order}, l = {l}")));
    }
    let d1 = RatFn::from_poly(rho.partial_derivative(var)?);
    if d1.is_zero() {
        return Err(Error::FactorFreeOfVariable { index: 1, var: var + 1 });
    }
    let u = c.div(&d1)?;
    let dl = if l == 0 {
        u.div(&d1)?
    } else {
        let t = transverse_operator(rho, var, l)?;
        let mut acc = RatFn::zero(rho.nvars());
        let mut deriv = u.clone();
        for b in &t.betas {
            deriv = deriv.partial_derivative(var)?;
            acc = acc.add(&b.mul(&deriv));
        }
        acc
    };
    let mu = i32::try_from(order).map_err(|_| Error::Unsupported("pole order too large".into()))?;
    if l + 1 == order {
        Ok((1, d1.pow(-(2 * mu - 3))?.mul(&dl)))
    } else {
        let b = binomial(order - 1, l);
        Ok((b, d1.pow(-(2 * mu - 4))?.mul(&dl).scale(&GaussianRational::from(b as i64))))
    }
}

/// Current-side coefficients `(−1)^α β_α^{μ−1−l}`; empty for `l = μ − 1`.
pub fn current_side_operator(rho: &MultiPoly, var: usize, order: u32, l: u32) -> Result<Vec<RatFn>> {
    if l + 1 >= order {
        return Ok(Vec::new());
    }
    let t = transverse_operator(rho, var, order - 1 - l)?;
    Ok(t.betas.iter().enumerate().map(|(i, b)| if i % 2 == 0 { b.neg() } else { b.clone() }).collect())
}

/// Applies a current-side operator, transposed, to test data `h`.
pub fn apply_transposed(op: &[RatFn], var: usize, h: &BumpFunction) -> Result<BumpFunction> {
    if op.is_empty() {
        return Ok(h.clone());
    }
    let test_side: Vec<RatFn> =
        op.iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.neg() } else { c.clone() }).collect();
    apply_coefficients(&test_side, var, h)
}

/// The `(k, μ, l)` entry for coefficient `c` of `c/ρ^μ`.
pub fn operator_entry(rho: &MultiPoly, var: usize, factor: usize, order: u32, l: u32, c: &RatFn) -> Result<OperatorEntry> {
    let (binomial, g) = residue_coefficient(rho, var, order, l, c)?;
    let op = current_side_operator(rho, var, order, l)?;
    Ok(OperatorEntry { factor, order, l, binomial, g, op })
}
