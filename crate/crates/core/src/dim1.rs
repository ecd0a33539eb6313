//! Residues of meromorphic 1-forms `g(z) dz` in one variable: principal
//! parts, the residue current as a sum of derivatives of point masses, the
//! principal value, and a contour-integral reference evaluation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{squarefree_decompose, GaussianRational, MultiPoly, RatFn};
use crate::error::{Error, Result};
use crate::forms::{BumpFunction, TestForm};
use crate::numeric::quad::{base_grid, gauss_legendre, pairwise_sum, pairwise_sum_f64};
use crate::numeric::{poly_roots, richardson, LimitResult, QuadratureConfig};

/// Principal part `Σ_{l=1}^k a_{−l} (z − pole)^{−l}` at one pole.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPart {
    pub pole: GaussianRational,
    /// `coeffs[l − 1] = a_{−l}`.
    pub coeffs: Vec<GaussianRational>,
}

impl LaurentPart {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn to_ratfn(&self) -> RatFn {
        let shift = MultiPoly::var(1, 0).sub(&MultiPoly::constant(1, self.pole.clone()));
        self.coeffs.iter().enumerate().fold(RatFn::zero(1), |acc, (i, a)| {
            let den = shift.pow(i as u32 + 1);
            acc.add(&RatFn::new(MultiPoly::constant(1, a.clone()), den).expect("nonzero"))
        })
    }
}

/// `Σ_j b_j ∂^j/∂z^j δ_pole`, evaluated as `φ ↦ Σ_j b_j ∂^jφ/∂z^j(pole)`.
/// `coeffs[j] = b_j / (2πi)`; the factor `2πi` is kept symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaOperatorCurrent {
    pub pole: GaussianRational,
    pub coeffs: Vec<GaussianRational>,
    pub two_pi_i: bool,
}

impl DeltaOperatorCurrent {
    pub fn coefficient(&self, j: usize) -> Complex64 {
        let unit = if self.two_pi_i { Complex64::new(0.0, 2.0 * std::f64::consts::PI) } else { 1.0.into() };
        self.coeffs.get(j).map_or(Complex64::new(0.0, 0.0), |c| c.to_complex() * unit)
    }
}

fn check_univariate(g: &RatFn) -> Result<()> {
    if g.nvars() != 1 {
        return Err(Error::NvarsMismatch { left: 1, right: g.nvars() });
    }
    Ok(())
}

fn linear(a: &GaussianRational) -> MultiPoly {
    MultiPoly::var(1, 0).sub(&MultiPoly::constant(1, a.clone()))
}

/// Exact roots of a squarefree univariate polynomial: numerical candidates
/// rounded to Gaussian rationals and confirmed by exact division.
fn exact_roots(p: &MultiPoly) -> Result<Vec<GaussianRational>> {
    let coeffs: Vec<Complex64> = p.coefficients_in(0).iter().map(|c| c.constant_term().to_complex()).collect();
    let approx = poly_roots(&coeffs, 1e-15, 100)?;
    let mut rest = p.clone();
    let mut out = Vec::new();
    for z in approx {
        let found = [1_000, 1_000_000, 1_000_000_000].iter().find_map(|&max_den| {
            let cand = GaussianRational::approximate(z, max_den);
            rest.div_exact(&linear(&cand)).map(|q| (cand, q))
        });
        if let Some((cand, q)) = found {
            out.push(cand);
            rest = q;
        }
    }
    if rest.degree_in(0).unwrap_or(0) > 0 {
        return Err(Error::IrrationalPole { degree: rest.degree_in(0).unwrap_or(0) as usize });
    }
    Ok(out)
}

/// Taylor coefficients `0..k` of `num/den` at `a`.
fn taylor(num: &MultiPoly, den: &MultiPoly, a: &GaussianRational, k: usize) -> Vec<GaussianRational> {
    let shift = MultiPoly::var(1, 0).add(&MultiPoly::constant(1, a.clone()));
    let coeffs = |p: &MultiPoly| -> Vec<GaussianRational> {
        let c = p.substitute(0, &shift).coefficients_in(0);
        (0..k).map(|i| c.get(i).map_or_else(GaussianRational::zero, MultiPoly::constant_term)).collect()
    };
    let n = coeffs(num);
    let d = coeffs(den);
    let inv0 = d[0].inv().expect("denominator is nonzero at the pole");
    let mut out: Vec<GaussianRational> = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = n[i].clone();
        for j in 1..=i {
            acc -= &(&d[j] * &out[i - j]);
        }
        out.push(&acc * &inv0);
    }
    out
}

/// Principal parts of `g` at all of its poles.
pub fn laurent_parts(g: &RatFn) -> Result<Vec<LaurentPart>> {
    check_univariate(g)?;
    let den = g.den();
    if den.is_constant() {
        return Ok(Vec::new());
    }
    let mut parts = Vec::new();
    for (factor, mult) in squarefree_decompose(den, 0)? {
        for pole in exact_roots(&factor)? {
            let k = mult as usize;
            let rest = den.div_exact(&linear(&pole).pow(mult)).expect("pole of the stated multiplicity");
            let t = taylor(g.num(), &rest, &pole, k);
            // a_{−(k−i)} is the i-th Taylor coefficient
            let coeffs = (0..k).map(|l| t[k - 1 - l].clone()).collect();
            parts.push(LaurentPart { pole, coeffs });
        }
    }
    parts.sort_by(|a, b| {
        let key = |p: &GaussianRational| (p.to_complex().re, p.to_complex().im);
        key(&a.pole).partial_cmp(&key(&b.pole)).expect("finite poles")
    });
    Ok(parts)
}

/// `b_j = (2πi/j!) a_{−(j+1)}` for each pole.
pub fn residue_current_1d(parts: &[LaurentPart]) -> Vec<DeltaOperatorCurrent> {
    parts
        .iter()
        .map(|p| {
            let mut fact = GaussianRational::one();
            let coeffs = p
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    if j > 0 {
                        fact = &fact * &GaussianRational::from(j as i64);
                    }
                    a / &fact
                })
                .collect();
            DeltaOperatorCurrent { pole: p.pole.clone(), coeffs, two_pi_i: true }
        })
        .collect()
}

/// `Σ_j b_j ∂^jφ/∂z^j(pole)` with exact derivatives.
pub fn apply_delta_current(cur: &DeltaOperatorCurrent, phi: &BumpFunction) -> Result<Complex64> {
    if phi.nvars() != 1 {
        return Err(Error::NvarsMismatch { left: 1, right: phi.nvars() });
    }
    let at = [cur.pole.to_complex()];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut d = phi.clone();
    for j in 0..cur.coeffs.len() {
        if j > 0 {
            d = d.derivative_n(0, 1)?;
        }
        acc += cur.coefficient(j) * d.eval(&at);
    }
    Ok(acc)
}

/// Pole locations from the squarefree part of the denominator, numerically.
/// Distinct numeric poles of `g` with their multiplicities.
fn numeric_poles(g: &RatFn) -> Result<Vec<(Complex64, u32)>> {
    let mut out = Vec::new();
    if g.den().is_constant() {
        return Ok(out);
    }
    for (f, m) in squarefree_decompose(g.den(), 0)? {
        let c: Vec<Complex64> = f.coefficients_in(0).iter().map(|c| c.constant_term().to_complex()).collect();
        out.extend(poly_roots(&c, 1e-15, 100)?.into_iter().map(|r| (r, m)));
    }
    Ok(out)
}

fn first_radius(cfg: &QuadratureConfig, support_radius: f64, poles: &[Complex64]) -> f64 {
    let mut eps0 = cfg.eps0.unwrap_or(support_radius / 4.0);
    for a in 0..poles.len() {
        for b in a + 1..poles.len() {
            eps0 = eps0.min((poles[a] - poles[b]).norm() / 4.0);
        }
    }
    eps0
}

/// `lim_{ε→0} Σ_poles ∮_{|z−a|=ε} g φ dz`, by the trapezoid rule on each
/// circle and Richardson extrapolation in `ε²`.
pub fn contour_residue_numeric(g: &RatFn, phi: &BumpFunction, cfg: &QuadratureConfig) -> Result<LimitResult> {
    check_univariate(g)?;
    cfg.validate()?;
    if phi.nvars() != 1 {
        return Err(Error::NvarsMismatch { left: 1, right: phi.nvars() });
    }
    let poles = numeric_poles(g)?;
    if poles.is_empty() {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    }
    let num = RatFn::from_poly(g.num().clone()).to_numeric();
    let lead = g.den().coefficients_in(0).last().expect("nonconstant denominator").constant_term().to_complex();
    // the denominator is evaluated in factored form so that the distance to
    // the enclosed pole is the exact offset on the circle
    let g_near = |p: usize, u: Complex64| -> Complex64 {
        let z = poles[p].0 + u;
        let den = poles.iter().enumerate().fold(lead, |acc, (q, &(r, m))| {
            let d = if q == p { u } else { z - r };
            acc * d.powu(m)
        });
        num.eval(&[z]) / den
    };
    let pn = phi.to_numeric();
    let centres: Vec<Complex64> = poles.iter().map(|p| p.0).collect();
    let eps0 = first_radius(cfg, phi.support().radius(), &centres);
    let n = cfg.n_theta;
    let mut mass = 0.0f64;
    let mut table = Vec::new();
    for eps in cfg.eps_schedule(eps0) {
        let terms: Vec<(Complex64, f64)> = (0..poles.len() * n)
            .into_par_iter()
            .map(|idx| {
                let (p, k) = (idx / n, idx % n);
                let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                let u = e * eps;
                let dz = Complex64::new(0.0, eps) * e * (2.0 * std::f64::consts::PI / n as f64);
                let t = g_near(p, u) * pn.eval(&[poles[p].0 + u]) * dz;
                (t, t.norm())
            })
            .collect();
        let vals: Vec<Complex64> = terms.iter().map(|t| t.0).collect();
        let abs: Vec<f64> = terms.iter().map(|t| t.1).collect();
        mass = mass.max(pairwise_sum_f64(&abs));
        table.push((eps, pairwise_sum(&vals)));
    }
    Ok(richardson(&table, 2, cfg.richardson_levels, cfg.tolerance, mass))
}

/// `lim_{ε→0} ∫_{|z−a|≥ε ∀a} g dz ∧ ψ` for a `(0,1)` test form `ψ`.
///
/// The polynomial part of `g` is integrated over the support disc; each
/// principal part in polar coordinates about its pole, where the angular
/// average is smooth in the radius.
pub fn vp_1d(g: &RatFn, psi: &TestForm, cfg: &QuadratureConfig) -> Result<LimitResult> {
    check_univariate(g)?;
    cfg.validate()?;
    if psi.nvars() != 1 {
        return Err(Error::NvarsMismatch { left: 1, right: psi.nvars() });
    }
    if psi.degree() != 1 || psi.contains_differential(0) {
        return Err(Error::WrongBidegree { expected: 1, found: 0 });
    }
    let Some(b) = psi.get(&[1]) else {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    };
    let support = b.support();
    let radius = support.radius();
    let center = support.center_numeric()[0];
    let bn = b.to_numeric();
    let parts = laurent_parts(g)?;
    let principal = parts.iter().fold(RatFn::zero(1), |acc, p| acc.add(&p.to_ratfn()));
    let poly = g.sub(&principal);
    if !poly.is_polynomial() {
        return Err(Error::Unsupported("principal parts do not exhaust the poles".into()));
    }
    // dz ∧ dz̄ = −2i dA
    let area_form = Complex64::new(0.0, -2.0);

    let polyn = poly.to_numeric();
    let grid = base_grid(&[center], radius, cfg.y_radial.max(32), cfg.y_angular.max(64));
    let smooth: Vec<Complex64> = grid
        .par_iter()
        .map(|node| polyn.eval(&node.point) * bn.eval(&node.point) * node.weight * area_form)
        .collect();
    let smooth_mass: f64 = pairwise_sum_f64(&smooth.iter().map(|t| t.norm()).collect::<Vec<_>>());
    let smooth = pairwise_sum(&smooth);

    let poles: Vec<Complex64> = parts.iter().map(|p| p.pole.to_complex()).collect();
    let eps0 = first_radius(cfg, radius, &poles);
    let radial = gauss_legendre(24);
    let panels = 8;
    let n = cfg.n_theta;
    let mut table = Vec::new();
    let mut mass = smooth_mass;
    for eps in cfg.eps_schedule(eps0) {
        let mut vals = vec![smooth];
        let mut abs = vec![smooth_mass];
        for part in &parts {
            let a = part.pole.to_complex();
            let outer = (a - center).norm() + radius;
            if outer <= eps {
                continue;
            }
            let coeffs: Vec<Complex64> = part.coeffs.iter().map(GaussianRational::to_complex).collect();
            let width = (outer - eps) / panels as f64;
            let terms: Vec<Complex64> = (0..panels * radial.len() * n)
                .into_par_iter()
                .map(|idx| {
                    let (panel, rest) = (idx / (radial.len() * n), idx % (radial.len() * n));
                    let (x, w) = radial[rest / n];
                    let k = rest % n;
                    let r = eps + width * (panel as f64 + 0.5 * (x + 1.0));
                    let dr = width * 0.5 * w;
                    let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64);
                    let u = e * r;
                    let mut inv = Complex64::new(1.0, 0.0);
                    let mut pp = Complex64::new(0.0, 0.0);
                    for c in &coeffs {
                        inv /= u;
                        pp += c * inv;
                    }
                    pp * bn.eval(&[a + u]) * (r * dr * 2.0 * std::f64::consts::PI / n as f64) * area_form
                })
                .collect();
            abs.push(pairwise_sum_f64(&terms.iter().map(|t| t.norm()).collect::<Vec<_>>()));
            vals.push(pairwise_sum(&terms));
        }
        mass = mass.max(abs.iter().sum());
        table.push((eps, pairwise_sum(&vals)));
    }
    Ok(richardson(&table, 2, cfg.richardson_levels, cfg.tolerance, mass))
}
