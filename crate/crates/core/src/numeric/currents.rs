//! Numerical pairings of residue currents with test forms (`n ≤ 2`): principal
//! values over components, tube integrals, the operator formula and the
//! reduced-residue representation.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use super::config::{richardson, LimitResult, QuadratureConfig};
use super::geometry::{attach_delta_table, cutoff_polynomial, delta_sweep, scalar_result, Chart, NodeCtx};
use super::quad::pairwise_sum;
use super::roots::{horner, FiberPoly};
use crate::algebra::{discriminant, MultiPoly, NumRatFn};
use crate::error::{Error, Result};
use crate::forms::basis::merge;
use crate::forms::{BumpFunction, Coefficient, Key, MeroForm, NumBump, Support, TestForm};
use crate::leray::{numerator_form, HypersurfaceForm, ReducedResidue};
use crate::weierstrass::{apply_transposed, partial_fractions, prepare_denominator, residue_operator_data};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Pointwise evaluation of `a ∧ b` for a meromorphic and a test form, term
/// pair by term pair.
struct Pairing {
    left: Vec<NumRatFn>,
    right: Vec<NumBump>,
    pairs: Vec<(usize, usize, Key, f64)>,
}

impl Pairing {
    fn new(a: &MeroForm, b: &TestForm) -> Self {
        let left: Vec<_> = a.terms().collect();
        let right: Vec<_> = b.terms().collect();
        let mut pairs = Vec::new();
        for (i, (ka, _)) in left.iter().enumerate() {
            for (j, (kb, _)) in right.iter().enumerate() {
                if let Some((key, odd)) = merge(ka, kb) {
                    pairs.push((i, j, key, if odd { -1.0 } else { 1.0 }));
                }
            }
        }
        Self {
            left: left.iter().map(|(_, c)| c.to_numeric()).collect(),
            right: right.iter().map(|(_, c)| c.to_numeric()).collect(),
            pairs,
        }
    }

    fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Σ sign · a_i(z) · b_j(z) · weight(key)` and its absolute size.
    fn eval(&self, z: &[Complex64], weight: impl Fn(&[usize]) -> Complex64) -> (Complex64, f64) {
        let rv: Vec<Complex64> = self.right.iter().map(|b| b.eval(z)).collect();
        if rv.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let lv: Vec<Complex64> = self.left.iter().map(|a| a.eval(z)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (i, j, key, sign) in &self.pairs {
            let w = weight(key);
            if w == Complex64::new(0.0, 0.0) || rv[*j] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let t = lv[*i] * rv[*j] * w * *sign;
            acc += t;
            abs += t.norm();
        }
        (acc, abs)
    }
}

/// Coefficient of `dy ∧ dȳ` (or of `1` for `n = 1`) in the pullback of a
/// basis form to `Y`, where `dz_var = λ dy`.
fn y_weight(key: &[usize], n: usize, var: usize, lambda: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if n == 1 {
        return if key.is_empty() { one } else { Complex64::new(0.0, 0.0) };
    }
    match key {
        [h, a] if *h < 2 && *a >= 2 => {
            let fh = if *h == var { lambda } else { one };
            let fa = if *a - 2 == var { lambda.conj() } else { one };
            fh * fa
        }
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Coefficient of `dθ ∧ dy ∧ dȳ` (or `dθ`) in the pullback of a basis
/// `(2n − 1)`-form to the tube, with `dz_var = a dθ + λ dy`.
fn tube_weight(key: &[usize], n: usize, var: usize, a: Complex64, lambda: Complex64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if n == 1 {
        return match key {
            [0] => a,
            [1] => a.conj(),
            _ => zero,
        };
    }
    if key.len() != 3 {
        return zero;
    }
    let row = |d: usize| -> [Complex64; 3] {
        match (d % 2 == var, d < 2) {
            (true, true) => [a, lambda, zero],
            (false, true) => [zero, one, zero],
            (true, false) => [a.conj(), zero, lambda.conj()],
            (false, false) => [zero, zero, one],
        }
    };
    let m = [row(key[0]), row(key[1]), row(key[2])];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Weight turning a top-holomorphic `(n, n − 1)` basis form into the
/// coefficient `H` of `dρ ∧ dy ∧ dȳ` (without the `1/ρ'`), for chart `var`.
fn transverse_weight(key: &[usize], n: usize, var: usize, lambda: Complex64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if n == 1 {
        return if key == [0] { Complex64::new(1.0, 0.0) } else { zero };
    }
    // dz_1 ∧ dz_2 = s dρ ∧ dy / ρ'
    let s = if var == 0 { 1.0 } else { -1.0 };
    match key {
        [0, 1, a] if *a == 2 + (1 - var) => Complex64::new(s, 0.0),
        [0, 1, a] if *a == 2 + var => lambda.conj() * s,
        _ => zero,
    }
}

fn support_of(phi: &TestForm) -> Option<Support> {
    phi.terms().find(|(_, c)| !c.is_zero()).map(|(_, c)| c.support().clone())
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("numeric evaluation needs 1 or 2 variables, got {n}")));
    }
    Ok(())
}

fn require_converged(what: &str, r: LimitResult) -> Result<LimitResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NonConvergent { what: what.into(), residual: r.residual })
    }
}

/// `Σ c_i · r_i` with tables added level by level.
fn combine(parts: Vec<(Complex64, LimitResult)>) -> LimitResult {
    let mut out = LimitResult::exact(Complex64::new(0.0, 0.0), 0.0);
    let same_len = parts.windows(2).all(|w| w[0].1.delta_table.len() == w[1].1.delta_table.len());
    if same_len {
        if let Some((_, first)) = parts.first() {
            out.delta_table = first.delta_table.iter().map(|(d, _)| (*d, Complex64::new(0.0, 0.0))).collect();
        }
    }
    for (c, r) in parts {
        out.value += c * r.value;
        out.mass += c.norm() * r.mass;
        out.residual = out.residual.max(r.residual);
        out.delta_residual = out.delta_residual.max(r.delta_residual);
        out.converged &= r.converged;
        if same_len {
            for (slot, (_, v)) in out.delta_table.iter_mut().zip(&r.delta_table) {
                slot.1 += c * v;
            }
        }
        out.notes.extend(r.notes);
    }
    out
}

fn check_pairing_degree(a: usize, b: usize, want: usize) -> Result<()> {
    if a + b != want {
        return Err(Error::DegreeMismatch(format!("pairing a {a}-form with a {b}-form needs total degree {want}")));
    }
    Ok(())
}

/// `∫_Y h ∧ ψ` over the component `{h.rho = 0}` in the chart of `h.var`,
/// with the base cut at `|cutoff| ≥ δ` and the limit `δ → 0` reported.
pub fn vp_with_cutoff(h: &HypersurfaceForm, psi: &TestForm, cutoff: &MultiPoly, cfg: &QuadratureConfig) -> Result<LimitResult> {
    cfg.validate()?;
    let n = h.rho.nvars();
    check_dimension(n)?;
    check_pairing_degree(h.form.degree(), psi.degree(), 2 * n - 2)?;
    let Some(support) = support_of(psi) else {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    };
    let chart = Chart::new(&h.rho, h.var, Some(cutoff), &support)?;
    let pairing = Pairing::new(&h.form, psi);
    if pairing.is_empty() {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    }
    let nodes = chart.integrate(cfg, |ctx| {
        let mut vals = Vec::with_capacity(ctx.roots.len());
        let mut abs = 0.0;
        for r in &ctx.roots {
            let lambda = r.lambda();
            let (v, a) = pairing.eval(&r.z, |k| y_weight(k, n, h.var, lambda));
            vals.push(v);
            abs += a;
        }
        Ok((vec![pairwise_sum(&vals)], abs))
    })?;
    require_converged("principal value over a component", scalar_result(&nodes, cfg))
}

/// `∫_Y h ∧ ψ` with the cutoff at the discriminant of `h.rho`.
pub fn vp_on_component(h: &HypersurfaceForm, psi: &TestForm, cfg: &QuadratureConfig) -> Result<LimitResult> {
    let b = discriminant(&h.rho, h.var)?;
    vp_with_cutoff(h, psi, &b, cfg)
}

/// A traced tube circle: points `w(θ_k)` with `ρ(w, y) = ε e^{iθ_k}` and
/// `∂ρ/∂w` there.
fn trace_circle(
    coeffs: &[Complex64],
    w0: Complex64,
    d0: Complex64,
    eps: f64,
    reach: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<(Complex64, Complex64)>> {
    let fail = |reason: String| Error::NewtonContinuationFailure { eps, reason };
    let n = cfg.n_theta;
    let dtheta = 2.0 * PI / n as f64;
    let mut out = Vec::with_capacity(n);
    let mut w = w0 + eps / d0;
    for k in 0..n {
        let target = Complex64::from_polar(eps, dtheta * k as f64);
        let mut done = false;
        let mut dp = d0;
        for _ in 0..cfg.newton_max_iter {
            let (p, d) = horner(coeffs, w);
            dp = d;
            let step = (p - target) / d;
            if !step.is_finite() {
                break;
            }
            w -= step;
            if step.norm() <= cfg.newton_tol * (1.0 + w.norm()) {
                done = true;
                dp = horner(coeffs, w).1;
                break;
            }
        }
        if !done {
            return Err(fail(format!("Newton did not converge at θ = {:.4}", dtheta * k as f64)));
        }
        if (w - w0).norm() > reach {
            return Err(fail("the traced circle left the neighbourhood of its root".into()));
        }
        if (dp - d0).norm() > 0.5 * d0.norm() {
            return Err(fail("the traced circle approaches a critical point".into()));
        }
        out.push((w, dp));
        w += Complex64::new(0.0, 1.0) * target / dp * dtheta;
    }
    if (w - out[0].0).norm() > 0.25 * (out[0].0 - w0).norm() {
        return Err(fail("the traced circle does not close".into()));
    }
    Ok(out)
}

/// The tube integral `lim_{δ→0} lim_{ε→0} ∫_{|ρ_k| = ε} ω ∧ φ` around the
/// component `k` of `factors`, read in the chart `z_var`. The tube is
/// oriented as the boundary of `{|ρ_k| < ε}`.
pub fn tube_integral(
    omega: &MeroForm,
    phi: &TestForm,
    factors: &[(MultiPoly, u32)],
    k: usize,
    var: usize,
    cfg: &QuadratureConfig,
) -> Result<LimitResult> {
    cfg.validate()?;
    let n = omega.nvars();
    check_dimension(n)?;
    check_pairing_degree(omega.degree(), phi.degree(), 2 * n - 1)?;
    let (rho, _) = factors.get(k).ok_or(Error::VariableOutOfRange { var: k + 1, nvars: factors.len() })?;
    let Some(support) = support_of(phi) else {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    };
    let cutoff = cutoff_polynomial(factors, var)?;
    let chart = Chart::new(rho, var, Some(&cutoff), &support)?;
    let others: Vec<FiberPoly> = factors
        .iter()
        .enumerate()
        .filter(|(i, (p, _))| *i != k && !p.is_free_of(var))
        .map(|(_, (p, _))| FiberPoly::new(p, var))
        .collect();
    let pairing = Pairing::new(omega, phi);
    if pairing.is_empty() {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    }
    let levels = cfg.eps_levels;
    let shrinks = AtomicUsize::new(0);
    let dtheta = 2.0 * PI / cfg.n_theta as f64;

    let node_fn = |ctx: &NodeCtx<'_>| -> Result<(Vec<Complex64>, f64)> {
        let coeffs = chart.fiber.coeffs_at(ctx.y);
        let mut poles = ctx.all_roots.clone();
        for o in &others {
            if let Ok(fr) = o.roots(ctx.y, cfg) {
                poles.extend(fr.roots);
            }
        }
        let mut vals = vec![Complex64::new(0.0, 0.0); levels];
        let mut abs = 0.0;
        for r in &ctx.roots {
            let sep = poles.iter().map(|p| (p - r.w).norm()).filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min);
            let reach = (sep / 2.0).min(chart.radius);
            // keeps the critical values of ρ(·, y) outside the disc |ρ| < ε
            let auto = r.rho_w.norm() * sep.min(chart.radius) / 16.0;
            let eps0 = cfg.eps0.unwrap_or(auto);
            let run = |eps0: f64| -> Result<Vec<(Complex64, f64)>> {
                cfg.eps_schedule(eps0)
                    .into_iter()
                    .map(|eps| {
                        let circle = trace_circle(&coeffs, r.w, r.rho_w, eps, reach, cfg)?;
                        let mut terms = Vec::with_capacity(circle.len());
                        let mut a_sum = 0.0;
                        for (i, (w, dp)) in circle.iter().enumerate() {
                            let z = chart.fiber.point(*w, ctx.y);
                            let (_, rho_y) = chart.derivatives(&z);
                            let target = Complex64::from_polar(eps, dtheta * i as f64);
                            let a = Complex64::new(0.0, 1.0) * target / dp;
                            let lambda = -rho_y / dp;
                            let (v, av) = pairing.eval(&z, |key| tube_weight(key, n, var, a, lambda));
                            terms.push(v * dtheta);
                            a_sum += av * dtheta;
                        }
                        Ok((pairwise_sum(&terms), a_sum))
                    })
                    .collect()
            };
            let per_level = match run(eps0) {
                Ok(v) => v,
                Err(Error::NewtonContinuationFailure { .. }) => {
                    shrinks.fetch_add(1, Ordering::Relaxed);
                    run(eps0.min(auto) / 4.0)?
                }
                Err(e) => return Err(e),
            };
            for (slot, (v, _)) in vals.iter_mut().zip(&per_level) {
                *slot += v;
            }
            abs += per_level[0].1;
        }
        Ok((vals, abs))
    };
    let nodes = chart.integrate(cfg, node_fn)?;
    let sweep = delta_sweep(&nodes, levels, cfg);
    let schedule = cfg.eps_schedule(1.0);
    let mut deltas_vals = Vec::with_capacity(sweep.deltas.len());
    let mut last = None;
    for sums in &sweep.sums {
        let table: Vec<(f64, Complex64)> = schedule.iter().copied().zip(sums.iter().copied()).collect();
        let r = richardson(&table, 2, cfg.richardson_levels, cfg.tolerance, sweep.mass);
        deltas_vals.push(r.value);
        last = Some(r);
    }
    let mut inner = last.expect("δ = 0 level");
    let shrunk = shrinks.load(Ordering::Relaxed);
    if shrunk > 0 {
        inner.notes.push(format!("tube radius shrunk automatically at {shrunk} fibre roots"));
    }
    let out = attach_delta_table(inner, &sweep.deltas, &deltas_vals);
    require_converged("tube integral", out)
}

/// First chart in which factor `k` alone is a valid denominator.
pub fn component_chart(factors: &[(MultiPoly, u32)], k: usize) -> Result<usize> {
    let (rho, r) = factors.get(k).ok_or(Error::VariableOutOfRange { var: k + 1, nvars: factors.len() })?;
    let mut first_err = None;
    for var in 0..rho.nvars() {
        match prepare_denominator(&[(rho.clone(), *r)], var) {
            Ok(_) => return Ok(var),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or(Error::InvalidChart { var: 1 }))
}

/// `Res[ω](φ)` as the sum of tube integrals over all components, each in
/// its first valid chart.
pub fn tube_residue(omega: &MeroForm, factors: &[(MultiPoly, u32)], phi: &TestForm, cfg: &QuadratureConfig) -> Result<LimitResult> {
    let mut parts = Vec::with_capacity(factors.len());
    for k in 0..factors.len() {
        let var = component_chart(factors, k)?;
        parts.push((Complex64::new(1.0, 0.0), tube_integral(omega, phi, factors, k, var, cfg)?));
    }
    Ok(combine(parts))
}

/// Embeds a polynomial in `z` into the ring of `(z, z̄)`.
fn holomorphic_embedding(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars();
    p.embed(2 * n, &(0..n).collect::<Vec<_>>())
}

/// `F` with `α ∧ φ_j = F · dz_1 ∧ … ∧ dz_n ∧ (⋀_{l ≠ j} dz̄_l)`.
fn top_coefficient(alpha: &MeroForm, phi_j: &TestForm, j: usize, support: &Support) -> Result<BumpFunction> {
    let n = alpha.nvars();
    let want: Key = (0..n).chain((0..n).filter(|&l| l != j).map(|l| n + l)).collect();
    let mut acc = BumpFunction::zero(support.clone());
    for (ka, c) in alpha.terms() {
        for (kb, b) in phi_j.terms() {
            let Some((key, odd)) = merge(ka, kb) else { continue };
            if key != want {
                continue;
            }
            let term = b.mul_poly(&holomorphic_embedding(c.num()))?;
            acc = if odd { acc.add(&term.neg())? } else { acc.add(&term)? };
        }
    }
    Ok(acc)
}

fn check_test_bidegree(phi: &TestForm, p: usize) -> Result<()> {
    let n = phi.nvars();
    for (k, _) in phi.terms() {
        let holo = k.iter().filter(|&&i| i < n).count();
        if holo + p != n {
            return Err(Error::DegreeMismatch(format!(
                "a residue of a {p}-form pairs with ({}, {}) test forms",
                n - p.min(n),
                n - 1
            )));
        }
    }
    Ok(())
}

/// `Res[ω](φ)` by the operator formula: in each chart `z_j` carrying part of
/// `φ`, the partial fractions of `1/f` are paired with the transposed
/// operators applied to the top coefficient of `α ∧ φ_j`, as principal
/// values over the components.
pub fn eval_formula_star(
    omega: &MeroForm,
    factors: &[(MultiPoly, u32)],
    phi: &TestForm,
    cfg: &QuadratureConfig,
) -> Result<LimitResult> {
    cfg.validate()?;
    let n = omega.nvars();
    check_dimension(n)?;
    if phi.nvars() != n {
        return Err(Error::NvarsMismatch { left: n, right: phi.nvars() });
    }
    check_pairing_degree(omega.degree(), phi.degree(), 2 * n - 1)?;
    check_test_bidegree(phi, omega.degree())?;
    let (Some(support), false) = (support_of(phi), factors.is_empty()) else {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    };
    let alpha = numerator_form(omega, factors)?;
    let mut parts = Vec::new();
    for (j, phi_j) in phi.split_phi_j()? {
        let f = top_coefficient(&alpha, &phi_j, j, &support)?;
        if f.is_zero() {
            continue;
        }
        let y = if n == 2 { 1 - j } else { 0 };
        let fd = prepare_denominator(factors, j)?;
        let pfd = partial_fractions(&fd)?;
        let rod = residue_operator_data(&pfd, &fd)?;
        for (k, factor) in fd.factors.iter().enumerate() {
            let terms = rod
                .entries
                .iter()
                .filter(|e| e.factor == k && !e.g.is_zero())
                .map(|e| {
                    let tf = e.apply_to_test(j, &f)?;
                    Ok((TWO_PI_I / factorial(e.order - 1), e.g.to_numeric(), tf.to_numeric()))
                })
                .collect::<Result<Vec<_>>>()?;
            if terms.is_empty() {
                continue;
            }
            let chart = Chart::new(&factor.poly, j, Some(&fd.discriminant), &support)?;
            let key: Key = if n == 2 { vec![0, 1, 2 + y] } else { vec![0] };
            let nodes = chart.integrate(cfg, |ctx| {
                let mut vals = Vec::new();
                let mut abs = 0.0;
                for r in &ctx.roots {
                    let w = transverse_weight(&key, n, j, r.lambda());
                    for (c, g, tf) in &terms {
                        let v = c * g.eval(&r.z) * tf.eval(&r.z) * w;
                        abs += v.norm();
                        vals.push(v);
                    }
                }
                Ok((vec![pairwise_sum(&vals)], abs))
            })?;
            parts.push((Complex64::new(1.0, 0.0), scalar_result(&nodes, cfg)));
        }
    }
    require_converged("operator formula", combine(parts))
}

/// `Res[ω](φ)` from a reduced residue: `2πi Σ_k ∫_{Y_k} A_k ∧ φ` plus the
/// exact correction `(−1)^p Res[R](d′φ)` evaluated from the descriptors.
pub fn eval_reduced_residue(rr: &ReducedResidue, phi: &TestForm, cfg: &QuadratureConfig) -> Result<LimitResult> {
    cfg.validate()?;
    let n = rr.nvars;
    check_dimension(n)?;
    if phi.nvars() != n {
        return Err(Error::NvarsMismatch { left: n, right: phi.nvars() });
    }
    check_pairing_degree(rr.degree, phi.degree(), 2 * n - 1)?;
    check_test_bidegree(phi, rr.degree)?;
    let Some(support) = support_of(phi) else {
        return Ok(LimitResult::exact(Complex64::new(0.0, 0.0), 0.0));
    };
    let factors: Vec<(MultiPoly, u32)> = rr.components.iter().map(|c| (c.leray.rho.clone(), 1)).collect();
    let mut parts = Vec::new();
    for c in &rr.components {
        let h = &c.residue;
        if h.form.is_zero() {
            continue;
        }
        let cutoff = cutoff_polynomial(&factors, h.var)?;
        parts.push((TWO_PI_I, vp_with_cutoff(h, phi, &cutoff, cfg)?));
    }
    if !rr.s_descriptors.is_empty() {
        let psi = phi.d_prime()?;
        let sign = if rr.degree.is_multiple_of(2) { 1.0 } else { -1.0 };
        let psi_terms: Vec<(Key, BumpFunction)> = psi.terms().map(|(k, b)| (k.clone(), b.clone())).collect();
        for d in &rr.s_descriptors {
            let rho = rr.rho(d.component).expect("descriptor component");
            let cutoff = cutoff_polynomial(&factors, d.var)?;
            let chart = Chart::new(rho, d.var, Some(&cutoff), &support)?;
            let mut pairs = Vec::new();
            for (kg, g) in d.gamma.terms() {
                for (kb, b) in &psi_terms {
                    let Some((key, odd)) = merge(kg, kb) else { continue };
                    let tb = apply_transposed(&d.operator, d.var, b)?;
                    pairs.push((key, if odd { -1.0 } else { 1.0 }, g.to_numeric(), tb.to_numeric()));
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let coef = TWO_PI_I * sign / factorial(d.order - 1);
            let nodes = chart.integrate(cfg, |ctx| {
                let mut vals = Vec::new();
                let mut abs = 0.0;
                for r in &ctx.roots {
                    let lambda = r.lambda();
                    for (key, s, g, tb) in &pairs {
                        let w = transverse_weight(key, n, d.var, lambda);
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let v = g.eval(&r.z) * tb.eval(&r.z) * w * *s;
                        abs += v.norm();
                        vals.push(v);
                    }
                }
                Ok((vec![pairwise_sum(&vals)], abs))
            })?;
            parts.push((coef, scalar_result(&nodes, cfg)));
        }
    }
    require_converged("reduced residue", combine(parts))
}

/// Outcome of pairing a residue with exact test forms.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    /// `(Res[ω](dχ), mass)` per trial.
    pub trials: Vec<(Complex64, f64)>,
    pub max_abs: f64,
    /// Largest `|Res[ω](dχ)| / mass`.
    pub max_ratio: f64,
    /// No exact test form of the right bidegree exists.
    pub vacuous: bool,
    pub closed: bool,
}

/// Random polynomial in `(z, z̄)` of total degree at most 2 with small
/// Gaussian-rational coefficients.
fn random_poly(n: usize, rng: &mut impl rand::Rng) -> MultiPoly {
    use crate::algebra::GaussianRational;
    let mut terms = Vec::new();
    let m = 2 * n;
    let mut exps = vec![vec![0u32; m]];
    for a in 0..m {
        let mut e = vec![0; m];
        e[a] = 1;
        exps.push(e);
        for b in a..m {
            let mut e = vec![0; m];
            e[a] += 1;
            e[b] += 1;
            exps.push(e);
        }
    }
    for e in exps {
        if rng.gen_bool(0.5) {
            let re = rng.gen_range(-4i64..=4);
            let im = rng.gen_range(-4i64..=4);
            let c = GaussianRational::new(
                num_rational::BigRational::new(re.into(), 4.into()),
                num_rational::BigRational::new(im.into(), 4.into()),
            );
            terms.push((e, c));
        }
    }
    MultiPoly::from_terms(m, terms)
}

/// Pairs `Res[ω]` with `ψ = dχ` for `trials` random bump-algebra forms `χ`
/// of degree `2n − p − 2` on `support`, through the operator formula. Only
/// the `(n − p, n − 1)` part of `dχ` pairs with the residue.
pub fn exactness_test(
    omega: &MeroForm,
    factors: &[(MultiPoly, u32)],
    support: &Support,
    trials: usize,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<ExactnessReport> {
    use rand::SeedableRng;
    let n = omega.nvars();
    let p = omega.degree();
    let closed = omega.exterior_d()?.is_zero();
    let mut report = ExactnessReport { trials: Vec::new(), max_abs: 0.0, max_ratio: 0.0, vacuous: false, closed };
    if p > n || 2 * n < p + 2 {
        report.vacuous = true;
        return Ok(report);
    }
    let chi_degree = 2 * n - p - 2;
    let keys: Vec<Key> = all_keys(2 * n, chi_degree)
        .into_iter()
        .filter(|k| {
            let holo = k.iter().filter(|&&i| i < n).count();
            let anti = k.len() - holo;
            (holo + p == n && anti + 2 == n) || (holo + p + 1 == n && anti + 1 == n)
        })
        .collect();
    if keys.is_empty() {
        report.vacuous = true;
        return Ok(report);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let terms = keys
            .iter()
            .map(|k| Ok((k.clone(), BumpFunction::standard(support.clone(), random_poly(n, &mut rng))?)))
            .collect::<Result<Vec<_>>>()?;
        let chi = TestForm::from_terms(n, chi_degree, terms)?;
        let psi = chi.exterior_d()?.filter_terms(|k| k.iter().filter(|&&i| i < n).count() + p == n);
        let r = eval_formula_star(omega, factors, &psi, cfg)?;
        let abs = r.value.norm();
        report.max_abs = report.max_abs.max(abs);
        if r.mass > 0.0 {
            report.max_ratio = report.max_ratio.max(abs / r.mass);
        } else if abs > 0.0 {
            report.max_ratio = f64::INFINITY;
        }
        report.trials.push((r.value, r.mass));
    }
    Ok(report)
}

/// Sorted keys of the given degree over `m` differentials.
fn all_keys(m: usize, degree: usize) -> Vec<Key> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Key, out: &mut Vec<Key>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, degree, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tube_weight_of_graph_tube() {
        // ρ = z_1, chart 0: dz_1 ∧ dz_2 ∧ dz̄_2 pulls back to a dθ ∧ dy ∧ dȳ
        let a = Complex64::new(0.3, 0.7);
        let w = tube_weight(&[0, 1, 3], 2, 0, a, Complex64::new(0.0, 0.0));
        assert_eq!(w, a);
        // chart 1 reverses the order of the first two rows
        let w = tube_weight(&[0, 1, 2], 2, 1, a, Complex64::new(0.0, 0.0));
        assert_eq!(w, -a);
    }

    #[test]
    fn keys_by_degree() {
        assert_eq!(all_keys(4, 2).len(), 6);
        assert_eq!(all_keys(2, 0), vec![Vec::<usize>::new()]);
    }
}
