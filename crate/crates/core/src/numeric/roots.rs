use num_complex::Complex64;

use super::config::QuadratureConfig;
use crate::algebra::{MultiPoly, NumPoly};
use crate::error::{Error, Result};

pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn abs_scale(coeffs: &[Complex64], x: Complex64) -> f64 {
    let r = x.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// All roots of `Σ coeffs[i] x^i` by Aberth–Ehrlich iteration followed by
/// Newton polishing.
pub fn poly_roots(coeffs: &[Complex64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lc = c[deg];
    if deg == 1 {
        return Ok(vec![-c[0] / lc]);
    }
    // Cauchy bound for the initial circle
    let bound = 1.0 + c[..deg].iter().map(|x| (x / lc).norm()).fold(0.0, f64::max);
    let radius = bound.min(
        c[..deg]
            .iter()
            .enumerate()
            .map(|(i, x)| (x / lc).norm().powf(1.0 / (deg - i) as f64))
            .fold(0.0, f64::max)
            * 2.0,
    );
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
        .collect();
    let iter_cap = max_iter.max(200) * 4;
    let mut converged = false;
    for _ in 0..iter_cap {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(&c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..deg).filter(|&k| k != i).map(|k| (z[i] - z[k]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < tol {
            converged = true;
            break;
        }
    }
    for w in z.iter_mut() {
        for _ in 0..max_iter {
            let (p, dp) = horner(&c, *w);
            if dp == Complex64::new(0.0, 0.0) {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.norm() > 1e-3 * (1.0 + w.norm()) {
                break;
            }
            *w -= step;
            if step.norm() <= f64::EPSILON * (1.0 + w.norm()) {
                break;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&w| horner(&c, w).0.norm() / abs_scale(&c, w).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if !converged && worst > tol.max(1e-10) {
        return Err(Error::RootFindingDivergence { iterations: iter_cap, residual: worst });
    }
    Ok(z)
}

/// The roots of `ρ(·, y)` over a base point `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberRoots {
    pub base: Vec<Complex64>,
    pub roots: Vec<Complex64>,
    /// `∂ρ/∂z_j` at each root; bounded away from zero certifies multiplicity 1.
    pub derivatives: Vec<Complex64>,
    pub min_separation: f64,
    pub separated: bool,
}

/// Floating-point image of a polynomial viewed as univariate in `z_var`.
#[derive(Clone, Debug)]
pub struct FiberPoly {
    var: usize,
    nvars: usize,
    coeffs: Vec<NumPoly>,
}

impl FiberPoly {
    pub fn new(rho: &MultiPoly, var: usize) -> Self {
        Self {
            var,
            nvars: rho.nvars(),
            coeffs: rho.coefficients_in(var).iter().map(MultiPoly::to_numeric).collect(),
        }
    }

    pub fn var(&self) -> usize {
        self.var
    }

    /// The full point `(y_1, …, w, …, y_{n−1})` with `w` in slot `var`.
    pub fn point(&self, w: Complex64, y: &[Complex64]) -> Vec<Complex64> {
        let mut p = Vec::with_capacity(self.nvars);
        p.extend_from_slice(&y[..self.var]);
        p.push(w);
        p.extend_from_slice(&y[self.var..]);
        p
    }

    /// Coefficients in `w` at the base point `y`.
    pub fn coeffs_at(&self, y: &[Complex64]) -> Vec<Complex64> {
        let p = self.point(Complex64::new(0.0, 0.0), y);
        self.coeffs.iter().map(|c| c.eval(&p)).collect()
    }

    pub fn roots(&self, y: &[Complex64], cfg: &QuadratureConfig) -> Result<FiberRoots> {
        let c = self.coeffs_at(y);
        let lc = *c.last().expect("nonzero polynomial");
        let size = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if lc.norm() <= 1e-14 * size {
            return Err(Error::LeadingCoefficientVanishes);
        }
        let roots = poly_roots(&c, cfg.newton_tol, cfg.newton_max_iter)?;
        let derivatives: Vec<Complex64> = roots.iter().map(|&w| horner(&c, w).1).collect();
        let mut min_sep = f64::INFINITY;
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                min_sep = min_sep.min((roots[a] - roots[b]).norm());
            }
        }
        let scale = 1.0 + roots.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Ok(FiberRoots {
            base: y.to_vec(),
            roots,
            derivatives,
            min_separation: min_sep,
            separated: min_sep > 1e-6 * scale,
        })
    }
}

/// Roots of `ρ(·, y)` in `z_var`, where `y` lists the other coordinates in order.
pub fn fiber_roots(rho: &MultiPoly, var: usize, y: &[Complex64], cfg: &QuadratureConfig) -> Result<FiberRoots> {
    rho.check_var(var)?;
    if y.len() + 1 != rho.nvars() {
        return Err(Error::NvarsMismatch { left: rho.nvars() - 1, right: y.len() });
    }
    if rho.is_free_of(var) {
        return Err(Error::FactorFreeOfVariable { index: 1, var: var + 1 });
    }
    FiberPoly::new(rho, var).roots(y, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_wilkinson_like_polynomial() {
        // (x − 1)(x − 2)…(x − 8)
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for k in 1..=8 {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * k as f64;
            }
            c = next;
        }
        let mut r: Vec<f64> = poly_roots(&c, 1e-14, 60).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (k, x) in r.iter().enumerate() {
            assert!((x - (k + 1) as f64).abs() < 1e-9);
        }
    }
}
