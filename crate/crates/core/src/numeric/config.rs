use num_complex::Complex64;

use crate::error::{Error, Result};

/// Quadrature parameters shared by every numeric evaluator.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Trapezoid nodes on each circle.
    pub n_theta: usize,
    /// Largest tube/contour radius; `None` picks it from the geometry.
    pub eps0: Option<f64>,
    pub eps_levels: usize,
    /// Largest discriminant cutoff, relative to the largest `|B_j|` on the grid.
    pub delta0: f64,
    pub delta_levels: usize,
    /// Gauss–Legendre nodes in each radial panel of the base grid.
    pub y_radial: usize,
    /// Trapezoid nodes in the angular direction of the base grid.
    pub y_angular: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub richardson_levels: usize,
    /// Relative residual below which an extrapolation counts as converged.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_theta: 128,
            eps0: None,
            eps_levels: 4,
            delta0: 1e-2,
            delta_levels: 6,
            y_radial: 24,
            y_angular: 64,
            newton_tol: 1e-13,
            newton_max_iter: 60,
            richardson_levels: 4,
            tolerance: 1e-5,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.n_theta < 4 {
            return bad("n_theta must be at least 4");
        }
        if self.eps_levels == 0 || self.delta_levels == 0 {
            return bad("schedules need at least one level");
        }
        if self.richardson_levels == 0 || self.richardson_levels > self.eps_levels {
            return bad("richardson_levels must lie in 1..=eps_levels");
        }
        if let Some(e) = self.eps0 {
            if !(e > 0.0 && e.is_finite()) {
                return bad("eps0 must be positive");
            }
        }
        if !(self.delta0 > 0.0 && self.delta0.is_finite()) {
            return bad("delta0 must be positive");
        }
        if self.y_radial == 0 || self.y_angular == 0 {
            return bad("base grid must be nonempty");
        }
        if !(self.newton_tol > 0.0) || self.newton_max_iter == 0 {
            return bad("Newton tolerance and iteration cap must be positive");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        Ok(())
    }

    /// `ε_m = 2^{−m} ε₀`.
    pub fn eps_schedule(&self, eps0: f64) -> Vec<f64> {
        (0..self.eps_levels).map(|m| eps0 * 0.5f64.powi(m as i32)).collect()
    }

    /// `δ_m = 2^{−m} δ₀ · scale`.
    pub fn delta_schedule(&self, scale: f64) -> Vec<f64> {
        (0..self.delta_levels).map(|m| self.delta0 * scale * 0.5f64.powi(m as i32)).collect()
    }
}

/// Outcome of an extrapolated limit.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitResult {
    pub value: Complex64,
    /// `(parameter, value)` per level, in schedule order.
    pub table: Vec<(f64, Complex64)>,
    /// Difference of the last two extrapolants relative to
    /// `max(|value|, 10⁻³·mass)`.
    pub residual: f64,
    pub converged: bool,
    /// Sum of absolute contributions; the natural size against which
    /// cancellation is judged.
    pub mass: f64,
    /// `(δ, value)` over the discriminant cutoffs, ending with `δ = 0`;
    /// empty when there is no base to cut.
    pub delta_table: Vec<(f64, Complex64)>,
    pub delta_residual: f64,
    pub notes: Vec<String>,
}

impl LimitResult {
    pub fn exact(value: Complex64, mass: f64) -> Self {
        Self {
            value,
            table: Vec::new(),
            residual: 0.0,
            converged: true,
            mass,
            delta_table: Vec::new(),
            delta_residual: 0.0,
            notes: Vec::new(),
        }
    }
}

/// Richardson extrapolation of values at `h_m = h_0 2^{−m}` assuming an error
/// expansion in `h^{power}, h^{2·power}, …`. Uses the last `levels` entries.
pub fn richardson(table: &[(f64, Complex64)], power: u32, levels: usize, tol: f64, mass: f64) -> LimitResult {
    let start = table.len().saturating_sub(levels.max(1));
    let vals: Vec<Complex64> = table[start..].iter().map(|t| t.1).collect();
    let factor = 2f64.powi(power as i32);
    let mut diag = vec![vals[0]];
    let mut row = vals[..1].to_vec();
    for (i, &v) in vals.iter().enumerate().skip(1) {
        let mut next = vec![v];
        for k in 1..=i {
            let f = factor.powi(k as i32);
            let prev = next[k - 1];
            next.push(prev + (prev - row[k - 1]) / (f - 1.0));
        }
        diag.push(next[i]);
        row = next;
    }
    let value = *diag.last().expect("nonempty table");
    let residual = if diag.len() >= 2 {
        let scale = value.norm().max(1e-3 * mass).max(f64::MIN_POSITIVE);
        (value - diag[diag.len() - 2]).norm() / scale
    } else {
        0.0
    };
    LimitResult {
        value,
        table: table.to_vec(),
        residual,
        converged: residual <= tol,
        mass,
        delta_table: Vec::new(),
        delta_residual: 0.0,
        notes: Vec::new(),
    }
}
