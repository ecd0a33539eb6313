//! Quadrature over a polar component `Y = {ρ = 0}` read as a branched cover
//! of the base coordinates: base grid, fibre roots inside the support, and
//! the discriminant cutoff.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{LimitResult, QuadratureConfig};
use super::quad::{base_grid, gauss_legendre, pairwise_sum, pairwise_sum_f64, BaseNode};
use super::roots::FiberPoly;
use crate::algebra::{discriminant, MultiPoly, NumPoly};
use crate::error::{Error, Result};
use crate::forms::Support;

/// A fibre root with the partial derivatives of `ρ` there.
#[derive(Clone, Debug)]
pub(crate) struct RootPoint {
    pub z: Vec<Complex64>,
    pub w: Complex64,
    /// `∂ρ/∂z_var`
    pub rho_w: Complex64,
    /// `∂ρ/∂y` (zero for `n = 1`)
    pub rho_y: Complex64,
}

impl RootPoint {
    /// `dz_var = λ dy` on `Y`.
    pub fn lambda(&self) -> Complex64 {
        -self.rho_y / self.rho_w
    }
}

/// Everything known about one base node.
pub(crate) struct NodeCtx<'a> {
    pub y: &'a [Complex64],
    /// Roots inside the support ball.
    pub roots: Vec<RootPoint>,
    /// All roots of `ρ(·, y)`, inside the support or not.
    pub all_roots: Vec<Complex64>,
}

/// Per-node output: `|B(y)|`, a vector of weighted values and their
/// absolute size.
pub(crate) struct NodeValue {
    pub cutoff: f64,
    pub vals: Vec<Complex64>,
    pub abs: f64,
}

pub(crate) struct Chart {
    pub n: usize,
    pub var: usize,
    pub fiber: FiberPoly,
    rho_w: NumPoly,
    rho_y: Option<NumPoly>,
    cutoff: Option<NumPoly>,
    pub center: Vec<Complex64>,
    pub radius: f64,
}

impl Chart {
    /// Component `ρ` in the chart `z_var` over the support ball, with the
    /// cutoff `|B(y)| ≥ δ` taken from `cutoff` (a polynomial free of `z_var`).
    pub fn new(rho: &MultiPoly, var: usize, cutoff: Option<&MultiPoly>, support: &Support) -> Result<Self> {
        let n = rho.nvars();
        if n == 0 || n > 2 {
            return Err(Error::Unsupported(format!("numeric evaluation needs 1 or 2 variables, got {n}")));
        }
        rho.check_var(var)?;
        if support.nvars() != n {
            return Err(Error::NvarsMismatch { left: n, right: support.nvars() });
        }
        if rho.is_free_of(var) {
            return Err(Error::FactorFreeOfVariable { index: 1, var: var + 1 });
        }
        let rho_y = if n == 2 { Some(rho.partial_derivative(1 - var)?.to_numeric()) } else { None };
        Ok(Self {
            n,
            var,
            fiber: FiberPoly::new(rho, var),
            rho_w: rho.partial_derivative(var)?.to_numeric(),
            rho_y,
            cutoff: cutoff.filter(|b| !b.is_constant()).map(MultiPoly::to_numeric),
            center: support.center_numeric(),
            radius: support.radius(),
        })
    }

    /// Base coordinates of the support centre.
    pub fn base_center(&self) -> Vec<Complex64> {
        self.center.iter().enumerate().filter(|(i, _)| *i != self.var).map(|(_, c)| *c).collect()
    }

    /// Polar nodes about the projected support centre. Each ray stops where
    /// the last fibre root leaves the support ball, so the integrand
    /// vanishes to infinite order at the end of every ray. The ray is split
    /// into an inner panel, graded towards the centre where branch points
    /// sit, and an outer panel resolving the decay of the cutoff.
    pub fn nodes(&self, cfg: &QuadratureConfig) -> Vec<BaseNode> {
        const SPLIT: f64 = 0.7;
        let center = self.base_center();
        if center.is_empty() {
            return base_grid(&center, self.radius, cfg.y_radial, cfg.y_angular);
        }
        let c = center[0];
        let dtheta = 2.0 * std::f64::consts::PI / cfg.y_angular as f64;
        let rule = gauss_legendre(cfg.y_radial);
        let mut out = Vec::with_capacity(2 * cfg.y_radial * cfg.y_angular);
        for k in 0..cfg.y_angular {
            let dir = Complex64::from_polar(1.0, dtheta * (k as f64 + 0.5));
            let extent = self.ray_extent(c, dir, cfg);
            if extent == 0.0 {
                continue;
            }
            let inner = SPLIT * extent;
            for &(x, w) in &rule {
                let s = 0.5 * (x + 1.0);
                let r = inner * s * s * s;
                let dr = 1.5 * inner * s * s * w;
                out.push(BaseNode { point: vec![c + dir * r], weight: dr * r * dtheta });
            }
            for &(x, w) in &rule {
                let r = inner + (extent - inner) * 0.5 * (x + 1.0);
                let dr = 0.5 * (extent - inner) * w;
                out.push(BaseNode { point: vec![c + dir * r], weight: dr * r * dtheta });
            }
        }
        out
    }

    fn any_root_inside(&self, y: Complex64, cfg: &QuadratureConfig) -> bool {
        match self.fiber.roots(&[y], cfg) {
            Ok(fr) => fr.roots.iter().any(|&w| self.inside(&self.fiber.point(w, &[y]))),
            Err(_) => false,
        }
    }

    /// Largest `r ≤ radius` such that some root over `c + r·dir` lies in the
    /// support, located by scanning and bisection.
    fn ray_extent(&self, c: Complex64, dir: Complex64, cfg: &QuadratureConfig) -> f64 {
        const SCAN: usize = 64;
        let step = self.radius / SCAN as f64;
        let Some(last) = (0..=SCAN).rev().find(|&i| self.any_root_inside(c + dir * (step * i as f64), cfg)) else {
            return 0.0;
        };
        if last == SCAN {
            return self.radius;
        }
        let (mut lo, mut hi) = (step * last as f64, step * (last + 1) as f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.any_root_inside(c + dir * mid, cfg) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// `dy ∧ dȳ = −2i dA` for `n = 2`; points carry unit mass for `n = 1`.
    pub fn area_factor(&self) -> Complex64 {
        if self.n == 2 {
            Complex64::new(0.0, -2.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    pub fn inside(&self, z: &[Complex64]) -> bool {
        let t: f64 = z.iter().zip(&self.center).map(|(a, c)| (a - c).norm_sqr()).sum();
        t < self.radius * self.radius
    }

    pub fn derivatives(&self, z: &[Complex64]) -> (Complex64, Complex64) {
        let rho_y = self.rho_y.as_ref().map_or(Complex64::new(0.0, 0.0), |p| p.eval(z));
        (self.rho_w.eval(z), rho_y)
    }

    fn cutoff_at(&self, y: &[Complex64]) -> f64 {
        match &self.cutoff {
            None => f64::INFINITY,
            Some(b) => b.eval(&self.fiber.point(Complex64::new(0.0, 0.0), y)).norm(),
        }
    }

    /// Roots over `y`; a vanishing leading coefficient means every root has
    /// left the support, so the node is empty.
    pub fn context<'a>(&self, y: &'a [Complex64], cfg: &QuadratureConfig) -> Result<NodeCtx<'a>> {
        let fr = match self.fiber.roots(y, cfg) {
            Ok(fr) => fr,
            Err(Error::LeadingCoefficientVanishes) => {
                return Ok(NodeCtx { y, roots: Vec::new(), all_roots: Vec::new() })
            }
            Err(e) => return Err(e),
        };
        let mut roots = Vec::new();
        for &w in &fr.roots {
            let z = self.fiber.point(w, y);
            if self.inside(&z) {
                let (rho_w, rho_y) = self.derivatives(&z);
                roots.push(RootPoint { z, w, rho_w, rho_y });
            }
        }
        Ok(NodeCtx { y, roots, all_roots: fr.roots })
    }

    /// Applies `f` at every base node (in parallel, order preserved) and
    /// scales by the node weight and the area factor.
    pub fn integrate<F>(&self, cfg: &QuadratureConfig, f: F) -> Result<Vec<NodeValue>>
    where
        F: Fn(&NodeCtx<'_>) -> Result<(Vec<Complex64>, f64)> + Sync,
    {
        let area = self.area_factor();
        self.nodes(cfg)
            .par_iter()
            .map(|node| {
                let ctx = self.context(&node.point, cfg)?;
                let (vals, abs) = if ctx.roots.is_empty() { (Vec::new(), 0.0) } else { f(&ctx)? };
                let scale = area * node.weight;
                Ok(NodeValue {
                    cutoff: self.cutoff_at(&node.point),
                    vals: vals.into_iter().map(|v| v * scale).collect(),
                    abs: abs * node.weight,
                })
            })
            .collect()
    }
}

/// Sums of `vals[level]` over the nodes with `|B| ≥ δ` for each δ of the
/// schedule followed by `δ = 0`.
pub(crate) struct DeltaSweep {
    pub deltas: Vec<f64>,
    pub sums: Vec<Vec<Complex64>>,
    pub mass: f64,
}

pub(crate) fn delta_sweep(nodes: &[NodeValue], levels: usize, cfg: &QuadratureConfig) -> DeltaSweep {
    let finite: Vec<f64> = nodes.iter().map(|n| n.cutoff).filter(|b| b.is_finite()).collect();
    let scale = finite.iter().copied().fold(0.0, f64::max);
    let mut deltas = if finite.is_empty() || scale == 0.0 { Vec::new() } else { cfg.delta_schedule(scale) };
    deltas.push(0.0);
    let sums = deltas
        .iter()
        .map(|&d| {
            (0..levels)
                .map(|m| {
                    let v: Vec<Complex64> = nodes
                        .iter()
                        .filter(|n| n.cutoff >= d)
                        .map(|n| n.vals.get(m).copied().unwrap_or_default())
                        .collect();
                    pairwise_sum(&v)
                })
                .collect()
        })
        .collect();
    let abs: Vec<f64> = nodes.iter().map(|n| n.abs).collect();
    DeltaSweep { deltas, sums, mass: pairwise_sum_f64(&abs) }
}

/// Attaches the δ-table of scalar values to `inner` (the δ = 0 result).
///
/// The table is diagnostic. The cutoff removes whole rings of base nodes,
/// so on a fixed grid it moves in jumps and cannot be extrapolated; the
/// δ = 0 sum is the limit whenever the integrand is integrable across the
/// discriminant locus. The δ residual records the change between the
/// smallest positive cutoff and `δ = 0`.
pub(crate) fn attach_delta_table(mut inner: LimitResult, deltas: &[f64], values: &[Complex64]) -> LimitResult {
    inner.delta_table = deltas.iter().copied().zip(values.iter().copied()).collect();
    if let [.., prev, last] = values {
        let scale = last.norm().max(1e-3 * inner.mass).max(f64::MIN_POSITIVE);
        inner.delta_residual = (last - prev).norm() / scale;
    }
    inner
}

/// Scalar integral over `Y`: the δ = 0 sum with its δ-table.
pub(crate) fn scalar_result(nodes: &[NodeValue], cfg: &QuadratureConfig) -> LimitResult {
    let sweep = delta_sweep(nodes, 1, cfg);
    let values: Vec<Complex64> = sweep.sums.iter().map(|s| s[0]).collect();
    let inner = LimitResult::exact(*values.last().expect("δ = 0 level"), sweep.mass);
    attach_delta_table(inner, &sweep.deltas, &values)
}

/// Cutoff polynomial for component `rho` in chart `var`: the discriminant of
/// the product of all factors that involve `z_var`.
pub(crate) fn cutoff_polynomial(factors: &[(MultiPoly, u32)], var: usize) -> Result<MultiPoly> {
    let Some((first, _)) = factors.first() else {
        return Err(Error::ZeroInput("cutoff_polynomial"));
    };
    let prod = factors
        .iter()
        .filter(|(p, _)| !p.is_free_of(var))
        .fold(MultiPoly::one(first.nvars()), |acc, (p, _)| acc.mul(p));
    if prod.is_free_of(var) {
        return Ok(MultiPoly::one(first.nvars()));
    }
    discriminant(&prod, var)
}
