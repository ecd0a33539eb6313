//! Smooth compactly supported functions closed under Wirtinger derivatives.
//!
//! A bump function is a finite sum of terms
//! `P(z, z̄) · (1 − t)^{−m} · χ(t)^q` with `t = Σ_l |z_l − c_l|² / R²` and
//! `χ(t) = exp(−1/(1 − t))` for `t < 1`, `0` otherwise. `P` is a polynomial in
//! the `2n` variables `(z_1, …, z_n, z̄_1, …, z̄_n)` and `q ≥ 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use super::form::{Coefficient, Differentiable};
use crate::algebra::rational::rat_to_f64;
use crate::algebra::{GaussianRational, MultiPoly, NumPoly};
use crate::error::{Error, Result};

/// Centre and squared radius of the ball carrying a bump function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    center: Vec<GaussianRational>,
    radius_sq: BigRational,
}

impl Support {
    pub fn new(center: Vec<GaussianRational>, radius_sq: BigRational) -> Result<Self> {
        if !radius_sq.is_positive() {
            return Err(Error::InvalidConfig("support radius must be positive".into()));
        }
        Ok(Self { center, radius_sq })
    }

    /// Ball of radius `radius` centred at the origin of `C^n`.
    pub fn origin(nvars: usize, radius: BigRational) -> Self {
        Self { center: vec![GaussianRational::zero(); nvars], radius_sq: &radius * &radius }
    }

    pub fn nvars(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[GaussianRational] {
        &self.center
    }

    pub fn radius_sq(&self) -> &BigRational {
        &self.radius_sq
    }

    pub fn radius(&self) -> f64 {
        rat_to_f64(&self.radius_sq).sqrt()
    }

    pub fn center_numeric(&self) -> Vec<Complex64> {
        self.center.iter().map(GaussianRational::to_complex).collect()
    }

    /// `t` as a polynomial in `(z, z̄)`.
    pub fn t_poly(&self) -> MultiPoly {
        let n = self.nvars();
        let inv = GaussianRational::real(self.radius_sq.recip());
        let mut acc = MultiPoly::zero(2 * n);
        for l in 0..n {
            let a = MultiPoly::var(2 * n, l).sub(&MultiPoly::constant(2 * n, self.center[l].clone()));
            let b = MultiPoly::var(2 * n, n + l)
                .sub(&MultiPoly::constant(2 * n, self.center[l].conj()));
            acc = acc.add(&a.mul(&b));
        }
        acc.scale(&inv)
    }

    /// `∂t/∂z_l = (z̄_l − c̄_l)/R²`, or the conjugate variant for `∂/∂z̄_l`.
    fn dt(&self, d: Wirtinger) -> MultiPoly {
        let n = self.nvars();
        let inv = GaussianRational::real(self.radius_sq.recip());
        let (var, c) = match d {
            Wirtinger::Holo(l) => (n + l, self.center[l].conj()),
            Wirtinger::Anti(l) => (l, self.center[l].clone()),
        };
        MultiPoly::var(2 * n, var).sub(&MultiPoly::constant(2 * n, c)).scale(&inv)
    }
}

/// Choice of Wirtinger derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wirtinger {
    /// `∂/∂z_l`
    Holo(usize),
    /// `∂/∂z̄_l`
    Anti(usize),
}

#[derive(Clone, PartialEq)]
pub struct BumpFunction {
    support: Support,
    /// `(m, q) ↦ P`
    terms: BTreeMap<(u32, u32), MultiPoly>,
}

impl BumpFunction {
    pub fn zero(support: Support) -> Self {
        Self { support, terms: BTreeMap::new() }
    }

    /// `P · χ(t)`.
    pub fn standard(support: Support, poly: MultiPoly) -> Result<Self> {
        Self::from_terms(support, [((0, 1), poly)])
    }

    /// The plain cutoff `χ(t)`.
    pub fn cutoff(support: Support) -> Self {
        let n = support.nvars();
        Self::standard(support, MultiPoly::one(2 * n)).expect("ring matches")
    }

    pub fn from_terms<I>(support: Support, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, u32), MultiPoly)>,
    {
        let mut out = Self::zero(support);
        let n2 = 2 * out.support.nvars();
        for ((m, q), p) in terms {
            if q == 0 {
                return Err(Error::Unsupported("bump terms need a positive cutoff power".into()));
            }
            if p.nvars() != n2 {
                return Err(Error::NvarsMismatch { left: n2, right: p.nvars() });
            }
            out.add_poly((m, q), p);
        }
        Ok(out)
    }

    fn add_poly(&mut self, key: (u32, u32), p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn nvars(&self) -> usize {
        self.support.nvars()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &MultiPoly)> {
        self.terms.iter()
    }

    fn check_support(&self, other: &Self) -> Result<()> {
        if self.support != other.support {
            return Err(Error::SupportMismatch);
        }
        Ok(())
    }

    /// Multiplies every term by a polynomial in `(z, z̄)`.
    pub fn mul_poly(&self, p: &MultiPoly) -> Result<Self> {
        if p.nvars() != 2 * self.nvars() {
            return Err(Error::NvarsMismatch { left: 2 * self.nvars(), right: p.nvars() });
        }
        let mut out = Self::zero(self.support.clone());
        for (k, q) in &self.terms {
            out.add_poly(*k, q.mul(p));
        }
        Ok(out)
    }

    /// Exact Wirtinger derivative.
    pub fn derivative(&self, d: Wirtinger) -> Result<Self> {
        let n = self.nvars();
        let (l, var) = match d {
            Wirtinger::Holo(l) => (l, l),
            Wirtinger::Anti(l) => (l, n + l),
        };
        if l >= n {
            return Err(Error::VariableOutOfRange { var: l, nvars: n });
        }
        let dt = self.support.dt(d);
        let mut out = Self::zero(self.support.clone());
        for (&(m, q), p) in &self.terms {
            out.add_poly((m, q), p.partial_derivative(var)?);
            let pdt = p.mul(&dt);
            if m > 0 {
                out.add_poly((m + 1, q), pdt.scale(&GaussianRational::from(i64::from(m))));
            }
            out.add_poly((m + 2, q), pdt.scale(&GaussianRational::from(-i64::from(q))));
        }
        Ok(out)
    }

    /// Iterated holomorphic derivative `∂^k/∂z_l^k`.
    pub fn derivative_n(&self, l: usize, k: u32) -> Result<Self> {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative(Wirtinger::Holo(l))?;
        }
        Ok(out)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.to_numeric().eval(z)
    }

    pub fn to_numeric(&self) -> NumBump {
        NumBump {
            center: self.support.center_numeric(),
            inv_radius_sq: 1.0 / rat_to_f64(&self.support.radius_sq),
            terms: self.terms.iter().map(|(&(m, q), p)| (m, q, p.to_numeric())).collect(),
        }
    }
}

impl Coefficient for BumpFunction {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        self.check_support(other)?;
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_poly(*k, p.clone());
        }
        Ok(out)
    }

    fn neg(&self) -> Self {
        Self {
            support: self.support.clone(),
            terms: self.terms.iter().map(|(k, p)| (*k, p.neg())).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            let s = if self.is_zero() { &other.support } else { &self.support };
            return Ok(Self::zero(s.clone()));
        }
        self.check_support(other)?;
        let mut out = Self::zero(self.support.clone());
        for (&(m1, q1), p1) in &self.terms {
            for (&(m2, q2), p2) in &other.terms {
                out.add_poly((m1 + m2, q1 + q2), p1.mul(p2));
            }
        }
        Ok(out)
    }

    fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.support.clone());
        for (k, p) in &self.terms {
            out.add_poly(*k, p.scale(c));
        }
        out
    }
}

impl Differentiable for BumpFunction {
    fn d_holo(&self, var: usize) -> Result<Self> {
        self.derivative(Wirtinger::Holo(var))
    }

    fn d_anti(&self, var: usize) -> Result<Self> {
        self.derivative(Wirtinger::Anti(var))
    }
}

impl fmt::Debug for BumpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bump[")?;
        for (i, ((m, q), p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})·(1-t)^-{m}·chi^{q}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BumpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Floating-point evaluator of a [`BumpFunction`].
#[derive(Clone, Debug)]
pub struct NumBump {
    center: Vec<Complex64>,
    inv_radius_sq: f64,
    terms: Vec<(u32, u32, NumPoly)>,
}

impl NumBump {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if self.terms.is_empty() {
            return zero;
        }
        let t: f64 = z.iter().zip(&self.center).map(|(a, c)| (a - c).norm_sqr()).sum::<f64>()
            * self.inv_radius_sq;
        if t >= 1.0 {
            return zero;
        }
        let s = 1.0 - t;
        let point: Vec<Complex64> = z.iter().copied().chain(z.iter().map(Complex64::conj)).collect();
        let mut acc = zero;
        for (m, q, p) in &self.terms {
            let weight = (-f64::from(*q) / s - f64::from(*m) * s.ln()).exp();
            if weight == 0.0 {
                continue;
            }
            acc += p.eval(&point) * weight;
        }
        acc
    }

    /// Evaluates with `z̄` replaced by an independent vector `u` and no
    /// cutoff, so the result is holomorphic in `z` for fixed `u`.
    pub fn eval_polarized(&self, z: &[Complex64], u: &[Complex64]) -> Complex64 {
        let t: Complex64 = z
            .iter()
            .zip(u)
            .zip(&self.center)
            .map(|((a, b), c)| (a - c) * (b - c.conj()))
            .sum::<Complex64>()
            * self.inv_radius_sq;
        let s = Complex64::new(1.0, 0.0) - t;
        let point: Vec<Complex64> = z.iter().chain(u).copied().collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, q, p) in &self.terms {
            let weight = (-f64::from(*q) / s - f64::from(*m) * s.ln()).exp();
            acc += p.eval(&point) * weight;
        }
        acc
    }
}
