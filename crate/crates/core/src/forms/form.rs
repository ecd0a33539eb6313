//! Differential forms with coefficients in a generic ring.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::basis::{self, Key};
use crate::algebra::{GaussianRational, RatFn};
use crate::error::{Error, Result};

/// Coefficient ring of a [`Form`].
pub trait Coefficient: Clone + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: &GaussianRational) -> Self;
}

/// Coefficients with Wirtinger derivatives `∂/∂z_l` and `∂/∂z̄_l`.
pub trait Differentiable: Coefficient {
    fn d_holo(&self, var: usize) -> Result<Self>;
    fn d_anti(&self, var: usize) -> Result<Self>;
}

impl Coefficient for RatFn {
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(RatFn::add(self, other))
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(RatFn::mul(self, other))
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        RatFn::scale(self, c)
    }
}

impl Differentiable for RatFn {
    fn d_holo(&self, var: usize) -> Result<Self> {
        self.partial_derivative(var)
    }
    fn d_anti(&self, var: usize) -> Result<Self> {
        if var >= self.nvars() {
            return Err(Error::VariableOutOfRange { var, nvars: self.nvars() });
        }
        Ok(RatFn::zero(self.nvars()))
    }
}

impl Coefficient for Complex64 {
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c.to_complex()
    }
}

/// A homogeneous differential form on `C^n`: `Σ_K c_K e_K` over sorted keys
/// of differentials (see [`basis`]).
#[derive(Clone, PartialEq)]
pub struct Form<C> {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Key, C>,
}

impl<C: Coefficient> Form<C> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    /// Builds `Σ c · e_{indices}` from unsorted differential lists.
    pub fn from_terms<I>(nvars: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, C)>,
    {
        let mut out = Self::zero(nvars, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "term with {} differentials in a {degree}-form",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&k| k >= 2 * nvars) {
                return Err(Error::VariableOutOfRange { var: bad, nvars: 2 * nvars });
            }
            if let Some((key, odd)) = basis::sort_key(&idx) {
                out.add_term(key, if odd { c.neg() } else { c })?;
            }
        }
        Ok(out)
    }

    /// The degree-0 form with coefficient `c`.
    pub fn scalar(nvars: usize, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { nvars, degree: 0, terms }
    }

    fn add_term(&mut self, key: Key, c: C) -> Result<()> {
        match self.terms.remove(&key) {
            Some(old) => {
                let s = old.add(&c)?;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(key, c);
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &[usize]) -> Option<&C> {
        self.terms.get(key)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common bidegree of all terms, if the form is bihomogeneous.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|k| basis::bidegree(k, self.nvars));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Whether some term contains the differential `idx`.
    pub fn contains_differential(&self, idx: usize) -> bool {
        self.terms.keys().any(|k| k.contains(&idx))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "cannot add a {}-form and a {}-form",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { Self::zero(self.nvars, other.degree) } else { self.clone() };
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (k, v) in &self.terms {
            let s = v.scale(c);
            if !s.is_zero() {
                out.terms.insert(k.clone(), s);
            }
        }
        out
    }

    /// `c · self` for a coefficient `c`.
    pub fn mul_coeff(&self, c: &C) -> Result<Self> {
        let mut out = Self::zero(self.nvars, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), c.mul(v)?)?;
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let degree = self.degree + other.degree;
        if degree > 2 * self.nvars {
            return Ok(Self::zero(self.nvars, degree));
        }
        let mut out = Self::zero(self.nvars, degree);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some((key, odd)) = basis::merge(ka, kb) {
                    let c = ca.mul(cb)?;
                    out.add_term(key, if odd { c.neg() } else { c })?;
                }
            }
        }
        Ok(out)
    }

    /// Interior product with the vector field dual to differential `idx`.
    pub fn contract_differential(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (k, c) in &self.terms {
            if let Some((key, odd)) = basis::remove(k, idx) {
                out.terms.insert(key, if odd { c.neg() } else { c.clone() });
            }
        }
        out
    }

    /// Interior product with `∂/∂z_var`.
    pub fn contract(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { var, nvars: self.nvars });
        }
        Ok(self.contract_differential(var))
    }

    /// Keeps the terms whose key satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&[usize]) -> bool) -> Self {
        Self {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn try_map<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Form<D>> {
        let mut out = Form::zero(self.nvars, self.degree);
        for (k, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                out.terms.insert(k.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        self.try_map(|c| Ok(f(c))).expect("infallible map")
    }
}

impl<C: Differentiable> Form<C> {
    fn differentiate(&self, holo: bool, anti: bool) -> Result<Self> {
        let n = self.nvars;
        let mut out = Self::zero(n, self.degree + 1);
        for (k, c) in &self.terms {
            for l in 0..n {
                for (on, idx) in [(holo, l), (anti, n + l)] {
                    if !on {
                        continue;
                    }
                    let dc = if idx < n { c.d_holo(l)? } else { c.d_anti(l)? };
                    if dc.is_zero() {
                        continue;
                    }
                    if let Some((key, odd)) = basis::merge(&[idx], k) {
                        out.add_term(key, if odd { dc.neg() } else { dc })?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative `d = ∂ + ∂̄`.
    pub fn exterior_d(&self) -> Result<Self> {
        self.differentiate(true, true)
    }

    /// Holomorphic part `d′ = ∂`.
    pub fn d_prime(&self) -> Result<Self> {
        self.differentiate(true, false)
    }

    /// Antiholomorphic part `d″ = ∂̄`.
    pub fn d_double_prime(&self) -> Result<Self> {
        self.differentiate(false, true)
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for &d in k {
                if d < self.nvars {
                    write!(f, " dz{}", d + 1)?;
                } else {
                    write!(f, " dzb{}", d - self.nvars + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form")
            .field("nvars", &self.nvars)
            .field("degree", &self.degree)
            .field("terms", &self.terms)
            .finish()
    }
}
