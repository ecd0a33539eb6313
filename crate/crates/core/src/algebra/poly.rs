//! Sparse multivariate polynomials over Q(i) in graded lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::rational::GaussianRational;
use crate::error::{Error, Result};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then the exponent of `z1`, then `z2`, ...
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with Gaussian-rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    /// The coordinate `z_{var+1}` (0-based index).
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(nvars, e, GaussianRational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: GaussianRational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(exps), c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms
    /// are combined.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Shorthand for integer coefficients, used heavily in tests.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), GaussianRational::from(*c))),
        )
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Value at the origin.
    pub fn at_origin(&self) -> GaussianRational {
        self.constant_term()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient in graded-lex order (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> GaussianRational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(GaussianRational::zero)
    }

    pub fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { var, nvars: self.nvars });
        }
        Ok(())
    }

    pub fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    /// Degree in `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_free_of(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m.0[var] == 0)
    }

    /// Coefficient of `z_var^d`, as a polynomial free of `var`.
    pub fn coeff_in(&self, var: usize, d: u32) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[var] == d {
                let mut e = m.clone();
                e.0[var] = 0;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    /// All coefficients in `var`, index = power.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let d = m.0[var] as usize;
            let mut e = m.clone();
            e.0[var] = 0;
            out[d].terms.insert(e, c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = Self::zero(nvars);
        for (d, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut e = m.clone();
                e.0[var] += d as u32;
                out.add_term(e, v.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc_in(&self, var: usize) -> MultiPoly {
        match self.degree_in(var) {
            Some(d) => self.coeff_in(var, d),
            None => Self::zero(self.nvars),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&GaussianRational::from(-1))
    }

    pub fn mul(&self, other: &Self) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussianRational) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            out.add_term(ma.mul(m), ca * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Result<MultiPoly> {
        self.check_var(var)?;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.clone();
            e.0[var] -= 1;
            out.add_term(e, c * &GaussianRational::from(k as i64));
        }
        Ok(out)
    }

    /// Fallible arithmetic entry point mirroring the `poly_arith` contract.
    pub fn checked_add(&self, other: &Self) -> Result<MultiPoly> {
        self.check_same_ring(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<MultiPoly> {
        self.check_same_ring(other)?;
        Ok(self.mul(other))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<MultiPoly> {
        assert_eq!(self.nvars, d.nvars, "nvars mismatch");
        let (lm, lc) = d.leading_term()?;
        if d.terms.len() == 1 {
            let mut out = Self::zero(self.nvars);
            let inv = lc.inv()?;
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                out.add_term(m.div(lm), c * &inv);
            }
            return Some(out);
        }
        let inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = c * &inv;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Substitutes the constant `z_var := value`.
    pub fn eval_var(&self, var: usize, value: &GaussianRational) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            let mut e = m.clone();
            e.0[var] = 0;
            let c = if k == 0 { c.clone() } else { c * &value.pow(k) };
            out.add_term(e, c);
        }
        out
    }

    /// Substitutes `z_var := value` (a polynomial in the same ring).
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        let coeffs = self.coefficients_in(var);
        let mut acc = Self::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Re-embeds into `new_nvars` variables, sending variable `i` to
    /// `map[i]`.
    pub fn embed(&self, new_nvars: usize, map: &[usize]) -> MultiPoly {
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficientwise complex conjugate.
    pub fn conj_coeffs(&self) -> MultiPoly {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn eval_exact(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&m.0) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.to_numeric().eval(point)
    }

    pub fn to_numeric(&self) -> NumPoly {
        NumPoly::new(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.to_complex())).collect(),
        )
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, k) })
                .collect();
            let neg = c.is_real() && num_traits::Signed::is_negative(&c.re);
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

/// Floating-point image of a [`MultiPoly`] for fast evaluation.
#[derive(Clone, Debug)]
pub struct NumPoly {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumPoly {
    pub fn new(nvars: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Self {
        let mut max_exp = vec![0; nvars];
        for (e, _) in &terms {
            for (m, &k) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        Self { nvars, max_exp, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let powers: Vec<Vec<Complex64>> = self
            .max_exp
            .iter()
            .zip(point)
            .map(|(&m, &x)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                v.push(acc);
                for _ in 0..m {
                    acc *= x;
                    v.push(acc);
                }
                v
            })
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= powers[i][k as usize];
                }
            }
            sum += t;
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn multiplication_distributes() {
        // z1 * (z1 - z2) = z1^2 - z1 z2
        let p = z(2, 0).mul(&z(2, 0).sub(&z(2, 1)));
        let expected = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[1, 1], -1)]);
        assert_eq!(p, expected);
    }

    #[test]
    fn power_rule() {
        let p = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        let d = p.partial_derivative(0).unwrap();
        assert_eq!(d, MultiPoly::from_int_terms(2, &[(&[1, 0], 2)]));
        assert!(matches!(p.partial_derivative(2), Err(Error::VariableOutOfRange { .. })));
    }

    #[test]
    fn adding_zero_is_identity() {
        let p = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        assert_eq!(p.add(&MultiPoly::zero(2)), p);
        assert!(p.checked_add(&MultiPoly::zero(3)).is_err());
    }

    #[test]
    fn grlex_leading_term() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 2], 1), (&[1, 1], 3), (&[1, 0], 1)]);
        let (m, c) = p.leading_term().unwrap();
        assert_eq!(m.0, vec![1, 1]);
        assert_eq!(c, &GaussianRational::from(3));
    }

    #[test]
    fn exact_division() {
        let a = z(2, 0).sub(&z(2, 1));
        let b = z(2, 0).add(&z(2, 1));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&z(2, 0)).is_none());
    }

    #[test]
    fn display_is_readable() {
        let p = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        assert_eq!(p.to_string(), "z1^2 - z2");
    }

    #[test]
    fn numeric_evaluation_matches_exact() {
        let p = MultiPoly::from_int_terms(2, &[(&[2, 1], 3), (&[0, 1], -1), (&[0, 0], 5)]);
        let pt = [GaussianRational::from_integers(1, 2), GaussianRational::from_ratio(-1, 3)];
        let exact = p.eval_exact(&pt).to_complex();
        let num = p.eval(&[pt[0].to_complex(), pt[1].to_complex()]);
        assert!((exact - num).norm() < 1e-12);
    }
}
