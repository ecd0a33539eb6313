//! Univariate polynomials in a distinguished variable `w = z_var` whose
//! coefficients are rational functions of the remaining variables.

use std::fmt;

use super::poly::MultiPoly;
use super::ratfn::RatFn;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct WPoly {
    nvars: usize,
    var: usize,
    /// Index = power of `w`; no trailing zeros; every entry free of `w`.
    coeffs: Vec<RatFn>,
}

impl WPoly {
    pub fn zero(nvars: usize, var: usize) -> Self {
        Self { nvars, var, coeffs: Vec::new() }
    }

    pub fn constant(c: RatFn, var: usize) -> Self {
        Self::from_coeffs(c.nvars(), var, vec![c])
    }

    pub fn from_coeffs(nvars: usize, var: usize, mut coeffs: Vec<RatFn>) -> Self {
        while coeffs.last().is_some_and(RatFn::is_zero) {
            coeffs.pop();
        }
        Self { nvars, var, coeffs }
    }

    pub fn from_poly(p: &MultiPoly, var: usize) -> Self {
        let coeffs = p.coefficients_in(var).into_iter().map(RatFn::from_poly).collect();
        Self::from_coeffs(p.nvars(), var, coeffs)
    }

    /// Requires the denominator of `r` to be free of `w`.
    pub fn from_ratfn(r: &RatFn, var: usize) -> Option<Self> {
        if !r.den().is_free_of(var) {
            return None;
        }
        let den = RatFn::from_poly(r.den().clone());
        let coeffs = r
            .num()
            .coefficients_in(var)
            .into_iter()
            .map(|c| RatFn::from_poly(c).div(&den).expect("nonzero denominator"))
            .collect();
        Some(Self::from_coeffs(r.nvars(), var, coeffs))
    }

    pub fn to_ratfn(&self) -> RatFn {
        let w = RatFn::from_poly(MultiPoly::var(self.nvars, self.var));
        let mut acc = RatFn::zero(self.nvars);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&w).add(c);
        }
        acc
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&RatFn> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = RatFn::zero(self.nvars);
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).unwrap_or(&zero).add(o.coeffs.get(i).unwrap_or(&zero))
            })
            .collect();
        Self::from_coeffs(self.nvars, self.var, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, var: self.var, coeffs: self.coeffs.iter().map(RatFn::neg).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &RatFn) -> Self {
        Self::from_coeffs(self.nvars, self.var, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars, self.var);
        }
        let mut coeffs = vec![RatFn::zero(self.nvars); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.nvars, self.var, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(RatFn::one(self.nvars), self.var);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&(i as i64).into()))
            .collect();
        Self::from_coeffs(self.nvars, self.var, coeffs)
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lc().expect("nonzero").inv()?;
        let mut r = self.clone();
        let mut q = vec![RatFn::zero(self.nvars); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let f = r.lc().expect("nonzero").mul(&inv);
            let shift = dr - dd;
            let mut sub = vec![RatFn::zero(self.nvars); shift];
            sub.extend(d.coeffs.iter().map(|c| c.mul(&f)));
            q[shift] = f;
            let mut next = r.sub(&Self::from_coeffs(self.nvars, self.var, sub));
            // guard against the leading term surviving due to exactness issues
            next.coeffs.truncate(dr);
            r = Self::from_coeffs(self.nvars, self.var, next.coeffs);
        }
        Ok((Self::from_coeffs(self.nvars, self.var, q), r))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn make_monic(&self) -> Self {
        match self.lc() {
            Some(c) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Extended Euclid: `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(a: &Self, b: &Self) -> Result<(Self, Self, Self)> {
        let (nv, v) = (a.nvars, a.var);
        let one = Self::constant(RatFn::one(nv), v);
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), Self::zero(nv, v));
        let (mut t0, mut t1) = (Self::zero(nv, v), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let lc = r0.lc().ok_or(Error::ZeroInput("ext_gcd"))?.inv()?;
        Ok((r0.scale(&lc), s0.scale(&lc), t0.scale(&lc)))
    }

    /// Inverse of `self` modulo `m`, when they are coprime.
    pub fn inv_mod(&self, m: &Self) -> Result<Option<Self>> {
        let (g, s, _) = Self::ext_gcd(&self.rem(m)?, m)?;
        if g.degree() != Some(0) {
            return Ok(None);
        }
        Ok(Some(s.rem(m)?))
    }

    /// `m`-adic digits `d_0 + d_1 m + d_2 m² + …` with `deg d_i < deg m`.
    pub fn adic_expand(&self, m: &Self) -> Result<Vec<Self>> {
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.div_rem(m)?;
            digits.push(r);
            cur = q;
        }
        Ok(digits)
    }
}

impl fmt::Debug for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WPoly[z{}]({})", self.var + 1, self.to_ratfn())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn inverse_mod_parabola() {
        // 1/(2 z1) mod z1^2 - z2 = z1 / (2 z2)
        let m = WPoly::from_poly(&z(0).mul(&z(0)).sub(&z(1)), 0);
        let a = WPoly::from_poly(&z(0).scale(&2.into()), 0);
        let inv = a.inv_mod(&m).unwrap().unwrap();
        let expected = RatFn::new(z(0), z(1).scale(&2.into())).unwrap();
        assert_eq!(inv.to_ratfn(), expected);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = WPoly::from_poly(&MultiPoly::from_int_terms(2, &[(&[3, 0], 1), (&[1, 1], 2), (&[0, 0], 1)]), 0);
        let b = WPoly::from_poly(&MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]), 0);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn adic_digits() {
        let m = WPoly::from_poly(&z(0).mul(&z(0)).sub(&z(1)), 0);
        let p = m.mul(&m).add(&WPoly::from_poly(&z(0), 0));
        let d = p.adic_expand(&m).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d[0], WPoly::from_poly(&z(0), 0));
        assert!(d[1].is_zero());
        assert_eq!(d[2].to_ratfn(), RatFn::one(2));
    }
}
