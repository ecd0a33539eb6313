//! Reduced rational functions.

use std::fmt;

use num_complex::Complex64;

use super::gcd::{gcd, normalize};
use super::poly::{MultiPoly, NumPoly};
use super::rational::GaussianRational;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` normalized to graded-lex
/// leading coefficient one. Zero is stored as `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        num.check_same_ring(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self { num, den: MultiPoly::one(n) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            return Self { num, den };
        }
        let inv = lc.inv().expect("nonzero denominator");
        Self { num: num.scale(&inv), den: normalize(&den) }
    }

    /// Normalizes the leading coefficient of an already coprime pair.
    fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            let n = num.nvars();
            return Self { num, den: MultiPoly::one(n) };
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            return Self { num, den };
        }
        let inv = lc.inv().expect("nonzero denominator");
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        Self { num: p, den: MultiPoly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, when this is a constant.
    pub fn constant_value(&self) -> Option<GaussianRational> {
        self.is_constant().then(|| &self.num.constant_term() / &self.den.constant_term())
    }

    pub fn is_free_of(&self, var: usize) -> bool {
        self.num.is_free_of(var) && self.den.is_free_of(var)
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            return Self::from_coprime(
                self.num.mul(&o.den).add(&o.num.mul(&self.den)),
                self.den.mul(&o.den),
            );
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let t = self.num.mul(&d2).add(&o.num.mul(&d1));
        let den = d1.mul(&o.den);
        if t.is_zero() {
            return Self::zero(self.nvars());
        }
        let g2 = gcd(&t, &g);
        Self::from_coprime(
            t.div_exact(&g2).expect("gcd divides"),
            den.div_exact(&g2).expect("gcd divides"),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars());
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let q = |a: &MultiPoly, g: &MultiPoly| {
            if g.is_one() {
                a.clone()
            } else {
                a.div_exact(g).expect("gcd divides")
            }
        };
        Self::from_coprime(
            q(&self.num, &g1).mul(&q(&o.num, &g2)),
            q(&self.den, &g2).mul(&q(&o.den, &g1)),
        )
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_coprime(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Self { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        let dn = self.num.partial_derivative(var)?;
        if self.den.is_constant() {
            return Ok(Self::normalized(dn, self.den.clone()));
        }
        let dd = self.den.partial_derivative(var)?;
        let g = gcd(&self.den, &dd);
        let d_red = self.den.div_exact(&g).expect("gcd divides");
        let dd_red = dd.div_exact(&g).expect("gcd divides");
        Ok(Self::normalized(dn.mul(&d_red).sub(&self.num.mul(&dd_red)), self.den.mul(&d_red)))
    }

    pub fn eval_exact(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        let d = self.den.eval_exact(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval_exact(point) / &d)
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval(point) / self.den.eval(point)
    }

    pub fn to_numeric(&self) -> NumRatFn {
        NumRatFn { num: self.num.to_numeric(), den: self.den.to_numeric() }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

/// Floating-point image of a [`RatFn`].
#[derive(Clone, Debug)]
pub struct NumRatFn {
    pub num: NumPoly,
    pub den: NumPoly,
}

impl NumRatFn {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval(point) / self.den.eval(point)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    fn rf(n: MultiPoly, d: MultiPoly) -> RatFn {
        RatFn::new(n, d).unwrap()
    }

    #[test]
    fn reduces_common_factors() {
        let a = z(0).sub(&z(1));
        let r = rf(a.mul(&z(0)), a.mul(&z(1)).scale(&GaussianRational::from(2)));
        assert_eq!(r.num(), &z(0).scale(&GaussianRational::from_ratio(1, 2)));
        assert_eq!(r.den(), &z(1));
    }

    #[test]
    fn partial_fraction_identity() {
        // 1/(z1 (z1 - z2)) = z2^{-1} (1/(z1 - z2) - 1/z1)
        let lhs = rf(MultiPoly::one(2), z(0).mul(&z(0).sub(&z(1))));
        let inner = rf(MultiPoly::one(2), z(0).sub(&z(1))).sub(&rf(MultiPoly::one(2), z(0)));
        let rhs = inner.mul(&rf(MultiPoly::one(2), z(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_rule() {
        let r = rf(z(0), z(0).add(&z(1)));
        let d = r.partial_derivative(0).unwrap();
        let expected = rf(z(1), z(0).add(&z(1)).pow(2));
        assert_eq!(d, expected);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RatFn::new(z(0), MultiPoly::zero(2)), Err(Error::DivisionByZero));
        assert!(RatFn::zero(2).inv().is_err());
    }
}
