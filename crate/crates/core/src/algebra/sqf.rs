//! Yun's squarefree decomposition in a distinguished variable.

use super::gcd::{gcd, normalize, primitive_part_in};
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Splits `p` into pairwise coprime squarefree factors in `var` with
/// multiplicities. The product of `factor^multiplicity` equals `p` up to a
/// factor free of `var`. Factors are squarefree, not necessarily irreducible.
pub fn squarefree_decompose(p: &MultiPoly, var: usize) -> Result<Vec<(MultiPoly, u32)>> {
    p.check_var(var)?;
    if p.is_zero() {
        return Err(Error::ZeroInput("squarefree_decompose"));
    }
    if p.is_free_of(var) {
        return Ok(Vec::new());
    }
    let a = primitive_part_in(p, var);
    let da = a.partial_derivative(var)?;
    let mut c = gcd(&a, &da);
    let mut w = a.div_exact(&c).expect("gcd divides");
    let mut out = Vec::new();
    let mut i = 1;
    while !c.is_free_of(var) {
        let y = gcd(&w, &c);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_free_of(var) {
            out.push((normalize(&z), i));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
    }
    if !w.is_free_of(var) {
        out.push((normalize(&w), i));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::GaussianRational;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    fn parabola() -> MultiPoly {
        z(0).mul(&z(0)).sub(&z(1))
    }

    #[test]
    fn squared_parabola() {
        let p = parabola().mul(&parabola());
        assert_eq!(squarefree_decompose(&p, 0).unwrap(), vec![(parabola(), 1 + 1)]);
        // oracle: gcd with the derivative is the parabola itself
        assert_eq!(gcd(&p, &p.partial_derivative(0).unwrap()), parabola());
    }

    #[test]
    fn distinct_factors_stay_together() {
        let p = z(0).mul(&z(0).sub(&z(1)));
        let out = squarefree_decompose(&p, 0).unwrap();
        assert_eq!(out, vec![(p.clone(), 1)]);
        assert!(gcd(&p, &p.partial_derivative(0).unwrap()).is_one());
    }

    #[test]
    fn mixed_multiplicities_recombine() {
        let a = z(0).sub(&z(1));
        let b = z(0).add(&MultiPoly::one(2));
        let p = a.pow(3).mul(&b).mul(&z(1)).scale(&GaussianRational::from(5));
        let out = squarefree_decompose(&p, 0).unwrap();
        assert_eq!(out, vec![(normalize(&b), 1), (a.clone(), 3)]);
        let prod = out
            .iter()
            .fold(MultiPoly::one(2), |acc, (f, m)| acc.mul(&f.pow(*m)));
        let unit = p.div_exact(&prod).unwrap();
        assert!(unit.is_free_of(0));
    }

    #[test]
    fn squarefree_input_is_returned() {
        let out = squarefree_decompose(&parabola(), 0).unwrap();
        assert_eq!(out, vec![(parabola(), 1)]);
        assert!(squarefree_decompose(&MultiPoly::zero(2), 0).is_err());
    }
}
