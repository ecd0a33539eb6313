//! Sylvester resultants and discriminants with polynomial coefficients.

use super::poly::MultiPoly;
use super::rational::GaussianRational;
use crate::error::{Error, Result};

/// Sylvester matrix of `p` and `q` in `var`; entries are free of `var`.
pub fn sylvester_matrix(p: &MultiPoly, q: &MultiPoly, var: usize) -> Vec<Vec<MultiPoly>> {
    let n = p.nvars();
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    let m = pc.len() - 1;
    let k = qc.len() - 1;
    let size = m + k;
    let mut rows = Vec::with_capacity(size);
    for i in 0..k {
        let mut row = vec![MultiPoly::zero(n); size];
        for (d, c) in pc.iter().rev().enumerate() {
            row[i + d] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MultiPoly::zero(n); size];
        for (d, c) in qc.iter().rev().enumerate() {
            row[i + d] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(mut a: Vec<Vec<MultiPoly>>, nvars: usize) -> MultiPoly {
    let size = a.len();
    if size == 0 {
        return MultiPoly::one(nvars);
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(nvars);
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(nvars),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Resultant of `p` and `q` with respect to `var`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    p.check_same_ring(q)?;
    p.check_var(var)?;
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroInput("resultant"));
    }
    Ok(determinant(sylvester_matrix(p, q, var), p.nvars()))
}

/// `(-1)^{d(d-1)/2} · res(p, ∂p/∂var) / lc(p)` with `d = deg_var p`.
pub fn discriminant(p: &MultiPoly, var: usize) -> Result<MultiPoly> {
    p.check_var(var)?;
    let d = match p.degree_in(var) {
        None => return Err(Error::ZeroInput("discriminant")),
        Some(0) => return Err(Error::FactorFreeOfVariable { index: 0, var: var + 1 }),
        Some(d) => d,
    };
    let dp = p.partial_derivative(var)?;
    let res = resultant(p, &dp, var)?;
    let lc = p.lc_in(var);
    let mut disc = res.div_exact(&lc).expect("leading coefficient divides the resultant");
    if (d * (d - 1) / 2) % 2 == 1 {
        disc = disc.scale(&GaussianRational::from(-1));
    }
    Ok(disc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    /// Oracle: cofactor expansion of the Sylvester matrix.
    fn cofactor_det(a: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
        if a.is_empty() {
            return MultiPoly::one(nvars);
        }
        let mut acc = MultiPoly::zero(nvars);
        for (j, entry) in a[0].iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let minor: Vec<Vec<MultiPoly>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let t = entry.mul(&cofactor_det(&minor, nvars));
            acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }

    #[test]
    fn linear_resultant() {
        let r = resultant(&z(0), &z(0).sub(&z(1)), 0).unwrap();
        assert_eq!(r, z(1).neg());
    }

    #[test]
    fn parabola_discriminant() {
        let p = z(0).mul(&z(0)).sub(&z(1));
        let dp = p.partial_derivative(0).unwrap();
        let r = resultant(&p, &dp, 0).unwrap();
        assert_eq!(r, z(1).scale(&GaussianRational::from(-4)));
        assert_eq!(r, cofactor_det(&sylvester_matrix(&p, &dp, 0), 2));
        assert_eq!(discriminant(&p, 0).unwrap(), z(1).scale(&GaussianRational::from(4)));
    }

    #[test]
    fn product_discriminant_matches_root_differences() {
        // roots ±z2: (z2 - (-z2))^2 = 4 z2^2
        let p = z(0).sub(&z(1)).mul(&z(0).add(&z(1)));
        assert_eq!(
            discriminant(&p, 0).unwrap(),
            z(1).mul(&z(1)).scale(&GaussianRational::from(4))
        );
        // roots 0, z2: (0 - z2)^2
        let p = z(0).mul(&z(0).sub(&z(1)));
        assert_eq!(discriminant(&p, 0).unwrap(), z(1).mul(&z(1)));
    }

    #[test]
    fn bareiss_agrees_with_cofactor_expansion() {
        let p = MultiPoly::from_int_terms(2, &[(&[3, 0], 2), (&[1, 1], -1), (&[0, 2], 3), (&[0, 0], 1)]);
        let q = MultiPoly::from_int_terms(2, &[(&[2, 1], 1), (&[1, 0], 4), (&[0, 1], -2)]);
        let m = sylvester_matrix(&p, &q, 0);
        assert_eq!(determinant(m.clone(), 2), cofactor_det(&m, 2));
    }

    #[test]
    fn linear_discriminant_is_one() {
        let p = z(0).mul(&z(1)).add(&MultiPoly::one(2));
        assert!(discriminant(&p, 0).unwrap().is_one());
        assert!(discriminant(&z(1), 0).is_err());
    }
}
