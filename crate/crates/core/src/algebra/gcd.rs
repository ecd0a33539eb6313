//! Multivariate gcd over Q(i) by recursive primitive remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::GaussianRational;
use crate::error::{Error, Result};

/// Scales `p` so its graded-lex leading coefficient is one.
pub fn normalize(p: &MultiPoly) -> MultiPoly {
    match p.leading_term() {
        Some((_, c)) if !c.is_one() => p.scale(&c.inv().expect("nonzero leading coefficient")),
        _ => p.clone(),
    }
}

/// Variables present in both inputs, cheapest (lowest joint degree) first.
fn shared_vars(p: &MultiPoly, q: &MultiPoly) -> Vec<usize> {
    let mut vars: Vec<(u32, usize)> = (0..p.nvars())
        .filter_map(|v| match (p.degree_in(v), q.degree_in(v)) {
            (Some(a), Some(b)) if a > 0 && b > 0 => Some((a.max(b), v)),
            _ => None,
        })
        .collect();
    vars.sort();
    vars.into_iter().map(|(_, v)| v).collect()
}

/// Gcd of a monomial with an arbitrary polynomial: the monomial of minimal
/// exponents.
fn monomial_gcd(m: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let (lead, _) = m.leading_term().expect("nonzero");
    let mut e = lead.0.clone();
    for (t, _) in q.terms() {
        for (x, &k) in e.iter_mut().zip(&t.0) {
            *x = (*x).min(k);
        }
    }
    MultiPoly::monomial(m.nvars(), e, GaussianRational::one())
}

/// Univariate coefficients of `p` in `var` after fixing the other variables.
fn specialize(p: &MultiPoly, var: usize, point: &[GaussianRational]) -> Vec<GaussianRational> {
    p.coefficients_in(var).iter().map(|c| c.eval_exact(point)).collect()
}

fn univariate_rem(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero").inv().expect("nonzero");
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty") * &lb;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            let t = c * &f;
            r[shift + i] -= &t;
        }
        r.pop();
        while r.last().is_some_and(GaussianRational::is_zero) {
            r.pop();
        }
    }
    r
}

/// Proves `deg_var gcd(p, q) = 0` by a univariate gcd at a point where the
/// leading coefficients survive: the image of the true gcd divides the
/// image gcd with its full degree. `false` means "unknown".
fn image_gcd_is_trivial(p: &MultiPoly, q: &MultiPoly, var: usize) -> bool {
    const SAMPLES: [(i64, i64); 3] = [(3, 1), (-5, 2), (7, -3)];
    for (attempt, &(a, b)) in SAMPLES.iter().enumerate() {
        let point: Vec<GaussianRational> = (0..p.nvars())
            .map(|i| GaussianRational::from_integers(a + 2 * i as i64 + attempt as i64, b - i as i64))
            .collect();
        let mut x = specialize(p, var, &point);
        let mut y = specialize(q, var, &point);
        if x.last().is_none_or(GaussianRational::is_zero) || y.last().is_none_or(GaussianRational::is_zero) {
            continue;
        }
        while !y.is_empty() {
            let r = univariate_rem(&x, &y);
            x = std::mem::replace(&mut y, r);
        }
        return x.len() == 1;
    }
    false
}

/// Rescales `p` by a rational number so that the real and imaginary parts of
/// its coefficients are coprime integers.
fn integer_primitive(p: &MultiPoly) -> MultiPoly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in p.terms() {
        for part in [&c.re, &c.im] {
            if !part.is_zero() {
                den = den.lcm(part.denom());
                num = num.gcd(part.numer());
            }
        }
    }
    if num.is_zero() || (den.is_one() && num.is_one()) {
        return p.clone();
    }
    p.scale(&GaussianRational::real(BigRational::new(den, num)))
}

/// Pseudo-remainder of `a` by `b` with respect to `var`.
pub fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let db = b.degree_in(var).expect("nonzero divisor");
    let lb = b.lc_in(var);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        if dr < db {
            break;
        }
        let lr = r.lc_in(var);
        let mut shift = vec![0; a.nvars()];
        shift[var] = dr - db;
        let shifted = b
            .mul(&lr)
            .mul_monomial(&super::poly::Monomial(shift), &super::rational::GaussianRational::one());
        r = integer_primitive(&r.mul(&lb).sub(&shifted));
    }
    r
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.nvars());
    for c in p.coefficients_in(var) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one(p.nvars());
        }
    }
    acc
}

/// `p / content_in(p, var)`, leading coefficient normalized.
pub fn primitive_part_in(p: &MultiPoly, var: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    normalize(&p.div_exact(&c).expect("content divides"))
}

/// Full multivariate gcd, normalized to graded-lex leading coefficient one.
/// `gcd(0, 0) = 0`.
pub fn gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    assert_eq!(p.nvars(), q.nvars(), "nvars mismatch");
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    if p.num_terms() == 1 {
        return monomial_gcd(p, q);
    }
    if q.num_terms() == 1 {
        return monomial_gcd(q, p);
    }
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one(p.nvars());
    }
    let (small, large) = if p.num_terms() <= q.num_terms() { (p, q) } else { (q, p) };
    if large.div_exact(small).is_some() {
        return normalize(small);
    }
    // a common factor only involves variables present in both inputs
    let shared = shared_vars(p, q);
    let Some(&v) = shared.first() else {
        return MultiPoly::one(p.nvars());
    };
    for &w in &shared {
        if image_gcd_is_trivial(p, q, w) {
            // the gcd is free of z_w, hence divides both contents in z_w
            return gcd(&content_in(p, w), &content_in(q, w));
        }
    }
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let c = gcd(&cp, &cq);
    let a = p.div_exact(&cp).expect("content divides");
    let b = q.div_exact(&cq).expect("content divides");
    let g = dense_gcd(&a, &b, v).unwrap_or_else(|| prs_gcd(a, b, v));
    normalize(&c.mul(&g))
}

/// Gcd of two polynomials primitive in `v` by a primitive remainder
/// sequence.
fn prs_gcd(mut a: MultiPoly, mut b: MultiPoly, v: usize) -> MultiPoly {
    a = integer_primitive(&a);
    b = integer_primitive(&b);
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let g = loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break b;
        }
        if r.degree_in(v) == Some(0) {
            return MultiPoly::one(a.nvars());
        }
        a = b;
        b = integer_primitive(&primitive_part_in(&r, v));
    };
    primitive_part_in(&g, v)
}

/// Gcd of two polynomials primitive in `v` by evaluation of one other
/// variable at integer points, recursive gcds of the images, and Newton
/// interpolation, with the leading coefficient in `v` imposed on every image.
/// `None` when too many evaluation points were unlucky.
fn dense_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> Option<MultiPoly> {
    let n = a.nvars();
    let Some(x) = (0..n).rev().find(|&x| x != v && (!a.is_free_of(x) || !b.is_free_of(x))) else {
        return Some(univariate_gcd(a, b, v));
    };
    let gamma = gcd(&a.lc_in(v), &b.lc_in(v));
    let deg = |p: &MultiPoly| p.degree_in(x).unwrap_or(0);
    let bound = deg(&gamma) + deg(a).min(deg(b));
    let (la, lb) = (a.lc_in(v), b.lc_in(v));

    let mut dmin = u32::MAX;
    let mut interp = MultiPoly::zero(n);
    let mut basis = MultiPoly::one(n);
    let mut collected = 0u32;
    let xv = MultiPoly::var(n, x);
    for step in 1..=(2 * bound as i64 + 24) {
        let pt = GaussianRational::from(step);
        if la.eval_var(x, &pt).is_zero() || lb.eval_var(x, &pt).is_zero() {
            continue;
        }
        let image = gcd(&a.eval_var(x, &pt), &b.eval_var(x, &pt));
        let d = image.degree_in(v).unwrap_or(0);
        if d == 0 {
            return Some(MultiPoly::one(n));
        }
        if d > dmin {
            continue;
        }
        if d < dmin {
            dmin = d;
            interp = MultiPoly::zero(n);
            basis = MultiPoly::one(n);
            collected = 0;
        }
        let image = primitive_part_in(&image, v);
        let Some(factor) = gamma.eval_var(x, &pt).div_exact(&image.lc_in(v)) else {
            continue;
        };
        let image = image.mul(&factor);
        let delta = image.sub(&interp.eval_var(x, &pt));
        let scale = basis.eval_var(x, &pt).constant_term();
        interp = interp.add(&delta.mul(&basis).scale(&scale.inv().expect("distinct points")));
        basis = basis.mul(&xv.sub(&MultiPoly::constant(n, pt.clone())));
        collected += 1;
        if collected > bound || (delta.is_zero() && collected > 1) {
            let g = primitive_part_in(&interp, v);
            if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return Some(g);
            }
        }
    }
    None
}

/// Euclid over `Q(i)` when `v` is the only variable present.
fn univariate_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let zero = vec![GaussianRational::zero(); a.nvars()];
    let mut x = specialize(a, v, &zero);
    let mut y = specialize(b, v, &zero);
    while !y.is_empty() {
        let r = univariate_rem(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    let coeffs: Vec<MultiPoly> =
        x.into_iter().map(|c| MultiPoly::constant(a.nvars(), c)).collect();
    normalize(&MultiPoly::from_coefficients_in(a.nvars(), v, &coeffs))
}

/// Gcd of `p` and `q` as univariate polynomials in `var` over the field of
/// rational functions in the remaining variables, cleared to a primitive
/// polynomial.
pub fn gcd_poly(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    p.check_same_ring(q)?;
    p.check_var(var)?;
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroInput("gcd_poly"));
    }
    let g = gcd(p, q);
    if g.is_free_of(var) {
        return Ok(MultiPoly::one(p.nvars()));
    }
    Ok(primitive_part_in(&g, var))
}

/// Least common multiple, normalized.
pub fn lcm(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero(p.nvars());
    }
    let g = gcd(p, q);
    normalize(&p.mul(&q.div_exact(&g).expect("gcd divides")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    /// Independent oracle: the monic Euclidean algorithm over Q(z2)[z1],
    /// with coefficients evaluated at several rational points of z2 so only
    /// scalar arithmetic is needed. Returns the z1-degree of the gcd.
    fn euclid_degree_at(p: &MultiPoly, q: &MultiPoly, y: i64) -> usize {
        use crate::algebra::rational::GaussianRational as G;
        let spec = |f: &MultiPoly| -> Vec<G> {
            f.coefficients_in(0)
                .iter()
                .map(|c| c.eval_exact(&[G::zero(), G::from(y)]))
                .collect()
        };
        let trim = |v: &mut Vec<G>| {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
        };
        let (mut a, mut b) = (spec(p), spec(q));
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            // a mod b
            while a.len() >= b.len() {
                let f = a.last().unwrap() / b.last().unwrap();
                let shift = a.len() - b.len();
                for (i, c) in b.iter().enumerate() {
                    let t = &a[i + shift] - &(&f * c);
                    a[i + shift] = t;
                }
                trim(&mut a);
                if a.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len().saturating_sub(1)
    }

    #[test]
    fn difference_of_squares() {
        let p = z(0).mul(&z(0)).sub(&z(1).mul(&z(1)));
        let q = z(0).sub(&z(1));
        let g = gcd_poly(&p, &q, 0).unwrap();
        assert_eq!(g, q);
        assert_eq!(euclid_degree_at(&p, &q, 3), 1);
    }

    #[test]
    fn coprime_inputs() {
        let g = gcd_poly(&z(0), &z(0).sub(&z(1)), 0).unwrap();
        assert!(g.is_one());
        assert_eq!(euclid_degree_at(&z(0), &z(0).sub(&z(1)), 3), 0);
    }

    #[test]
    fn gcd_with_zero_is_normalized_input() {
        let p = z(0).mul(&z(0)).sub(&z(1)).scale(&3.into());
        assert_eq!(gcd_poly(&p, &MultiPoly::zero(2), 0).unwrap(), normalize(&p));
        assert!(matches!(
            gcd_poly(&MultiPoly::zero(2), &MultiPoly::zero(2), 0),
            Err(Error::ZeroInput(_))
        ));
    }

    #[test]
    fn multivariate_common_factor() {
        let a = z(0).mul(&z(1)).add(&MultiPoly::one(2));
        let b = z(0).sub(&z(1));
        let c = z(0).add(&z(1).mul(&z(1)));
        let g = gcd(&a.mul(&b), &a.mul(&c));
        assert_eq!(g, normalize(&a));
        // var-free content is part of the full gcd but not of gcd_poly
        let p = z(1).mul(&b);
        let q = z(1).mul(&c);
        assert_eq!(gcd(&p, &q), z(1));
        assert!(gcd_poly(&p, &q, 0).unwrap().is_one());
    }
}
