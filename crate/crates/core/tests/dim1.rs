use num_complex::Complex64;
use num_rational::BigRational;
use residuum_core::algebra::{GaussianRational, MultiPoly, RatFn};
use residuum_core::dim1::{
    apply_delta_current, contour_residue_numeric, laurent_parts, residue_current_1d, vp_1d,
    DeltaOperatorCurrent, LaurentPart,
};
use residuum_core::forms::{BumpFunction, Support, TestForm};
use residuum_core::numeric::QuadratureConfig;
use residuum_core::Error;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

fn z() -> MultiPoly {
    MultiPoly::var(1, 0)
}

fn k(v: i64) -> MultiPoly {
    MultiPoly::constant(1, GaussianRational::from(v))
}

fn inv(p: MultiPoly) -> RatFn {
    RatFn::new(k(1), p).unwrap()
}

fn gr(v: i64) -> GaussianRational {
    GaussianRational::from(v)
}

fn support(center: GaussianRational, radius: i64) -> Support {
    Support::new(vec![center], BigRational::from_integer((radius * radius).into())).unwrap()
}

/// A bump function with a polynomial part in `(z − c, z̄ − c̄)` that has
/// generic low-order Taylor coefficients at the centre `c`.
fn generic_bump(center: GaussianRational, radius: i64) -> BumpFunction {
    let s = support(center.clone(), radius);
    let u = MultiPoly::var(2, 0).sub(&MultiPoly::constant(2, center.clone()));
    let v = MultiPoly::var(2, 1).sub(&MultiPoly::constant(2, center.conj()));
    let p = MultiPoly::constant(2, GaussianRational::from_integers(2, 1))
        .add(&u.scale(&GaussianRational::from_integers(-1, 3)))
        .add(&u.pow(2).scale(&gr(5)))
        .add(&u.pow(3).mul(&v).scale(&GaussianRational::from_integers(0, 2)))
        .add(&u.pow(3).scale(&GaussianRational::from_integers(1, -1)))
        .add(&u.pow(4).scale(&gr(-3)))
        .add(&v.pow(2).scale(&gr(7)));
    BumpFunction::standard(s, p).unwrap()
}

#[test]
fn laurent_examples() {
    // 1/z² + 3/z + 5 = (5z² + 3z + 1)/z²
    let g = RatFn::new(z().pow(2).scale(&gr(5)).add(&z().scale(&gr(3))).add(&k(1)), z().pow(2)).unwrap();
    let parts = laurent_parts(&g).unwrap();
    assert_eq!(parts, vec![LaurentPart { pole: gr(0), coeffs: vec![gr(3), gr(1)] }]);

    let g = inv(z().mul(&z().sub(&k(1))));
    let parts = laurent_parts(&g).unwrap();
    assert_eq!(parts.len(), 2);
    assert_eq!((parts[0].pole.clone(), parts[0].coeffs.clone()), (gr(0), vec![gr(-1)]));
    assert_eq!((parts[1].pole.clone(), parts[1].coeffs.clone()), (gr(1), vec![gr(1)]));
    let rest = parts.iter().fold(g.clone(), |acc, p| acc.sub(&p.to_ratfn()));
    assert!(rest.is_zero());

    assert!(laurent_parts(&RatFn::from_poly(z().pow(3))).unwrap().is_empty());
    assert_eq!(
        laurent_parts(&inv(z().pow(2).sub(&k(2)))).unwrap_err(),
        Error::IrrationalPole { degree: 2 }
    );
}

#[test]
fn laurent_parts_leave_a_polynomial() {
    // (z³ + i)/((z − 1/2)³ (z + i)²)
    let a = z().sub(&MultiPoly::constant(1, GaussianRational::from_ratio(1, 2)));
    let b = z().add(&MultiPoly::constant(1, GaussianRational::i()));
    let num = z().pow(5).add(&k(1));
    let g = RatFn::new(num, a.pow(3).mul(&b.pow(2))).unwrap();
    let parts = laurent_parts(&g).unwrap();
    assert_eq!(parts.iter().map(LaurentPart::order).collect::<Vec<_>>(), vec![2, 3]);
    let rest = parts.iter().fold(g, |acc, p| acc.sub(&p.to_ratfn()));
    assert!(rest.is_polynomial());
}

#[test]
fn delta_current_constants() {
    for l in 1..=5usize {
        let mut coeffs = vec![gr(0); l];
        coeffs[l - 1] = gr(1);
        let cur = &residue_current_1d(&[LaurentPart { pole: gr(0), coeffs }])[0];
        let fact: f64 = (1..l).map(|i| i as f64).product();
        for j in 0..l {
            let expected = if j == l - 1 { TWO_PI_I / fact } else { Complex64::new(0.0, 0.0) };
            assert!((cur.coefficient(j) - expected).norm() < 1e-15);
        }
    }
}

#[test]
fn apply_delta_examples() {
    let phi = BumpFunction::cutoff(support(gr(0), 1));
    let cur = DeltaOperatorCurrent { pole: gr(0), coeffs: vec![gr(1)], two_pi_i: true };
    let v = apply_delta_current(&cur, &phi).unwrap();
    assert!((v - TWO_PI_I * (-1.0f64).exp()).norm() < 1e-15);

    let zero = DeltaOperatorCurrent { pole: gr(0), coeffs: vec![gr(0), gr(0)], two_pi_i: true };
    assert_eq!(apply_delta_current(&zero, &phi).unwrap(), Complex64::new(0.0, 0.0));

    // φ = z·χ: ∂φ/∂z(0) = χ(0) = e^{−1}
    let phi = BumpFunction::standard(support(gr(0), 1), MultiPoly::var(2, 0)).unwrap();
    let cur = DeltaOperatorCurrent { pole: gr(0), coeffs: vec![gr(0), gr(1)], two_pi_i: true };
    let v = apply_delta_current(&cur, &phi).unwrap();
    assert!((v - TWO_PI_I * (-1.0f64).exp()).norm() < 1e-15);
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn contour_oracle_pins_the_constants() {
    let cfg = QuadratureConfig::default();
    let phi = generic_bump(gr(0), 1);
    for l in 1..=5u32 {
        let g = inv(z().pow(l));
        let numeric = contour_residue_numeric(&g, &phi, &cfg).unwrap();
        let cur = residue_current_1d(&laurent_parts(&g).unwrap());
        let exact = apply_delta_current(&cur[0], &phi).unwrap();
        assert!(numeric.converged);
        assert!(rel(numeric.value, exact) < 1e-8, "l={l}: {} vs {exact}", numeric.value);
    }
    let holo = RatFn::from_poly(z().pow(2).add(&k(3)));
    assert_eq!(contour_residue_numeric(&holo, &phi, &cfg).unwrap().value, Complex64::new(0.0, 0.0));
}

#[test]
fn current_matches_contour_with_several_poles() {
    let cfg = QuadratureConfig::default();
    let phi = generic_bump(GaussianRational::from_ratio(1, 2), 2);
    let g = RatFn::new(z().add(&k(2)), z().pow(2).mul(&z().sub(&k(1)))).unwrap();
    let numeric = contour_residue_numeric(&g, &phi, &cfg).unwrap();
    let exact: Complex64 = residue_current_1d(&laurent_parts(&g).unwrap())
        .iter()
        .map(|c| apply_delta_current(c, &phi).unwrap())
        .sum();
    assert!(rel(numeric.value, exact) < 1e-8);
}

fn dbar_form(phi: &BumpFunction) -> TestForm {
    let d = phi.derivative(residuum_core::forms::Wirtinger::Anti(0)).unwrap();
    TestForm::from_terms(1, 1, [(vec![1], d)]).unwrap()
}

/// `∫_0^∞` of the angular average of `g·b` by adaptive Simpson in the radius.
fn polar_oracle(g: &dyn Fn(Complex64) -> Complex64, b: &BumpFunction, outer: f64) -> Complex64 {
    let bn = b.to_numeric();
    let ring = |r: f64| -> Complex64 {
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let n = 512;
        (0..n)
            .map(|k| {
                let u = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64);
                g(u) * bn.eval(&[u])
            })
            .sum::<Complex64>()
            * (2.0 * std::f64::consts::PI / n as f64)
            * r
    };
    fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64, whole: Complex64, depth: u32) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        if depth == 0 || (left + right - whole).norm() < 1e-13 {
            return left + right + (left + right - whole) / 15.0;
        }
        simpson(f, a, m, fa, flm, fm, left, depth - 1) + simpson(f, m, b, fm, frm, fb, right, depth - 1)
    }
    let (fa, fm, fb) = (ring(0.0), ring(outer / 2.0), ring(outer));
    let whole = (fa + fm * 4.0 + fb) * (outer / 6.0);
    simpson(&ring, 0.0, outer, fa, fm, fb, whole, 30) * Complex64::new(0.0, -2.0)
}

#[test]
fn principal_value_matches_polar_oracle() {
    let cfg = QuadratureConfig::default();
    let center = GaussianRational::new(BigRational::new(3.into(), 10.into()), BigRational::new(1.into(), 5.into()));
    let chi = BumpFunction::standard(support(center, 1), MultiPoly::var(2, 1)).unwrap();
    let psi = TestForm::from_terms(1, 1, [(vec![1], chi.clone())]).unwrap();
    let vp = vp_1d(&inv(z()), &psi, &cfg).unwrap();
    let oracle = polar_oracle(&|u| u.inv(), &chi, 1.4);
    assert!(rel(vp.value, oracle) < 1e-6, "{} vs {oracle}", vp.value);
}

#[test]
fn principal_value_examples() {
    let cfg = QuadratureConfig::default();
    // holomorphic g: the table is constant
    let b = generic_bump(gr(0), 1);
    let psi = TestForm::from_terms(1, 1, [(vec![1], b)]).unwrap();
    let vp = vp_1d(&RatFn::from_poly(z().add(&k(1))), &psi, &cfg).unwrap();
    assert!(vp.table.windows(2).all(|w| w[0].1 == w[1].1));

    // odd test data against an even kernel
    let odd = BumpFunction::standard(support(gr(0), 1), MultiPoly::var(2, 0)).unwrap();
    let psi = TestForm::from_terms(1, 1, [(vec![1], odd.clone())]).unwrap();
    let vp = vp_1d(&inv(z().pow(2)), &psi, &cfg).unwrap();
    let scale = vp_1d(&inv(z().pow(2)), &TestForm::from_terms(1, 1, [(vec![1], odd.mul_poly(&MultiPoly::var(2, 1)).unwrap())]).unwrap(), &cfg).unwrap();
    assert!(vp.value.norm() < 1e-12 * scale.mass.max(1.0));
}

#[test]
fn stokes_identity_links_contour_and_principal_value() {
    let cfg = QuadratureConfig::default();
    let phi = generic_bump(GaussianRational::from_ratio(1, 4), 2);
    let gs = [
        inv(z()),
        inv(z().pow(2)),
        inv(z().pow(3)),
        RatFn::new(z().add(&k(2)), z().mul(&z().sub(&k(1)))).unwrap(),
    ];
    for g in gs {
        let res = contour_residue_numeric(&g, &phi, &cfg).unwrap();
        let vp = vp_1d(&g, &dbar_form(&phi), &cfg).unwrap();
        assert!(rel(vp.value, res.value) < 1e-6, "{g}: {} vs {}", vp.value, res.value);
    }
}

#[test]
fn translation_covariance() {
    let cfg = QuadratureConfig::default();
    let a = GaussianRational::from_integers(1, -2);
    let shifted = z().sub(&MultiPoly::constant(1, a.clone()));
    for l in 1..=3 {
        let at_origin = contour_residue_numeric(&inv(z().pow(l)), &generic_bump(gr(0), 1), &cfg).unwrap();
        let moved = contour_residue_numeric(&inv(shifted.pow(l)), &generic_bump(a.clone(), 1), &cfg).unwrap();
        assert!(rel(moved.value, at_origin.value) < 1e-10, "{} vs {}", moved.value, at_origin.value);
        let psi0 = dbar_form(&generic_bump(gr(0), 1));
        let psi1 = dbar_form(&generic_bump(a.clone(), 1));
        let v0 = vp_1d(&inv(z().pow(l)), &psi0, &cfg).unwrap();
        let v1 = vp_1d(&inv(shifted.pow(l)), &psi1, &cfg).unwrap();
        assert!(rel(v1.value, v0.value) < 1e-10);
    }
}
