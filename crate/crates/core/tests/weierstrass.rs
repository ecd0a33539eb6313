use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residuum_core::algebra::{GaussianRational, MultiPoly, RatFn};
use residuum_core::forms::{BumpFunction, Support};
use residuum_core::weierstrass::{
    check_simple_pole_holomorphy, partial_fractions, prepare_denominator, residue_operator_data,
    transverse_operator,
};
use residuum_core::Error;

fn z(i: usize) -> MultiPoly {
    MultiPoly::var(2, i)
}

fn c(v: i64) -> MultiPoly {
    MultiPoly::constant(2, GaussianRational::from(v))
}

fn parabola() -> MultiPoly {
    z(0).mul(&z(0)).sub(&z(1))
}

fn ratfn(num: MultiPoly, den: MultiPoly) -> RatFn {
    RatFn::new(num, den).unwrap()
}

#[test]
fn discriminant_examples() {
    let fd = prepare_denominator(&[(parabola(), 1)], 0).unwrap();
    assert_eq!(fd.discriminant, z(1).scale(&4.into()));

    let fd = prepare_denominator(&[(z(0), 1), (z(0).sub(&z(1)), 1)], 0).unwrap();
    // product of squared root differences: (0 − z2)²
    assert_eq!(fd.discriminant, z(1).mul(&z(1)));
}

#[test]
fn invalid_denominators_are_rejected() {
    assert_eq!(
        prepare_denominator(&[(parabola(), 1), (parabola(), 1)], 0).unwrap_err(),
        Error::CoprimalityViolation { first: 1, second: 2, var: 1 }
    );
    assert!(matches!(
        prepare_denominator(&[(z(1), 1), (z(0), 1)], 0),
        Err(Error::FactorFreeOfVariable { index: 1, var: 1 })
    ));
    assert!(matches!(
        prepare_denominator(&[(z(1).mul(&z(0)).sub(&c(1)), 1)], 0),
        Err(Error::LeadingCoefficientVanishesAtOrigin { index: 1, var: 1 })
    ));
    assert!(matches!(
        prepare_denominator(&[(z(0).sub(&z(1)).pow(2), 1)], 0),
        Err(Error::NonSquarefreeFactor { index: 1, var: 1 })
    ));
}

#[test]
fn partial_fraction_examples() {
    let fd = prepare_denominator(&[(z(0), 1), (z(0).sub(&z(1)), 1)], 0).unwrap();
    let pfd = partial_fractions(&fd).unwrap();
    assert_eq!(pfd.coefficient(0, 1).unwrap(), &ratfn(c(-1), z(1)));
    assert_eq!(pfd.coefficient(1, 1).unwrap(), &ratfn(c(1), z(1)));
    assert!(pfd.polynomial_part.is_zero());
    // z2⁻¹(1/(z1 − z2) − 1/z1) = 1/(z1(z1 − z2))
    let direct = ratfn(c(1), z(1))
        .mul(&ratfn(c(1), z(0).sub(&z(1))).sub(&ratfn(c(1), z(0))));
    assert_eq!(direct, ratfn(c(1), z(0).mul(&z(0).sub(&z(1)))));
    assert_eq!(pfd.recombine(&fd), direct);

    let fd = prepare_denominator(&[(parabola(), 1)], 0).unwrap();
    let pfd = partial_fractions(&fd).unwrap();
    assert_eq!(pfd.entries.len(), 1);
    assert!(pfd.coefficient(0, 1).unwrap().is_one());

    let fd = prepare_denominator(&[(parabola(), 2)], 0).unwrap();
    let pfd = partial_fractions(&fd).unwrap();
    assert!(pfd.coefficient(0, 2).unwrap().is_one());
    assert!(pfd.coefficient(0, 1).unwrap().is_zero());
}

#[test]
fn simple_pole_holomorphy_examples() {
    let cusp = z(0).mul(&z(0)).sub(&z(1).pow(3));
    for f in [parabola(), cusp] {
        let pfd = partial_fractions(&prepare_denominator(&[(f, 1)], 0).unwrap()).unwrap();
        let report = check_simple_pole_holomorphy(&pfd).unwrap();
        assert!(report.iter().all(|r| r.holomorphic_at_origin));
    }
    let fd = prepare_denominator(&[(z(0), 1), (z(0).sub(&z(1)), 1)], 0).unwrap();
    let report = check_simple_pole_holomorphy(&partial_fractions(&fd).unwrap()).unwrap();
    assert!(report.iter().all(|r| !r.holomorphic_at_origin && r.reduced_denominator == z(1)));

    let fd = prepare_denominator(&[(parabola(), 2)], 0).unwrap();
    assert_eq!(
        check_simple_pole_holomorphy(&partial_fractions(&fd).unwrap()).unwrap_err(),
        Error::MultiplePole { component: 1, multiplicity: 2 }
    );
}

#[test]
fn coefficient_denominators_divide_discriminant_powers() {
    let cases = vec![
        vec![(z(0), 1), (z(0).sub(&z(1)), 1)],
        vec![(parabola(), 2), (z(0).sub(&c(2)), 1)],
        vec![(z(0).sub(&z(1)), 3), (z(0).add(&z(1)), 2)],
        vec![(z(0).pow(3).sub(&z(1)), 1), (z(0).add(&c(1)), 2)],
    ];
    for factors in cases {
        let total: u32 = factors.iter().map(|f| f.1).sum();
        let fd = prepare_denominator(&factors, 0).unwrap();
        let pfd = partial_fractions(&fd).unwrap();
        assert!(pfd.recombine(&fd).sub(&ratfn(c(1), fd.product())).is_zero());
        let m = pfd.denominator_exponent(&fd.discriminant).expect("denominator divides a power of B");
        assert!(m <= total, "exponent {m} exceeds {total}");
    }
}

fn small_factor() -> impl Strategy<Value = MultiPoly> {
    (1u32..=2, proptest::collection::vec((0u32..2, 0u32..3, -3i64..=3, -1i64..=1), 0..3), 1i64..=3)
        .prop_map(|(deg, rest, lead)| {
            let mut p = MultiPoly::monomial(2, vec![deg, 0], GaussianRational::from(lead));
            for (a, b, re, im) in rest {
                if a < deg {
                    p = p.add(&MultiPoly::monomial(2, vec![a, b], GaussianRational::from_integers(re, im)));
                }
            }
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_fractions_recombine(
        a in small_factor(), b in small_factor(), ra in 1u32..=2, rb in 1u32..=2,
    ) {
        let Ok(fd) = prepare_denominator(&[(a, ra), (b, rb)], 0) else {
            return Ok(());
        };
        let pfd = partial_fractions(&fd).unwrap();
        prop_assert!(pfd.polynomial_part.is_zero());
        prop_assert!(pfd.recombine(&fd).sub(&ratfn(c(1), fd.product())).is_zero());
        for e in &pfd.entries {
            let deg = fd.factors[e.factor].poly.degree_in(0).unwrap();
            prop_assert!(e.coeff.den().is_free_of(0));
            prop_assert!(e.coeff.num().degree_in(0).map_or(true, |d| d < deg));
        }
        let base = fd.factors.iter().fold(fd.discriminant.clone(), |acc, f| acc.mul(&f.leading));
        let m = pfd.denominator_exponent(&base);
        prop_assert!(m.is_some_and(|m| m <= ra + rb));
    }
}

/// `Σ β_α ∂^α h/∂z1^α` for a polynomial `h`.
fn apply_to_poly(betas: &[RatFn], h: &MultiPoly) -> RatFn {
    let mut acc = RatFn::zero(h.nvars());
    let mut d = h.clone();
    for b in betas {
        d = d.partial_derivative(0).unwrap();
        acc = acc.add(&b.mul(&RatFn::from_poly(d.clone())));
    }
    acc
}

#[test]
fn transverse_operator_examples() {
    let t = transverse_operator(&parabola(), 0, 1).unwrap();
    assert_eq!(t.betas, vec![RatFn::one(2)]);

    let t = transverse_operator(&parabola(), 0, 2).unwrap();
    assert_eq!(t.betas, vec![RatFn::from_poly(c(-2)), RatFn::from_poly(z(0).scale(&2.into()))]);
    // h = z1³ = (ρ + z2)^{3/2}: ∂²h/∂ρ² = (3/4)/z1
    let dh = apply_to_poly(&t.betas, &z(0).pow(3));
    let lhs = dh.mul(&RatFn::from_poly(z(0).scale(&2.into())).pow(-3).unwrap());
    assert_eq!(lhs, ratfn(c(3), z(0).scale(&4.into())));

    let line = z(0).sub(&z(1));
    for s in 1..=4 {
        let t = transverse_operator(&line, 0, s).unwrap();
        let (last, rest) = t.betas.split_last().unwrap();
        assert!(last.is_one());
        assert!(rest.iter().all(RatFn::is_zero));
    }
    assert!(matches!(
        transverse_operator(&z(1), 0, 2),
        Err(Error::FactorFreeOfVariable { .. })
    ));
}

/// Numerical `∂^s/∂ρ^s` of the polarized `h` at `(w0, y)` along the fibre
/// `ρ(w, y) = const`, from a Cauchy integral in the `ρ`-plane.
fn cauchy_rho_derivative(
    rho: &MultiPoly,
    h: &impl Fn(Complex64) -> Complex64,
    w0: Complex64,
    y: Complex64,
    s: u32,
    radius: f64,
) -> Complex64 {
    let rho_n = rho.to_numeric();
    let drho_n = rho.partial_derivative(0).unwrap().to_numeric();
    let r0 = rho_n.eval(&[w0, y]);
    let nodes = 64;
    let mut w = w0;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=nodes {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let e = Complex64::from_polar(1.0, theta);
        let target = r0 + e * radius;
        if k == 0 {
            w += (target - r0) / drho_n.eval(&[w0, y]);
        }
        for _ in 0..50 {
            let step = (rho_n.eval(&[w, y]) - target) / drho_n.eval(&[w, y]);
            w -= step;
            if step.norm() < 1e-15 * (1.0 + w.norm()) {
                break;
            }
        }
        if k < nodes {
            acc += h(w) * e.powi(-(s as i32));
        }
    }
    let fact: f64 = (1..=s).map(f64::from).product();
    acc * fact / (nodes as f64 * radius.powi(s as i32))
}

fn random_bump(rng: &mut ChaCha8Rng, support: &Support) -> BumpFunction {
    let p = (0..4).fold(MultiPoly::zero(4), |acc, _| {
        let e: Vec<u32> = (0..4).map(|_| rng.gen_range(0..3)).collect();
        let c = GaussianRational::from_integers(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        acc.add(&MultiPoly::monomial(4, e, c))
    });
    BumpFunction::standard(support.clone(), p).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    [
        Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)),
        Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)),
    ]
}

#[test]
fn transverse_operator_matches_cauchy_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let support = Support::origin(2, BigRational::from_integer(3.into()));
    let twisted = z(0).pow(3).sub(&z(0).mul(&z(1).pow(2))).add(&z(1));
    for rho in [parabola(), twisted] {
        let drho = rho.partial_derivative(0).unwrap().to_numeric();
        for s in 1..=3 {
            let t = transverse_operator(&rho, 0, s).unwrap();
            let h = random_bump(&mut rng, &support);
            let dh = t.apply(&h).unwrap().to_numeric();
            let hn = h.to_numeric();
            let mut checked = 0;
            while checked < 20 {
                let p = random_point(&mut rng);
                let d = drho.eval(&p);
                if d.norm() < 0.5 {
                    continue;
                }
                let u = [p[0].conj(), p[1].conj()];
                let f = |w: Complex64| hn.eval_polarized(&[w, p[1]], &u);
                let radius = 0.02 * d.norm().min(1.0).powi(2);
                let oracle = cauchy_rho_derivative(&rho, &f, p[0], p[1], s, radius);
                let exact = dh.eval(&p) * d.powi(-(2 * s as i32 - 1));
                let scale = exact.norm().max(oracle.norm()).max(1e-12);
                assert!(
                    (exact - oracle).norm() / scale < 1e-8,
                    "s={s} at {p:?}: {exact} vs {oracle}"
                );
                checked += 1;
            }
        }
    }
}

#[test]
fn residue_operator_table() {
    let fd = prepare_denominator(&[(parabola(), 1)], 0).unwrap();
    let pfd = partial_fractions(&fd).unwrap();
    let data = residue_operator_data(&pfd, &fd).unwrap();
    assert_eq!(data.entries.len(), 1);
    let e = data.get(0, 1, 0).unwrap();
    assert!(e.is_identity());
    assert_eq!(e.g, ratfn(c(1), z(0).scale(&2.into())));

    let fd = prepare_denominator(&[(parabola(), 2)], 0).unwrap();
    let data = residue_operator_data(&partial_fractions(&fd).unwrap(), &fd).unwrap();
    let keys: Vec<_> = data.entries.iter().map(|e| (e.order, e.l)).collect();
    for k in [(1, 0), (2, 0), (2, 1)] {
        assert!(keys.contains(&k));
    }
    assert!(data.get(0, 2, 1).unwrap().is_identity());
    assert!(!data.get(0, 2, 0).unwrap().is_identity());

    let fd = prepare_denominator(&[(parabola(), 3)], 0).unwrap();
    let data = residue_operator_data(&partial_fractions(&fd).unwrap(), &fd).unwrap();
    assert_eq!(data.get(0, 3, 1).unwrap().binomial, 2);
}

/// `Σ_l g_l^μ · (transposed op)(F)` must equal `∂^{μ−1}(c_μ/ρ' · F)/∂ρ^{μ−1}`.
#[test]
fn residue_operator_reproduces_leibniz_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let support = Support::origin(2, BigRational::from_integer(3.into()));
    let fd = prepare_denominator(&[(parabola(), 3), (z(0).sub(&c(2)), 1)], 0).unwrap();
    let pfd = partial_fractions(&fd).unwrap();
    let data = residue_operator_data(&pfd, &fd).unwrap();
    let rho = parabola();
    let drho = rho.partial_derivative(0).unwrap();
    let f = random_bump(&mut rng, &support);
    for mu in 1..=3u32 {
        let coeff = pfd.coefficient(0, mu).unwrap();
        let weight = coeff.div(&RatFn::from_poly(drho.clone())).unwrap().to_numeric();
        let parts: Vec<_> = (0..mu)
            .map(|l| {
                let e = data.get(0, mu, l).unwrap();
                (e.g.to_numeric(), e.apply_to_test(0, &f).unwrap().to_numeric())
            })
            .collect();
        let fnum = f.to_numeric();
        let mut checked = 0;
        while checked < 10 {
            let p = random_point(&mut rng);
            let d = drho.to_numeric().eval(&p);
            if d.norm() < 0.5 || (p[0] - 2.0).norm() < 0.5 {
                continue;
            }
            let formula: Complex64 = parts.iter().map(|(g, op)| g.eval(&p) * op.eval(&p)).sum();
            let u = [p[0].conj(), p[1].conj()];
            let h = |w: Complex64| weight.eval(&[w, p[1]]) * fnum.eval_polarized(&[w, p[1]], &u);
            let oracle = if mu == 1 {
                h(p[0])
            } else {
                cauchy_rho_derivative(&rho, &h, p[0], p[1], mu - 1, 0.02 * d.norm().min(1.0).powi(2))
            };
            let scale = formula.norm().max(oracle.norm()).max(1e-12);
            assert!((formula - oracle).norm() / scale < 1e-8, "mu={mu}: {formula} vs {oracle}");
            checked += 1;
        }
    }
}
