use proptest::prelude::*;
use residuum_core::algebra::{GaussianRational, MultiPoly, RatFn};
use residuum_core::forms::MeroForm;
use residuum_core::leray::{
    check_closed, denominator_factors, divisor_coefficients, lower_pole_order, reduced_residue,
    simple_pole_residue_form, HypersurfaceForm,
};
use residuum_core::Error;

fn z(i: usize) -> MultiPoly {
    MultiPoly::var(2, i)
}

fn k2(v: i64) -> MultiPoly {
    MultiPoly::constant(2, GaussianRational::from(v))
}

fn parabola() -> MultiPoly {
    z(0).pow(2).sub(&z(1))
}

fn rf(p: &MultiPoly) -> RatFn {
    RatFn::from_poly(p.clone())
}

fn over(num: &MultiPoly, den: &MultiPoly) -> RatFn {
    RatFn::new(num.clone(), den.clone()).unwrap()
}

fn top(c: RatFn) -> MeroForm {
    MeroForm::monomial(2, &[0, 1], c).unwrap()
}

fn dlog(f: &MultiPoly) -> MeroForm {
    MeroForm::d_log(f).unwrap()
}

#[test]
fn closedness_examples() {
    assert!(check_closed(&dlog(&parabola())).unwrap().0);
    assert!(check_closed(&top(over(&k2(1), &parabola()))).unwrap().0);
    let w = MeroForm::monomial(2, &[0], over(&z(1), &z(0))).unwrap();
    let (closed, witness) = check_closed(&w).unwrap();
    assert!(!closed);
    assert_eq!(witness, MeroForm::monomial(2, &[1, 0], over(&k2(1), &z(0))).unwrap());
}

#[test]
fn lowering_examples() {
    let rho = parabola();
    let simple = lower_pole_order(&dlog(&rho), &rho, 0, 1).unwrap();
    assert_eq!(simple.a, MeroForm::scalar(2, RatFn::one(2)));
    assert!(simple.beta.is_zero() && simple.r_terms.is_empty());

    let drho = MeroForm::differential(&rf(&rho)).unwrap();
    let double = drho.mul_fn(&rf(&rho).pow(-2).unwrap()).unwrap();
    let data = lower_pole_order(&double, &rho, 0, 2).unwrap();
    assert!(data.a.is_zero() && data.beta.is_zero());
    assert_eq!(data.r_terms, vec![(1, MeroForm::scalar(2, RatFn::constant(2, GaussianRational::from(-1))))]);
    assert_eq!(data.recombine().unwrap(), double);

    // z1 dρ/ρ² is not closed: the leftover simple-pole part stays singular
    let w = double.mul_fn(&rf(&z(0))).unwrap();
    let data = lower_pole_order(&w, &rho, 0, 2).unwrap();
    assert_eq!(data.r_terms[0].1, MeroForm::scalar(2, rf(&z(0).neg())));
    assert_eq!(data.recombine().unwrap(), w);
    assert!(!data.beta_regular);
    assert!(data.is_fibre_free());
}

#[test]
fn lowering_rejects_bad_input() {
    let rho = parabola();
    let w = top(over(&k2(1), &rho.pow(3)));
    assert!(matches!(lower_pole_order(&w, &rho, 0, 2), Err(Error::DenominatorMismatch(_))));
    // a non-closed order-2 term with no primitive
    let bad = MeroForm::monomial(2, &[1], over(&k2(1), &rho.pow(2))).unwrap();
    assert!(matches!(
        lower_pole_order(&bad, &rho, 0, 2),
        Err(Error::PoleReductionObstruction { order: 2, .. })
    ));
}

fn closed_corpus(rho: &MultiPoly, r: u32) -> Vec<MeroForm> {
    let mut out = Vec::new();
    for num in [k2(1), z(0), z(1).add(&k2(1)), z(0).mul(&z(1)).sub(&k2(3))] {
        out.push(top(over(&num, &rho.pow(r))));
    }
    let h = z(0).add(&z(1).scale(&GaussianRational::from_integers(0, 2)));
    let exact = MeroForm::differential(&over(&h, &rho.pow(r - 1))).unwrap();
    let simple = dlog(rho).scale(&GaussianRational::from_ratio(3, 2));
    out.push(exact.add(&simple).unwrap());
    out
}

#[test]
fn lowering_recombines_for_orders_two_and_three() {
    let rho = parabola();
    for r in [2, 3] {
        for w in closed_corpus(&rho, r) {
            for var in [0, 1] {
                let data = lower_pole_order(&w, &rho, var, r).unwrap();
                assert_eq!(data.recombine().unwrap(), w, "r={r} var={var}");
                assert!(data.is_fibre_free());
                assert!(data.certificate_exact && data.beta_regular);
                assert_eq!(data.r_terms.len() as u32, r - 1);
            }
        }
    }
}

#[test]
fn normal_form_examples() {
    let rho = parabola();
    let a1 = MeroForm::monomial(2, &[1], over(&k2(1), &z(0).scale(&GaussianRational::from(2)))).unwrap();
    let dz1 = MeroForm::dz(2, 0).unwrap();
    let h = HypersurfaceForm::new(0, rho.clone(), 1, a1.clone());
    assert_eq!(h.normalized().unwrap().form, dz1);
    let in_first = HypersurfaceForm::new(0, rho.clone(), 0, a1.clone()).normalized().unwrap();
    let expected = MeroForm::monomial(2, &[1], over(&z(0), &z(1).scale(&GaussianRational::from(2)))).unwrap();
    assert_eq!(in_first.form, expected);

    let multiple = MeroForm::monomial(2, &[0], rf(&rho.mul(&z(1).add(&z(0))))).unwrap();
    assert!(HypersurfaceForm::new(0, rho.clone(), 0, multiple).normalized().unwrap().form.is_zero());

    let once = in_first.normalized().unwrap();
    assert_eq!(once, in_first);

    let bad = HypersurfaceForm::new(0, z(0).pow(2).sub(&k2(1)), 1, dz1);
    assert_eq!(bad.normalized().unwrap_err(), Error::InvalidChart { var: 2 });
}

#[test]
fn normal_form_is_linear() {
    let rho = z(0).pow(3).sub(&z(0).mul(&z(1).pow(2))).add(&z(1));
    let f = MeroForm::from_terms(2, 1, [
        (vec![0], over(&z(0).pow(4), &k2(1))),
        (vec![1], over(&z(1), &z(0).add(&k2(1)))),
    ])
    .unwrap();
    let g = MeroForm::from_terms(2, 1, [(vec![0], rf(&z(0).mul(&z(1)))), (vec![1], rf(&z(0).pow(5)))]).unwrap();
    let n = |w: &MeroForm| HypersurfaceForm::new(0, rho.clone(), 0, w.clone()).normalized().unwrap().form;
    let c = GaussianRational::from_integers(2, -1);
    assert_eq!(n(&f.add(&g.scale(&c)).unwrap()), n(&f).add(&n(&g).scale(&c)).unwrap());
}

#[test]
fn simple_pole_residue_forms() {
    let rho = parabola();
    let w = top(over(&k2(1), &rho));
    let factors = [(rho.clone(), 1)];
    let a1 = simple_pole_residue_form(&w, &factors, 0, 0).unwrap();
    let expected = MeroForm::monomial(2, &[1], over(&k2(1), &z(0).scale(&GaussianRational::from(2)))).unwrap();
    assert_eq!(a1.form, expected);
    let a2 = simple_pole_residue_form(&w, &factors, 0, 1).unwrap();
    assert_eq!(a2.form, MeroForm::dz(2, 0).unwrap());
    assert!(a1.equivalent(&a2).unwrap());
    assert!(a2.equivalent(&a1).unwrap());
    assert_eq!(a1.normalized().unwrap().form, a2.in_chart(0).unwrap().form);

    let a = simple_pole_residue_form(&dlog(&rho), &factors, 0, 0).unwrap();
    assert_eq!(a.constant_value().unwrap(), Some(GaussianRational::one()));

    let zn = MultiPoly::var(1, 0);
    let w1 = MeroForm::monomial(1, &[0], over(&MultiPoly::one(1), &zn)).unwrap();
    let a = simple_pole_residue_form(&w1, &[(zn, 1)], 0, 0).unwrap();
    assert_eq!(a.constant_value().unwrap(), Some(GaussianRational::one()));

    let double = top(over(&k2(1), &rho.pow(2)));
    assert_eq!(
        simple_pole_residue_form(&double, &[(rho.clone(), 2)], 0, 0).unwrap_err(),
        Error::MultiplePole { component: 1, multiplicity: 2 }
    );
}

#[test]
fn chart_independence_on_graph_components() {
    // both charts are global for graphs z2 = h(z1) and z1 = h(z2)
    let comps = [parabola(), z(1).pow(3).sub(&z(0)).add(&z(1)), z(0).sub(&z(1).scale(&GaussianRational::from(2)))];
    for rho in comps {
        for num in [k2(1), z(0).add(&z(1)), z(0).mul(&z(0)).sub(&k2(2))] {
            let w = top(over(&num, &rho));
            let f = [(rho.clone(), 1)];
            let a1 = simple_pole_residue_form(&w, &f, 0, 0).unwrap();
            let a2 = simple_pole_residue_form(&w, &f, 0, 1).unwrap();
            assert!(a1.equivalent(&a2).unwrap(), "{rho}: {a1} vs {a2}");
        }
    }
}

#[test]
fn reduced_residue_examples() {
    let rho = parabola();
    let w = top(over(&k2(1), &rho));
    let rr = reduced_residue(&w, &[(rho.clone(), 1)]).unwrap();
    assert_eq!(rr.components.len(), 1);
    assert!(rr.s_descriptors.is_empty());
    assert_eq!(rr.components[0].var, 0);
    let a1 = HypersurfaceForm::new(0, rho.clone(), 1, MeroForm::dz(2, 0).unwrap());
    assert!(rr.components[0].residue.equivalent(&a1).unwrap());

    let drho = MeroForm::differential(&rf(&rho)).unwrap();
    let double = drho.mul_fn(&rf(&rho).pow(-2).unwrap()).unwrap();
    let rr = reduced_residue(&double, &[(rho.clone(), 2)]).unwrap();
    assert!(rr.components[0].residue.form.is_zero());
    assert_eq!(rr.s_descriptors.len(), 1);
    assert_eq!(divisor_coefficients(&rr).unwrap(), vec![(0, GaussianRational::zero())]);

    // components that are valid in different charts
    let w = dlog(&z(0).mul(&z(1)));
    let factors = denominator_factors(&w).unwrap();
    let rr = reduced_residue(&w, &factors).unwrap();
    let charts: Vec<usize> = rr.components.iter().map(|c| c.var).collect();
    assert_eq!(charts, vec![0, 1]);
    assert_eq!(
        divisor_coefficients(&rr).unwrap(),
        vec![(0, GaussianRational::one()), (1, GaussianRational::one())]
    );
}

#[test]
fn divisor_examples() {
    let r1 = parabola();
    let r2 = z(0).sub(&z(1)).sub(&k2(1));
    let f = r1.mul(&r2.pow(2));
    let w = dlog(&f);
    let rr = reduced_residue(&w, &[(r1.clone(), 1), (r2.clone(), 2)]).unwrap();
    assert_eq!(
        divisor_coefficients(&rr).unwrap(),
        vec![(0, GaussianRational::one()), (1, GaussianRational::from(2))]
    );
    // d log has simple poles only, so the common denominator merges both
    // components into one squarefree factor
    assert_eq!(denominator_factors(&w).unwrap(), vec![(r1.mul(&r2), 1)]);

    let c = GaussianRational::from_integers(3, -1);
    let w = dlog(&r1).scale(&c);
    let rr = reduced_residue(&w, &[(r1.clone(), 1)]).unwrap();
    assert_eq!(divisor_coefficients(&rr).unwrap(), vec![(0, c)]);

    let holo = MeroForm::monomial(2, &[0], rf(&z(1))).unwrap();
    let factors = denominator_factors(&holo).unwrap();
    assert!(factors.is_empty());
    assert!(divisor_coefficients(&reduced_residue(&holo, &factors).unwrap()).unwrap().is_empty());

    let non_constant = MeroForm::monomial(2, &[0], over(&z(1), &z(0))).unwrap();
    let rr = reduced_residue(&non_constant, &[(z(0), 1)]).unwrap();
    assert!(matches!(divisor_coefficients(&rr), Err(Error::NonConstantResidueForm { component: 1, .. })));
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(((0u32..3), (0u32..3), -3i64..=3, -1i64..=1), 1..=3).prop_map(|ts| {
        ts.into_iter().fold(MultiPoly::zero(2), |acc, (a, b, re, im)| {
            acc.add(&MultiPoly::monomial(2, vec![a, b], GaussianRational::from_integers(re, im)))
        })
    })
}

fn suite_factor(i: usize) -> MultiPoly {
    match i {
        0 => parabola(),
        1 => z(0).sub(&z(1)).sub(&k2(1)),
        _ => z(0).add(&k2(2)).add(&z(1).mul(&z(1))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lowering_recombines_random_closed_forms(
        num in small_poly(), h in small_poly(), r in 1u32..=3, var in 0usize..2, which in 0usize..3,
    ) {
        let rho = suite_factor(which);
        let w = top(over(&num, &rho.pow(r)));
        let data = lower_pole_order(&w, &rho, var, r).unwrap();
        prop_assert_eq!(data.recombine().unwrap(), w);
        prop_assert!(data.is_fibre_free() && data.certificate_exact && data.beta_regular);

        let one = MeroForm::differential(&over(&h, &rho.pow(r))).unwrap();
        let data = lower_pole_order(&one, &rho, var, r + 1).unwrap();
        prop_assert_eq!(data.recombine().unwrap(), one);
        prop_assert!(data.is_fibre_free() && data.certificate_exact && data.beta_regular);
    }

    #[test]
    fn divisor_of_logarithmic_derivative(e in proptest::collection::vec(0u32..3, 3)) {
        prop_assume!(e.iter().any(|&x| x > 0));
        let f = (0..3).fold(MultiPoly::one(2), |acc, i| acc.mul(&suite_factor(i).pow(e[i])));
        let w = dlog(&f);
        let factors: Vec<(MultiPoly, u32)> =
            (0..3).filter(|&i| e[i] > 0).map(|i| (suite_factor(i), e[i])).collect();
        let rr = reduced_residue(&w, &factors).unwrap();
        let div = divisor_coefficients(&rr).unwrap();
        prop_assert_eq!(div.len(), factors.len());
        for (k, c) in div {
            prop_assert_eq!(c, GaussianRational::from(i64::from(factors[k].1)));
        }
    }
}
