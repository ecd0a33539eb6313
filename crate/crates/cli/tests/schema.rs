use num_rational::BigRational;
use proptest::prelude::*;
use residuum_cli::report::EXIT_INPUT;
use residuum_cli::schema::{
    write_config, write_factors, write_mero_form, write_poly, write_support, write_test_form, Reader, TestFormSpec,
};
use residuum_cli::{run, Command};
use residuum_core::algebra::{GaussianRational, MultiPoly, RatFn};
use residuum_core::forms::{MeroForm, Support};
use residuum_core::numeric::QuadratureConfig;
use serde_json::{json, Value};

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-9i64..=9, 1i64..=6, -9i64..=9, 1i64..=6).prop_map(|(a, b, c, d)| {
        GaussianRational::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
    })
}

fn poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((proptest::collection::vec(0u32..4, nvars), gaussian()), 0..5)
        .prop_map(move |terms| MultiPoly::from_terms(nvars, terms))
}

fn nonzero_poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    poly(nvars).prop_filter("nonzero", |p| !p.is_zero())
}

fn mero_form() -> impl Strategy<Value = MeroForm> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, degree)| {
            let keys = subsets(n, degree);
            let len = keys.len();
            (Just(n), Just(degree), proptest::collection::vec((0..len, poly(n), nonzero_poly(n)), 0..3), Just(keys))
        })
        .prop_map(|(n, degree, terms, keys)| {
            let mut w = MeroForm::zero(n, degree);
            for (i, num, den) in terms {
                let t = MeroForm::monomial(n, &keys[i], RatFn::new(num, den).unwrap()).unwrap();
                w = w.add(&t).unwrap();
            }
            w
        })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..n)
        .flat_map(|first| {
            subsets(n, k - 1).into_iter().filter(move |s| s.first().is_none_or(|&x| x > first)).map(move |mut s| {
                s.insert(0, first);
                s
            })
        })
        .collect()
}

fn support(n: usize) -> impl Strategy<Value = Support> {
    (proptest::collection::vec(gaussian(), n), 1i64..50, 1i64..9)
        .prop_map(|(c, a, b)| Support::new(c, BigRational::new(a.into(), b.into())).unwrap())
}

fn test_form() -> impl Strategy<Value = TestFormSpec> {
    (1usize..=2).prop_flat_map(|n| {
        let cutoff = (support(n), proptest::collection::vec((0usize..2 * n, nonzero_poly(2 * n)), 0..3)).prop_map(
            move |(support, terms)| {
                let mut map = std::collections::BTreeMap::new();
                for (i, p) in terms {
                    map.insert(vec![i], p);
                }
                TestFormSpec::Cutoff { nvars: n, degree: 1, support, terms: map }
            },
        );
        let generic = (support(n), any::<u64>(), proptest::collection::btree_set(0usize..2 * n, 0..3)).prop_map(
            move |(support, seed, keys)| TestFormSpec::Generic {
                nvars: n,
                degree: 1,
                support,
                keys: keys.into_iter().map(|k| vec![k]).collect(),
                seed,
            },
        );
        prop_oneof![cutoff, generic]
    })
}

fn reread<T>(doc: &Value, read: impl Fn(&mut Reader, &Value) -> T) -> (T, Vec<String>) {
    let mut r = Reader::new();
    let text = serde_json::to_string(doc).unwrap();
    let parsed: Value = serde_json::from_str(&text).unwrap();
    let out = read(&mut r, &parsed);
    (out, r.warnings)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn polynomials_round_trip(p in poly(3)) {
        let (back, warnings) = reread(&write_poly(&p), |r, v| r.poly(v, "").unwrap());
        prop_assert_eq!(back, p);
        prop_assert!(warnings.is_empty());
    }

    #[test]
    fn forms_round_trip(w in mero_form()) {
        let doc = write_mero_form(&w);
        let (back, warnings) = reread(&doc, |r, v| r.mero_form(v, "").unwrap());
        prop_assert_eq!(write_mero_form(&back), doc);
        prop_assert_eq!(back, w);
        prop_assert!(warnings.is_empty());
    }

    #[test]
    fn factor_lists_round_trip(fs in proptest::collection::vec((nonzero_poly(2).prop_filter("nonconstant", |p| !p.is_constant()), 1u32..4), 1..4)) {
        let (back, _) = reread(&write_factors(&fs), |r, v| r.factors(v, "").unwrap());
        prop_assert_eq!(back, fs);
    }

    #[test]
    fn supports_and_test_forms_round_trip(t in test_form()) {
        let (s, _) = reread(&write_support(t.support()), |r, v| r.support(v, "").unwrap());
        prop_assert_eq!(&s, t.support());
        let doc = write_test_form(&t);
        let (back, _) = reread(&doc, |r, v| r.test_form(v, "").unwrap());
        prop_assert_eq!(write_test_form(&back), doc);
        prop_assert_eq!(back, t);
    }

    #[test]
    fn configs_round_trip(n_theta in 8usize..512, eps0 in proptest::option::of(1e-4f64..1.0), tol in 1e-12f64..1e-2) {
        let cfg = QuadratureConfig { n_theta, eps0, tolerance: tol, ..QuadratureConfig::default() };
        let (back, _) = reread(&write_config(&cfg), |r, v| r.config(v, "").unwrap());
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn wrong_exponent_length_points_at_the_exponent() {
    let doc = json!({ "nvars": 2, "terms": [{ "exp": [1, 0, 2], "re": "1", "im": "0" }] });
    let err = Reader::new().poly(&doc, "").unwrap_err();
    assert_eq!(err.pointer, "/terms/0/exp");
    assert!(err.to_string().starts_with("schema violation at /terms/0/exp"));

    let input = json!({ "factors": [{ "poly": doc, "multiplicity": 1 }], "var": 1 });
    let rep = run(Command::Decompose, Some(&input), None);
    assert_eq!(rep.exit_code(), EXIT_INPUT);
    assert_eq!(rep.errors[0].kind, "SchemaViolation");
    assert_eq!(rep.errors[0].location.as_deref(), Some("/factors/0/poly/terms/0/exp"));
}

#[test]
fn non_reduced_fractions_are_canonicalized_with_a_warning() {
    let mut r = Reader::new();
    let x = r.rational(&json!("2/4"), "/x").unwrap();
    assert_eq!(x, BigRational::new(1.into(), 2.into()));
    assert_eq!(r.warnings.len(), 1);
    assert!(r.warnings[0].starts_with("NonReducedFraction at /x"));

    let mut r = Reader::new();
    r.rational(&json!("-3/7"), "").unwrap();
    assert!(r.warnings.is_empty());
}

#[test]
fn malformed_documents_are_rejected() {
    let mut r = Reader::new();
    let cases = [
        (json!({ "nvars": 1, "terms": [], "extra": 0 }), "/extra"),
        (json!({ "nvars": 1 }), ""),
        (json!({ "nvars": 1, "terms": [{ "exp": [1], "re": 1, "im": "0" }] }), "/terms/0/re"),
        (json!({ "nvars": 1, "terms": [{ "exp": [1], "re": "1/0", "im": "0" }] }), "/terms/0/re"),
        (json!({ "nvars": 1, "terms": [{ "exp": [-1], "re": "1", "im": "0" }] }), "/terms/0/exp/0"),
    ];
    for (doc, ptr) in cases {
        assert_eq!(r.poly(&doc, "").unwrap_err().pointer, ptr, "{doc}");
    }
    let zero_den = json!({ "num": { "nvars": 1, "terms": [] }, "den": { "nvars": 1, "terms": [] } });
    assert_eq!(r.ratfn(&zero_den, "").unwrap_err().pointer, "/den");

    let one = json!({ "nvars": 2, "terms": [{ "exp": [0, 0], "re": "1", "im": "0" }] });
    let repeated = json!({ "nvars": 2, "degree": 2, "coeffs": [{ "I": [1, 1], "fn": { "num": one, "den": one } }] });
    assert_eq!(r.mero_form(&repeated, "").unwrap_err().pointer, "/coeffs/0/I");
    let out_of_range = json!({ "nvars": 2, "degree": 1, "coeffs": [{ "I": [3], "fn": { "num": one, "den": one } }] });
    assert_eq!(r.mero_form(&out_of_range, "").unwrap_err().pointer, "/coeffs/0/I/0");

    assert_eq!(r.config(&json!({ "n_theta": 0 }), "").unwrap_err().pointer, "");
    assert_eq!(r.config(&json!({ "bogus": 1 }), "").unwrap_err().pointer, "/bogus");
}

#[test]
fn swapped_differentials_flip_the_sign() {
    let one = json!({ "nvars": 2, "terms": [{ "exp": [0, 0], "re": "1", "im": "0" }] });
    let doc = json!({ "nvars": 2, "degree": 2, "coeffs": [{ "I": [2, 1], "fn": { "num": one, "den": one } }] });
    let w = Reader::new().mero_form(&doc, "").unwrap();
    let expected = MeroForm::monomial(2, &[0, 1], RatFn::one(2)).unwrap().neg();
    assert_eq!(w, expected);
}
