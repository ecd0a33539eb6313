//! JSON documents for polynomials, rational functions, forms, denominators,
//! test forms and quadrature settings.
//!
//! Exact rationals travel as `"p/q"` strings and indices are 1-based. Every
//! reader reports failures with the JSON pointer of the offending value and
//! collects warnings for inputs it had to canonicalize.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use residuum_core::algebra::rational::{format_rational, parse_rational};
use residuum_core::algebra::{GaussianRational, MultiPoly, RatFn};
use residuum_core::forms::{basis, BumpFunction, Key, MeroForm, Support, TestForm};
use residuum_core::numeric::QuadratureConfig;
use serde_json::{json, Map, Number, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "schema violation at {at}: {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

pub type SchemaResult<T> = std::result::Result<T, SchemaError>;

fn violation<T>(pointer: &str, message: impl Into<String>) -> SchemaResult<T> {
    Err(SchemaError { pointer: pointer.to_string(), message: message.into() })
}

fn child(pointer: &str, key: impl fmt::Display) -> String {
    format!("{pointer}/{key}")
}

/// A test form given by a named generator.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFormSpec {
    /// `Σ_K P_K χ dz_K` with explicit polynomial parts in `(z, z̄)`.
    Cutoff { nvars: usize, degree: usize, support: Support, terms: BTreeMap<Key, MultiPoly> },
    /// Every listed key carries a seeded polynomial of total degree ≤ 3 in
    /// `(z, z̄)` times the cutoff.
    Generic { nvars: usize, degree: usize, support: Support, keys: Vec<Key>, seed: u64 },
}

impl TestFormSpec {
    pub fn nvars(&self) -> usize {
        match self {
            Self::Cutoff { nvars, .. } | Self::Generic { nvars, .. } => *nvars,
        }
    }

    pub fn support(&self) -> &Support {
        match self {
            Self::Cutoff { support, .. } | Self::Generic { support, .. } => support,
        }
    }

    pub fn build(&self) -> residuum_core::Result<TestForm> {
        match self {
            Self::Cutoff { nvars, degree, support, terms } => {
                let terms = terms
                    .iter()
                    .map(|(k, p)| Ok((k.clone(), BumpFunction::standard(support.clone(), p.clone())?)))
                    .collect::<residuum_core::Result<Vec<_>>>()?;
                TestForm::from_terms(*nvars, *degree, terms)
            }
            Self::Generic { nvars, degree, support, keys, seed } => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                let terms = keys
                    .iter()
                    .map(|k| Ok((k.clone(), BumpFunction::standard(support.clone(), generic_poly(*nvars, &mut rng))?)))
                    .collect::<residuum_core::Result<Vec<_>>>()?;
                TestForm::from_terms(*nvars, *degree, terms)
            }
        }
    }
}

/// All monomials of total degree ≤ 3 in `(z, z̄)` with coefficients
/// `(a + ib)/4`, `a, b ∈ [−4, 4]`.
fn generic_poly(nvars: usize, rng: &mut impl Rng) -> MultiPoly {
    let m = 2 * nvars;
    let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..m {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                let used: u32 = e.iter().sum();
                (0..=3 - used).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    MultiPoly::from_terms(
        m,
        exps.into_iter().map(|e| {
            let re = BigRational::new(rng.gen_range(-4i64..=4).into(), 4.into());
            let im = BigRational::new(rng.gen_range(-4i64..=4).into(), 4.into());
            (e, GaussianRational::new(re, im))
        }),
    )
}

/// Reads documents, collecting canonicalization warnings.
#[derive(Default)]
pub struct Reader {
    pub warnings: Vec<String>,
}

impl Reader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object<'a>(&self, v: &'a Value, ptr: &str, allowed: &[&str]) -> SchemaResult<&'a Map<String, Value>> {
        let Some(map) = v.as_object() else {
            return violation(ptr, "expected an object");
        };
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return violation(&child(ptr, k), "unknown field");
        }
        Ok(map)
    }

    pub fn field<'a>(&self, map: &'a Map<String, Value>, key: &str, ptr: &str) -> SchemaResult<&'a Value> {
        map.get(key).map_or_else(|| violation(ptr, format!("missing field \"{key}\"")), Ok)
    }

    pub fn uint(&self, v: &Value, ptr: &str) -> SchemaResult<u64> {
        v.as_u64().map_or_else(|| violation(ptr, "expected a non-negative integer"), Ok)
    }

    pub fn float(&self, v: &Value, ptr: &str) -> SchemaResult<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => violation(ptr, "expected a finite number"),
        }
    }

    pub fn array<'a>(&self, v: &'a Value, ptr: &str) -> SchemaResult<&'a Vec<Value>> {
        v.as_array().map_or_else(|| violation(ptr, "expected an array"), Ok)
    }

    pub fn rational(&mut self, v: &Value, ptr: &str) -> SchemaResult<BigRational> {
        let Some(s) = v.as_str() else {
            return violation(ptr, "expected a rational string \"p/q\"");
        };
        let Some((r, reduced)) = parse_rational(s) else {
            return violation(ptr, format!("malformed rational \"{s}\""));
        };
        if !reduced {
            self.warnings.push(format!("NonReducedFraction at {ptr}: \"{s}\" read as \"{}\"", format_rational(&r)));
        }
        Ok(r)
    }

    pub fn gaussian(&mut self, v: &Value, ptr: &str) -> SchemaResult<GaussianRational> {
        let map = self.object(v, ptr, &["re", "im"])?;
        let re = self.rational(self.field(map, "re", ptr)?, &child(ptr, "re"))?;
        let im = self.rational(self.field(map, "im", ptr)?, &child(ptr, "im"))?;
        Ok(GaussianRational::new(re, im))
    }

    /// 1-based index in `1..=bound`, returned 0-based.
    pub fn index(&self, v: &Value, ptr: &str, bound: usize) -> SchemaResult<usize> {
        let i = self.uint(v, ptr)?;
        if i == 0 || i as usize > bound {
            return violation(ptr, format!("index {i} outside 1..={bound}"));
        }
        Ok(i as usize - 1)
    }

    pub fn poly(&mut self, v: &Value, ptr: &str) -> SchemaResult<MultiPoly> {
        let map = self.object(v, ptr, &["nvars", "terms"])?;
        let nvars = self.uint(self.field(map, "nvars", ptr)?, &child(ptr, "nvars"))? as usize;
        let tp = child(ptr, "terms");
        let mut terms = Vec::new();
        for (i, t) in self.array(self.field(map, "terms", ptr)?, &tp)?.iter().enumerate() {
            let p = child(&tp, i);
            let tm = self.object(t, &p, &["exp", "re", "im"])?;
            let ep = child(&p, "exp");
            let exps = self.array(self.field(tm, "exp", &p)?, &ep)?;
            if exps.len() != nvars {
                return violation(&ep, format!("exponent vector has length {}, expected {nvars}", exps.len()));
            }
            let e = exps
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let v = self.uint(x, &child(&ep, k))?;
                    u32::try_from(v).map_or_else(|_| violation(&child(&ep, k), "exponent too large"), Ok)
                })
                .collect::<SchemaResult<Vec<u32>>>()?;
            let re = self.rational(self.field(tm, "re", &p)?, &child(&p, "re"))?;
            let im = self.rational(self.field(tm, "im", &p)?, &child(&p, "im"))?;
            terms.push((e, GaussianRational::new(re, im)));
        }
        Ok(MultiPoly::from_terms(nvars, terms))
    }

    pub fn ratfn(&mut self, v: &Value, ptr: &str) -> SchemaResult<RatFn> {
        let map = self.object(v, ptr, &["num", "den"])?;
        let num = self.poly(self.field(map, "num", ptr)?, &child(ptr, "num"))?;
        let den = self.poly(self.field(map, "den", ptr)?, &child(ptr, "den"))?;
        if num.nvars() != den.nvars() {
            return violation(&child(ptr, "den"), "numerator and denominator have different nvars");
        }
        if den.is_zero() {
            return violation(&child(ptr, "den"), "zero denominator");
        }
        Ok(RatFn::new(num, den).expect("checked ring and denominator"))
    }

    /// Sorted key and sign from 1-based differential indices in `1..=bound`.
    fn key(&self, v: &Value, ptr: &str, degree: usize, bound: usize) -> SchemaResult<(Key, bool)> {
        let idx = self.array(v, ptr)?;
        if idx.len() != degree {
            return violation(ptr, format!("{} differentials in a {degree}-form", idx.len()));
        }
        let raw = idx.iter().enumerate().map(|(k, x)| self.index(x, &child(ptr, k), bound)).collect::<SchemaResult<Vec<_>>>()?;
        basis::sort_key(&raw).map_or_else(|| violation(ptr, "repeated differential"), Ok)
    }

    pub fn mero_form(&mut self, v: &Value, ptr: &str) -> SchemaResult<MeroForm> {
        let map = self.object(v, ptr, &["nvars", "degree", "coeffs"])?;
        let nvars = self.uint(self.field(map, "nvars", ptr)?, &child(ptr, "nvars"))? as usize;
        let degree = self.uint(self.field(map, "degree", ptr)?, &child(ptr, "degree"))? as usize;
        if degree > nvars {
            return violation(&child(ptr, "degree"), format!("degree {degree} exceeds nvars {nvars}"));
        }
        let cp = child(ptr, "coeffs");
        let mut terms = Vec::new();
        for (i, t) in self.array(self.field(map, "coeffs", ptr)?, &cp)?.iter().enumerate() {
            let p = child(&cp, i);
            let tm = self.object(t, &p, &["I", "fn"])?;
            let (key, odd) = self.key(self.field(tm, "I", &p)?, &child(&p, "I"), degree, nvars)?;
            let c = self.ratfn(self.field(tm, "fn", &p)?, &child(&p, "fn"))?;
            if c.nvars() != nvars {
                return violation(&child(&p, "fn"), format!("coefficient has {} variables, expected {nvars}", c.nvars()));
            }
            terms.push((key, if odd { c.neg() } else { c }));
        }
        Ok(MeroForm::from_terms(nvars, degree, terms).expect("validated terms"))
    }

    pub fn factors(&mut self, v: &Value, ptr: &str) -> SchemaResult<Vec<(MultiPoly, u32)>> {
        let mut out = Vec::new();
        let mut nvars = None;
        for (i, f) in self.array(v, ptr)?.iter().enumerate() {
            let p = child(ptr, i);
            let m = self.object(f, &p, &["poly", "multiplicity"])?;
            let poly = self.poly(self.field(m, "poly", &p)?, &child(&p, "poly"))?;
            let mp = child(&p, "multiplicity");
            let r = self.uint(self.field(m, "multiplicity", &p)?, &mp)?;
            if r == 0 || r > u32::MAX as u64 {
                return violation(&mp, "multiplicity must be a positive integer");
            }
            if poly.is_constant() {
                return violation(&child(&p, "poly"), "factor must be nonconstant");
            }
            if *nvars.get_or_insert(poly.nvars()) != poly.nvars() {
                return violation(&child(&p, "poly"), "factors have different nvars");
            }
            out.push((poly, r as u32));
        }
        if out.is_empty() {
            return violation(ptr, "at least one factor is required");
        }
        Ok(out)
    }

    pub fn support(&mut self, v: &Value, ptr: &str) -> SchemaResult<Support> {
        let map = self.object(v, ptr, &["center", "radius", "radius_sq"])?;
        let cp = child(ptr, "center");
        let center = self
            .array(self.field(map, "center", ptr)?, &cp)?
            .iter()
            .enumerate()
            .map(|(i, c)| self.gaussian(c, &child(&cp, i)))
            .collect::<SchemaResult<Vec<_>>>()?;
        let radius_sq = match (map.get("radius"), map.get("radius_sq")) {
            (Some(r), None) => {
                let r = self.rational(r, &child(ptr, "radius"))?;
                &r * &r
            }
            (None, Some(r)) => self.rational(r, &child(ptr, "radius_sq"))?,
            _ => return violation(ptr, "exactly one of \"radius\" and \"radius_sq\" is required"),
        };
        if !radius_sq.is_positive() {
            return violation(ptr, "support radius must be positive");
        }
        Ok(Support::new(center, radius_sq).expect("positive radius"))
    }

    pub fn test_form(&mut self, v: &Value, ptr: &str) -> SchemaResult<TestFormSpec> {
        let map = self.object(v, ptr, &["generator", "nvars", "degree", "support", "terms", "keys", "seed"])?;
        let gen = self.field(map, "generator", ptr)?.as_str().unwrap_or_default().to_string();
        let nvars = self.uint(self.field(map, "nvars", ptr)?, &child(ptr, "nvars"))? as usize;
        let degree = self.uint(self.field(map, "degree", ptr)?, &child(ptr, "degree"))? as usize;
        if degree > 2 * nvars {
            return violation(&child(ptr, "degree"), format!("degree {degree} exceeds 2·nvars"));
        }
        let support = self.support(self.field(map, "support", ptr)?, &child(ptr, "support"))?;
        if support.nvars() != nvars {
            return violation(&child(ptr, "support"), format!("support centre has {} coordinates", support.nvars()));
        }
        match gen.as_str() {
            "cutoff" => {
                if let Some(k) = ["keys", "seed"].iter().find(|k| map.contains_key(**k)) {
                    return violation(&child(ptr, k), "not a field of the cutoff generator");
                }
                let tp = child(ptr, "terms");
                let mut terms: BTreeMap<Key, MultiPoly> = BTreeMap::new();
                for (i, t) in self.array(self.field(map, "terms", ptr)?, &tp)?.iter().enumerate() {
                    let p = child(&tp, i);
                    let tm = self.object(t, &p, &["I", "poly"])?;
                    let (key, odd) = self.key(self.field(tm, "I", &p)?, &child(&p, "I"), degree, 2 * nvars)?;
                    let poly = self.poly(self.field(tm, "poly", &p)?, &child(&p, "poly"))?;
                    if poly.nvars() != 2 * nvars {
                        return violation(&child(&p, "poly"), format!("polynomial part must live in {} variables (z, z̄)", 2 * nvars));
                    }
                    let poly = if odd { poly.neg() } else { poly };
                    let sum = terms.remove(&key).map_or(poly.clone(), |old| old.add(&poly));
                    if !sum.is_zero() {
                        terms.insert(key, sum);
                    }
                }
                Ok(TestFormSpec::Cutoff { nvars, degree, support, terms })
            }
            "generic" => {
                if map.contains_key("terms") {
                    return violation(&child(ptr, "terms"), "not a field of the generic generator");
                }
                let kp = child(ptr, "keys");
                let mut keys = self
                    .array(self.field(map, "keys", ptr)?, &kp)?
                    .iter()
                    .enumerate()
                    .map(|(i, k)| Ok(self.key(k, &child(&kp, i), degree, 2 * nvars)?.0))
                    .collect::<SchemaResult<Vec<_>>>()?;
                keys.sort();
                keys.dedup();
                let seed = self.uint(self.field(map, "seed", ptr)?, &child(ptr, "seed"))?;
                Ok(TestFormSpec::Generic { nvars, degree, support, keys, seed })
            }
            other => violation(&child(ptr, "generator"), format!("unknown generator \"{other}\"")),
        }
    }

    /// Quadrature settings; absent fields keep their defaults.
    pub fn config(&mut self, v: &Value, ptr: &str) -> SchemaResult<QuadratureConfig> {
        let map = self.object(v, ptr, CONFIG_FIELDS)?;
        let mut cfg = QuadratureConfig::default();
        for (k, x) in map {
            let p = child(ptr, k);
            let u = |r: &Self| r.uint(x, &p).map(|v| v as usize);
            match k.as_str() {
                "n_theta" => cfg.n_theta = u(self)?,
                "eps0" => cfg.eps0 = if x.is_null() { None } else { Some(self.float(x, &p)?) },
                "eps_levels" => cfg.eps_levels = u(self)?,
                "delta0" => cfg.delta0 = self.float(x, &p)?,
                "delta_levels" => cfg.delta_levels = u(self)?,
                "y_radial" => cfg.y_radial = u(self)?,
                "y_angular" => cfg.y_angular = u(self)?,
                "newton_tol" => cfg.newton_tol = self.float(x, &p)?,
                "newton_max_iter" => cfg.newton_max_iter = u(self)?,
                "richardson_levels" => cfg.richardson_levels = u(self)?,
                "tolerance" => cfg.tolerance = self.float(x, &p)?,
                _ => unreachable!("field list checked"),
            }
        }
        if let Err(e) = cfg.validate() {
            return violation(ptr, e.to_string());
        }
        Ok(cfg)
    }
}

const CONFIG_FIELDS: &[&str] = &[
    "n_theta",
    "eps0",
    "eps_levels",
    "delta0",
    "delta_levels",
    "y_radial",
    "y_angular",
    "newton_tol",
    "newton_max_iter",
    "richardson_levels",
    "tolerance",
];

pub fn write_rational(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

pub fn write_gaussian(c: &GaussianRational) -> Value {
    json!({ "re": write_rational(&c.re), "im": write_rational(&c.im) })
}

/// Leading terms first.
pub fn write_poly(p: &MultiPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .rev()
        .map(|(m, c)| json!({ "exp": m.0.clone(), "re": write_rational(&c.re), "im": write_rational(&c.im) }))
        .collect();
    json!({ "nvars": p.nvars(), "terms": terms })
}

pub fn write_ratfn(r: &RatFn) -> Value {
    json!({ "num": write_poly(r.num()), "den": write_poly(r.den()) })
}

fn write_key(k: &[usize]) -> Value {
    Value::from(k.iter().map(|&i| i + 1).collect::<Vec<_>>())
}

pub fn write_mero_form(w: &MeroForm) -> Value {
    let coeffs: Vec<Value> = w.terms().map(|(k, c)| json!({ "I": write_key(k), "fn": write_ratfn(c) })).collect();
    json!({ "nvars": w.nvars(), "degree": w.degree(), "coeffs": coeffs })
}

pub fn write_factors(f: &[(MultiPoly, u32)]) -> Value {
    Value::from(f.iter().map(|(p, r)| json!({ "poly": write_poly(p), "multiplicity": r })).collect::<Vec<_>>())
}

pub fn write_support(s: &Support) -> Value {
    let center: Vec<Value> = s.center().iter().map(write_gaussian).collect();
    match exact_sqrt(s.radius_sq()) {
        Some(r) => json!({ "center": center, "radius": write_rational(&r) }),
        None => json!({ "center": center, "radius_sq": write_rational(s.radius_sq()) }),
    }
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let root = |x: &BigInt| {
        let s = x.sqrt();
        (&s * &s == *x).then_some(s)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

pub fn write_test_form(t: &TestFormSpec) -> Value {
    match t {
        TestFormSpec::Cutoff { nvars, degree, support, terms } => {
            let terms: Vec<Value> = terms.iter().map(|(k, p)| json!({ "I": write_key(k), "poly": write_poly(p) })).collect();
            json!({ "generator": "cutoff", "nvars": nvars, "degree": degree, "support": write_support(support), "terms": terms })
        }
        TestFormSpec::Generic { nvars, degree, support, keys, seed } => {
            let keys: Vec<Value> = keys.iter().map(|k| write_key(k)).collect();
            json!({ "generator": "generic", "nvars": nvars, "degree": degree, "support": write_support(support), "keys": keys, "seed": seed })
        }
    }
}

pub fn write_config(c: &QuadratureConfig) -> Value {
    json!({
        "n_theta": c.n_theta,
        "eps0": c.eps0.map_or(Value::Null, float),
        "eps_levels": c.eps_levels,
        "delta0": float(c.delta0),
        "delta_levels": c.delta_levels,
        "y_radial": c.y_radial,
        "y_angular": c.y_angular,
        "newton_tol": float(c.newton_tol),
        "newton_max_iter": c.newton_max_iter,
        "richardson_levels": c.richardson_levels,
        "tolerance": float(c.tolerance),
    })
}

/// A float with 17 significant digits; non-finite values become strings.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid JSON number"))
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": float(z.re), "im": float(z.im) })
}
