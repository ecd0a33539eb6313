//! Command jobs: typed inputs parsed from JSON, and their execution into a
//! [`Report`].

use num_complex::Complex64;
use residuum_core::algebra::{MultiPoly, RatFn};
use residuum_core::dim1::{apply_delta_current, contour_residue_numeric, laurent_parts, residue_current_1d};
use residuum_core::forms::{BumpFunction, MeroForm, Support};
use residuum_core::leray::{
    check_closed, denominator_factors, divisor_coefficients, lower_pole_order, reduced_residue, LerayData,
    ReducedResidue,
};
use residuum_core::numeric::{component_chart, eval_formula_star, exactness_test, tube_integral, QuadratureConfig};
use residuum_core::weierstrass::{check_simple_pole_holomorphy, partial_fractions, prepare_denominator};
use residuum_core::{Error, Result};
use serde_json::{json, Value};

use crate::report::{exactness_report, limit_result, ErrorEntry, Report};
use crate::schema::{
    complex, float, write_factors, write_gaussian, write_mero_form, write_poly, write_ratfn, write_support,
    write_test_form, Reader, SchemaResult, TestFormSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Decompose,
    Res1d,
    LowerPoles,
    ReducedResidue,
    EvalStar,
    EvalTube,
    VerifyExactness,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Decompose => "decompose",
            Self::Res1d => "res1d",
            Self::LowerPoles => "lower-poles",
            Self::ReducedResidue => "reduced-residue",
            Self::EvalStar => "eval-star",
            Self::EvalTube => "eval-tube",
            Self::VerifyExactness => "verify-exactness",
            Self::VerifyAll => "verify-all",
        }
    }

    pub fn needs_input(self) -> bool {
        self != Self::VerifyAll
    }
}

/// Relative difference against `max(|a|, |b|, floor)`.
pub fn rel_diff(a: Complex64, b: Complex64, floor: f64) -> f64 {
    let scale = a.norm().max(b.norm()).max(floor).max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

fn opt_factors(r: &mut Reader, map: &serde_json::Map<String, Value>) -> SchemaResult<Option<Vec<(MultiPoly, u32)>>> {
    map.get("factors").map(|v| r.factors(v, "/factors")).transpose()
}

fn factors_or_denominator(omega: &MeroForm, factors: &Option<Vec<(MultiPoly, u32)>>) -> Result<Vec<(MultiPoly, u32)>> {
    match factors {
        Some(f) => Ok(f.clone()),
        None => denominator_factors(omega),
    }
}

fn check_form_ring(omega: &MeroForm, factors: &Option<Vec<(MultiPoly, u32)>>) -> SchemaResult<()> {
    if let Some(f) = factors {
        if let Some(i) = f.iter().position(|(p, _)| p.nvars() != omega.nvars()) {
            return Err(crate::schema::SchemaError {
                pointer: format!("/factors/{i}/poly"),
                message: format!("factor lives in {} variables, the form in {}", f[i].0.nvars(), omega.nvars()),
            });
        }
    }
    Ok(())
}

fn check_test_ring(omega: &MeroForm, test: &TestFormSpec) -> SchemaResult<()> {
    if test.nvars() != omega.nvars() {
        return Err(crate::schema::SchemaError {
            pointer: "/test/nvars".into(),
            message: format!("test form lives in {} variables, the form in {}", test.nvars(), omega.nvars()),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecomposeJob {
    pub factors: Vec<(MultiPoly, u32)>,
    pub var: usize,
}

impl DecomposeJob {
    pub fn parse(r: &mut Reader, v: &Value) -> SchemaResult<Self> {
        let map = r.object(v, "", &["factors", "var"])?;
        let factors = r.factors(r.field(map, "factors", "")?, "/factors")?;
        let n = factors[0].0.nvars();
        let var = r.index(r.field(map, "var", "")?, "/var", n)?;
        Ok(Self { factors, var })
    }

    pub fn echo(&self) -> Value {
        json!({ "factors": write_factors(&self.factors), "var": self.var + 1 })
    }

    pub fn exec(&self, rep: &mut Report) -> Result<()> {
        let fd = prepare_denominator(&self.factors, self.var)?;
        let pfd = partial_fractions(&fd)?;
        let factors: Vec<Value> = fd
            .factors
            .iter()
            .map(|f| json!({ "poly": write_poly(&f.poly), "multiplicity": f.multiplicity, "leading": write_poly(&f.leading) }))
            .collect();
        rep.output(
            "denominator",
            json!({
                "var": fd.var + 1,
                "factors": factors,
                "discriminant": write_poly(&fd.discriminant),
                "unit_note": fd.unit_note,
            }),
        );
        let entries: Vec<Value> = pfd
            .entries
            .iter()
            .map(|e| json!({ "factor": e.factor + 1, "order": e.order, "coeff": write_ratfn(&e.coeff) }))
            .collect();
        rep.output("partial_fractions", Value::from(entries));
        rep.output("polynomial_part", write_ratfn(&pfd.polynomial_part));

        let target = RatFn::new(MultiPoly::one(fd.nvars()), fd.product())?;
        let exact = pfd.recombine(&fd).sub(&target).is_zero();
        rep.verdict("recombination", exact, json!({ "exact": exact }));

        let base = fd.factors.iter().fold(fd.discriminant.clone(), |acc, f| acc.mul(&f.leading));
        let bound: u32 = fd.factors.iter().map(|f| f.multiplicity).sum();
        let m = pfd.denominator_exponent(&base);
        rep.output("denominator_exponent", m.map_or(Value::Null, Value::from));
        rep.verdict(
            "denominator_divides_discriminant_power",
            m.is_some_and(|m| m <= bound),
            json!({ "exponent": m, "bound": bound }),
        );

        if fd.factors.iter().all(|f| f.multiplicity == 1) {
            let reports: Vec<Value> = check_simple_pole_holomorphy(&pfd)?
                .iter()
                .map(|h| {
                    json!({
                        "factor": h.factor + 1,
                        "holomorphic_at_origin": h.holomorphic_at_origin,
                        "reduced_denominator": write_poly(&h.reduced_denominator),
                    })
                })
                .collect();
            rep.output("simple_pole_holomorphy", Value::from(reports));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Res1dJob {
    pub g: RatFn,
    pub test: TestFormSpec,
    pub tolerance: f64,
}

impl Res1dJob {
    pub fn parse(r: &mut Reader, v: &Value) -> SchemaResult<Self> {
        let map = r.object(v, "", &["g", "test", "tolerance"])?;
        let g = r.ratfn(r.field(map, "g", "")?, "/g")?;
        if g.nvars() != 1 {
            return Err(crate::schema::SchemaError { pointer: "/g".into(), message: "g must be a function of one variable".into() });
        }
        let test = r.test_form(r.field(map, "test", "")?, "/test")?;
        if test.nvars() != 1 || !matches!(&test, TestFormSpec::Cutoff { degree: 0, .. } | TestFormSpec::Generic { degree: 0, .. }) {
            return Err(crate::schema::SchemaError {
                pointer: "/test".into(),
                message: "res1d needs a function (degree 0) of one variable".into(),
            });
        }
        let tolerance = map.get("tolerance").map_or(Ok(1e-8), |t| r.float(t, "/tolerance"))?;
        Ok(Self { g, test, tolerance })
    }

    pub fn echo(&self) -> Value {
        json!({ "g": write_ratfn(&self.g), "test": write_test_form(&self.test), "tolerance": float(self.tolerance) })
    }

    pub fn exec(&self, cfg: &QuadratureConfig, rep: &mut Report) -> Result<()> {
        let phi = function_of(&self.test)?;
        let parts = laurent_parts(&self.g)?;
        let currents = residue_current_1d(&parts);
        rep.output(
            "laurent_parts",
            Value::from(
                parts
                    .iter()
                    .map(|p| json!({ "pole": write_gaussian(&p.pole), "coeffs": p.coeffs.iter().map(write_gaussian).collect::<Vec<_>>() }))
                    .collect::<Vec<_>>(),
            ),
        );
        let mut total = Complex64::new(0.0, 0.0);
        let mut out = Vec::new();
        for c in &currents {
            let value = apply_delta_current(c, &phi)?;
            total += value;
            out.push(json!({
                "pole": write_gaussian(&c.pole),
                "coeffs": c.coeffs.iter().map(write_gaussian).collect::<Vec<_>>(),
                "two_pi_i": c.two_pi_i,
                "value": complex(value),
            }));
        }
        rep.output("currents", Value::from(out));
        rep.output("current_value", complex(total));
        let contour = contour_residue_numeric(&self.g, &phi, cfg)?;
        rep.output("contour", limit_result(&contour));
        let d = rel_diff(total, contour.value, 1e-3 * contour.mass);
        rep.verdict(
            "current_matches_contour",
            contour.converged && d < self.tolerance,
            json!({ "rel_diff": float(d), "tolerance": float(self.tolerance) }),
        );
        Ok(())
    }
}

/// The coefficient of a degree-0 test form.
fn function_of(spec: &TestFormSpec) -> Result<BumpFunction> {
    let t = spec.build()?;
    Ok(t.get(&[]).cloned().unwrap_or_else(|| BumpFunction::zero(spec.support().clone())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerPolesJob {
    pub form: MeroForm,
    pub rho: MultiPoly,
    pub var: usize,
    pub order: u32,
}

impl LowerPolesJob {
    pub fn parse(r: &mut Reader, v: &Value) -> SchemaResult<Self> {
        let map = r.object(v, "", &["form", "rho", "var", "order"])?;
        let form = r.mero_form(r.field(map, "form", "")?, "/form")?;
        let rho = r.poly(r.field(map, "rho", "")?, "/rho")?;
        if rho.nvars() != form.nvars() {
            return Err(crate::schema::SchemaError { pointer: "/rho/nvars".into(), message: "rho and form live in different rings".into() });
        }
        let var = r.index(r.field(map, "var", "")?, "/var", form.nvars())?;
        let order = r.uint(r.field(map, "order", "")?, "/order")?;
        if order == 0 || order > 64 {
            return Err(crate::schema::SchemaError { pointer: "/order".into(), message: "order must lie in 1..=64".into() });
        }
        Ok(Self { form, rho, var, order: order as u32 })
    }

    pub fn echo(&self) -> Value {
        json!({ "form": write_mero_form(&self.form), "rho": write_poly(&self.rho), "var": self.var + 1, "order": self.order })
    }

    pub fn exec(&self, rep: &mut Report) -> Result<()> {
        let data = lower_pole_order(&self.form, &self.rho, self.var, self.order)?;
        rep.output("leray", leray_json(&data));
        let exact = data.recombine()? == self.form;
        rep.verdict("recombination", exact, json!({ "exact": exact }));
        rep.verdict("free_of_fibre_differential", data.is_fibre_free(), json!({ "var": self.var + 1 }));
        Ok(())
    }
}

pub fn leray_json(d: &LerayData) -> Value {
    json!({
        "rho": write_poly(&d.rho),
        "var": d.var + 1,
        "order": d.order,
        "a": write_mero_form(&d.a),
        "beta": write_mero_form(&d.beta),
        "r_terms": d.r_terms.iter().map(|(nu, e)| json!({ "nu": nu, "e": write_mero_form(e) })).collect::<Vec<_>>(),
        "a_prime": write_mero_form(&d.a_prime),
        "c_cert": write_mero_form(&d.c_cert),
        "certificate_exact": d.certificate_exact,
        "beta_regular": d.beta_regular,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedResidueJob {
    pub form: MeroForm,
    pub factors: Option<Vec<(MultiPoly, u32)>>,
}

impl ReducedResidueJob {
    pub fn parse(r: &mut Reader, v: &Value) -> SchemaResult<Self> {
        let map = r.object(v, "", &["form", "factors"])?;
        let form = r.mero_form(r.field(map, "form", "")?, "/form")?;
        let factors = opt_factors(r, map)?;
        check_form_ring(&form, &factors)?;
        Ok(Self { form, factors })
    }

    pub fn echo(&self) -> Value {
        let mut v = json!({ "form": write_mero_form(&self.form) });
        if let Some(f) = &self.factors {
            v["factors"] = write_factors(f);
        }
        v
    }

    pub fn exec(&self, rep: &mut Report) -> Result<ReducedResidue> {
        let factors = factors_or_denominator(&self.form, &self.factors)?;
        rep.output("factors", write_factors(&factors));
        let (closed, _) = check_closed(&self.form)?;
        rep.verdict("closed", closed, json!({ "closed": closed }));
        let rr = reduced_residue(&self.form, &factors)?;
        let comps: Vec<Value> = rr
            .components
            .iter()
            .map(|c| {
                json!({
                    "component": c.component + 1,
                    "multiplicity": c.multiplicity,
                    "var": c.var + 1,
                    "rho": write_poly(&c.residue.rho),
                    "residue_form": write_mero_form(&c.residue.form),
                    "leray": leray_json(&c.leray),
                })
            })
            .collect();
        rep.output("components", Value::from(comps));
        let s: Vec<Value> = rr
            .s_descriptors
            .iter()
            .map(|s| {
                json!({
                    "component": s.component + 1,
                    "var": s.var + 1,
                    "order": s.order,
                    "l": s.l,
                    "binomial": s.binomial,
                    "gamma": write_mero_form(&s.gamma),
                    "operator": s.operator.iter().map(write_ratfn).collect::<Vec<_>>(),
                })
            })
            .collect();
        rep.output("s_descriptors", Value::from(s));
        if rr.degree == 1 {
            match divisor_coefficients(&rr) {
                Ok(div) => rep.output(
                    "divisor",
                    Value::from(div.iter().map(|(k, c)| json!({ "component": k + 1, "coeff": write_gaussian(c) })).collect::<Vec<_>>()),
                ),
                Err(e @ Error::NonConstantResidueForm { .. }) => {
                    rep.output("divisor", Value::Null);
                    rep.warnings.push(e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
        Ok(rr)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingJob {
    pub form: MeroForm,
    pub factors: Option<Vec<(MultiPoly, u32)>>,
    pub test: TestFormSpec,
    /// 0-based component for tube integrals; all components when absent.
    pub component: Option<usize>,
}

impl PairingJob {
    pub fn parse(r: &mut Reader, v: &Value, tube: bool) -> SchemaResult<Self> {
        let allowed: &[&str] = if tube { &["form", "factors", "test", "component"] } else { &["form", "factors", "test"] };
        let map = r.object(v, "", allowed)?;
        let form = r.mero_form(r.field(map, "form", "")?, "/form")?;
        let factors = opt_factors(r, map)?;
        check_form_ring(&form, &factors)?;
        let test = r.test_form(r.field(map, "test", "")?, "/test")?;
        check_test_ring(&form, &test)?;
        let component = match map.get("component") {
            Some(c) => {
                let bound = factors.as_ref().map_or(usize::MAX, Vec::len);
                Some(r.index(c, "/component", bound)?)
            }
            None => None,
        };
        Ok(Self { form, factors, test, component })
    }

    pub fn echo(&self) -> Value {
        let mut v = json!({ "form": write_mero_form(&self.form), "test": write_test_form(&self.test) });
        if let Some(f) = &self.factors {
            v["factors"] = write_factors(f);
        }
        if let Some(k) = self.component {
            v["component"] = Value::from(k + 1);
        }
        v
    }

    pub fn exec_star(&self, cfg: &QuadratureConfig, rep: &mut Report) -> Result<Complex64> {
        let factors = factors_or_denominator(&self.form, &self.factors)?;
        let phi = self.test.build()?;
        let r = eval_formula_star(&self.form, &factors, &phi, cfg)?;
        rep.output("factors", write_factors(&factors));
        rep.output("star", limit_result(&r));
        rep.verdict("converged", r.converged, json!({ "residual": float(r.residual) }));
        Ok(r.value)
    }

    pub fn exec_tube(&self, cfg: &QuadratureConfig, rep: &mut Report) -> Result<Complex64> {
        let factors = factors_or_denominator(&self.form, &self.factors)?;
        rep.output("factors", write_factors(&factors));
        if let Some(k) = self.component.filter(|&k| k >= factors.len()) {
            return Err(Error::VariableOutOfRange { var: k + 1, nvars: factors.len() });
        }
        let phi = self.test.build()?;
        let ks: Vec<usize> = self.component.map_or_else(|| (0..factors.len()).collect(), |k| vec![k]);
        let mut total = Complex64::new(0.0, 0.0);
        let mut parts = Vec::new();
        let mut converged = true;
        for k in ks {
            let var = component_chart(&factors, k)?;
            let r = tube_integral(&self.form, &phi, &factors, k, var, cfg)?;
            total += r.value;
            converged &= r.converged;
            let mut v = limit_result(&r);
            v["component"] = Value::from(k + 1);
            v["var"] = Value::from(var + 1);
            parts.push(v);
        }
        rep.output("tubes", Value::from(parts));
        rep.output("total", complex(total));
        rep.verdict("converged", converged, Value::Null);
        Ok(total)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessJob {
    pub form: MeroForm,
    pub factors: Option<Vec<(MultiPoly, u32)>>,
    pub support: Support,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl ExactnessJob {
    pub fn parse(r: &mut Reader, v: &Value) -> SchemaResult<Self> {
        let map = r.object(v, "", &["form", "factors", "support", "trials", "seed", "tolerance"])?;
        let form = r.mero_form(r.field(map, "form", "")?, "/form")?;
        let factors = opt_factors(r, map)?;
        check_form_ring(&form, &factors)?;
        let support = r.support(r.field(map, "support", "")?, "/support")?;
        if support.nvars() != form.nvars() {
            return Err(crate::schema::SchemaError { pointer: "/support/center".into(), message: "support centre has the wrong dimension".into() });
        }
        let trials = map.get("trials").map_or(Ok(20), |t| r.uint(t, "/trials"))? as usize;
        let seed = map.get("seed").map_or(Ok(0), |t| r.uint(t, "/seed"))?;
        let tolerance = map.get("tolerance").map_or(Ok(1e-5), |t| r.float(t, "/tolerance"))?;
        Ok(Self { form, factors, support, trials, seed, tolerance })
    }

    pub fn echo(&self) -> Value {
        let mut v = json!({
            "form": write_mero_form(&self.form),
            "support": write_support(&self.support),
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": float(self.tolerance),
        });
        if let Some(f) = &self.factors {
            v["factors"] = write_factors(f);
        }
        v
    }

    pub fn exec(&self, cfg: &QuadratureConfig, rep: &mut Report) -> Result<()> {
        let factors = factors_or_denominator(&self.form, &self.factors)?;
        rep.output("factors", write_factors(&factors));
        let r = exactness_test(&self.form, &factors, &self.support, self.trials, self.seed, cfg)?;
        rep.output("exactness", exactness_report(&r));
        rep.verdict("closed", r.closed, json!({ "closed": r.closed }));
        rep.verdict(
            "exact_forms_annihilated",
            r.vacuous || r.max_ratio < self.tolerance,
            json!({ "max_ratio": float(r.max_ratio), "tolerance": float(self.tolerance), "vacuous": r.vacuous }),
        );
        Ok(())
    }
}

/// A parsed job for one of the single-input commands.
#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Decompose(DecomposeJob),
    Res1d(Res1dJob),
    LowerPoles(LowerPolesJob),
    ReducedResidue(ReducedResidueJob),
    EvalStar(PairingJob),
    EvalTube(PairingJob),
    VerifyExactness(ExactnessJob),
}

impl Job {
    pub fn parse(cmd: Command, r: &mut Reader, v: &Value) -> SchemaResult<Self> {
        Ok(match cmd {
            Command::Decompose => Self::Decompose(DecomposeJob::parse(r, v)?),
            Command::Res1d => Self::Res1d(Res1dJob::parse(r, v)?),
            Command::LowerPoles => Self::LowerPoles(LowerPolesJob::parse(r, v)?),
            Command::ReducedResidue => Self::ReducedResidue(ReducedResidueJob::parse(r, v)?),
            Command::EvalStar => Self::EvalStar(PairingJob::parse(r, v, false)?),
            Command::EvalTube => Self::EvalTube(PairingJob::parse(r, v, true)?),
            Command::VerifyExactness => Self::VerifyExactness(ExactnessJob::parse(r, v)?),
            Command::VerifyAll => unreachable!("verify-all takes no input document"),
        })
    }

    pub fn echo(&self) -> Value {
        match self {
            Self::Decompose(j) => j.echo(),
            Self::Res1d(j) => j.echo(),
            Self::LowerPoles(j) => j.echo(),
            Self::ReducedResidue(j) => j.echo(),
            Self::EvalStar(j) | Self::EvalTube(j) => j.echo(),
            Self::VerifyExactness(j) => j.echo(),
        }
    }

    pub fn exec(&self, cfg: &QuadratureConfig, rep: &mut Report) -> Result<()> {
        match self {
            Self::Decompose(j) => j.exec(rep),
            Self::Res1d(j) => j.exec(cfg, rep),
            Self::LowerPoles(j) => j.exec(rep),
            Self::ReducedResidue(j) => j.exec(rep).map(|_| ()),
            Self::EvalStar(j) => j.exec_star(cfg, rep).map(|_| ()),
            Self::EvalTube(j) => j.exec_tube(cfg, rep).map(|_| ()),
            Self::VerifyExactness(j) => j.exec(cfg, rep),
        }
    }
}

/// Runs `cmd` on an input document and an optional config document.
pub fn run(cmd: Command, input: Option<&Value>, config: Option<&Value>) -> Report {
    let mut rep = Report::new(cmd.name());
    let mut reader = Reader::new();
    let cfg = match config.map(|c| reader.config(c, "")).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            let mut entry = ErrorEntry::from_schema(&e);
            entry.message = format!("config: {}", entry.message);
            rep.error(entry);
            rep.warnings = reader.warnings;
            return rep;
        }
    };
    rep.config = crate::schema::write_config(&cfg);
    if cmd == Command::VerifyAll {
        if let Some(v) = input {
            rep.error(ErrorEntry::from_schema(&crate::schema::SchemaError {
                pointer: String::new(),
                message: format!("verify-all takes no input document, got {}", if v.is_object() { "an object" } else { "a value" }),
            }));
            return rep;
        }
        crate::corpus::verify_all(&cfg, &mut rep);
        rep.warnings.extend(reader.warnings);
        return rep;
    }
    let Some(input) = input else {
        rep.error(ErrorEntry::io(format!("{} needs an input document", cmd.name())));
        return rep;
    };
    let job = match Job::parse(cmd, &mut reader, input) {
        Ok(j) => j,
        Err(e) => {
            let mut entry = ErrorEntry::from_schema(&e);
            entry.message = format!("input: {}", entry.message);
            rep.error(entry);
            rep.warnings = reader.warnings;
            return rep;
        }
    };
    rep.warnings = reader.warnings;
    rep.inputs = job.echo();
    if let Err(e) = job.exec(&cfg, &mut rep) {
        rep.error(ErrorEntry::from_core(&e, None));
    }
    rep
}
