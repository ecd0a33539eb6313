//! Reports: echoed inputs, symbolic and numeric outputs, verdicts and the
//! exit status they imply.

use residuum_core::numeric::{ExactnessReport, LimitResult};
use residuum_core::Error;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::schema::{complex, float, SchemaError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
    /// JSON pointer for schema violations, or the check that failed.
    pub location: Option<String>,
    pub exit_code: i32,
}

impl ErrorEntry {
    pub fn from_core(e: &Error, location: Option<String>) -> Self {
        let kind = format!("{e:?}");
        let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string();
        let exit_code = match e {
            Error::NonConvergent { .. }
            | Error::NewtonContinuationFailure { .. }
            | Error::RootFindingDivergence { .. }
            | Error::LeadingCoefficientVanishes => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        Self { kind, message: e.to_string(), location, exit_code }
    }

    pub fn from_schema(e: &SchemaError) -> Self {
        Self {
            kind: "SchemaViolation".into(),
            message: e.message.clone(),
            location: Some(e.pointer.clone()),
            exit_code: EXIT_INPUT,
        }
    }

    pub fn io(message: String) -> Self {
        Self { kind: "Io".into(), message, location: None, exit_code: EXIT_INPUT }
    }

    fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "message": self.message,
            "location": self.location,
            "exit_code": self.exit_code,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub config: Value,
    pub outputs: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
    pub errors: Vec<ErrorEntry>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Value::Null,
            config: Value::Null,
            outputs: Map::new(),
            verdicts: Vec::new(),
            warnings: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn output(&mut self, key: &str, v: Value) {
        self.outputs.insert(key.to_string(), v);
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: Value) {
        self.verdicts.push(Verdict { name: name.to_string(), pass, detail });
    }

    pub fn error(&mut self, e: ErrorEntry) {
        self.errors.push(e);
    }

    /// Input errors outrank numeric failures, which outrank failed verdicts.
    pub fn exit_code(&self) -> i32 {
        if self.errors.iter().any(|e| e.exit_code == EXIT_INPUT) {
            EXIT_INPUT
        } else if !self.errors.is_empty() {
            EXIT_NUMERIC
        } else if self.verdicts.iter().any(|v| !v.pass) {
            EXIT_VERDICT
        } else {
            EXIT_PASS
        }
    }

    pub fn passed(&self) -> bool {
        self.exit_code() == EXIT_PASS
    }

    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(serde_json::to_string(&self.config).expect("JSON value").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> Value {
        let status = match self.exit_code() {
            EXIT_PASS => "pass",
            EXIT_VERDICT => "fail",
            _ => "error",
        };
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({ "name": v.name, "pass": v.pass, "detail": v.detail }))
            .collect();
        json!({
            "tool": { "name": "residuum", "version": env!("CARGO_PKG_VERSION") },
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash(),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verdicts": verdicts,
            "warnings": self.warnings,
            "errors": self.errors.iter().map(ErrorEntry::to_json).collect::<Vec<_>>(),
            "status": status,
            "exit_code": self.exit_code(),
        })
    }

    pub fn to_pretty_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON value")
    }
}

pub fn limit_result(r: &LimitResult) -> Value {
    let table = |t: &[(f64, num_complex::Complex64)]| -> Vec<Value> {
        t.iter().map(|(p, v)| json!({ "param": float(*p), "value": complex(*v) })).collect()
    };
    json!({
        "value": complex(r.value),
        "table": table(&r.table),
        "residual": float(r.residual),
        "converged": r.converged,
        "mass": float(r.mass),
        "delta_table": table(&r.delta_table),
        "delta_residual": float(r.delta_residual),
        "notes": r.notes,
    })
}

pub fn exactness_report(r: &ExactnessReport) -> Value {
    let trials: Vec<Value> =
        r.trials.iter().map(|(v, m)| json!({ "value": complex(*v), "mass": float(*m) })).collect();
    json!({
        "trials": trials,
        "max_abs": float(r.max_abs),
        "max_ratio": float(r.max_ratio),
        "vacuous": r.vacuous,
        "closed": r.closed,
    })
}
