//! Scenario files: one JSON object per file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    LinearOne,
    QuadraticOne,
    LinearTwo,
    QuadraticTwo,
    CavityOne,
    DepositLinear,
    DepositQuadratic,
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Need {
    Required,
    Optional,
}

#[derive(Debug, Clone, Copy)]
struct ParamDef {
    name: &'static str,
    need: Need,
    integer: bool,
}

const fn req(name: &'static str) -> ParamDef {
    ParamDef {
        name,
        need: Need::Required,
        integer: false,
    }
}

const fn opt(name: &'static str) -> ParamDef {
    ParamDef {
        name,
        need: Need::Optional,
        integer: false,
    }
}

const fn int(p: ParamDef) -> ParamDef {
    ParamDef { integer: true, ..p }
}

const LINEAR_ONE: &[ParamDef] = &[
    int(req("n")),
    req("k0"),
    req("sigma"),
    req("omega"),
    req("lambda"),
    opt("smearing_delta"),
    opt("ir_cutoff"),
];
const QUADRATIC_ONE: &[ParamDef] = &[
    int(req("n")),
    req("k0"),
    req("sigma"),
    req("omega"),
    req("lambda"),
    opt("ir_cutoff"),
];
const LINEAR_TWO: &[ParamDef] = &[
    int(req("n")),
    req("eta1"),
    req("eta2"),
    req("sigma"),
    req("omega"),
    req("lambda"),
    opt("smearing_delta"),
    opt("ir_cutoff"),
];
const QUADRATIC_TWO: &[ParamDef] = &[
    int(req("n")),
    req("eta1"),
    req("eta2"),
    req("sigma"),
    req("omega"),
    req("lambda"),
    opt("ir_cutoff"),
];
const CAVITY_ONE: &[ParamDef] = &[
    int(req("n")),
    req("l"),
    req("t"),
    req("x_frac"),
    int(req("j0_1")),
    int(opt("j0_2")),
    int(opt("j0_3")),
    req("sigma"),
    req("omega"),
    req("lambda"),
    int(opt("mode_cap")),
];
const DEPOSIT_LINEAR: &[ParamDef] = &[req("l"), req("t"), req("x_frac"), req("omega"), req("lambda"), int(req("j"))];
const DEPOSIT_QUADRATIC: &[ParamDef] = &[
    req("l"),
    req("t"),
    req("x_frac"),
    req("omega"),
    req("lambda"),
    int(req("j")),
    int(opt("k_max")),
];
const ENERGY: &[ParamDef] = &[int(req("n")), req("k0"), req("sigma"), opt("ir_cutoff")];

impl Kind {
    fn params(self) -> &'static [ParamDef] {
        match self {
            Kind::LinearOne => LINEAR_ONE,
            Kind::QuadraticOne => QUADRATIC_ONE,
            Kind::LinearTwo => LINEAR_TWO,
            Kind::QuadraticTwo => QUADRATIC_TWO,
            Kind::CavityOne => CAVITY_ONE,
            Kind::DepositLinear => DEPOSIT_LINEAR,
            Kind::DepositQuadratic => DEPOSIT_QUADRATIC,
            Kind::Energy => ENERGY,
        }
    }

    /// Names of the parameters this kind accepts.
    pub fn param_names(self) -> Vec<&'static str> {
        self.params().iter().map(|p| p.name).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    pub params: BTreeMap<String, f64>,
    pub sweep: Sweep,
    /// Parameter overrides; the sweep is repeated once per entry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<BTreeMap<String, f64>>,
    #[serde(default)]
    pub output: Output,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
}

/// One fully specified evaluation point.
pub type Point = BTreeMap<String, f64>;

impl Scenario {
    pub fn from_json(text: &str, origin: &str) -> Result<Scenario, ConfigError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Scenario, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn def(&self, name: &str) -> Option<&'static ParamDef> {
        self.kind.params().iter().find(|p| p.name == name)
    }

    fn check_value(&self, field: &str, name: &str, v: f64) -> Result<(), ConfigError> {
        let def = self.def(name).ok_or_else(|| {
            field_err(
                field,
                format!("`{name}` is not a parameter of {:?}; expected one of {:?}", self.kind, self.kind.param_names()),
            )
        })?;
        if !v.is_finite() {
            return Err(field_err(field, format!("`{name}` must be finite")));
        }
        if def.integer && (v.fract() != 0.0 || v < 0.0) {
            return Err(field_err(field, format!("`{name}` must be a non-negative integer, got {v}")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.name.trim().is_empty() {
            return Err(field_err("name", "must not be empty"));
        }
        for (k, &v) in &self.params {
            self.check_value(&format!("params.{k}"), k, v)?;
        }
        for (i, entry) in self.series.iter().enumerate() {
            for (k, &v) in entry {
                self.check_value(&format!("series[{i}].{k}"), k, v)?;
            }
        }
        let sw = &self.sweep;
        let def = self.def(&sw.variable).ok_or_else(|| {
            field_err(
                "sweep.variable",
                format!("`{}` is not a parameter of {:?}; expected one of {:?}", sw.variable, self.kind, self.kind.param_names()),
            )
        })?;
        if sw.points < 2 {
            return Err(field_err("sweep.points", format!("grid needs at least 2 points, got {}", sw.points)));
        }
        if !(sw.min.is_finite() && sw.max.is_finite()) || !(sw.max > sw.min) {
            return Err(field_err("sweep", format!("need finite min < max, got [{}, {}]", sw.min, sw.max)));
        }
        if sw.spacing == Spacing::Log && !(sw.min > 0.0) {
            return Err(field_err("sweep.min", "log spacing needs min > 0"));
        }
        if def.integer {
            if sw.spacing == Spacing::Log {
                return Err(field_err("sweep.spacing", format!("integer variable `{}` needs linear spacing", sw.variable)));
            }
            for x in self.grid() {
                if x.fract() != 0.0 || x < 0.0 {
                    return Err(field_err("sweep", format!("grid for `{}` hits non-integer value {x}", sw.variable)));
                }
            }
        }
        if self.params.contains_key(&sw.variable) || self.series.iter().any(|e| e.contains_key(&sw.variable)) {
            return Err(field_err("sweep.variable", format!("`{}` is swept and must not be fixed elsewhere", sw.variable)));
        }
        let series = if self.series.is_empty() { vec![Point::new()] } else { self.series.clone() };
        for (i, entry) in series.iter().enumerate() {
            for def in self.kind.params().iter().filter(|d| d.need == Need::Required) {
                let present = def.name == sw.variable || entry.contains_key(def.name) || self.params.contains_key(def.name);
                if !present {
                    let where_ = if self.series.is_empty() { String::new() } else { format!(" (series entry {i})") };
                    return Err(field_err(format!("params.{}", def.name), format!("required parameter missing{where_}")));
                }
            }
        }
        if let Some(t) = self.rel_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(field_err("rel_tol", format!("must lie in (0, 1), got {t}")));
            }
        }
        Ok(())
    }

    /// Sweep values; endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        let sw = &self.sweep;
        let m = sw.points - 1;
        (0..=m)
            .map(|i| {
                if i == 0 {
                    return sw.min;
                }
                if i == m {
                    return sw.max;
                }
                let f = i as f64 / m as f64;
                match sw.spacing {
                    Spacing::Linear => sw.min + f * (sw.max - sw.min),
                    Spacing::Log => (sw.min.ln() + f * (sw.max.ln() - sw.min.ln())).exp(),
                }
            })
            .collect()
    }

    /// All evaluation points: series entries outermost, sweep innermost.
    pub fn points(&self) -> Vec<Point> {
        let series = if self.series.is_empty() { vec![Point::new()] } else { self.series.clone() };
        let grid = self.grid();
        let mut out = Vec::with_capacity(series.len() * grid.len());
        for entry in &series {
            for &x in &grid {
                let mut p = self.params.clone();
                p.extend(entry.iter().map(|(k, v)| (k.clone(), *v)));
                p.insert(self.sweep.variable.clone(), x);
                out.push(p);
            }
        }
        out
    }
}
