//! Parallel sweep execution with input-ordered results.

use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::compute::{evaluate, Row};
use crate::output::{format_float, Table};
use crate::scenario::{Point, Scenario};

pub const FALLBACK_TOL: f64 = 1e-9;
pub const TOL_ENV: &str = "UDW_DEFAULT_TOL";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("grid point {index} ({point}): {source}")]
    Point {
        index: usize,
        point: String,
        source: udw_core::UdwError,
    },
    #[error("{0} = {1:?} is not a tolerance in (0, 1)")]
    BadTolerance(&'static str, String),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Summary of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub name: String,
    pub rows: usize,
    pub rel_tol: f64,
    pub path: Option<PathBuf>,
}

fn describe(p: &Point) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}={}", format_float(*v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_tol(source: &'static str, text: &str) -> Result<f64, RunError> {
    match text.trim().parse::<f64>() {
        Ok(t) if t > 0.0 && t < 1.0 => Ok(t),
        _ => Err(RunError::BadTolerance(source, text.to_string())),
    }
}

/// `--tol`, then the scenario's own `rel_tol`, then `UDW_DEFAULT_TOL`, then 1e-9.
pub fn resolve_tolerance(flag: Option<f64>, scenario: &Scenario) -> Result<f64, RunError> {
    if let Some(t) = flag {
        return parse_tol("--tol", &t.to_string());
    }
    if let Some(t) = scenario.rel_tol {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(v) => parse_tol(TOL_ENV, &v),
        Err(_) => Ok(FALLBACK_TOL),
    }
}

/// Evaluate every point; `jobs = None` uses all available cores.
pub fn compute(scenario: &Scenario, rel_tol: f64, jobs: Option<usize>) -> Result<Table, RunError> {
    let points = scenario.points();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    let kind = scenario.kind;
    let results: Vec<Result<Row, RunError>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                evaluate(kind, p, rel_tol).map_err(|source| RunError::Point {
                    index: i,
                    point: describe(p),
                    source,
                })
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(points.len());
    for (p, r) in points.into_iter().zip(results) {
        rows.push((p, r?));
    }
    Ok(Table::new(rows))
}

/// Compute and write to `out` (or the scenario's own path); returns the rendered text too.
pub fn run(
    scenario: &Scenario,
    rel_tol: f64,
    jobs: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(RunSummary, String), RunError> {
    log::info!("running {} ({} points, rel_tol {rel_tol:e})", scenario.name, scenario.points().len());
    let table = compute(scenario, rel_tol, jobs)?;
    let text = table.render(scenario.output.format);
    let path = out.or_else(|| scenario.output.path.clone());
    if let Some(path) = &path {
        std::fs::write(path, &text).map_err(|source| RunError::Write {
            path: path.clone(),
            source,
        })?;
    }
    let summary = RunSummary {
        name: scenario.name.clone(),
        rows: table.rows.len(),
        rel_tol,
        path,
    };
    Ok((summary, text))
}
