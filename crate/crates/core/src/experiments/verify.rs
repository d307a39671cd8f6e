//! The full invariant suite for one configured model.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::experiments::config::ExperimentConfig;
use crate::experiments::output::{Table, Timing};
use crate::experiments::suites::{self, Check, Status};
use crate::experiments::RunOutput;

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl VerifyReport {
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| format!("{}: {}", c.name, c.detail)).collect()
    }
}

/// Fiber quadrature points per axis for the moment identity; exact for
/// trigonometric polynomials of degree below it.
pub const MOMENT_GRID: usize = 128;

fn default_verify_windows(dimension: usize) -> Vec<usize> {
    match dimension {
        1 => vec![8, 16, 32],
        2 => vec![4, 6, 8],
        _ => vec![2, 3, 4],
    }
}

pub fn run_verify(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    let model = cfg.model()?;
    let v = &cfg.verify;
    let d = model.graph.dimension();
    let windows = if v.windows.is_empty() { default_verify_windows(d) } else { v.windows.clone() };
    let collar_windows = if v.collar_windows.is_empty() { cfg.windows(d) } else { v.collar_windows.clone() };
    let radius = v.interior_radius.unwrap_or_else(|| model.op.propagation());
    let seed = cfg.seed;

    let mut checks = Vec::new();
    let mut timings = Vec::new();
    let mut timed = |label: &str, f: &mut dyn FnMut() -> Vec<Check>| {
        let start = Instant::now();
        checks.extend(f());
        timings.push(Timing { item: label.to_string(), seconds: start.elapsed().as_secs_f64() });
    };
    timed("weights", &mut || {
        vec![
            suites::sigma_conjugation(&model, v.cocycle_radius),
            suites::cocycle(&model, v.cocycle_radius),
            suites::commutator(&model, v.cocycle_radius, seed),
        ]
    });
    timed("windows", &mut || {
        vec![
            suites::hermitian(&model, &windows),
            suites::gauge_invariance(cfg, &model, &windows, seed.wrapping_add(1)),
            suites::translation_invariance(&model, &windows, seed),
        ]
    });
    timed("interiors", &mut || {
        let mut c = vec![suites::interior_propagation(&model, windows[windows.len() - 1], radius)];
        if c[0].passed() {
            c.extend(suites::interior_kernels(cfg, &model, &windows, radius));
        }
        c
    });
    timed("dimension", &mut || suites::dim_xk_properties(&model, windows[0], seed));
    timed("folner", &mut || vec![suites::folner_ratios(d)]);
    timed("inertia", &mut || vec![suites::inertia_check(seed, v.inertia_instances, v.inertia_max_dim)]);
    timed("moments", &mut || {
        vec![
            suites::moment_identity(&model, cfg.oracle.n_max, MOMENT_GRID),
            suites::collar_bound(&model, &collar_windows, cfg.oracle.n_max),
        ]
    });
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(VerifyReport { id: cfg.id.clone(), passed, checks, timings })
}

pub fn table(report: &VerifyReport) -> Table {
    let mut t = Table::new("verify", &["experiment", "check", "status", "value", "threshold", "detail"]);
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        };
        t.push(vec![
            report.id.as_str().into(),
            c.name.into(),
            status.into(),
            crate::experiments::Cell::float_or_null(c.value),
            crate::experiments::Cell::float_or_null(c.threshold),
            c.detail.as_str().into(),
        ]);
    }
    t
}

pub fn into_output(report: VerifyReport) -> RunOutput {
    RunOutput {
        tables: vec![table(&report)],
        report: Some(serde_json::to_value(&report).expect("report serializes")),
        failures: report.failures(),
        warnings: Vec::new(),
        timings: report.timings,
    }
}
