//! F_m(λ) along the window tower against the quadrature oracle.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::Result;
use crate::exhaustion::{folner_box, window_subgraph};
use crate::experiments::config::ExperimentConfig;
use crate::experiments::output::{Cell, Table, Timing};
use crate::experiments::{oracle_for, Counter, RunOutput};
use crate::finite_spectra::{boundary_conditions, counting_backends};

pub const BAND_EDGE_FLAG: &str = "band-edge";

/// Distance from the band edges beyond which the monotonicity gate applies.
pub const MONOTONE_EDGE_DISTANCE: f64 = 0.1;
pub const MONOTONE_SLACK: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergeRow {
    pub boundary: String,
    pub m: usize,
    pub lambda: f64,
    pub f_m: f64,
    pub f_oracle: Option<f64>,
    pub abs_error: Option<f64>,
    pub oracle_error: Option<f64>,
    pub d_m: Option<f64>,
    /// Distance to the nearest band edge, when an oracle exists.
    pub edge_distance: Option<f64>,
    pub flag: &'static str,
}

#[derive(Clone, Debug, Default)]
pub struct ConvergeResult {
    pub rows: Vec<ConvergeRow>,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub timings: Vec<Timing>,
}

pub const HEADER: [&str; 10] =
    ["experiment", "boundary", "m", "lambda", "f_m", "f_oracle", "abs_error", "oracle_error", "d_m", "flag"];

pub fn run_converge(cfg: &ExperimentConfig) -> Result<ConvergeResult> {
    let model = cfg.model()?;
    let oracle = oracle_for(cfg, &model)?;
    let bcs = boundary_conditions();
    let backends = counting_backends();
    let backend = backends.get(&cfg.counting)?;
    for b in &cfg.boundaries {
        bcs.get(b)?;
    }
    let nf = model.graph.fundamental_size() as f64;
    let width = cfg.lambda.band_edge_width;

    // (λ, oracle value, oracle error, edge distance, flag)
    let mut lambdas = Vec::new();
    for (lambda, explicit) in cfg.lambda.points() {
        let Some(o) = &oracle else {
            lambdas.push((lambda, None, None, None, ""));
            continue;
        };
        let dist = o.edge_distance(lambda);
        let near = dist < width;
        if near && cfg.lambda.exclude_band_edges && !explicit {
            continue;
        }
        let refuse = if cfg.lambda.exclude_band_edges { width } else { 0.0 };
        match o.evaluate_excluding(lambda, refuse.max(crate::vn_oracle::ids::BAND_EDGE_TOL)) {
            Ok(est) => lambdas.push((lambda, Some(est.value), Some(est.error), Some(dist), "")),
            Err(_) => lambdas.push((lambda, None, None, Some(dist), BAND_EDGE_FLAG)),
        }
    }

    let windows = cfg.windows(model.graph.dimension());
    let items: Vec<(usize, usize)> =
        (0..cfg.boundaries.len()).flat_map(|b| windows.iter().map(move |&m| (b, m))).collect();
    let computed: Vec<(Vec<ConvergeRow>, Timing)> = items
        .par_iter()
        .map(|&(b, m)| {
            let start = Instant::now();
            let name = &cfg.boundaries[b];
            let window = window_subgraph(&model.graph, &folner_box(model.graph.dimension(), m));
            let matrix = bcs.get(name)?.assemble(model.op.as_ref(), &window)?;
            let counter = Counter::new(backend, matrix)?;
            let rows = lambdas
                .iter()
                .map(|&(lambda, f_oracle, oracle_error, edge_distance, flag)| {
                    let f_m = counter.ids(lambda)?;
                    Ok(ConvergeRow {
                        boundary: name.clone(),
                        m,
                        lambda,
                        f_m,
                        f_oracle,
                        abs_error: f_oracle.map(|f| (f_m - f).abs()),
                        oracle_error,
                        d_m: counter.jump(lambda),
                        edge_distance,
                        flag,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let timing = Timing { item: format!("{name} m={m}"), seconds: start.elapsed().as_secs_f64() };
            Ok((rows, timing))
        })
        .collect::<Result<_>>()?;

    let mut result = ConvergeResult::default();
    for (rows, t) in computed {
        result.rows.extend(rows);
        result.timings.push(t);
    }
    let b_index = |name: &str| cfg.boundaries.iter().position(|b| b == name).unwrap_or(usize::MAX);
    result.rows.sort_by(|a, b| {
        a.lambda.total_cmp(&b.lambda).then(a.m.cmp(&b.m)).then(b_index(&a.boundary).cmp(&b_index(&b.boundary)))
    });

    for r in &result.rows {
        if !(0.0..=nf).contains(&r.f_m) {
            result.failures.push(format!("F_m out of range at m={} λ={}: {}", r.m, r.lambda, r.f_m));
        }
    }
    result.warnings.extend(monotonicity_warnings(&result.rows, &cfg.boundaries));
    Ok(result)
}

/// Error columns should not increase with m away from band edges; one
/// increase below `MONOTONE_SLACK` per (boundary, λ) is tolerated.
pub fn monotonicity_warnings(rows: &[ConvergeRow], boundaries: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut lambdas: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    lambdas.dedup();
    for b in boundaries {
        for &l in &lambdas {
            let series: Vec<&ConvergeRow> = rows
                .iter()
                .filter(|r| &r.boundary == b && r.lambda == l)
                .filter(|r| r.edge_distance.is_some_and(|d| d >= MONOTONE_EDGE_DISTANCE))
                .collect();
            let errs: Vec<f64> = series.iter().filter_map(|r| r.abs_error).collect();
            if errs.len() != series.len() {
                continue;
            }
            let ups: Vec<f64> = errs.windows(2).map(|w| w[1] - w[0]).filter(|&d| d > 0.0).collect();
            let ok = ups.is_empty() || (ups.len() == 1 && ups[0] < MONOTONE_SLACK);
            if !ok {
                out.push(format!("{b}: |F_m − F| not monotone in m at λ={l}: {errs:?}"));
            }
        }
    }
    out
}

pub fn table(cfg: &ExperimentConfig, result: &ConvergeResult) -> Table {
    let mut t = Table::new("converge", &HEADER);
    for r in &result.rows {
        t.push(vec![
            cfg.id.as_str().into(),
            r.boundary.as_str().into(),
            r.m.into(),
            r.lambda.into(),
            r.f_m.into(),
            Cell::float_or_null(r.f_oracle),
            Cell::float_or_null(r.abs_error),
            Cell::float_or_null(r.oracle_error),
            Cell::float_or_null(r.d_m),
            r.flag.into(),
        ]);
    }
    t
}

pub fn into_output(cfg: &ExperimentConfig, result: ConvergeResult) -> RunOutput {
    RunOutput {
        tables: vec![table(cfg, &result)],
        report: None,
        failures: result.failures,
        warnings: result.warnings,
        timings: result.timings,
    }
}
