//! D_m(λ), the interior jumps D′_m(λ) and the oracle D(λ).

use std::time::Instant;

use rayon::prelude::*;

use crate::error::Result;
use crate::exhaustion::{folner_box, interior_vertices, window_subgraph};
use crate::experiments::config::ExperimentConfig;
use crate::experiments::output::{Cell, Table, Timing};
use crate::experiments::RunOutput;
use crate::finite_spectra::interior::default_kernel_tol;
use crate::finite_spectra::{assemble_dirichlet, interior_restriction, rect_kernel_dim, spectral_density};
use crate::vn_oracle::{jump_at, jump_oracle, MagneticCell};

/// Slack on the rowwise inequalities, which compare ratios of integers.
const RATIO_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct JumpRow {
    pub m: usize,
    pub lambda: f64,
    pub d_m: f64,
    pub d_prime: f64,
    pub d_oracle: Option<f64>,
    pub kernel: usize,
    pub rank: usize,
    /// #Y_m
    pub interior: usize,
    pub radius: usize,
}

#[derive(Clone, Debug, Default)]
pub struct JumpResult {
    pub rows: Vec<JumpRow>,
    /// None when the model has no exact jump oracle.
    pub oracle: Option<Vec<(f64, f64)>>,
    pub failures: Vec<String>,
    pub timings: Vec<Timing>,
}

pub const HEADER: [&str; 10] =
    ["experiment", "m", "lambda", "d_m", "d_prime_m", "d_oracle", "kernel", "rank", "interior", "radius"];

pub fn run_jumps(cfg: &ExperimentConfig) -> Result<JumpResult> {
    let model = cfg.model()?;
    let oracle = if cfg.oracle.enabled {
        MagneticCell::new(model.op.clone()).and_then(|cell| jump_oracle(&cell, cfg.oracle.grid(cell.dimension()))).ok()
    } else {
        None
    };
    // configured values first so they win over numerically equal atoms
    let mut lambdas: Vec<f64> = cfg.lambda.points().into_iter().map(|(l, _)| l).collect();
    for &(atom, _) in oracle.iter().flatten() {
        if !lambdas.iter().any(|l| (l - atom).abs() <= 1e-12 * atom.abs().max(1.0)) {
            lambdas.push(atom);
        }
    }
    lambdas.sort_by(f64::total_cmp);

    let radius = cfg.jumps.interior_radius.unwrap_or_else(|| model.op.propagation());
    let d = model.graph.dimension();
    let windows = cfg.windows(d);
    let computed: Vec<(Vec<JumpRow>, Timing)> = windows
        .par_iter()
        .map(|&m| {
            let start = Instant::now();
            let window = window_subgraph(&model.graph, &folner_box(d, m));
            let spectrum = spectral_density(&assemble_dirichlet(model.op.as_ref(), &window)?)?;
            let y = interior_vertices(&model.graph, &window, radius);
            let rows = lambdas
                .iter()
                .map(|&lambda| {
                    let d_m = spectrum.jump(lambda, spectrum.default_tol())?.value();
                    let r = interior_restriction(model.op.as_ref(), &window, &y, lambda)?;
                    let k = rect_kernel_dim(&r, default_kernel_tol())?;
                    Ok(JumpRow {
                        m,
                        lambda,
                        d_m,
                        d_prime: k.kernel_density(),
                        d_oracle: oracle.as_ref().map(|o| jump_at(o, lambda, 1e-9 * lambda.abs().max(1.0))),
                        kernel: k.kernel,
                        rank: k.rank,
                        interior: k.columns,
                        radius,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((rows, Timing { item: format!("m={m}"), seconds: start.elapsed().as_secs_f64() }))
        })
        .collect::<Result<_>>()?;

    let mut result = JumpResult { oracle, ..Default::default() };
    for (rows, t) in computed {
        result.rows.extend(rows);
        result.timings.push(t);
    }
    result.rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.m.cmp(&b.m)));
    for r in &result.rows {
        if r.d_prime > r.d_m + RATIO_SLACK {
            result.failures.push(format!("D′_m > D_m at m={} λ={}: {} > {}", r.m, r.lambda, r.d_prime, r.d_m));
        }
        if let Some(d) = r.d_oracle {
            if r.d_prime > d + RATIO_SLACK {
                result.failures.push(format!("D′_m > D at m={} λ={}: {} > {d}", r.m, r.lambda, r.d_prime));
            }
        }
        if r.kernel + r.rank != r.interior {
            result.failures.push(format!("rank-nullity fails at m={} λ={}", r.m, r.lambda));
        }
    }
    Ok(result)
}

pub fn table(cfg: &ExperimentConfig, result: &JumpResult) -> Table {
    let mut t = Table::new("jumps", &HEADER);
    for r in &result.rows {
        t.push(vec![
            cfg.id.as_str().into(),
            r.m.into(),
            r.lambda.into(),
            r.d_m.into(),
            r.d_prime.into(),
            Cell::float_or_null(r.d_oracle),
            r.kernel.into(),
            r.rank.into(),
            r.interior.into(),
            r.radius.into(),
        ]);
    }
    t
}

pub fn into_output(cfg: &ExperimentConfig, result: JumpResult) -> RunOutput {
    let mut warnings = Vec::new();
    if result.oracle.is_none() {
        warnings.push("no exact jump oracle for this model; d_oracle is null".to_string());
    }
    RunOutput {
        tables: vec![table(cfg, &result)],
        report: None,
        failures: result.failures,
        warnings,
        timings: result.timings,
    }
}
