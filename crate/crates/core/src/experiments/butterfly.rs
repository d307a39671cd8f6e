//! Band intervals over rational fluxes p/q ≤ q_max (the Hofstadter butterfly).

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::config::ExperimentConfig;
use crate::experiments::output::{Table, Timing};
use crate::experiments::RunOutput;
use crate::operators::WeightKind;
use crate::vn_oracle::{band_edges, MagneticCell};

pub const SYMMETRY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct FluxBands {
    pub p: i64,
    pub q: i64,
    /// Per-band (lower, upper), ascending.
    pub bands: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct ButterflyResult {
    pub fluxes: Vec<FluxBands>,
    /// Largest deviation of the α ↔ 1 − α comparison, per check.
    pub conjugation_deviation: f64,
    pub reflection_deviation: Option<f64>,
    pub failures: Vec<String>,
    pub timings: Vec<Timing>,
}

pub const HEADER: [&str; 7] = ["experiment", "p", "q", "alpha", "band", "lower", "upper"];

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduced fractions p/q ∈ [0, 1] with q ≤ q_max, ascending in value.
pub fn farey(q_max: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> =
        (1..=q_max).flat_map(|q| (0..=q).map(move |p| (p, q))).filter(|&(p, q)| gcd(p, q) == 1).collect();
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out
}

pub fn run_butterfly(cfg: &ExperimentConfig) -> Result<ButterflyResult> {
    if cfg.weight.kind != WeightKind::Landau {
        return Err(Error::Config("butterfly needs a landau weight".into()));
    }
    let base = cfg.model()?;
    let center = match (cfg.butterfly.center, base.op.as_magnetic()) {
        (Some(c), _) => Some(c),
        (None, Some(mag)) => Some(mag.diagonal_factor() * base.graph.max_valence() as f64),
        (None, None) => None,
    };
    if cfg.butterfly.reflection && center.is_none() {
        return Err(Error::Config("butterfly.reflection needs butterfly.center for custom operators".into()));
    }

    let computed: Vec<(FluxBands, Timing)> = farey(cfg.butterfly.q_max)
        .par_iter()
        .map(|&(p, q)| {
            let start = Instant::now();
            let mut w = cfg.weight.clone();
            w.flux = Some(format!("{p}/{q}"));
            let model = cfg.model_with_weight(&w)?;
            let cell = MagneticCell::new(model.op.clone())?;
            let bands = band_edges(&cell, cfg.butterfly.grid)?;
            Ok((FluxBands { p, q, bands }, Timing { item: format!("{p}/{q}"), seconds: start.elapsed().as_secs_f64() }))
        })
        .collect::<Result<_>>()?;

    let mut result = ButterflyResult::default();
    for (f, t) in computed {
        result.fluxes.push(f);
        result.timings.push(t);
    }
    let by_flux: BTreeMap<(i64, i64), &FluxBands> = result.fluxes.iter().map(|f| ((f.p, f.q), f)).collect();
    let mut conj = 0.0f64;
    let mut refl = 0.0f64;
    for f in &result.fluxes {
        let partner = by_flux[&(f.q - f.p, f.q)];
        let n = f.bands.len();
        if partner.bands.len() != n {
            result.failures.push(format!("band count differs between {}/{} and its partner", f.p, f.q));
            continue;
        }
        for b in 0..n {
            let (lo, hi) = f.bands[b];
            let (plo, phi) = partner.bands[b];
            conj = conj.max((lo - plo).abs()).max((hi - phi).abs());
            if let Some(c) = center {
                let (rlo, rhi) = partner.bands[n - 1 - b];
                refl = refl.max((lo - (2.0 * c - rhi)).abs()).max((hi - (2.0 * c - rlo)).abs());
            }
        }
    }
    result.conjugation_deviation = conj;
    if conj > SYMMETRY_TOL {
        result.failures.push(format!("bands at α and 1 − α differ by {conj:e}"));
    }
    if cfg.butterfly.reflection {
        let c = center.expect("checked above");
        result.reflection_deviation = Some(refl);
        if refl > SYMMETRY_TOL {
            result.failures.push(format!("bands at α and 1 − α are not mirror images about {c}: {refl:e}"));
        }
    }
    Ok(result)
}

pub fn table(cfg: &ExperimentConfig, result: &ButterflyResult) -> Table {
    let mut t = Table::new("butterfly", &HEADER);
    for f in &result.fluxes {
        for (b, &(lo, hi)) in f.bands.iter().enumerate() {
            t.push(vec![
                cfg.id.as_str().into(),
                f.p.into(),
                f.q.into(),
                (f.p as f64 / f.q as f64).into(),
                b.into(),
                lo.into(),
                hi.into(),
            ]);
        }
    }
    t
}

pub fn into_output(cfg: &ExperimentConfig, result: ButterflyResult) -> RunOutput {
    RunOutput {
        tables: vec![table(cfg, &result)],
        report: Some(serde_json::json!({
            "fluxes": result.fluxes.len(),
            "conjugation_deviation": result.conjugation_deviation,
            "reflection_deviation": result.reflection_deviation,
        })),
        failures: result.failures,
        warnings: Vec::new(),
        timings: result.timings,
    }
}
