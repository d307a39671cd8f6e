//! Experiment orchestration: config, the four experiments, bit-stable
//! CSV output and run manifests.

pub mod butterfly;
pub mod config;
pub mod converge;
pub mod jumps;
pub mod output;
pub mod suites;
pub mod verify;

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::finite_spectra::counting::AUTO_THRESHOLD;
use crate::finite_spectra::{spectral_density, CountingBackend, FiniteHermitian, WindowSpectrum};
use crate::registry::{Named, Registry};
use crate::vn_oracle::{MagneticCell, OracleIds};

pub use butterfly::run_butterfly;
pub use config::{ExperimentConfig, Model};
pub use converge::run_converge;
pub use jumps::run_jumps;
pub use output::{Cell, Manifest, Table, Timing};
pub use verify::run_verify;

/// What an experiment hands back for writing.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    /// Machine-readable report, written as `<experiment>.json`.
    pub report: Option<serde_json::Value>,
    /// Invariant violations; any entry makes the run fail.
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub timings: Vec<Timing>,
}

pub trait Experiment: Named + Send + Sync {
    fn run(&self, cfg: &ExperimentConfig) -> Result<RunOutput>;
}

struct Converge;
struct Jumps;
struct Butterfly;
struct Verify;

impl Named for Converge {
    fn name(&self) -> &'static str {
        "converge"
    }
}

impl Experiment for Converge {
    fn run(&self, cfg: &ExperimentConfig) -> Result<RunOutput> {
        Ok(converge::into_output(cfg, run_converge(cfg)?))
    }
}

impl Named for Jumps {
    fn name(&self) -> &'static str {
        "jumps"
    }
}

impl Experiment for Jumps {
    fn run(&self, cfg: &ExperimentConfig) -> Result<RunOutput> {
        Ok(jumps::into_output(cfg, run_jumps(cfg)?))
    }
}

impl Named for Butterfly {
    fn name(&self) -> &'static str {
        "butterfly"
    }
}

impl Experiment for Butterfly {
    fn run(&self, cfg: &ExperimentConfig) -> Result<RunOutput> {
        Ok(butterfly::into_output(cfg, run_butterfly(cfg)?))
    }
}

impl Named for Verify {
    fn name(&self) -> &'static str {
        "verify"
    }
}

impl Experiment for Verify {
    fn run(&self, cfg: &ExperimentConfig) -> Result<RunOutput> {
        Ok(verify::into_output(run_verify(cfg)?))
    }
}

pub fn experiments() -> Registry<dyn Experiment> {
    let mut r: Registry<dyn Experiment> = Registry::new("experiment");
    r.register(Box::new(Converge))
        .register(Box::new(Jumps))
        .register(Box::new(Butterfly))
        .register(Box::new(Verify));
    r
}

/// Runs `experiment` on a pool of `workers` threads. Dense kernels run
/// single-threaded inside each work item so parallelism stays at the item
/// level and results do not depend on the worker count.
pub fn execute(experiment: &str, cfg: &ExperimentConfig, workers: usize) -> Result<(RunOutput, f64)> {
    let registry = experiments();
    let exp = registry.get(experiment)?;
    faer::set_global_parallelism(faer::Par::Seq);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let start = Instant::now();
    let out = pool.install(|| exp.run(cfg))?;
    Ok((out, start.elapsed().as_secs_f64()))
}

/// Writes tables, report and manifest into `dir`; returns the files written.
#[allow(clippy::too_many_arguments)]
pub fn write_run(
    dir: &Path,
    experiment: &str,
    config_path: &Path,
    config_text: &str,
    cfg: &ExperimentConfig,
    workers: usize,
    out: &RunOutput,
    total_seconds: f64,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for t in &out.tables {
        written.push(t.write(dir)?);
    }
    if let Some(report) = &out.report {
        let path = dir.join(format!("{experiment}.json"));
        let text = serde_json::to_string_pretty(report).map_err(|e| std::io::Error::other(e.to_string()))?;
        std::fs::write(&path, text + "\n")?;
        written.push(path);
    }
    let manifest = Manifest {
        experiment: experiment.to_string(),
        id: cfg.id.clone(),
        config_path: config_path.display().to_string(),
        config_sha256: output::sha256_hex(config_text.as_bytes()),
        config: serde_json::to_value(cfg).map_err(|e| std::io::Error::other(e.to_string()))?,
        seed: cfg.seed,
        workers,
        versions: output::VERSIONS,
        outputs: written
            .iter()
            .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
            .collect(),
        failures: out.failures.clone(),
        warnings: out.warnings.clone(),
        total_seconds,
        timings: out.timings.clone(),
    };
    written.push(manifest.write(dir)?);
    Ok(written)
}

/// The quadrature oracle for a config, or `None` when disabled.
pub fn oracle_for(cfg: &ExperimentConfig, model: &Model) -> Result<Option<OracleIds>> {
    if !cfg.oracle.enabled {
        return Ok(None);
    }
    let cell = MagneticCell::new(model.op.clone())?;
    Ok(Some(OracleIds::new(&cell, cfg.oracle.grid(cell.dimension()))?))
}

/// Eigenvalue counts of one window matrix: a full spectrum when the
/// backend would diagonalize anyway, otherwise per-λ backend calls.
pub enum Counter<'a> {
    Spectrum(WindowSpectrum),
    Backend(&'a dyn CountingBackend, FiniteHermitian),
}

impl<'a> Counter<'a> {
    pub fn new(backend: &'a dyn CountingBackend, matrix: FiniteHermitian) -> Result<Self> {
        let diagonalize = match backend.name() {
            "eigen" => true,
            "auto" => matrix.dim() <= AUTO_THRESHOLD,
            _ => false,
        };
        Ok(if diagonalize { Counter::Spectrum(spectral_density(&matrix)?) } else { Counter::Backend(backend, matrix) })
    }

    pub fn ids(&self, lambda: f64) -> Result<f64> {
        match self {
            Counter::Spectrum(s) => Ok(s.ids(lambda)),
            Counter::Backend(b, m) => Ok(b.count_leq(m, lambda)?.value as f64 / m.normalization() as f64),
        }
    }

    /// D_m(λ) when the spectrum is at hand and the cluster at λ is resolved.
    pub fn jump(&self, lambda: f64) -> Option<f64> {
        match self {
            Counter::Spectrum(s) => s.jump(lambda, s.default_tol()).ok().map(|j| j.value()),
            Counter::Backend(..) => None,
        }
    }
}
