//! Experiment configuration (TOML). See `configs/` for annotated examples.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_graph::{build_graph, GraphSpec, PeriodicGraph, TemplateSpec};
use crate::operators::{check_kind, Flux, LocalOperator, OperatorSpec, WeightFunction, WeightKind, WeightSpec};

/// Graph section: a named preset or an explicit quotient description.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub preset: Option<String>,
    pub dimension: Option<usize>,
    pub fundamental_domain: Option<usize>,
    #[serde(default)]
    pub templates: Vec<TemplateSpec>,
}

pub const GRAPH_PRESETS: [&str; 4] = ["line", "square", "triangle-cells", "isolated-points"];

impl GraphConfig {
    pub fn preset(name: &str) -> Self {
        GraphConfig { preset: Some(name.into()), ..Default::default() }
    }

    pub fn spec(&self) -> Result<GraphSpec> {
        match &self.preset {
            Some(name) => {
                if self.dimension.is_some() || self.fundamental_domain.is_some() || !self.templates.is_empty() {
                    return Err(Error::Config("graph: `preset` excludes an explicit description".into()));
                }
                match name.as_str() {
                    "line" => Ok(GraphSpec::line()),
                    "square" => Ok(GraphSpec::square()),
                    "triangle-cells" => Ok(GraphSpec::triangle_cells()),
                    "isolated-points" => Ok(GraphSpec::isolated_points()),
                    other => Err(Error::UnknownName {
                        kind: "graph preset",
                        name: other.into(),
                        known: GRAPH_PRESETS.join(", "),
                    }),
                }
            }
            None => Ok(GraphSpec {
                dimension: self
                    .dimension
                    .ok_or_else(|| Error::Config("graph: need `preset` or `dimension`".into()))?,
                fundamental_domain: self
                    .fundamental_domain
                    .ok_or_else(|| Error::Config("graph: need `fundamental_domain`".into()))?,
                templates: self.templates.clone(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

pub const MAX_LAMBDA_POINTS: usize = 100_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaConfig {
    #[serde(default)]
    pub values: Vec<f64>,
    /// Drop grid points near band edges (explicit values are kept and flagged).
    #[serde(default = "yes")]
    pub exclude_band_edges: bool,
    #[serde(default = "default_edge_width")]
    pub band_edge_width: f64,
    pub grid: Option<LambdaGrid>,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig { values: Vec::new(), grid: None, exclude_band_edges: true, band_edge_width: default_edge_width() }
    }
}

impl LambdaConfig {
    /// Explicit values followed by the grid, deduplicated, ascending.
    pub fn points(&self) -> Vec<(f64, bool)> {
        let mut out: Vec<(f64, bool)> = self.values.iter().map(|&l| (l, true)).collect();
        if let Some(g) = self.grid {
            for i in 0..g.count {
                let t = if g.count == 1 { 0.0 } else { i as f64 / (g.count - 1) as f64 };
                out.push((g.start + t * (g.stop - g.start), false));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        out.dedup_by(|a, b| a.0 == b.0);
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    /// Points per axis; when unset, 8192 on ℤ, 64 on ℤ², 16 on ℤ³.
    pub grid: Option<usize>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { enabled: true, grid: None, n_max: default_n_max() }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpsConfig {
    /// Defaults to the operator's propagation bound.
    pub interior_radius: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ButterflyConfig {
    #[serde(default = "default_q_max")]
    pub q_max: i64,
    #[serde(default = "default_band_grid")]
    pub grid: usize,
    /// Assert the band table is symmetric about `center` under α → 1 − α.
    #[serde(default = "yes")]
    pub reflection: bool,
    /// Defaults to the diagonal of the operator (valence for the DML, 0 for Harper).
    pub center: Option<f64>,
}

impl Default for ButterflyConfig {
    fn default() -> Self {
        ButterflyConfig { q_max: default_q_max(), grid: default_band_grid(), reflection: true, center: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Defaults to the operator's propagation bound.
    pub interior_radius: Option<usize>,
    /// Half-width of the cube on which cocycles are solved.
    #[serde(default = "default_cocycle_radius")]
    pub cocycle_radius: usize,
    #[serde(default = "default_inertia_instances")]
    pub inertia_instances: usize,
    #[serde(default = "default_inertia_dim")]
    pub inertia_max_dim: usize,
    /// Windows for the spectral checks; defaults to small boxes.
    #[serde(default)]
    pub windows: Vec<usize>,
    /// Windows for the trace collar bound; defaults to `windows` of the run.
    #[serde(default)]
    pub collar_windows: Vec<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            interior_radius: None,
            cocycle_radius: default_cocycle_radius(),
            inertia_instances: default_inertia_instances(),
            inertia_max_dim: default_inertia_dim(),
            windows: Vec::new(),
            collar_windows: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub seed: u64,
    /// Boundary conditions by registry name.
    #[serde(default = "default_boundaries")]
    pub boundaries: Vec<String>,
    /// Følner indices m₁ < … < m_K; defaults depend on the dimension.
    #[serde(default)]
    pub windows: Vec<usize>,
    /// Counting backend by registry name.
    #[serde(default = "default_counting")]
    pub counting: String,
    pub graph: GraphConfig,
    #[serde(default = "WeightSpec::uniform")]
    pub weight: WeightSpec,
    #[serde(default)]
    pub operator: OperatorSpec,
    #[serde(default)]
    pub lambda: LambdaConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub jumps: JumpsConfig,
    #[serde(default)]
    pub butterfly: ButterflyConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

/// The operator a config describes.
#[derive(Clone, Debug)]
pub struct Model {
    pub graph: Arc<PeriodicGraph>,
    pub weight: Arc<dyn WeightFunction>,
    pub op: Arc<dyn LocalOperator>,
}

pub fn default_windows(dimension: usize) -> Vec<usize> {
    match dimension {
        1 => vec![64, 256, 1024],
        2 => vec![8, 16, 32],
        _ => vec![4, 6, 8],
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.graph.spec()?;
        check_kind(&self.operator)?;
        if self.windows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("windows must be strictly increasing: {:?}", self.windows)));
        }
        if self.windows.contains(&0) {
            return Err(Error::Config("window index 0 is empty".into()));
        }
        if self.boundaries.is_empty() {
            return Err(Error::Config("need at least one boundary condition".into()));
        }
        let points = self.lambda.points();
        if points.len() > MAX_LAMBDA_POINTS || points.iter().any(|(l, _)| !l.is_finite()) {
            return Err(Error::Config("λ grid must be finite".into()));
        }
        if let Some(g) = self.lambda.grid {
            if !(g.start.is_finite() && g.stop.is_finite()) || g.count == 0 {
                return Err(Error::Config("λ grid needs finite bounds and count ≥ 1".into()));
            }
        }
        if self.lambda.band_edge_width < 0.0 {
            return Err(Error::Config("band_edge_width must be nonnegative".into()));
        }
        if self.oracle.grid.is_some_and(|g| g < 8) {
            return Err(Error::Config("oracle.grid must be at least 8".into()));
        }
        if self.butterfly.grid < 64 {
            return Err(Error::Config("butterfly.grid must be at least 64".into()));
        }
        if self.butterfly.q_max < 1 {
            return Err(Error::Config("butterfly.q_max must be positive".into()));
        }
        if self.oracle.enabled && self.weight.kind == WeightKind::Landau {
            if let Some(Flux::Real(a)) = self.weight.flux()? {
                return Err(Error::Config(format!(
                    "oracle comparison needs a rational flux written p/q, got {a}; set oracle.enabled = false"
                )));
            }
        }
        let _ = build_graph(&spec)?;
        Ok(())
    }

    pub fn windows(&self, dimension: usize) -> Vec<usize> {
        if self.windows.is_empty() {
            default_windows(dimension)
        } else {
            self.windows.clone()
        }
    }

    pub fn model(&self) -> Result<Model> {
        self.model_with_weight(&self.weight)
    }

    pub fn model_with_weight(&self, weight: &WeightSpec) -> Result<Model> {
        let graph = Arc::new(build_graph(&self.graph.spec()?)?);
        let weight = weight.build(&graph)?;
        let op = self.operator.build(graph.clone(), weight.clone())?;
        Ok(Model { graph, weight, op })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn yes() -> bool {
    true
}

fn default_edge_width() -> f64 {
    1e-3
}

impl OracleConfig {
    pub fn grid(&self, dimension: usize) -> usize {
        self.grid.unwrap_or(match dimension {
            1 => 8192,
            2 => 64,
            _ => 16,
        })
    }
}

fn default_n_max() -> usize {
    8
}

fn default_q_max() -> i64 {
    50
}

fn default_band_grid() -> usize {
    64
}

fn default_cocycle_radius() -> usize {
    4
}

fn default_inertia_instances() -> usize {
    200
}

fn default_inertia_dim() -> usize {
    400
}

fn default_boundaries() -> Vec<String> {
    vec!["dirichlet".into()]
}

fn default_counting() -> String {
    "auto".into()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF: &str = r#"
        id = "half"
        windows = [8, 16]
        [graph]
        preset = "square"
        [weight]
        kind = "landau"
        flux = "1/2"
        [lambda]
        values = [4.0]
        grid = { start = 0.5, stop = 7.5, count = 3 }
    "#;

    #[test]
    fn parses_and_builds() {
        let cfg = ExperimentConfig::from_toml(HALF).unwrap();
        assert_eq!(cfg.boundaries, vec!["dirichlet"]);
        assert_eq!(cfg.oracle.grid(2), 64);
        assert_eq!(cfg.oracle.grid(1), 8192);
        let pts: Vec<f64> = cfg.lambda.points().into_iter().map(|p| p.0).collect();
        assert_eq!(pts, vec![0.5, 4.0, 7.5]);
        let m = cfg.model().unwrap();
        assert_eq!(m.op.name(), "dml");
        assert_eq!(m.op.period().unwrap().coord(0), 2);
        // round trip
        let again = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(again.windows, vec![8, 16]);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = HALF.replace("[8, 16]", "[16, 8]");
        assert!(matches!(ExperimentConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = HALF.replace("\"1/2\"", "\"0.3819660112501051\"");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("rational flux"));
        let ok = bad.replace("[lambda]", "[oracle]\nenabled = false\n[lambda]");
        assert!(ExperimentConfig::from_toml(&ok).is_ok());
        let bad = HALF.replace("\"square\"", "\"hexagon\"");
        assert!(matches!(ExperimentConfig::from_toml(&bad), Err(Error::UnknownName { .. })));
        let bad = HALF.replace("id = \"half\"", "id = \"half\"\nwidnows = [1]");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn explicit_graph() {
        let text = r#"
            id = "x"
            [graph]
            dimension = 1
            fundamental_domain = 2
            templates = [{ origin = 0, terminus = 1, offset = [0] }, { origin = 1, terminus = 0, offset = [1] }]
        "#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.windows(1), vec![64, 256, 1024]);
        let m = cfg.model().unwrap();
        assert_eq!(m.graph.fundamental_size(), 2);
    }
}
