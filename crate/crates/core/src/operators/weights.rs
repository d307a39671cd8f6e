//! U(1)-valued edge weights and the cocycles that witness weak invariance.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_graph::{GroupElement, OrientedEdge, PeriodicGraph, Vertex};

/// Identity tolerance for unitary/Hermitian checks on unit-norm data.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Magnetic flux per plaquette, in units of the flux quantum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Flux {
    Rational { p: i64, q: i64 },
    Real(f64),
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Flux {
    /// Reduced rational p/q with q > 0.
    pub fn rational(p: i64, q: i64) -> Result<Flux> {
        if q == 0 {
            return Err(Error::InvalidWeight("flux denominator is zero".into()));
        }
        let g = gcd(p, q).max(1);
        let s = q.signum();
        Ok(Flux::Rational { p: s * p / g, q: s * q / g })
    }

    pub fn value(&self) -> f64 {
        match *self {
            Flux::Rational { p, q } => p as f64 / q as f64,
            Flux::Real(a) => a,
        }
    }

    /// Reduced (p, q), if rational.
    pub fn as_ratio(&self) -> Option<(i64, i64)> {
        match *self {
            Flux::Rational { p, q } => Some((p, q)),
            Flux::Real(_) => None,
        }
    }

    /// e^{2πi α n}, exact in the residue of p·n mod q for rational flux.
    pub fn phase(&self, n: i64) -> Complex64 {
        let turns = match *self {
            Flux::Rational { p, q } => (p * n).rem_euclid(q) as f64 / q as f64,
            Flux::Real(a) => a * n as f64,
        };
        Complex64::from_polar(1.0, 2.0 * PI * turns)
    }
}

impl std::str::FromStr for Flux {
    type Err = Error;
    fn from_str(s: &str) -> Result<Flux> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse::<i64>().map_err(|e| Error::Config(format!("flux `{s}`: {e}")))?;
            let q = q.trim().parse::<i64>().map_err(|e| Error::Config(format!("flux `{s}`: {e}")))?;
            Flux::rational(p, q)
        } else {
            let a = s.parse::<f64>().map_err(|e| Error::Config(format!("flux `{s}`: {e}")))?;
            Ok(Flux::Real(a))
        }
    }
}

impl fmt::Display for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flux::Rational { p, q } => write!(f, "{p}/{q}"),
            Flux::Real(a) => write!(f, "{a}"),
        }
    }
}

/// σ on oriented edges. Implementations are expected (but not trusted) to
/// satisfy σ(ē) = conj σ(e) and |σ| = 1; [`validate_weights`] checks both.
pub trait WeightFunction: Send + Sync + fmt::Debug {
    fn sigma(&self, edge: &OrientedEdge) -> Complex64;

    /// Per-axis periods p with σ(γe) = σ(e) whenever γ lies in ⊕ pᵢℤ, if any.
    fn period(&self) -> Option<GroupElement>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UniformWeight;

impl WeightFunction for UniformWeight {
    fn sigma(&self, _edge: &OrientedEdge) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn period(&self) -> Option<GroupElement> {
        Some(GroupElement([1, 1, 1]))
    }
}

/// Landau gauge: the positive edge of every phased template starting at
/// translate γ carries exp(2πiα γ_axis); all other positive edges carry 1.
#[derive(Clone, Debug)]
pub struct LandauGauge {
    pub flux: Flux,
    pub axis: usize,
    pub phased_templates: Vec<usize>,
}

impl WeightFunction for LandauGauge {
    fn sigma(&self, edge: &OrientedEdge) -> Complex64 {
        let pos = edge.positive();
        let s = if self.phased_templates.contains(&pos.template) {
            self.flux.phase(pos.origin.translate.coord(self.axis))
        } else {
            Complex64::new(1.0, 0.0)
        };
        if edge.reversed {
            s.conj()
        } else {
            s
        }
    }

    fn period(&self) -> Option<GroupElement> {
        let (p, q) = self.flux.as_ratio()?;
        let mut per = GroupElement([1, 1, 1]);
        if p.rem_euclid(q) != 0 {
            per.0[self.axis] = q;
        }
        Some(per)
    }
}

/// Landau gauge on ℤ²: vertical edges at column x carry exp(2πiα x).
pub fn hofstadter_weights(flux: Flux) -> LandauGauge {
    LandauGauge { flux, axis: 0, phased_templates: vec![1] }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic pseudo-random U(1) function on vertices.
#[derive(Clone, Copy, Debug)]
pub struct RandomGauge {
    pub seed: u64,
}

impl RandomGauge {
    pub fn value(&self, v: &Vertex) -> Complex64 {
        let mut h = splitmix(self.seed);
        for c in v.translate.0 {
            h = splitmix(h ^ c as u64);
        }
        h = splitmix(h ^ v.orbit as u64);
        let turns = (h >> 11) as f64 / (1u64 << 53) as f64;
        Complex64::from_polar(1.0, 2.0 * PI * turns)
    }
}

/// σ′(e) = σ(e) u(𝔱(e)) conj(u(𝔬(e))).
#[derive(Clone, Debug)]
pub struct GaugeTransformed {
    pub inner: Arc<dyn WeightFunction>,
    pub gauge: RandomGauge,
}

impl WeightFunction for GaugeTransformed {
    fn sigma(&self, edge: &OrientedEdge) -> Complex64 {
        self.inner.sigma(edge) * self.gauge.value(&edge.terminus) * self.gauge.value(&edge.origin).conj()
    }

    fn period(&self) -> Option<GroupElement> {
        None
    }
}

/// Multiplies a single combinatorial edge by e^{iφ}. Breaks weak invariance
/// whenever φ ∉ 2πℤ, since the plaquettes through that edge acquire flux
/// that their translates do not.
#[derive(Clone, Debug)]
pub struct PerturbedWeight {
    pub inner: Arc<dyn WeightFunction>,
    pub template: usize,
    pub at: GroupElement,
    pub phase: f64,
}

impl WeightFunction for PerturbedWeight {
    fn sigma(&self, edge: &OrientedEdge) -> Complex64 {
        let base = self.inner.sigma(edge);
        let pos = edge.positive();
        if pos.template == self.template && pos.origin.translate == self.at {
            let kick = Complex64::from_polar(1.0, self.phase);
            if edge.reversed {
                base * kick.conj()
            } else {
                base * kick
            }
        } else {
            base
        }
    }

    fn period(&self) -> Option<GroupElement> {
        None
    }
}

/// Reversed edges get an extra phase, so σ(ē) ≠ conj σ(e). Fault injection.
#[derive(Clone, Debug)]
pub struct AsymmetricWeight {
    pub inner: Arc<dyn WeightFunction>,
}

impl WeightFunction for AsymmetricWeight {
    fn sigma(&self, edge: &OrientedEdge) -> Complex64 {
        let s = self.inner.sigma(edge);
        if edge.reversed {
            s * Complex64::from_polar(1.0, 0.3)
        } else {
            s
        }
    }

    fn period(&self) -> Option<GroupElement> {
        self.inner.period()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbSpec {
    pub template: usize,
    pub at: Vec<i64>,
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Uniform,
    Landau,
}

/// Weight section of an experiment config.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightSpec {
    pub kind: WeightKind,
    /// "p/q" or a decimal.
    #[serde(default)]
    pub flux: Option<String>,
    #[serde(default)]
    pub axis: usize,
    /// Defaults to every template whose offset has zero `axis` component.
    #[serde(default)]
    pub phased_templates: Option<Vec<usize>>,
    #[serde(default)]
    pub gauge_seed: Option<u64>,
    #[serde(default)]
    pub perturb: Option<PerturbSpec>,
    #[serde(default)]
    pub corrupt_conjugation: bool,
}

impl WeightSpec {
    pub fn uniform() -> Self {
        WeightSpec {
            kind: WeightKind::Uniform,
            flux: None,
            axis: 0,
            phased_templates: None,
            gauge_seed: None,
            perturb: None,
            corrupt_conjugation: false,
        }
    }

    pub fn landau(flux: &str) -> Self {
        WeightSpec { kind: WeightKind::Landau, flux: Some(flux.to_string()), ..Self::uniform() }
    }

    pub fn flux(&self) -> Result<Option<Flux>> {
        self.flux.as_deref().map(str::parse).transpose()
    }

    pub fn build(&self, graph: &PeriodicGraph) -> Result<Arc<dyn WeightFunction>> {
        let mut w: Arc<dyn WeightFunction> = match self.kind {
            WeightKind::Uniform => Arc::new(UniformWeight),
            WeightKind::Landau => {
                let flux = self
                    .flux()?
                    .ok_or_else(|| Error::Config("landau weight needs a flux".into()))?;
                if self.axis >= graph.dimension() {
                    return Err(Error::Config(format!("gauge axis {} out of range", self.axis)));
                }
                let phased = match &self.phased_templates {
                    Some(p) => {
                        if let Some(bad) = p.iter().find(|&&t| t >= graph.templates().len()) {
                            return Err(Error::Config(format!("phased template {bad} out of range")));
                        }
                        p.clone()
                    }
                    None => graph
                        .templates()
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| t.offset.coord(self.axis) == 0 && !t.offset.is_zero())
                        .map(|(i, _)| i)
                        .collect(),
                };
                Arc::new(LandauGauge { flux, axis: self.axis, phased_templates: phased })
            }
        };
        if let Some(p) = &self.perturb {
            w = Arc::new(PerturbedWeight {
                inner: w,
                template: p.template,
                at: GroupElement::from_slice(&p.at),
                phase: p.phase,
            });
        }
        if let Some(seed) = self.gauge_seed {
            w = Arc::new(GaugeTransformed { inner: w, gauge: RandomGauge { seed } });
        }
        if self.corrupt_conjugation {
            w = Arc::new(AsymmetricWeight { inner: w });
        }
        Ok(w)
    }
}

/// A solution s_γ of σ(γe) = σ(e) s_γ(𝔱(e)) conj(s_γ(𝔬(e))) on a finite
/// window, normalized to 1 at the smallest vertex of each component.
#[derive(Clone, Debug)]
pub struct Cocycle {
    pub gamma: GroupElement,
    values: HashMap<Vertex, Complex64>,
    /// Largest edge residual of the defining identity over the window.
    pub residual: f64,
}

impl Cocycle {
    pub fn value(&self, v: &Vertex) -> Option<Complex64> {
        self.values.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Translates γ with every |γᵢ| ≤ radius.
fn cube_vertices(graph: &PeriodicGraph, radius: usize) -> Vec<Vertex> {
    let r = radius as i64;
    let d = graph.dimension();
    let span = |a: usize| if a < d { -r..=r } else { 0..=0 };
    let mut out = Vec::new();
    for x in span(0) {
        for y in span(1) {
            for z in span(2) {
                for o in 0..graph.fundamental_size() {
                    out.push(Vertex::new(o, GroupElement([x, y, z])));
                }
            }
        }
    }
    out.sort();
    out
}

/// Checks conjugation symmetry and unit modulus on the cube window of
/// radius `radius`, then solves for one cocycle per generator.
pub fn validate_weights(
    graph: &PeriodicGraph,
    weight: &dyn WeightFunction,
    radius: usize,
) -> Result<Vec<Cocycle>> {
    let verts = cube_vertices(graph, radius);
    let inside: std::collections::HashSet<Vertex> = verts.iter().copied().collect();
    let mut adjacency: BTreeMap<Vertex, Vec<OrientedEdge>> = BTreeMap::new();
    for v in &verts {
        let edges: Vec<_> =
            graph.neighbors(v).into_iter().filter(|e| inside.contains(&e.terminus)).collect();
        for e in &edges {
            let s = weight.sigma(e);
            if (s.norm() - 1.0).abs() > IDENTITY_TOL {
                return Err(Error::InvalidWeight(format!("|σ| = {} on an edge at {}", s.norm(), v.translate)));
            }
            let back = weight.sigma(&e.reverse());
            if (back - s.conj()).norm() > IDENTITY_TOL {
                return Err(Error::InvalidWeight(format!(
                    "sigma-conjugation: σ(ē) ≠ conj σ(e) on template {} at {}",
                    e.template, v.translate
                )));
            }
        }
        adjacency.insert(*v, edges);
    }

    let mut cocycles = Vec::new();
    for &gamma in graph.generators() {
        // ρ(e) = σ(γe) conj σ(e) must equal s(𝔱e) conj s(𝔬e)
        let ratio = |e: &OrientedEdge| weight.sigma(&e.translated(gamma)) * weight.sigma(e).conj();
        let mut values: HashMap<Vertex, Complex64> = HashMap::with_capacity(verts.len());
        for root in &verts {
            if values.contains_key(root) {
                continue;
            }
            values.insert(*root, Complex64::new(1.0, 0.0));
            let mut queue = VecDeque::from([*root]);
            while let Some(u) = queue.pop_front() {
                let su = values[&u];
                for e in &adjacency[&u] {
                    if let std::collections::hash_map::Entry::Vacant(slot) = values.entry(e.terminus) {
                        slot.insert(ratio(e) * su);
                        queue.push_back(e.terminus);
                    }
                }
            }
        }
        let mut residual = 0.0f64;
        for (u, edges) in &adjacency {
            for e in edges {
                let lhs = weight.sigma(&e.translated(gamma));
                let rhs = weight.sigma(e) * values[&e.terminus] * values[u].conj();
                residual = residual.max((lhs - rhs).norm());
            }
        }
        if residual > IDENTITY_TOL {
            return Err(Error::NotWeaklyInvariant { generator: gamma.to_string(), residual });
        }
        cocycles.push(Cocycle { gamma, values, residual });
    }
    Ok(cocycles)
}
