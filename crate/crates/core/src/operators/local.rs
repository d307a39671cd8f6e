//! Self-adjoint operators of bounded propagation given by finite stencils.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_graph::{GroupElement, PeriodicGraph, Vertex};
use crate::operators::weights::WeightFunction;

/// A finitely supported function on the vertices of X.
pub type FiniteFunction = BTreeMap<Vertex, Complex64>;

pub fn delta(v: Vertex) -> FiniteFunction {
    FiniteFunction::from([(v, Complex64::new(1.0, 0.0))])
}

pub fn l2_norm(f: &FiniteFunction) -> f64 {
    f.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨f, g⟩, linear in the first slot.
pub fn inner(f: &FiniteFunction, g: &FiniteFunction) -> Complex64 {
    f.iter().filter_map(|(v, a)| g.get(v).map(|b| a * b.conj())).sum()
}

pub fn difference(f: &FiniteFunction, g: &FiniteFunction) -> FiniteFunction {
    let mut out = f.clone();
    for (v, b) in g {
        *out.entry(*v).or_default() -= b;
    }
    out
}

/// A bounded self-adjoint operator on ℓ²(X) with finite propagation.
///
/// The operator is described column-wise: `column(v)` lists the entries of
/// Aδ_v. Repeated targets are summed.
pub trait LocalOperator: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn graph(&self) -> &PeriodicGraph;

    fn column(&self, v: &Vertex) -> Vec<(Vertex, Complex64)>;

    /// Largest word length of a stencil offset.
    fn offset_radius(&self) -> usize;

    /// Bound R on the simplicial propagation: supp Aδ_v ⊆ B_R(v).
    fn propagation(&self) -> usize;

    /// Gershgorin row-sum bound on ‖A‖.
    fn norm_bound(&self) -> f64;

    /// Per-axis periods under which the stencil (including phases) is
    /// strictly translation invariant.
    fn period(&self) -> Option<GroupElement>;

    fn as_magnetic(&self) -> Option<&MagneticOperator> {
        None
    }
}

/// Af for finitely supported f; zero entries are dropped.
pub fn apply_local(op: &dyn LocalOperator, f: &FiniteFunction) -> FiniteFunction {
    let mut out = FiniteFunction::new();
    for (v, a) in f {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (u, c) in op.column(v) {
            *out.entry(u).or_default() += c * a;
        }
    }
    out.retain(|_, z| *z != Complex64::new(0.0, 0.0));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MagneticKind {
    /// H_σ
    Harper,
    /// Δ_σ = 𝒪 − H_σ
    Dml,
}

#[derive(Clone, Debug)]
pub struct MagneticOperator {
    graph: Arc<PeriodicGraph>,
    weight: Arc<dyn WeightFunction>,
    kind: MagneticKind,
}

impl MagneticOperator {
    pub fn new(graph: Arc<PeriodicGraph>, weight: Arc<dyn WeightFunction>, kind: MagneticKind) -> Self {
        MagneticOperator { graph, weight, kind }
    }

    pub fn kind(&self) -> MagneticKind {
        self.kind
    }

    pub fn weight(&self) -> &dyn WeightFunction {
        self.weight.as_ref()
    }

    pub fn weight_arc(&self) -> Arc<dyn WeightFunction> {
        self.weight.clone()
    }

    pub fn graph_arc(&self) -> Arc<PeriodicGraph> {
        self.graph.clone()
    }

    /// Coefficient multiplying the valence on the diagonal.
    pub fn diagonal_factor(&self) -> f64 {
        match self.kind {
            MagneticKind::Harper => 0.0,
            MagneticKind::Dml => 1.0,
        }
    }

    /// Coefficient multiplying σ(e) on the off-diagonal.
    pub fn hop_factor(&self) -> f64 {
        match self.kind {
            MagneticKind::Harper => 1.0,
            MagneticKind::Dml => -1.0,
        }
    }
}

/// (H_σ, Δ_σ) for a graph and weight.
pub fn harper_dml(
    graph: Arc<PeriodicGraph>,
    weight: Arc<dyn WeightFunction>,
) -> (MagneticOperator, MagneticOperator) {
    (
        MagneticOperator::new(graph.clone(), weight.clone(), MagneticKind::Harper),
        MagneticOperator::new(graph, weight, MagneticKind::Dml),
    )
}

impl LocalOperator for MagneticOperator {
    fn name(&self) -> &str {
        match self.kind {
            MagneticKind::Harper => "harper",
            MagneticKind::Dml => "dml",
        }
    }

    fn graph(&self) -> &PeriodicGraph {
        &self.graph
    }

    fn column(&self, v: &Vertex) -> Vec<(Vertex, Complex64)> {
        let edges = self.graph.neighbors(v);
        let mut out = Vec::with_capacity(edges.len() + 1);
        if self.kind == MagneticKind::Dml {
            out.push((*v, Complex64::new(self.graph.valence(v) as f64, 0.0)));
        }
        let hop = self.hop_factor();
        for e in edges {
            out.push((e.terminus, self.weight.sigma(&e) * hop));
        }
        out
    }

    fn offset_radius(&self) -> usize {
        self.graph.max_offset_length()
    }

    fn propagation(&self) -> usize {
        usize::from(!self.graph.templates().is_empty())
    }

    fn norm_bound(&self) -> f64 {
        let v = self.graph.max_valence() as f64;
        match self.kind {
            MagneticKind::Harper => v,
            MagneticKind::Dml => 2.0 * v,
        }
    }

    fn period(&self) -> Option<GroupElement> {
        self.weight.period()
    }

    fn as_magnetic(&self) -> Option<&MagneticOperator> {
        Some(self)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StencilTermSpec {
    /// Orbit of the source vertex δ_v.
    pub orbit: usize,
    pub target: usize,
    pub offset: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilTerm {
    pub target: usize,
    pub offset: GroupElement,
    pub coefficient: Complex64,
}

/// A translation-invariant operator with explicit per-orbit stencil:
/// Aδ_{(o, γ)} = Σ c · δ_{(target, γ + offset)} over the terms of orbit o.
#[derive(Clone, Debug)]
pub struct StencilOperator {
    graph: Arc<PeriodicGraph>,
    terms: Vec<Vec<StencilTerm>>,
    propagation: usize,
}

/// Largest graph distance searched when bounding the propagation of a
/// custom stencil.
const PROPAGATION_SEARCH_LIMIT: usize = 64;

impl StencilOperator {
    /// Builds and validates a stencil: Hermitian symmetry of the aggregated
    /// coefficients, and every term a finite graph distance from its source.
    pub fn new(graph: Arc<PeriodicGraph>, spec: &[StencilTermSpec]) -> Result<Self> {
        let n = graph.fundamental_size();
        let d = graph.dimension();
        let mut agg: HashMap<(usize, usize, GroupElement), Complex64> = HashMap::new();
        for (i, t) in spec.iter().enumerate() {
            if t.orbit >= n || t.target >= n {
                return Err(Error::InvalidOperator(format!("stencil term {i}: orbit out of range")));
            }
            if t.offset.len() != d {
                return Err(Error::InvalidOperator(format!(
                    "stencil term {i}: offset needs {d} coordinates"
                )));
            }
            let key = (t.orbit, t.target, GroupElement::from_slice(&t.offset));
            *agg.entry(key).or_default() += Complex64::new(t.re, t.im);
        }
        agg.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        for (&(o, t, off), c) in &agg {
            let mirror = agg.get(&(t, o, -off)).copied().unwrap_or_default();
            if (mirror - c.conj()).norm() > 1e-12 * c.norm().max(1.0) {
                return Err(Error::InvalidOperator(format!(
                    "stencil is not Hermitian: ({o}→{t}, {off}) = {c} but mirror = {mirror}"
                )));
            }
        }
        let mut terms = vec![Vec::new(); n];
        let mut keys: Vec<_> = agg.keys().copied().collect();
        keys.sort();
        let mut propagation = 0;
        for (o, t, off) in keys {
            let source = Vertex::new(o, GroupElement::ZERO);
            let target = Vertex::new(t, off);
            let dist = graph.distance(&source, &target, PROPAGATION_SEARCH_LIMIT).ok_or_else(|| {
                Error::InvalidOperator(format!(
                    "stencil term ({o}→{t}, {off}) couples vertices more than {PROPAGATION_SEARCH_LIMIT} graph steps apart"
                ))
            })?;
            propagation = propagation.max(dist);
            terms[o].push(StencilTerm { target: t, offset: off, coefficient: agg[&(o, t, off)] });
        }
        Ok(StencilOperator { graph, terms, propagation })
    }

    pub fn zero(graph: Arc<PeriodicGraph>) -> Self {
        let n = graph.fundamental_size();
        StencilOperator { graph, terms: vec![Vec::new(); n], propagation: 0 }
    }

    pub fn terms(&self, orbit: usize) -> &[StencilTerm] {
        &self.terms[orbit]
    }
}

impl LocalOperator for StencilOperator {
    fn name(&self) -> &str {
        "custom"
    }

    fn graph(&self) -> &PeriodicGraph {
        &self.graph
    }

    fn column(&self, v: &Vertex) -> Vec<(Vertex, Complex64)> {
        self.terms[v.orbit]
            .iter()
            .map(|t| (Vertex::new(t.target, v.translate + t.offset), t.coefficient))
            .collect()
    }

    fn offset_radius(&self) -> usize {
        self.terms.iter().flatten().map(|t| t.offset.word_length()).max().unwrap_or(0)
    }

    fn propagation(&self) -> usize {
        self.propagation
    }

    fn norm_bound(&self) -> f64 {
        // Hermitian: row sums of |A| equal column sums.
        self.terms
            .iter()
            .map(|ts| ts.iter().map(|t| t.coefficient.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn period(&self) -> Option<GroupElement> {
        Some(GroupElement([1, 1, 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_graph::{build_graph, GraphSpec};
    use crate::operators::weights::{hofstadter_weights, Flux, UniformWeight};

    fn line_ops() -> (MagneticOperator, MagneticOperator) {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        harper_dml(g, Arc::new(UniformWeight))
    }

    fn at1(x: i64) -> Vertex {
        Vertex::new(0, GroupElement::from_slice(&[x]))
    }

    #[test]
    fn line_harper_and_laplacian() {
        let (h, dml) = line_ops();
        let hf = apply_local(&h, &delta(at1(0)));
        assert_eq!(hf.len(), 2);
        assert_eq!(hf[&at1(-1)], Complex64::new(1.0, 0.0));
        assert_eq!(hf[&at1(1)], Complex64::new(1.0, 0.0));
        let lf = apply_local(&dml, &delta(at1(0)));
        assert_eq!(lf.keys().copied().collect::<Vec<_>>(), vec![at1(-1), at1(0), at1(1)]);
        assert_eq!(lf[&at1(0)], Complex64::new(2.0, 0.0));
        assert_eq!(lf[&at1(1)], Complex64::new(-1.0, 0.0));
        assert_eq!(dml.propagation(), 1);
        assert_eq!(dml.norm_bound(), 4.0);
    }

    #[test]
    fn square_dml_stencil_readout() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let w = Arc::new(hofstadter_weights(Flux::rational(1, 3).unwrap()));
        let (_, dml) = harper_dml(g.clone(), w.clone());
        let v = Vertex::new(0, GroupElement::from_slice(&[2, 0]));
        let f = apply_local(&dml, &delta(v));
        assert_eq!(f[&v], Complex64::new(4.0, 0.0));
        assert_eq!(f.len(), 5);
        let up = Vertex::new(0, GroupElement::from_slice(&[2, 1]));
        let e = g.positive_edge(1, v.translate);
        assert!((f[&up] + w.sigma(&e)).norm() < 1e-15);
        for x in -3..3 {
            for y in -3..3 {
                let v = Vertex::new(0, GroupElement::from_slice(&[x, y]));
                assert_eq!(dml.column(&v).iter().find(|(u, _)| *u == v).unwrap().1.re, 4.0);
            }
        }
    }

    #[test]
    fn zero_stencil() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let z = StencilOperator::zero(g);
        assert!(apply_local(&z, &delta(at1(3))).is_empty());
        assert_eq!(z.propagation(), 0);
        assert_eq!(z.norm_bound(), 0.0);
    }

    #[test]
    fn stencil_validation() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let term = |offset: i64, re: f64, im: f64| StencilTermSpec {
            orbit: 0,
            target: 0,
            offset: vec![offset],
            re,
            im,
        };
        let ok = StencilOperator::new(g.clone(), &[term(0, 1.5, 0.0), term(2, 0.0, 1.0), term(-2, 0.0, -1.0)])
            .unwrap();
        assert_eq!(ok.propagation(), 2);
        assert_eq!(ok.offset_radius(), 2);
        assert!((ok.norm_bound() - 3.5).abs() < 1e-15);

        let err = StencilOperator::new(g.clone(), &[term(1, 0.0, 1.0), term(-1, 0.0, 1.0)]).unwrap_err();
        assert!(err.to_string().contains("not Hermitian"));
        let err = StencilOperator::new(g.clone(), &[term(0, 0.0, 1.0)]).unwrap_err();
        assert!(err.to_string().contains("not Hermitian"));

        let cells = Arc::new(build_graph(&GraphSpec::triangle_cells()).unwrap());
        let across = [
            StencilTermSpec { orbit: 0, target: 0, offset: vec![1], re: 1.0, im: 0.0 },
            StencilTermSpec { orbit: 0, target: 0, offset: vec![-1], re: 1.0, im: 0.0 },
        ];
        let err = StencilOperator::new(cells, &across).unwrap_err();
        assert!(err.to_string().contains("graph steps apart"));
    }

    #[test]
    fn bounded_propagation_by_enumeration() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let (h, dml) = harper_dml(g.clone(), Arc::new(hofstadter_weights(Flux::rational(2, 7).unwrap())));
        for op in [&h as &dyn LocalOperator, &dml] {
            let v = Vertex::new(0, GroupElement::from_slice(&[1, -1]));
            let ball = g.ball(&v, op.propagation());
            for u in apply_local(op, &delta(v)).keys() {
                assert!(ball.contains_key(u));
            }
        }
    }
}
