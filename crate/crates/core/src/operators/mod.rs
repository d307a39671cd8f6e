//! Weights, magnetic operators, twisted translations and the Γ-trace.

pub mod local;
pub mod translation;
pub mod weights;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use local::{
    apply_local, delta, harper_dml, inner, l2_norm, FiniteFunction, LocalOperator, MagneticKind,
    MagneticOperator, StencilOperator, StencilTermSpec,
};
pub use translation::{translation_commutator, MagneticTranslation};
pub use weights::{
    hofstadter_weights, validate_weights, Cocycle, Flux, GaugeTransformed, LandauGauge, PerturbSpec,
    RandomGauge, UniformWeight, WeightFunction, WeightKind, WeightSpec, IDENTITY_TOL,
};

use crate::error::{Error, Result};
use crate::group_graph::{GroupElement, PeriodicGraph, Vertex};

/// tr_Γ(Aⁿ) = Σ_{v∈𝓕} ⟨Aⁿδ_v, δ_v⟩, by n sparse applications per orbit.
/// Exact up to floating-point summation.
pub fn gamma_trace(op: &dyn LocalOperator, n: usize) -> num_complex::Complex64 {
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    for orbit in 0..op.graph().fundamental_size() {
        let v = Vertex::new(orbit, GroupElement::ZERO);
        let mut f = delta(v);
        for _ in 0..n {
            f = apply_local(op, &f);
        }
        total += f.get(&v).copied().unwrap_or_default();
    }
    total
}

/// Real part of [`gamma_trace`]; the whole trace when A is self-adjoint.
pub fn gamma_trace_power(op: &dyn LocalOperator, n: usize) -> f64 {
    gamma_trace(op, n).re
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Harper,
    Dml,
    Custom,
}

/// Operator section of an experiment config.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    #[serde(default)]
    pub stencil: Vec<StencilTermSpec>,
}

impl OperatorSpec {
    pub fn build(
        &self,
        graph: Arc<PeriodicGraph>,
        weight: Arc<dyn WeightFunction>,
    ) -> Result<Arc<dyn LocalOperator>> {
        Ok(match self.kind {
            OperatorKind::Harper => Arc::new(MagneticOperator::new(graph, weight, MagneticKind::Harper)),
            OperatorKind::Dml => Arc::new(MagneticOperator::new(graph, weight, MagneticKind::Dml)),
            OperatorKind::Custom => {
                if self.stencil.is_empty() {
                    Arc::new(StencilOperator::zero(graph))
                } else {
                    Arc::new(StencilOperator::new(graph, &self.stencil)?)
                }
            }
        })
    }
}

impl Default for OperatorSpec {
    fn default() -> Self {
        OperatorSpec { kind: OperatorKind::Dml, stencil: Vec::new() }
    }
}

/// Rejects a config that would build a custom stencil from magnetic fields.
pub fn check_kind(spec: &OperatorSpec) -> Result<()> {
    if spec.kind != OperatorKind::Custom && !spec.stencil.is_empty() {
        return Err(Error::Config("`stencil` is only valid for operator kind `custom`".into()));
    }
    Ok(())
}
