//! Finite restrictions of local operators to windows.

use crate::error::{Error, Result};
use crate::exhaustion::Window;
use crate::finite_spectra::matrix::FiniteHermitian;
use crate::operators::LocalOperator;
use crate::registry::{Named, Registry};

pub trait BoundaryCondition: Named + Send + Sync {
    fn assemble(&self, op: &dyn LocalOperator, window: &Window) -> Result<FiniteHermitian>;
}

/// A_m = P_m A i_m: entry (u, v) = ⟨Aδ_v, δ_u⟩ for u, v in the window.
pub fn assemble_dirichlet(op: &dyn LocalOperator, window: &Window) -> Result<FiniteHermitian> {
    let mut m = FiniteHermitian::zeros(window.len(), window.normalization())?;
    for (j, v) in window.vertices().iter().enumerate() {
        for (u, c) in op.column(v) {
            if let Some(i) = window.index_of(&u) {
                m.add_to(i, j, c);
            }
        }
    }
    Ok(m)
}

/// The magnetic operator of the induced finite subgraph: the valence
/// term counts only edges inside the window.
pub fn assemble_neumann(op: &dyn LocalOperator, window: &Window) -> Result<FiniteHermitian> {
    let mag = op.as_magnetic().ok_or_else(|| Error::UnsupportedBoundary {
        boundary: "neumann".into(),
        operator: op.name().into(),
    })?;
    let graph = op.graph();
    let mut m = FiniteHermitian::zeros(window.len(), window.normalization())?;
    let hop = mag.hop_factor();
    let diag = mag.diagonal_factor();
    for (j, v) in window.vertices().iter().enumerate() {
        let mut inner = 0usize;
        for e in graph.neighbors(v) {
            if let Some(i) = window.index_of(&e.terminus) {
                inner += 1;
                m.add_to(i, j, mag.weight().sigma(&e) * hop);
            }
        }
        m.add_to(j, j, num_complex::Complex64::new(diag * inner as f64, 0.0));
    }
    Ok(m)
}

pub struct Dirichlet;

impl Named for Dirichlet {
    fn name(&self) -> &'static str {
        "dirichlet"
    }
}

impl BoundaryCondition for Dirichlet {
    fn assemble(&self, op: &dyn LocalOperator, window: &Window) -> Result<FiniteHermitian> {
        assemble_dirichlet(op, window)
    }
}

pub struct Neumann;

impl Named for Neumann {
    fn name(&self) -> &'static str {
        "neumann"
    }
}

impl BoundaryCondition for Neumann {
    fn assemble(&self, op: &dyn LocalOperator, window: &Window) -> Result<FiniteHermitian> {
        assemble_neumann(op, window)
    }
}

pub fn boundary_conditions() -> Registry<dyn BoundaryCondition> {
    let mut r: Registry<dyn BoundaryCondition> = Registry::new("boundary condition");
    r.register(Box::new(Dirichlet)).register(Box::new(Neumann));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use num_complex::Complex64;

    use crate::exhaustion::{folner_box, window_subgraph};
    use crate::group_graph::{build_graph, GraphSpec};
    use crate::operators::{harper_dml, hofstadter_weights, Flux, StencilOperator, UniformWeight};

    fn real(m: &FiniteHermitian) -> Vec<Vec<f64>> {
        (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j).re).collect()).collect()
    }

    #[test]
    fn line_path_matrices() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(UniformWeight));
        let w = window_subgraph(&g, &folner_box(1, 3));
        let d = assemble_dirichlet(&dml, &w).unwrap();
        assert_eq!(real(&d), vec![vec![2., -1., 0.], vec![-1., 2., -1.], vec![0., -1., 2.]]);
        let n = assemble_neumann(&dml, &w).unwrap();
        assert_eq!(real(&n), vec![vec![1., -1., 0.], vec![-1., 2., -1.], vec![0., -1., 1.]]);
        let single = window_subgraph(&g, &folner_box(1, 1));
        assert_eq!(real(&assemble_neumann(&dml, &single).unwrap()), vec![vec![0.0]]);
    }

    #[test]
    fn zero_operator_and_neumann_rejection() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let z = StencilOperator::zero(g.clone());
        let w = window_subgraph(&g, &folner_box(1, 4));
        let m = assemble_dirichlet(&z, &w).unwrap();
        assert_eq!(m, FiniteHermitian::zeros(4, 4).unwrap());
        assert!(matches!(assemble_neumann(&z, &w), Err(Error::UnsupportedBoundary { .. })));
    }

    #[test]
    fn half_flux_two_by_two() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(hofstadter_weights(Flux::rational(1, 2).unwrap())));
        let w = window_subgraph(&g, &folner_box(2, 2));
        let m = assemble_dirichlet(&dml, &w).unwrap();
        assert_eq!(m.hermitian_residual(), 0.0);
        // order: (0,0), (0,1), (1,0), (1,1)
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(m.get(0, 0), 4.0 * one);
        assert_eq!(m.get(1, 0), -one); // vertical at x = 0: −e^{0}
        assert!((m.get(3, 2) - one).norm() < 1e-15); // vertical at x = 1: −e^{iπ}
        assert_eq!(m.get(2, 0), -one); // horizontal
        assert_eq!(m.get(3, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dirichlet_minus_neumann_is_boundary_diagonal() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(hofstadter_weights(Flux::rational(1, 3).unwrap())));
        for m in [1, 2, 5] {
            let w = window_subgraph(&g, &folner_box(2, m));
            let d = assemble_dirichlet(&dml, &w).unwrap();
            let n = assemble_neumann(&dml, &w).unwrap();
            for i in 0..w.len() {
                for j in 0..w.len() {
                    let diff = d.get(i, j) - n.get(i, j);
                    if i != j {
                        assert_eq!(diff, Complex64::new(0.0, 0.0));
                    } else {
                        let v = &w.vertices()[i];
                        let missing = g.valence(v) - w.inner_valence(&g, v);
                        assert_eq!(diff, Complex64::new(missing as f64, 0.0));
                    }
                }
            }
        }
    }
}
