//! Bloch–Floquet reduction of periodic local operators.
//!
//! For an operator strictly invariant under the sublattice ⊕ pₐℤ (for
//! Landau-gauge weights with flux p/q this is q along the gauge axis), the
//! supercell holds `Π pₐ · #𝓕` sites and the fiber at quasi-momentum k is
//! F(k)_{u,v} = Σ_n A_{(u,n),(v,0)} e^{−i k·n}, n ranging over supercell
//! displacements. k is conjugate to supercell translations.

use std::sync::Arc;

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group_graph::{GroupElement, Vertex};
use crate::operators::LocalOperator;

#[derive(Clone, Copy, Debug)]
struct Hop {
    target: usize,
    source: usize,
    shift: GroupElement,
    coefficient: Complex64,
}

/// Supercell description of a periodic operator.
#[derive(Clone, Debug)]
pub struct MagneticCell {
    op: Arc<dyn LocalOperator>,
    period: GroupElement,
    dimension: usize,
    sites: Vec<Vertex>,
    hops: Vec<Hop>,
}

impl MagneticCell {
    pub fn new(op: Arc<dyn LocalOperator>) -> Result<Self> {
        let period = op.period().ok_or(Error::IrrationalFlux)?;
        let d = op.graph().dimension();
        let nf = op.graph().fundamental_size();
        let span = |a: usize| if a < d { 0..period.coord(a) } else { 0..1 };
        let mut sites = Vec::new();
        for x in span(0) {
            for y in span(1) {
                for z in span(2) {
                    for o in 0..nf {
                        sites.push(Vertex::new(o, GroupElement([x, y, z])));
                    }
                }
            }
        }
        sites.sort();
        let reduce = |t: GroupElement| -> (GroupElement, GroupElement) {
            let mut shift = GroupElement::ZERO;
            let mut rest = GroupElement::ZERO;
            for a in 0..d {
                let p = period.coord(a);
                shift.0[a] = t.coord(a).div_euclid(p);
                rest.0[a] = t.coord(a).rem_euclid(p);
            }
            (shift, rest)
        };

        let mut hops = Vec::new();
        for (s, v) in sites.iter().enumerate() {
            for (u, c) in op.column(v) {
                let (shift, rest) = reduce(u.translate);
                let target = sites
                    .binary_search(&Vertex::new(u.orbit, rest))
                    .expect("reduced vertex lies in the supercell");
                hops.push(Hop { target, source: s, shift, coefficient: c });
            }
            // the stencil must repeat exactly under each supercell generator
            for a in 0..d {
                let step = GroupElement::basis(a).scale(period.coord(a));
                let mut here = op.column(v);
                let mut there: Vec<_> = op
                    .column(&Vertex::new(v.orbit, v.translate + step))
                    .into_iter()
                    .map(|(u, c)| (Vertex::new(u.orbit, u.translate - step), c))
                    .collect();
                here.sort_by_key(|e| e.0);
                there.sort_by_key(|e| e.0);
                let same = here.len() == there.len()
                    && here.iter().zip(&there).all(|(a, b)| a.0 == b.0 && (a.1 - b.1).norm() <= 1e-12);
                if !same {
                    return Err(Error::NotPeriodic);
                }
            }
        }
        Ok(MagneticCell { op, period, dimension: d, sites, hops })
    }

    pub fn operator(&self) -> &Arc<dyn LocalOperator> {
        &self.op
    }

    /// Sites in the supercell, q · #𝓕 for Landau flux p/q.
    pub fn fiber_dim(&self) -> usize {
        self.sites.len()
    }

    /// Number of Γ-elements per supercell.
    pub fn cell_volume(&self) -> usize {
        (0..self.dimension).map(|a| self.period.coord(a) as usize).product()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn period(&self) -> GroupElement {
        self.period
    }

    pub fn fundamental_size(&self) -> usize {
        self.op.graph().fundamental_size()
    }

    /// True when no hop crosses a supercell boundary: all fibers coincide.
    pub fn is_block_diagonal(&self) -> bool {
        self.hops.iter().all(|h| h.shift.is_zero())
    }

    pub fn bloch_fiber(&self, k: &[f64]) -> Mat<Complex64> {
        let n = self.fiber_dim();
        let mut f = Mat::<Complex64>::zeros(n, n);
        for h in &self.hops {
            let phase: f64 = (0..self.dimension).map(|a| k[a] * h.shift.coord(a) as f64).sum();
            f[(h.target, h.source)] += h.coefficient * Complex64::from_polar(1.0, -phase);
        }
        f
    }

    pub fn fiber_eigenvalues(&self, k: &[f64]) -> Result<Vec<f64>> {
        let mut ev = self
            .bloch_fiber(k)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Backend(format!("{e:?}")))?;
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

/// Midpoint grid on [0, 2π)^d with `n` points per axis, in lexicographic order.
pub fn midpoint_grid(dimension: usize, n: usize) -> Vec<[f64; 3]> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let coords = |a: usize| if a < dimension { n } else { 1 };
    let mut out = Vec::with_capacity(n.pow(dimension as u32));
    for i in 0..coords(0) {
        for j in 0..coords(1) {
            for l in 0..coords(2) {
                let k = |idx: usize, a: usize| if a < dimension { (idx as f64 + 0.5) * h } else { 0.0 };
                out.push([k(i, 0), k(j, 1), k(l, 2)]);
            }
        }
    }
    out
}

/// max |F − Fᴴ| entrywise.
pub fn fiber_hermitian_residual(f: &Mat<Complex64>) -> f64 {
    let n = f.nrows();
    let mut r = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            r = r.max((f[(i, j)] - f[(j, i)].conj()).norm());
        }
    }
    r
}
