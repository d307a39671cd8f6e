//! The interior operators A′_m − λ i′_m : ℓ²(Y_m) → ℓ²(X_m).

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exhaustion::{Interior, Window};
use crate::finite_spectra::density::{CLUSTER_GAP, CLUSTER_REL};
use crate::operators::LocalOperator;

#[derive(Clone, Debug)]
pub struct RectangularRestriction {
    rows: usize,
    /// window indices of the columns (Y)
    columns: Vec<usize>,
    /// column-major rows × columns
    data: Vec<Complex64>,
    normalization: usize,
    lambda: f64,
}

/// Matrix of A i′ − λ i′ with rows over verts(X_m) and columns over Y.
///
/// Requires Y to be an r-interior with r at least the propagation bound, so
/// that A maps ℓ²(Y) into ℓ²(X_m).
pub fn interior_restriction(
    op: &dyn LocalOperator,
    window: &Window,
    interior: &Interior,
    lambda: f64,
) -> Result<RectangularRestriction> {
    let bound = op.propagation();
    if interior.radius < bound {
        return Err(Error::InteriorRadius { radius: interior.radius, bound });
    }
    let rows = window.len();
    let mut data = vec![Complex64::new(0.0, 0.0); rows * interior.interior.len()];
    for (c, &j) in interior.interior.iter().enumerate() {
        let v = &window.vertices()[j];
        for (u, z) in op.column(v) {
            let i = window.index_of(&u).ok_or_else(|| {
                Error::InvalidOperator(format!(
                    "column of interior vertex {v:?} leaves the window despite propagation bound {bound}"
                ))
            })?;
            data[i + c * rows] += z;
        }
        data[j + c * rows] -= Complex64::new(lambda, 0.0);
    }
    Ok(RectangularRestriction {
        rows,
        columns: interior.interior.clone(),
        data,
        normalization: window.normalization(),
        lambda,
    })
}

/// Largest |⟨Aδ_y, δ_u⟩| over interior y and u outside the window. Zero
/// whenever the propagation bound is respected.
pub fn interior_leakage(op: &dyn LocalOperator, window: &Window, interior: &Interior) -> f64 {
    interior
        .interior
        .iter()
        .flat_map(|&j| op.column(&window.vertices()[j]))
        .filter(|(u, _)| !window.contains(u))
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max)
}

/// Kernel dimension and rank of a rectangular restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelSplit {
    pub kernel: usize,
    pub rank: usize,
    pub columns: usize,
    pub normalization: usize,
}

impl KernelSplit {
    /// D′ = dim ker / #Λ.
    pub fn kernel_density(&self) -> f64 {
        self.kernel as f64 / self.normalization as f64
    }
}

impl RectangularRestriction {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn get(&self, i: usize, c: usize) -> Complex64 {
        self.data[i + c * self.rows]
    }

    fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.rows, self.cols(), |i, c| self.get(i, c))
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if self.cols() == 0 || self.rows == 0 {
            return Ok(Vec::new());
        }
        let mut sv = self.to_faer().singular_values().map_err(|e| Error::Backend(format!("{e:?}")))?;
        sv.sort_by(|a, b| b.total_cmp(a));
        Ok(sv)
    }

    /// Rank from a column-pivoted QR, computed without the SVD: diagonal
    /// entries of R above `tol · |R₁₁|`.
    pub fn rank_by_qr(&self, tol: f64) -> Result<usize> {
        if self.cols() == 0 || self.rows == 0 {
            return Ok(0);
        }
        let qr = self.to_faer().col_piv_qr();
        let r = qr.R();
        let n = r.nrows().min(r.ncols());
        let top = if n == 0 { 0.0 } else { r[(0, 0)].norm() };
        if top == 0.0 {
            return Ok(0);
        }
        Ok((0..n).filter(|&i| r[(i, i)].norm() > tol * top).count())
    }
}

pub fn default_kernel_tol() -> f64 {
    CLUSTER_REL
}

/// dim ker R: singular values below `tol · σ_max`, with the next singular
/// value required to exceed `CLUSTER_GAP · tol · σ_max`.
pub fn rect_kernel_dim(r: &RectangularRestriction, tol: f64) -> Result<KernelSplit> {
    let sv = r.singular_values()?;
    let cols = r.cols();
    let top = sv.first().copied().unwrap_or(0.0);
    // a square-or-tall matrix has `cols` singular values; short ones fewer
    let missing = cols.saturating_sub(sv.len());
    let (small, rank) = if top == 0.0 {
        (sv.len(), 0)
    } else {
        let cut = tol * top;
        let small = sv.iter().filter(|&&s| s < cut).count();
        let rank = sv.len() - small;
        let smallest_large = sv[rank - 1];
        if smallest_large <= CLUSTER_GAP * cut {
            return Err(Error::UnresolvedCluster {
                lambda: r.lambda,
                gap: smallest_large,
                required: CLUSTER_GAP * cut,
            });
        }
        (small, rank)
    };
    Ok(KernelSplit { kernel: small + missing, rank, columns: cols, normalization: r.normalization })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::exhaustion::{folner_box, interior_vertices, window_subgraph};
    use crate::finite_spectra::boundary::assemble_dirichlet;
    use crate::group_graph::{build_graph, GraphSpec};
    use crate::operators::{harper_dml, UniformWeight};

    #[test]
    fn path_columns() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(UniformWeight));
        let w = window_subgraph(&g, &folner_box(1, 5));
        let y = interior_vertices(&g, &w, 1);
        let r = interior_restriction(&dml, &w, &y, 0.0).unwrap();
        assert_eq!((r.rows(), r.cols()), (5, 3));
        let d = assemble_dirichlet(&dml, &w).unwrap();
        for c in 0..3 {
            for i in 0..5 {
                assert_eq!(r.get(i, c), d.get(i, c + 1));
            }
        }
        assert_eq!(interior_leakage(&dml, &w, &y), 0.0);
        let k = rect_kernel_dim(&r, 1e-8).unwrap();
        assert_eq!(k.kernel + k.rank, 3);
        assert_eq!(k.kernel, 0);
        assert_eq!(r.rank_by_qr(1e-8).unwrap(), 3);
    }

    #[test]
    fn radius_below_bound_is_rejected() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(UniformWeight));
        let w = window_subgraph(&g, &folner_box(1, 5));
        let y = interior_vertices(&g, &w, 0);
        assert!(matches!(
            interior_restriction(&dml, &w, &y, 0.0),
            Err(Error::InteriorRadius { radius: 0, bound: 1 })
        ));
        // and the bound really matters: radius-0 columns leak
        assert!(interior_leakage(&dml, &w, &y) > 0.0);
    }

    #[test]
    fn empty_interior() {
        let g = Arc::new(build_graph(&GraphSpec::line()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(UniformWeight));
        let w = window_subgraph(&g, &folner_box(1, 2));
        let y = interior_vertices(&g, &w, 1);
        let r = interior_restriction(&dml, &w, &y, 0.0).unwrap();
        assert_eq!(r.cols(), 0);
        assert_eq!(rect_kernel_dim(&r, 1e-8).unwrap().kernel, 0);
    }

    #[test]
    fn triangle_cells_kernel() {
        let g = Arc::new(build_graph(&GraphSpec::triangle_cells()).unwrap());
        let (_, dml) = harper_dml(g.clone(), Arc::new(UniformWeight));
        for m in 1..6 {
            let w = window_subgraph(&g, &folner_box(1, m));
            let y = interior_vertices(&g, &w, 1);
            for (lambda, per_cell) in [(0.0, 1), (3.0, 2), (1.0, 0)] {
                let r = interior_restriction(&dml, &w, &y, lambda).unwrap();
                let k = rect_kernel_dim(&r, 1e-8).unwrap();
                assert_eq!(k.kernel, per_cell * m);
                assert_eq!(k.kernel + r.rank_by_qr(1e-8).unwrap(), r.cols());
            }
        }
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let g = Arc::new(build_graph(&GraphSpec::isolated_points()).unwrap());
        let z = crate::operators::StencilOperator::zero(g.clone());
        let w = window_subgraph(&g, &folner_box(1, 3));
        let y = interior_vertices(&g, &w, 0);
        let r = interior_restriction(&z, &w, &y, 0.0).unwrap();
        assert_eq!(rect_kernel_dim(&r, 1e-8).unwrap().kernel, 3);
        // injective once shifted off the spectrum
        let r = interior_restriction(&z, &w, &y, 1.0).unwrap();
        assert_eq!(rect_kernel_dim(&r, 1e-8).unwrap().kernel, 0);
    }
}
