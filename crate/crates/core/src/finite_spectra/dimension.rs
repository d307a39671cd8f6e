//! The window dimension functional
//! dim_{X_k} W = (1/#Λ_k) Σ_{x∈X_k} ⟨P_W δ_x, δ_x⟩.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exhaustion::Window;
use crate::finite_spectra::matrix::FiniteHermitian;

pub const PROJECTION_TOL: f64 = 1e-10;

/// max(‖P² − P‖, ‖P − P*‖) entrywise.
pub fn projection_residual(p: &FiniteHermitian) -> f64 {
    let a = p.to_faer();
    let sq = &a * &a;
    let n = p.dim();
    let mut r = p.hermitian_residual();
    for j in 0..n {
        for i in 0..n {
            r = r.max((sq[(i, j)] - a[(i, j)]).norm());
        }
    }
    r
}

/// dim_{X_k} of the range of `p`, a projection on ℓ²(`padded`), where
/// `window` ⊆ `padded`.
pub fn subspace_dim_xk(p: &FiniteHermitian, padded: &Window, window: &Window) -> Result<f64> {
    let r = projection_residual(p);
    if r > PROJECTION_TOL {
        return Err(Error::NotProjection(r));
    }
    let mut trace = 0.0;
    for v in window.vertices() {
        let i = padded
            .index_of(v)
            .ok_or_else(|| Error::Config("projection window does not contain X_k".into()))?;
        trace += p.get(i, i).re;
    }
    Ok(trace / window.normalization() as f64)
}

/// Orthonormalizes `vectors` (modified Gram–Schmidt, twice) and returns
/// the projection onto their span. Numerically dependent vectors are
/// dropped.
pub fn projection_onto(vectors: &[Vec<Complex64>], dim: usize) -> FiniteHermitian {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        let norm0 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in &basis {
                let c: Complex64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-10 * norm0.max(f64::MIN_POSITIVE) {
            w.iter_mut().for_each(|z| *z /= norm);
            basis.push(w);
        }
    }
    let mut p = FiniteHermitian::zeros(dim, 1).expect("projection within dense limit");
    for q in &basis {
        for j in 0..dim {
            if q[j] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..dim {
                p.add_to(i, j, q[i] * q[j].conj());
            }
        }
    }
    p
}

pub fn identity(dim: usize) -> FiniteHermitian {
    FiniteHermitian::from_fn(dim, 1, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
        .expect("identity within dense limit")
}

/// Projection onto ℓ²(S) for a set of indices S.
pub fn coordinate_projection(dim: usize, indices: &[usize]) -> FiniteHermitian {
    let mut p = FiniteHermitian::zeros(dim, 1).expect("projection within dense limit");
    for &i in indices {
        p.set(i, i, Complex64::new(1.0, 0.0));
    }
    p
}
