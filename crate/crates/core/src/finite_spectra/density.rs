use crate::error::{Error, Result};
use crate::finite_spectra::counting::SHIFT_REL;
use crate::finite_spectra::matrix::FiniteHermitian;

/// Default cluster radius for multiplicities, relative to ‖M‖.
pub const CLUSTER_REL: f64 = 1e-8;

/// Required separation of a cluster from the rest of the spectrum, in units
/// of the cluster radius.
pub const CLUSTER_GAP: f64 = 10.0;

/// Sorted eigenvalues of a window restriction with its normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowSpectrum {
    eigenvalues: Vec<f64>,
    normalization: usize,
    norm_bound: f64,
}

pub fn spectral_density(m: &FiniteHermitian) -> Result<WindowSpectrum> {
    Ok(WindowSpectrum {
        eigenvalues: m.eigenvalues()?,
        normalization: m.normalization(),
        norm_bound: m.norm_bound(),
    })
}

/// #eigenvalues in [λ − tol, λ + tol], validated to be isolated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Jump {
    pub multiplicity: usize,
    pub normalization: usize,
}

impl Jump {
    pub fn value(&self) -> f64 {
        self.multiplicity as f64 / self.normalization as f64
    }
}

impl WindowSpectrum {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, normalization: usize, norm_bound: f64) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        WindowSpectrum { eigenvalues, normalization, norm_bound }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn normalization(&self) -> usize {
        self.normalization
    }

    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// #{eigenvalues ≤ λ}, counting eigenvalues within the bracketing shift
    /// above λ (right continuity).
    pub fn count(&self, lambda: f64) -> usize {
        let eps = SHIFT_REL * self.norm_bound;
        self.eigenvalues.partition_point(|&e| e <= lambda + eps)
    }

    /// F_m(λ) = #{eigenvalues ≤ λ} / #Λ_m.
    pub fn ids(&self, lambda: f64) -> f64 {
        self.count(lambda) as f64 / self.normalization as f64
    }

    pub fn default_tol(&self) -> f64 {
        CLUSTER_REL * self.norm_bound.max(f64::MIN_POSITIVE)
    }

    /// D_m(λ) with cluster radius `tol`. Fails if the nearest eigenvalue
    /// outside the cluster is within `CLUSTER_GAP · tol` of λ.
    pub fn jump(&self, lambda: f64, tol: f64) -> Result<Jump> {
        let lo = self.eigenvalues.partition_point(|&e| e < lambda - tol);
        let hi = self.eigenvalues.partition_point(|&e| e <= lambda + tol);
        let below = lo.checked_sub(1).map(|i| lambda - self.eigenvalues[i]);
        let above = self.eigenvalues.get(hi).map(|e| e - lambda);
        let gap = below.into_iter().chain(above).fold(f64::INFINITY, f64::min);
        let required = CLUSTER_GAP * tol;
        if gap <= required {
            return Err(Error::UnresolvedCluster { lambda, gap, required });
        }
        Ok(Jump { multiplicity: hi - lo, normalization: self.normalization })
    }
}

/// D_m(λ) of a window matrix.
pub fn jump_dim(m: &FiniteHermitian, lambda: f64, tol: f64) -> Result<Jump> {
    spectral_density(m)?.jump(lambda, tol)
}

/// Eigenvalue clusters of width `tol`: (centre, multiplicity), ascending.
pub fn clusters(eigenvalues: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=eigenvalues.len() {
        if i == eigenvalues.len() || eigenvalues[i] - eigenvalues[i - 1] > tol {
            let group = &eigenvalues[start..i];
            if !group.is_empty() {
                out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
            }
            start = i;
        }
    }
    out
}
