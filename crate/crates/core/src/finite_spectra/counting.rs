//! Eigenvalue counting backends, selectable by name.

use crate::error::Result;
use crate::finite_spectra::inertia::inertia;
use crate::finite_spectra::matrix::FiniteHermitian;
use crate::registry::{Named, Registry};

/// Relative shift used to bracket a count when λ sits on an eigenvalue.
pub const SHIFT_REL: f64 = 1e-10;

/// Dimension above which `auto` switches from eigendecomposition to inertia.
pub const AUTO_THRESHOLD: usize = 2000;

/// #{eigenvalues ≤ λ}. When λ is numerically an eigenvalue, `bracket` holds
/// the counts at λ ∓ ε_shift and `value` is the upper one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Count {
    pub value: usize,
    pub bracket: Option<(usize, usize)>,
}

pub trait CountingBackend: Named + Send + Sync {
    fn count_leq(&self, m: &FiniteHermitian, lambda: f64) -> Result<Count>;
}

fn shift_for(m: &FiniteHermitian) -> f64 {
    SHIFT_REL * m.norm_bound().max(f64::MIN_POSITIVE)
}

/// Counts directly from a sorted eigenvalue list.
pub fn count_sorted(eigenvalues: &[f64], lambda: f64, shift: f64) -> Count {
    let leq = |x: f64| eigenvalues.partition_point(|&e| e <= x);
    let lo = leq(lambda - shift);
    let hi = leq(lambda + shift);
    if lo == hi {
        Count { value: leq(lambda), bracket: None }
    } else {
        Count { value: hi, bracket: Some((lo, hi)) }
    }
}

pub struct EigenBackend;

impl Named for EigenBackend {
    fn name(&self) -> &'static str {
        "eigen"
    }
}

impl CountingBackend for EigenBackend {
    fn count_leq(&self, m: &FiniteHermitian, lambda: f64) -> Result<Count> {
        Ok(count_sorted(&m.eigenvalues()?, lambda, shift_for(m)))
    }
}

/// Negative inertia plus nullity of M − λ, from a pivoted LDLᴴ.
pub struct InertiaBackend;

impl Named for InertiaBackend {
    fn name(&self) -> &'static str {
        "inertia"
    }
}

impl InertiaBackend {
    fn zero_tol(m: &FiniteHermitian) -> f64 {
        (m.dim().max(1) as f64) * f64::EPSILON * m.norm_bound()
    }
}

impl CountingBackend for InertiaBackend {
    fn count_leq(&self, m: &FiniteHermitian, lambda: f64) -> Result<Count> {
        let tol = Self::zero_tol(m);
        let at = inertia(m, lambda, tol);
        if at.zero == 0 {
            return Ok(Count { value: at.negative, bracket: None });
        }
        // λ is (numerically) an eigenvalue: bracket by shifting off it
        let eps = shift_for(m);
        let below = inertia(m, lambda - eps, tol);
        let above = inertia(m, lambda + eps, tol);
        let lo = below.negative + below.zero;
        let hi = above.negative + above.zero;
        Ok(Count { value: hi, bracket: Some((lo, hi)) })
    }
}

/// Eigendecomposition up to [`AUTO_THRESHOLD`], inertia beyond.
pub struct AutoBackend;

impl Named for AutoBackend {
    fn name(&self) -> &'static str {
        "auto"
    }
}

impl CountingBackend for AutoBackend {
    fn count_leq(&self, m: &FiniteHermitian, lambda: f64) -> Result<Count> {
        if m.dim() > AUTO_THRESHOLD {
            InertiaBackend.count_leq(m, lambda)
        } else {
            EigenBackend.count_leq(m, lambda)
        }
    }
}

pub fn counting_backends() -> Registry<dyn CountingBackend> {
    let mut r: Registry<dyn CountingBackend> = Registry::new("counting backend");
    r.register(Box::new(AutoBackend)).register(Box::new(EigenBackend)).register(Box::new(InertiaBackend));
    r
}

/// #{eigenvalues ≤ λ} with the default (`auto`) backend.
pub fn count_leq(m: &FiniteHermitian, lambda: f64) -> Result<Count> {
    AutoBackend.count_leq(m, lambda)
}
