//! Cross-check of tr_Γ(Aⁿ) from walks against ∫λⁿ dF from fiber quadrature.

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{gamma_trace, LocalOperator};
use crate::vn_oracle::fiber::{midpoint_grid, MagneticCell};

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub walk: f64,
    pub quadrature: f64,
}

impl MomentRow {
    pub fn discrepancy(&self) -> f64 {
        (self.walk - self.quadrature).abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.rows.iter().map(MomentRow::discrepancy).fold(0.0, f64::max)
    }
}

/// (1/(vol·N^d)) Σ_k tr(F(k)ⁿ) for n = 0..=n_max, by repeated products.
pub fn quadrature_moments(cell: &MagneticCell, n_max: usize, grid: usize) -> Vec<f64> {
    let ks = midpoint_grid(cell.dimension(), grid);
    let per_k: Vec<Vec<f64>> = ks
        .par_iter()
        .map(|k| {
            let f = cell.bloch_fiber(k);
            let dim = f.nrows();
            let mut p = Mat::<Complex64>::identity(dim, dim);
            let mut traces = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                if n > 0 {
                    p = &p * &f;
                }
                traces.push((0..dim).map(|i| p[(i, i)].re).sum::<f64>());
            }
            traces
        })
        .collect();
    let norm = (cell.cell_volume() * ks.len()) as f64;
    (0..=n_max).map(|n| per_k.iter().map(|t| t[n]).sum::<f64>() / norm).collect()
}

pub fn moment_crosscheck(op: &dyn LocalOperator, cell: &MagneticCell, n_max: usize, grid: usize) -> Result<MomentReport> {
    let mut rows = Vec::with_capacity(n_max + 1);
    for (n, q) in quadrature_moments(cell, n_max, grid).into_iter().enumerate() {
        let walk = gamma_trace(op, n);
        if walk.im.abs() > 1e-9 * op.norm_bound().max(1.0).powi(n as i32) {
            return Err(Error::InvalidOperator(format!("tr_Γ(A^{n}) = {walk} is not real")));
        }
        rows.push(MomentRow { n, walk: walk.re, quadrature: q });
    }
    Ok(MomentReport { rows })
}
