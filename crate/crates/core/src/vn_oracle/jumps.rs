//! Exact jumps D(λ) of F for models where they can be read off the fibers.

use crate::error::{Error, Result};
use crate::finite_spectra::clusters;
use crate::vn_oracle::fiber::MagneticCell;
use crate::vn_oracle::ids::BandSample;

/// Band spread below this is a flat band.
pub const FLAT_TOL: f64 = 1e-10;

/// Band spread above this is dispersive. In between the oracle abstains.
pub const DISPERSIVE_TOL: f64 = 1e-6;

/// (λ, D(λ)) for every atom of F, ascending in λ.
///
/// Block models (no hop leaves the supercell) have identical fibers, so
/// each per-cell eigenvalue is an atom of weight multiplicity/volume. In a
/// general periodic model the band functions are piecewise real-analytic,
/// so a band carries an atom exactly when it is constant; sampled bands are
/// classified as flat or dispersive and anything in between is refused.
pub fn jump_oracle(cell: &MagneticCell, grid: usize) -> Result<Vec<(f64, f64)>> {
    let vol = cell.cell_volume() as f64;
    if cell.is_block_diagonal() {
        let ev = cell.fiber_eigenvalues(&[0.0; 3])?;
        let scale = ev.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        return Ok(clusters(&ev, FLAT_TOL * scale)
            .into_iter()
            .map(|(l, mult)| (l, mult as f64 / vol))
            .collect());
    }
    let sample = BandSample::new(cell, grid)?;
    let mut flat = Vec::new();
    for b in 0..sample.band_count() {
        let spread = sample.spread(b);
        if spread < FLAT_TOL {
            flat.push(sample.band_value(b));
        } else if spread < DISPERSIVE_TOL {
            return Err(Error::NoJumpOracle);
        }
    }
    flat.sort_by(f64::total_cmp);
    Ok(clusters(&flat, FLAT_TOL).into_iter().map(|(l, mult)| (l, mult as f64 / vol)).collect())
}

/// D(λ) from an oracle table: the atom at λ if one lies within `tol`, else 0.
pub fn jump_at(table: &[(f64, f64)], lambda: f64, tol: f64) -> f64 {
    table.iter().find(|(l, _)| (l - lambda).abs() <= tol).map_or(0.0, |&(_, d)| d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::group_graph::{build_graph, GraphSpec};
    use crate::operators::{harper_dml, hofstadter_weights, Flux, StencilOperator, UniformWeight};

    #[test]
    fn triangle_cells() {
        let g = Arc::new(build_graph(&GraphSpec::triangle_cells()).unwrap());
        let (_, d) = harper_dml(g, Arc::new(UniformWeight));
        let j = jump_oracle(&MagneticCell::new(Arc::new(d)).unwrap(), 16).unwrap();
        assert_eq!(j.len(), 2);
        assert!(j[0].0.abs() < 1e-14 && j[0].1 == 1.0);
        assert!((j[1].0 - 3.0).abs() < 1e-14 && j[1].1 == 2.0);
        assert_eq!(jump_at(&j, 3.0, 1e-9), 2.0);
        assert_eq!(jump_at(&j, 1.5, 1e-9), 0.0);
    }

    #[test]
    fn zero_operator() {
        let g = Arc::new(build_graph(&GraphSpec::isolated_points()).unwrap());
        let z = StencilOperator::zero(g);
        let j = jump_oracle(&MagneticCell::new(Arc::new(z)).unwrap(), 16).unwrap();
        assert_eq!(j, vec![(0.0, 1.0)]);
    }

    #[test]
    fn hofstadter_has_no_atoms() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        for (p, q) in [(0, 1), (1, 2), (1, 3)] {
            let (_, d) = harper_dml(g.clone(), Arc::new(hofstadter_weights(Flux::rational(p, q).unwrap())));
            let cell = MagneticCell::new(Arc::new(d)).unwrap();
            assert!(jump_oracle(&cell, 16).unwrap().is_empty());
        }
    }
}
