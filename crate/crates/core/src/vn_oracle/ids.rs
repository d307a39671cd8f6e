//! Integrated density of states by midpoint quadrature over the torus, and
//! band intervals.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vn_oracle::fiber::{midpoint_grid, MagneticCell};

/// Refuse λ this close to a band edge.
pub const BAND_EDGE_TOL: f64 = 1e-6;

/// Bands whose refined intervals overlap or touch within this distance are
/// one spectral component. Dirac-type touchings (α = 1/2 at λ = 4) are
/// interior points of the spectrum, not edges.
pub const BAND_MERGE_TOL: f64 = 1e-6;

const TIE_REL: f64 = 1e-12;

/// Sorted fiber eigenvalues over a midpoint grid, kept per band.
#[derive(Clone, Debug)]
pub struct BandSample {
    grid: usize,
    points: usize,
    /// bands[b] = sorted values of the b-th fiber eigenvalue over the grid
    bands: Vec<Vec<f64>>,
    /// all eigenvalues, sorted
    all: Vec<f64>,
    /// eigenvalues per grid point, grid order
    per_k: Vec<Vec<f64>>,
    cell_volume: usize,
}

impl BandSample {
    pub fn new(cell: &MagneticCell, grid: usize) -> Result<Self> {
        let ks = midpoint_grid(cell.dimension(), grid);
        let per_k: Vec<Vec<f64>> = ks.par_iter().map(|k| cell.fiber_eigenvalues(k)).collect::<Result<_>>()?;
        let nb = cell.fiber_dim();
        let mut bands = vec![Vec::with_capacity(ks.len()); nb];
        for ev in &per_k {
            for (b, e) in ev.iter().enumerate() {
                bands[b].push(*e);
            }
        }
        for b in &mut bands {
            b.sort_by(f64::total_cmp);
        }
        let mut all: Vec<f64> = per_k.iter().flatten().copied().collect();
        all.sort_by(f64::total_cmp);
        Ok(BandSample { grid, points: ks.len(), bands, all, per_k, cell_volume: cell.cell_volume() })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// (1/(vol·N^d)) #{(k, j) : λ_j(k) ≤ λ}. Grid eigenvalues within
    /// rounding of λ sit on the level set {λ_j = λ}, a null set away from
    /// flat bands, and are counted with weight 1/2.
    pub fn ids(&self, lambda: f64) -> f64 {
        let tie = TIE_REL * lambda.abs().max(1.0);
        let below = self.all.partition_point(|&e| e < lambda - tie);
        let upto = self.all.partition_point(|&e| e <= lambda + tie);
        (below as f64 + 0.5 * (upto - below) as f64) / (self.cell_volume * self.points) as f64
    }

    /// Trace of λⁿ integrated over the sample.
    pub fn moment(&self, n: u32) -> f64 {
        self.all.iter().map(|e| e.powi(n as i32)).sum::<f64>() / (self.cell_volume * self.points) as f64
    }

    /// Per-band (min, max) over the grid.
    pub fn grid_bands(&self) -> Vec<(f64, f64)> {
        self.bands.iter().map(|b| (b[0], b[b.len() - 1])).collect()
    }

    /// max − min of band b over the grid.
    pub fn spread(&self, b: usize) -> f64 {
        let v = &self.bands[b];
        v[v.len() - 1] - v[0]
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn band_value(&self, b: usize) -> f64 {
        let v = &self.bands[b];
        0.5 * (v[0] + v[v.len() - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdsEstimate {
    pub value: f64,
    /// |F_N − F_2N|
    pub error: f64,
}

/// F(λ) from quadrature on the N and 2N midpoint grids. The fine grid
/// supplies the value.
#[derive(Clone, Debug)]
pub struct OracleIds {
    coarse: BandSample,
    fine: BandSample,
    spectrum: Vec<(f64, f64)>,
    fundamental_size: usize,
}

impl OracleIds {
    pub fn new(cell: &MagneticCell, grid: usize) -> Result<Self> {
        if grid < 8 {
            return Err(Error::Config(format!("oracle grid must be at least 8, got {grid}")));
        }
        let coarse = BandSample::new(cell, grid)?;
        let fine = BandSample::new(cell, 2 * grid)?;
        let spectrum = merge_bands(&refine_bands(cell, &fine)?);
        Ok(OracleIds { coarse, fine, spectrum, fundamental_size: cell.fundamental_size() })
    }

    pub fn grid(&self) -> usize {
        self.coarse.grid
    }

    pub fn fundamental_size(&self) -> usize {
        self.fundamental_size
    }

    /// Spectrum as disjoint closed intervals, ascending.
    pub fn spectrum(&self) -> &[(f64, f64)] {
        &self.spectrum
    }

    pub fn sample(&self) -> &BandSample {
        &self.fine
    }

    /// Distance from λ to the nearest band edge.
    pub fn edge_distance(&self, lambda: f64) -> f64 {
        self.spectrum
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .map(|e| (e - lambda).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn nearest_edge(&self, lambda: f64) -> f64 {
        self.spectrum
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .min_by(|a, b| (a - lambda).abs().total_cmp(&(b - lambda).abs()))
            .unwrap_or(f64::NAN)
    }

    /// Fails within `width` of a band edge.
    pub fn evaluate_excluding(&self, lambda: f64, width: f64) -> Result<IdsEstimate> {
        if self.edge_distance(lambda) < width {
            return Err(Error::BandEdge { lambda, edge: self.nearest_edge(lambda), width });
        }
        Ok(self.evaluate_unchecked(lambda))
    }

    pub fn evaluate(&self, lambda: f64) -> Result<IdsEstimate> {
        self.evaluate_excluding(lambda, BAND_EDGE_TOL)
    }

    pub fn evaluate_unchecked(&self, lambda: f64) -> IdsEstimate {
        let fine = self.fine.ids(lambda);
        IdsEstimate { value: fine, error: (fine - self.coarse.ids(lambda)).abs() }
    }
}

pub fn ids_oracle(cell: &MagneticCell, lambda: f64, grid: usize) -> Result<IdsEstimate> {
    OracleIds::new(cell, grid)?.evaluate(lambda)
}

/// Per-band intervals: grid extremes polished by a compass search in k.
pub fn band_edges(cell: &MagneticCell, grid: usize) -> Result<Vec<(f64, f64)>> {
    if grid < 64 {
        return Err(Error::Config(format!("band-edge grid must be at least 64, got {grid}")));
    }
    refine_bands(cell, &BandSample::new(cell, grid)?)
}

/// Disjoint spectral components of `cell`.
pub fn spectrum_intervals(cell: &MagneticCell, grid: usize) -> Result<Vec<(f64, f64)>> {
    Ok(merge_bands(&band_edges(cell, grid)?))
}

fn refine_bands(cell: &MagneticCell, sample: &BandSample) -> Result<Vec<(f64, f64)>> {
    let d = cell.dimension();
    let n = sample.grid;
    let ks = midpoint_grid(d, n);
    let nb = cell.fiber_dim();
    let per_k = &sample.per_k;
    let h0 = 2.0 * std::f64::consts::PI / n as f64;
    (0..nb)
        .into_par_iter()
        .map(|b| {
            let mut arg_lo = 0;
            let mut arg_hi = 0;
            for (i, ev) in per_k.iter().enumerate() {
                if ev[b] < per_k[arg_lo][b] {
                    arg_lo = i;
                }
                if ev[b] > per_k[arg_hi][b] {
                    arg_hi = i;
                }
            }
            let lo = polish(cell, b, ks[arg_lo], per_k[arg_lo][b], h0, d, 1.0)?;
            let hi = polish(cell, b, ks[arg_hi], per_k[arg_hi][b], h0, d, -1.0)?;
            Ok((lo, hi))
        })
        .collect()
}

/// Minimizes sign·λ_b(k) by compass search from `k0`.
fn polish(cell: &MagneticCell, b: usize, k0: [f64; 3], v0: f64, h0: f64, d: usize, sign: f64) -> Result<f64> {
    let mut k = k0;
    let mut best = sign * v0;
    let mut h = h0;
    let mut steps = 0;
    while h > 1e-10 && steps < 2000 {
        steps += 1;
        let mut improved = false;
        for a in 0..d {
            for s in [-1.0, 1.0] {
                let mut trial = k;
                trial[a] += s * h;
                let v = sign * cell.fiber_eigenvalues(&trial)?[b];
                if v < best {
                    best = v;
                    k = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok(sign * best)
}

/// Unions overlapping or touching intervals.
pub fn merge_bands(bands: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = bands.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in sorted {
        match out.last_mut() {
            Some(last) if lo <= last.1 + BAND_MERGE_TOL => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}
