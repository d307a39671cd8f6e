use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest window assembled densely.
pub const DENSE_LIMIT: usize = 5000;

/// A dense Hermitian matrix indexed by window vertex order, together with
/// the normalization #Λ_m of the window it was cut from.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteHermitian {
    dim: usize,
    /// column-major
    data: Vec<Complex64>,
    normalization: usize,
}

impl FiniteHermitian {
    pub fn zeros(dim: usize, normalization: usize) -> Result<Self> {
        if dim > DENSE_LIMIT {
            return Err(Error::WindowTooLarge { dim, limit: DENSE_LIMIT });
        }
        Ok(FiniteHermitian { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim], normalization })
    }

    pub fn from_fn(dim: usize, normalization: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let mut m = Self::zeros(dim, normalization)?;
        for j in 0..dim {
            for i in 0..dim {
                m.data[i + j * dim] = f(i, j);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normalization(&self) -> usize {
        self.normalization
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i + j * self.dim]
    }

    pub fn add_to(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i + j * self.dim] += z;
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i + j * self.dim] = z;
    }

    /// max |M_ij − conj M_ji|.
    pub fn hermitian_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for j in 0..self.dim {
            for i in 0..=j {
                r = r.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        r
    }

    /// Gershgorin enclosure [lo, hi] of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        if self.dim == 0 {
            return (0.0, 0.0);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let radius: f64 = (0..self.dim).filter(|&j| j != i).map(|j| self.get(i, j).norm()).sum();
            let c = self.get(i, i).re;
            lo = lo.min(c - radius);
            hi = hi.max(c + radius);
        }
        (lo, hi)
    }

    /// Gershgorin row-sum bound on ‖M‖.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Ascending eigenvalues, by a full Hermitian eigensolve.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        let mut ev = self
            .to_faer()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Backend(format!("{e:?}")))?;
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// U M U* for the diagonal unitary U = diag(u).
    pub fn conjugate_by_diagonal(&self, u: &[Complex64]) -> FiniteHermitian {
        let mut out = self.clone();
        for j in 0..self.dim {
            for i in 0..self.dim {
                out.data[i + j * self.dim] = u[i] * self.get(i, j) * u[j].conj();
            }
        }
        out
    }

    /// tr(Mⁿ) by sparse repeated products of each basis vector.
    pub fn trace_power(&self, n: usize) -> f64 {
        let cols: Vec<Vec<(usize, Complex64)>> = (0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .filter_map(|i| {
                        let z = self.get(i, j);
                        (z != Complex64::new(0.0, 0.0)).then_some((i, z))
                    })
                    .collect()
            })
            .collect();
        let mut total = 0.0;
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut w = v.clone();
        for start in 0..self.dim {
            v.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            v[start] = Complex64::new(1.0, 0.0);
            for _ in 0..n {
                w.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for (j, a) in v.iter().enumerate() {
                    if *a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for &(i, z) in &cols[j] {
                        w[i] += z * a;
                    }
                }
                std::mem::swap(&mut v, &mut w);
            }
            total += v[start].re;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> FiniteHermitian {
        let a = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
        FiniteHermitian::from_fn(3, 3, |i, j| Complex64::new(a[i][j], 0.0)).unwrap()
    }

    #[test]
    fn eigen_and_bounds() {
        let m = path3();
        let ev = m.eigenvalues().unwrap();
        let s = 2f64.sqrt();
        for (a, b) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(m.gershgorin(), (0.0, 4.0));
        assert_eq!(m.norm_bound(), 4.0);
        assert_eq!(m.hermitian_residual(), 0.0);
        // tr M² = Σλ² = 3·4 + 4·1
        assert!((m.trace_power(2) - 16.0).abs() < 1e-12);
        assert_eq!(m.trace_power(0), 3.0);
    }

    #[test]
    fn dense_limit() {
        assert!(matches!(
            FiniteHermitian::zeros(DENSE_LIMIT + 1, 1),
            Err(Error::WindowTooLarge { .. })
        ));
    }
}
