//! Matrix inertia by Hermitian Bunch–Kaufman factorization.
//!
//! P (M − λ) Pᵀ = L D Lᴴ with D block diagonal (1×1 and 2×2 Hermitian
//! blocks). By Sylvester's law of inertia the signs of D's eigenvalues are
//! those of M − λ, so only D is kept; L is discarded as it is formed.

use num_complex::Complex64;

use crate::finite_spectra::matrix::FiniteHermitian;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

/// Lower-triangle working storage of a Hermitian matrix.
struct Lower {
    n: usize,
    data: Vec<Complex64>,
}

impl Lower {
    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            self.data[i + j * self.n]
        } else {
            self.data[j + i * self.n].conj()
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, z: Complex64) {
        if i >= j {
            self.data[i + j * self.n] = z;
        } else {
            self.data[j + i * self.n] = z.conj();
        }
    }

    /// Symmetric interchange of indices p and q on the trailing block from k.
    fn swap(&mut self, k: usize, p: usize, q: usize) {
        if p == q {
            return;
        }
        for j in k..self.n {
            if j != p && j != q {
                let t = self.get(p, j);
                self.set(p, j, self.get(q, j));
                self.set(q, j, t);
            }
        }
        let t = self.get(p, p);
        self.set(p, p, self.get(q, q));
        self.set(q, q, t);
        let pq = self.get(q, p);
        self.set(q, p, pq.conj());
    }
}

/// Inertia of M − shift·I. Pivots with magnitude at most `zero_tol` are
/// counted as zero eigenvalues.
pub fn inertia(m: &FiniteHermitian, shift: f64, zero_tol: f64) -> Inertia {
    let n = m.dim();
    let mut a = Lower { n, data: vec![Complex64::new(0.0, 0.0); n * n] };
    for j in 0..n {
        for i in j..n {
            a.data[i + j * n] = m.get(i, j);
        }
        a.data[j + j * n] = Complex64::new(m.get(j, j).re - shift, 0.0);
    }

    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let mut out = Inertia::default();
    let classify = |d: f64, out: &mut Inertia| {
        if d.abs() <= zero_tol {
            out.zero += 1;
        } else if d < 0.0 {
            out.negative += 1;
        } else {
            out.positive += 1;
        }
    };

    let mut k = 0;
    while k < n {
        let absakk = a.get(k, k).re.abs();
        let (mut imax, mut colmax) = (k, 0.0f64);
        for i in k + 1..n {
            let v = a.data[i + k * n].norm();
            if v > colmax {
                colmax = v;
                imax = i;
            }
        }
        if absakk.max(colmax) <= zero_tol {
            // numerically zero column: a zero eigenvalue of the reduced matrix
            out.zero += 1;
            k += 1;
            continue;
        }
        let (kp, kstep) = if absakk >= alpha * colmax {
            (k, 1)
        } else {
            let mut rowmax = 0.0f64;
            for j in k..n {
                if j != imax {
                    rowmax = rowmax.max(a.get(imax, j).norm());
                }
            }
            if absakk * rowmax >= alpha * colmax * colmax {
                (k, 1)
            } else if a.get(imax, imax).re.abs() >= alpha * rowmax {
                (imax, 1)
            } else {
                (imax, 2)
            }
        };
        let kk = k + kstep - 1;
        a.swap(k, kk, kp);

        if kstep == 1 {
            let d = a.get(k, k).re;
            classify(d, &mut out);
            if d.abs() > zero_tol {
                let inv = 1.0 / d;
                for j in k + 1..n {
                    let ljk = a.data[j + k * n].conj() * inv;
                    if ljk == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in j..n {
                        let aik = a.data[i + k * n];
                        a.data[i + j * n] -= aik * ljk;
                    }
                }
            }
        } else {
            let d11 = a.get(k, k).re;
            let d22 = a.get(k + 1, k + 1).re;
            let b = a.get(k + 1, k);
            let half_tr = 0.5 * (d11 + d22);
            let disc = (0.25 * (d11 - d22).powi(2) + b.norm_sqr()).sqrt();
            classify(half_tr - disc, &mut out);
            classify(half_tr + disc, &mut out);
            let det = d11 * d22 - b.norm_sqr();
            // D⁻¹ = [[d22, −conj b], [−b, d11]] / det
            let (i11, i12, i21, i22) = (d22 / det, -b.conj() / det, -b / det, d11 / det);
            for j in k + 2..n {
                let aj0 = a.data[j + k * n];
                let aj1 = a.data[j + (k + 1) * n];
                // row j of A21 D⁻¹, conjugated
                let w0 = (aj0 * i11 + aj1 * i21).conj();
                let w1 = (aj0 * i12 + aj1 * i22).conj();
                for i in j..n {
                    let ai0 = a.data[i + k * n];
                    let ai1 = a.data[i + (k + 1) * n];
                    a.data[i + j * n] -= ai0 * w0 + ai1 * w1;
                }
            }
        }
        k += kstep;
    }
    out
}
