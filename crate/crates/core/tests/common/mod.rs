//! Reference values computed without the library: closed-form Bloch
//! eigenvalues of the Hofstadter DML for q ≤ 3 and exact walk counts.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

/// Eigenvalues, ascending, of 4 − H(θ, k) on a q-site strip, where
/// Hψ(x, y) = ψ(x ± 1, y) + e^{±2πiαx} ψ(x, y ± 1) and θ is the strip's
/// Bloch phase.
pub fn dml_bands(p: i64, q: i64, theta: f64, k: f64) -> Vec<f64> {
    let alpha = p as f64 / q as f64;
    let v = |x: i64| 2.0 * (k + 2.0 * PI * alpha * x as f64).cos();
    let mut e = match q {
        1 => vec![4.0 - 2.0 * theta.cos() - v(0)],
        2 => {
            // off-diagonal 1 + e^{-iθ}; diagonal ±2cos k
            let r = (v(0) * v(0) + 2.0 + 2.0 * theta.cos()).sqrt();
            vec![4.0 - r, 4.0 + r]
        }
        3 => hermitian3_eigenvalues(
            [4.0 - v(0), 4.0 - v(1), 4.0 - v(2)],
            (-1.0, 0.0),
            (-1.0, 0.0),
            (-theta.cos(), theta.sin()),
        ),
        _ => panic!("closed forms only for q ≤ 3"),
    };
    e.sort_by(f64::total_cmp);
    e
}

/// Trigonometric solution for a Hermitian 3×3 with diagonal `d` and upper
/// entries b01, b12, b02 given as (re, im).
fn hermitian3_eigenvalues(d: [f64; 3], b01: (f64, f64), b12: (f64, f64), b02: (f64, f64)) -> Vec<f64> {
    let abs2 = |z: (f64, f64)| z.0 * z.0 + z.1 * z.1;
    let off = abs2(b01) + abs2(b12) + abs2(b02);
    let mean = (d[0] + d[1] + d[2]) / 3.0;
    let c = [d[0] - mean, d[1] - mean, d[2] - mean];
    let p = ((c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + 2.0 * off) / 6.0).sqrt();
    if p == 0.0 {
        return vec![mean; 3];
    }
    // Re(b01 b12 conj(b02))
    let t = (b01.0 * b12.0 - b01.1 * b12.1, b01.0 * b12.1 + b01.1 * b12.0);
    let triple = t.0 * b02.0 + t.1 * b02.1;
    let det = c[0] * c[1] * c[2] + 2.0 * triple - c[0] * abs2(b12) - c[1] * abs2(b02) - c[2] * abs2(b01);
    let r = (det / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = mean + 2.0 * p * phi.cos();
    let lo = mean + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    vec![lo, 3.0 * mean - hi - lo, hi]
}

/// Per-k band values on an N × N midpoint grid of (θ, k).
pub fn band_samples(p: i64, q: i64, n: usize) -> Vec<Vec<f64>> {
    let h = 2.0 * PI / n as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(dml_bands(p, q, (i as f64 + 0.5) * h, (j as f64 + 0.5) * h));
        }
    }
    out
}

/// F(λ) per unit translation: (1/q) · mean over k of #{bands ≤ λ}.
pub fn ids(samples: &[Vec<f64>], q: i64, lambda: f64) -> f64 {
    let count: usize = samples.iter().map(|e| e.iter().filter(|&&x| x <= lambda).count()).sum();
    count as f64 / (q as f64 * samples.len() as f64)
}

/// (min, max) of each band over the grid.
pub fn band_ranges(samples: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let bands = samples[0].len();
    (0..bands)
        .map(|b| {
            samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e[b]), hi.max(e[b])))
        })
        .collect()
}

pub fn edge_distance(ranges: &[(f64, f64)], lambda: f64) -> f64 {
    ranges.iter().flat_map(|&(lo, hi)| [(lambda - lo).abs(), (lambda - hi).abs()]).fold(f64::INFINITY, f64::min)
}

pub fn in_spectrum(ranges: &[(f64, f64)], lambda: f64) -> bool {
    ranges.iter().any(|&(lo, hi)| lo <= lambda && lambda <= hi)
}

/// (1/q) · mean over k of tr F(k)ⁿ.
pub fn quadrature_moment(samples: &[Vec<f64>], q: i64, n: usize) -> f64 {
    let s: f64 = samples.iter().flat_map(|e| e.iter()).map(|x| x.powi(n as i32)).sum();
    s / (q as f64 * samples.len() as f64)
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// tr(Δⁿ) for Δ = 2 − S − S* on ℤ: closed walks of the two-step chain.
pub fn line_moment(n: usize) -> f64 {
    binomial(2 * n as u64, n as u64)
}

/// tr((4 − H)ⁿ) on ℤ² without flux, using tr H^{2j} = C(2j, j)².
pub fn square_moment(n: usize) -> f64 {
    (0..=n)
        .filter(|j| j % 2 == 0)
        .map(|j| {
            let walks = binomial(j as u64, (j / 2) as u64).powi(2);
            binomial(n as u64, j as u64) * 4f64.powi((n - j) as i32) * walks
        })
        .sum()
}

/// Exact DML band edges for q ≤ 3, from the known Harper bands.
pub fn exact_band_edges(p: i64, q: i64) -> Vec<(f64, f64)> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    match (p % q, q) {
        (0, 1) => vec![(0.0, 8.0)],
        (1, 2) => vec![(4.0 - 2.0 * s2, 4.0), (4.0, 4.0 + 2.0 * s2)],
        (1 | 2, 3) => vec![(3.0 - s3, 2.0), (5.0 - s3, 3.0 + s3), (6.0, 5.0 + s3)],
        _ => panic!("no closed form for {p}/{q}"),
    }
}
