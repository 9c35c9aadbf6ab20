//! Symmetric eigenvalue solvers.
//!
//! The dense path reduces to tridiagonal form by Householder reflections and
//! then runs implicitly shifted QL with Wilkinson shifts. The Lanczos path
//! (full reorthogonalization) only targets the two extreme eigenvalues and
//! is meant for sections too large for the O(N³) reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Householder reduction of the symmetric matrix `a` (row-major, only the
/// lower triangle is read). Returns the diagonal `d` and the subdiagonal
/// `e` with `e[i]` coupling rows i-1 and i (`e[0]` = 0).
pub fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut e = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let m = i;
        let row = &a[i * n..i * n + m];
        let scale: f64 = row.iter().map(|v| v.abs()).sum();
        if m == 1 || scale == 0.0 {
            e[i] = row[m - 1];
            continue;
        }
        let mut h = 0.0;
        for k in 0..m {
            u[k] = row[k] / scale;
            h += u[k] * u[k];
        }
        let f = u[m - 1];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        u[m - 1] = f - g;

        // p = A_m u / h over the lower triangle, row by row.
        p[..m].fill(0.0);
        for j in 0..m {
            let rj = &a[j * n..j * n + j + 1];
            let uj = u[j];
            let mut acc = rj[j] * uj;
            for k in 0..j {
                acc += rj[k] * u[k];
                p[k] += rj[k] * uj;
            }
            p[j] += acc;
        }
        let mut up = 0.0;
        for k in 0..m {
            p[k] /= h;
            up += u[k] * p[k];
        }
        let kk = up / (2.0 * h);
        for k in 0..m {
            p[k] -= kk * u[k];
        }
        for j in 0..m {
            let (uj, qj) = (u[j], p[j]);
            let rj = &mut a[j * n..j * n + j + 1];
            for k in 0..=j {
                rj[k] -= uj * p[k] + qj * u[k];
            }
        }
    }
    let d = (0..n).map(|i| a[i * n + i]).collect();
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL, ascending.
/// `e[i]` couples rows i-1 and i.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    let mut e: Vec<f64> = e[1..].iter().copied().chain(std::iter::once(0.0)).collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Unsupported("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Full spectrum of a dense symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::Degenerate("matrix buffer is not n×n".into()));
    }
    let (d, e) = tridiagonalize(a.to_vec(), n);
    tridiagonal_eigenvalues(d, &e)
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub max_steps: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_steps: 600,
            tol: 1e-13,
            seed: 0x5eed,
        }
    }
}

/// Extreme eigenvalues (min, max) of the symmetric operator `matvec` on ℝⁿ.
///
/// Runs Lanczos with full reorthogonalization from a fixed random start and
/// stops when both extreme Ritz values move by less than `tol` (relative)
/// over 10 steps, or at the Krylov limit.
pub fn lanczos_extremes<F>(n: usize, matvec: F, opts: &LanczosOptions) -> Result<(f64, f64)>
where
    F: Fn(&[f64], &mut [f64]),
{
    if n == 0 {
        return Err(Error::Degenerate("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let steps = opts.max_steps.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta = vec![0.0];
    let mut w = vec![0.0; n];
    let mut last = (f64::NAN, f64::NAN);
    for k in 0..steps {
        matvec(&v, &mut w);
        let a = dot(&w, &v);
        alpha.push(a);
        basis.push(v.clone());
        // Two passes of classical Gram–Schmidt against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                axpy(-c, b, &mut w);
            }
        }
        let b = dot(&w, &w).sqrt();
        let exhausted = b <= 1e-14 * a.abs().max(1.0);
        if (k + 1) % 10 == 0 || exhausted || k + 1 == steps {
            let ritz = tridiagonal_eigenvalues(alpha.clone(), &beta)?;
            let now = (ritz[0], ritz[ritz.len() - 1]);
            let scale = now.0.abs().max(now.1.abs());
            let settled = (now.0 - last.0).abs() <= opts.tol * scale
                && (now.1 - last.1).abs() <= opts.tol * scale;
            if settled || exhausted || k + 1 == steps {
                return Ok(now);
            }
            last = now;
        }
        beta.push(b);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / b;
        }
    }
    unreachable!("loop returns at the last step")
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tridiag_half(n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
            if i + 1 < n {
                a[i * n + i + 1] = 0.5;
                a[(i + 1) * n + i] = 0.5;
            }
        }
        a
    }

    #[test]
    fn two_by_two() {
        let ev = symmetric_eigenvalues(&[1.0, 0.5, 0.5, 1.0], 2).unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-15 && (ev[1] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn tridiagonal_formula() {
        let n = 50;
        let ev = symmetric_eigenvalues(&tridiag_half(n), n).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let expect = 1.0 + ((n - k) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - expect).abs() < 1e-13, "k={k}: {v} vs {expect}");
        }
    }

    #[test]
    fn dense_matches_known_spectrum() {
        // Q diag(λ) Qᵀ with a Householder Q: the spectrum must come back.
        let n = 40;
        let lambda: Vec<f64> = (0..n).map(|i| (i as f64 - 7.5) * 0.37).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        let vv = dot(&v, &v);
        let q = |i: usize, j: usize| (i == j) as u8 as f64 - 2.0 * v[i] * v[j] / vv;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (0..n).map(|k| q(i, k) * lambda[k] * q(j, k)).sum();
            }
        }
        let ev = symmetric_eigenvalues(&a, n).unwrap();
        for (x, y) in ev.iter().zip(&lambda) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn identity_and_trivial_sizes() {
        let ev = symmetric_eigenvalues(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], 3).unwrap();
        assert_eq!(ev, vec![1.0, 1.0, 1.0]);
        assert_eq!(symmetric_eigenvalues(&[2.5], 1).unwrap(), vec![2.5]);
        assert!(symmetric_eigenvalues(&[], 0).unwrap().is_empty());
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let n = 300;
        let a: Vec<f64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (-((i as f64 - j as f64).abs())).exp() + if i == j { 0.1 * (i % 7) as f64 } else { 0.0 }
            })
            .collect();
        let dense = symmetric_eigenvalues(&a, n).unwrap();
        let (lo, hi) = lanczos_extremes(
            n,
            |x, y| {
                for i in 0..n {
                    y[i] = dot(&a[i * n..(i + 1) * n], x);
                }
            },
            &LanczosOptions::default(),
        )
        .unwrap();
        assert!((lo - dense[0]).abs() < 1e-9, "{lo} vs {}", dense[0]);
        assert!((hi - dense[n - 1]).abs() < 1e-9, "{hi} vs {}", dense[n - 1]);
    }
}
