//! Adaptive Gauss–Kronrod quadrature and series acceleration.
//!
//! Every integral in the crate goes through [`integrate`]: a global-adaptive
//! 7/15-point Gauss–Kronrod scheme that always bisects the panel with the
//! largest error estimate. Kronrod nodes are interior, so integrable endpoint
//! singularities are never evaluated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_panels: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            error: 0.0,
            panels: 0,
            converged: true,
        };
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let first = kronrod15(&f, lo, hi);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    while error > opts.abs_tol.max(opts.rel_tol * value.abs()) {
        if heap.len() >= opts.max_panels {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the incremental updates.
    let (v, e) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Integral {
        value: sign * v,
        error: e,
        panels: heap.len(),
        converged: e <= opts.abs_tol.max(opts.rel_tol * v.abs()),
    }
}

/// Integrate over `[a, b]` split at the given interior breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Integral {
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
        panels: 0,
        converged: true,
    };
    for w in breaks.windows(2) {
        let part = integrate(&f, w[0], w[1], opts);
        total.value += part.value;
        total.error += part.error;
        total.panels += part.panels;
        total.converged &= part.converged;
    }
    total
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the accelerated limit and a crude error estimate (difference of
/// the last two diagonal estimates).
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (partial_sums[0], f64::INFINITY),
        _ => {}
    }
    // eps[k] holds column k of the epsilon table for the current row.
    let mut prev_col: Vec<f64> = vec![0.0; n + 1];
    let mut cur_col: Vec<f64> = partial_sums.to_vec();
    let mut best = partial_sums[n - 1];
    let mut best_err = (partial_sums[n - 1] - partial_sums[n - 2]).abs();
    let mut last_even = partial_sums[n - 1];
    let mut col = 0usize;
    while cur_col.len() > 1 {
        let mut next = Vec::with_capacity(cur_col.len() - 1);
        for i in 0..cur_col.len() - 1 {
            let diff = cur_col[i + 1] - cur_col[i];
            let below = if col == 0 { 0.0 } else { prev_col[i + 1] };
            if diff == 0.0 || !diff.is_finite() {
                // Sequence converged exactly at this depth.
                return (best, best_err);
            }
            next.push(below + 1.0 / diff);
        }
        col += 1;
        prev_col = cur_col;
        cur_col = next;
        if col % 2 == 0 {
            let est = *cur_col.last().unwrap();
            if est.is_finite() {
                let err = (est - last_even).abs();
                if err <= best_err {
                    best = est;
                    best_err = err;
                }
                last_even = est;
            }
        }
    }
    (best, best_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_low_degree_polynomials() {
        for k in 0..=22 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let p = kronrod15(&|x: f64| x.powi(k), -1.0, 1.0);
            assert!((p.value - exact).abs() < 1e-14, "degree {k}: {}", p.value);
        }
    }

    #[test]
    fn gauss_part_is_exact_to_degree_13() {
        for k in 0..=13 {
            let p = kronrod15(&|x: f64| x.powi(k), -1.0, 1.0);
            assert!(p.error < 1e-14, "degree {k}: err {}", p.error);
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadOptions::default());
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let o = QuadOptions::default();
        let a = integrate(f64::exp, 0.0, 1.0, &o).value;
        let b = integrate(f64::exp, 1.0, 0.0, &o).value;
        assert!((a + b).abs() < 1e-15);
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn wynn_accelerates_alternating_harmonic() {
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (limit, _) = wynn_epsilon(&sums);
        assert!((limit - 2f64.ln()).abs() < 1e-10, "{limit}");
    }
}
