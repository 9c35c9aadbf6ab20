//! Gram matrices of shifted radial functions in L²(ℝⁿ).
//!
//! Two bases are supported: the Gaussian h_a(x) = e^{-a|x|²} and the
//! Bessel-potential type f_{a,μ}(x) = (a/|x|)^μ K_μ(a|x|). Their shift Gram
//! matrices are Schoenberg matrices of an explicit kernel; the closed form
//! is checked against a Fourier-side quadrature that never touches it.

use std::f64::consts::PI;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{euclid, PointSet};
use crate::quad::{integrate, wynn_epsilon, Integral, QuadOptions};
use crate::report::{extended, extended_vec, SCHEMA};
use crate::schoenberg::{self, assemble, check_sizes, eigen_extremes, MatrixSection};
use crate::specfun::{
    bessel_j_zeros, bessel_k_unchecked, beta, dimension_order, gamma, omega_unchecked,
};
use crate::symbols::RadialSymbol;

/// Shifted function families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Base {
    Gaussian { a: f64, n: u32 },
    Matern { a: f64, mu: f64, n: u32 },
}

impl Base {
    pub fn gaussian(a: f64, n: u32) -> Result<Base> {
        if !(a > 0.0 && a.is_finite()) || n == 0 {
            return Err(Error::domain("gaussian_shift", format!("a = {a}, n = {n}")));
        }
        Ok(Base::Gaussian { a, n })
    }

    /// Requires 0 ≤ μ < n/4; μ within 1e-6 of n/4 is rejected as well, the
    /// L² norm blows up there.
    pub fn matern(a: f64, mu: f64, n: u32) -> Result<Base> {
        if !(a > 0.0 && a.is_finite()) || n == 0 {
            return Err(Error::domain("matern_shift", format!("a = {a}, n = {n}")));
        }
        let limit = n as f64 / 4.0;
        if !(mu >= 0.0 && mu < limit - 1e-6) {
            return Err(Error::domain(
                "matern_shift",
                format!("mu = {mu} outside [0, {limit}) for n = {n}"),
            ));
        }
        Ok(Base::Matern { a, mu, n })
    }

    pub fn dim(&self) -> u32 {
        match *self {
            Base::Gaussian { n, .. } | Base::Matern { n, .. } => n,
        }
    }

    pub fn id(&self) -> String {
        match *self {
            Base::Gaussian { a, n } => format!("gaussian_shift(a={a},n={n})"),
            Base::Matern { a, mu, n } => format!("matern_shift(a={a},mu={mu},n={n})"),
        }
    }

    /// The base function at |x| = ρ.
    pub fn eval(&self, rho: f64) -> f64 {
        match *self {
            Base::Gaussian { a, .. } => (-a * rho * rho).exp(),
            Base::Matern { a, mu, .. } => {
                if rho == 0.0 {
                    return f64::INFINITY;
                }
                (a / rho).powf(mu) * bessel_k_unchecked(mu, a * rho)
            }
        }
    }

    /// |f̂(t)|² with the unitary Fourier transform.
    pub fn hat_squared(&self, t: f64) -> f64 {
        match *self {
            Base::Gaussian { a, n } => gaussian_hat_sq(a, n, t),
            Base::Matern { a, mu, n } => {
                let h = matern_hat_unchecked(a, mu, n, t);
                h * h
            }
        }
    }
}

/// Unitary Fourier transform of f_{a,μ} at |t|:
/// 2^{q-μ} Γ(q-μ+1) / (a² + t²)^{q-μ+1}, q = n/2 - 1.
pub fn matern_hat(a: f64, mu: f64, n: u32, t: f64) -> Result<f64> {
    Base::matern(a, mu, n)?;
    if !(t >= 0.0) {
        return Err(Error::domain("matern_hat", format!("|t| = {t}")));
    }
    Ok(matern_hat_unchecked(a, mu, n, t))
}

fn matern_hat_unchecked(a: f64, mu: f64, n: u32, t: f64) -> f64 {
    let e = dimension_order(n) - mu + 1.0;
    2f64.powf(e - 1.0) * gamma(e).unwrap_or(f64::NAN) / (a * a + t * t).powf(e)
}

/// |ĥ_a(t)|² = (2a)^{-n} e^{-t²/(2a)}.
pub fn gaussian_hat_sq(a: f64, n: u32, t: f64) -> f64 {
    (2.0 * a).powi(-(n as i32)) * (-t * t / (2.0 * a)).exp()
}

fn divergent(what: &str) -> Error {
    Error::divergent(format!("{what}: profile is not integrable"))
}

/// ∫₀^∞ g over dyadic pieces [2^k, 2^{k+1}] in both directions from 1.
/// Slowly decaying tails are finished by Wynn's epsilon on the partial sums.
fn half_line(g: &dyn Fn(f64) -> f64, what: &str) -> Result<Integral> {
    let opts = QuadOptions::with_tol(1e-300, 1e-13);
    let mut out = integrate(g, 1.0, 2.0, &opts);
    for upward in [true, false] {
        let mut sums = Vec::new();
        let mut part = 0.0;
        let mut settled = false;
        for k in 0..80 {
            let (lo, hi) = if upward {
                (2f64.powi(k + 1), 2f64.powi(k + 2))
            } else {
                (2f64.powi(-k - 1), 2f64.powi(-k))
            };
            let p = integrate(g, lo, hi, &opts);
            out.error += p.error;
            out.panels += p.panels;
            out.converged &= p.converged;
            part += p.value;
            sums.push(part);
            if p.value.abs() <= 1e-17 * (out.value + part).abs() || p.value == 0.0 {
                settled = true;
                break;
            }
        }
        if !settled {
            let (limit, err) = wynn_epsilon(&sums[sums.len() - 40..]);
            if !limit.is_finite() || err > 1e-6 * (out.value.abs() + limit.abs()) {
                return Err(divergent(what));
            }
            part = limit;
            out.error += err;
        }
        out.value += part;
    }
    Ok(out)
}

/// H₀(r) = (2^q Γ(q+1))^{-1} ∫₀^∞ Ω_n(ru) u^{n-1} h₀(u) du, q = n/2 - 1.
///
/// For r > 0 the integral is split at the zeros of J_q(r·); if the pieces
/// have not died out after the first 120 zeros the alternating partial sums
/// are extrapolated. Returns a divergence error when neither settles.
pub fn fourier_bessel<H>(h0: H, n: u32, r: f64) -> Result<Integral>
where
    H: Fn(f64) -> f64,
{
    if n == 0 || !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain("fourier_bessel", format!("n = {n}, r = {r}")));
    }
    let q = dimension_order(n);
    let norm = 1.0 / (2f64.powf(q) * gamma(q + 1.0)?);
    let radial = |u: f64| u.powi(n as i32 - 1) * h0(u);
    if r == 0.0 {
        let mut out = half_line(&radial, "fourier_bessel")?;
        out.value *= norm;
        out.error *= norm;
        return Ok(out);
    }

    let opts = QuadOptions::with_tol(1e-300, 1e-13);
    let g = |u: f64| omega_unchecked(q, r * u) * radial(u);
    let zeros = bessel_j_zeros(q, 120);
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
        panels: 0,
        converged: true,
    };
    let mut sums = Vec::with_capacity(zeros.len());
    let mut lo = 0.0;
    let mut quiet = 0;
    for z in &zeros {
        let hi = z / r;
        let p = integrate(g, lo, hi, &opts);
        total.value += p.value;
        total.error += p.error;
        total.panels += p.panels;
        total.converged &= p.converged;
        sums.push(total.value);
        lo = hi;
        if p.value.abs() <= 1e-16 * total.value.abs() || p.value == 0.0 {
            quiet += 1;
            if quiet == 3 {
                total.value *= norm;
                total.error *= norm;
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    let (limit, err) = wynn_epsilon(&sums[sums.len() - 40..]);
    if !limit.is_finite() || err > 1e-6 * limit.abs().max(1e-300) {
        return Err(divergent("fourier_bessel"));
    }
    Ok(Integral {
        value: norm * limit,
        error: norm * (err + total.error),
        panels: total.panels,
        converged: total.converged,
    })
}

/// ⟨f_ξ, f_η⟩ = ∫|f̂(t)|² e^{-i(t, ξ-η)} dt evaluated on the Fourier side as
/// (2π)^{n/2} times the Fourier–Bessel transform of |f̂|² at |ξ-η|.
pub fn gram_oracle(base: &Base, xi: &[f64], eta: &[f64]) -> Result<Integral> {
    let n = base.dim();
    if xi.len() != n as usize || eta.len() != n as usize {
        return Err(Error::Degenerate(format!("shift vectors must lie in R^{n}")));
    }
    gram_oracle_at(base, euclid(xi, eta))
}

pub fn gram_oracle_at(base: &Base, r: f64) -> Result<Integral> {
    let n = base.dim();
    let scale = (2.0 * PI).powf(n as f64 / 2.0);
    let mut out = fourier_bessel(|t| base.hat_squared(t), n, r)?;
    out.value *= scale;
    out.error *= scale;
    Ok(out)
}

/// ‖f‖² = |S^{n-1}| ∫₀^∞ f(ρ)² ρ^{n-1} dρ, directly in x-space.
pub fn norm_squared_direct(base: &Base) -> Result<f64> {
    let n = base.dim();
    let sphere = 2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)?;
    let g = |rho: f64| {
        let f = base.eval(rho);
        f * f * rho.powi(n as i32 - 1)
    };
    Ok(sphere * half_line(&g, "norm_squared_direct")?.value)
}

/// F̃₀ = norm · (normalized Schoenberg symbol).
#[derive(Debug, Clone)]
pub struct GramKernel {
    base: Base,
    norm: f64,
    symbol: RadialSymbol,
}

impl GramKernel {
    pub fn base(&self) -> &Base {
        &self.base
    }

    /// F̃₀(0) = ‖f‖².
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// F̃₀/F̃₀(0) as a symbol.
    pub fn normalized(&self) -> &RadialSymbol {
        &self.symbol
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.norm * self.symbol.eval(r)
    }

    pub fn formula(&self) -> String {
        match self.base {
            Base::Gaussian { .. } => "(pi/2a)^{n/2} exp(-(a/2) r^2)".into(),
            Base::Matern { .. } => {
                "pi^{n/2} B(n/2-mu,1/2) 2^{2mu-n/2} (r/a)^p K_p(ar), p = n/2-2mu".into()
            }
        }
    }
}

/// Closed-form inner products of shifts:
/// Gaussian (π/2a)^{n/2} e^{-(a/2)r²};
/// f_{a,μ}: π^{n/2} B(n/2-μ, 1/2) 2^{2μ-n/2} (r/a)^p K_p(ar), p = n/2 - 2μ.
pub fn gram_closed_form(base: &Base) -> Result<GramKernel> {
    match *base {
        Base::Gaussian { a, n } => Ok(GramKernel {
            base: *base,
            norm: (PI / (2.0 * a)).powf(n as f64 / 2.0),
            symbol: RadialSymbol::gaussian(a / 2.0)?,
        }),
        Base::Matern { a, mu, n } => {
            let half = n as f64 / 2.0;
            let p = half - 2.0 * mu;
            let c = PI.powf(half) * beta(half - mu, 0.5)? * 2f64.powf(2.0 * mu - half);
            // (r/a)^p K_p(ar) = a^{-2p} 2^{p-1} Γ(p) M_p(ar).
            let at_zero = a.powf(-2.0 * p) * 2f64.powf(p - 1.0) * gamma(p)?;
            Ok(GramKernel {
                base: *base,
                norm: c * at_zero,
                symbol: RadialSymbol::matern(p, a)?,
            })
        }
    }
}

/// A base function shifted to every point of a set in ℝⁿ.
#[derive(Debug, Clone)]
pub struct ShiftFamily {
    base: Base,
    points: PointSet,
}

impl ShiftFamily {
    pub fn new(base: Base, points: PointSet) -> Result<ShiftFamily> {
        if points.dim() != base.dim() as usize {
            return Err(Error::Degenerate(format!(
                "{} needs points in R^{}, got R^{}",
                base.id(),
                base.dim(),
                points.dim()
            )));
        }
        Ok(ShiftFamily { base, points })
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn id(&self) -> String {
        format!("{} on {} points", self.base.id(), self.points.len())
    }
}

/// Gram section ⟨f_{x_i}, f_{x_j}⟩ over the index range.
pub fn gram_section(fam: &ShiftFamily, range: Range<usize>) -> Result<MatrixSection> {
    let kernel = gram_closed_form(&fam.base)?;
    Ok(assemble(&fam.points, kernel.normalized(), range)?.scaled(kernel.norm()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RieszConsistent,
    Degenerating,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::RieszConsistent => "Riesz-consistent",
            Verdict::Degenerating => "degenerating",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Below this λ_min of the normalized Gram the family is called degenerating.
pub const DEGENERATE_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct RieszReport {
    pub schema: u32,
    pub family: String,
    pub sizes: Vec<usize>,
    pub lambda_min: Vec<f64>,
    pub lambda_max: Vec<f64>,
    #[serde(serialize_with = "extended_vec")]
    pub condition: Vec<f64>,
    #[serde(serialize_with = "extended")]
    pub schur_bound: f64,
    #[serde(serialize_with = "serialize_verdict")]
    pub verdict: Verdict,
}

fn serialize_verdict<S: serde::Serializer>(v: &Verdict, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Extreme eigenvalues of nested leading sections of the normalized Gram.
///
/// Riesz-consistent: λ_min(N_max) within 5% of λ_min at the largest size
/// ≤ N_max/2, and λ_max(N_max) under the Schur bound of the kernel.
/// Degenerating: λ_min(N_max) < [`DEGENERATE_FLOOR`].
pub fn riesz_diagnostic(fam: &ShiftFamily, sizes: &[usize]) -> Result<RieszReport> {
    check_sizes(sizes, fam.points.len())?;
    let kernel = gram_closed_form(&fam.base)?;
    let last = *sizes.last().unwrap();
    let full = assemble(&fam.points, kernel.normalized(), 0..last)?;
    let extremes = sizes
        .par_iter()
        .map(|&m| eigen_extremes(&full.leading(m)?))
        .collect::<Result<Vec<_>>>()?;
    let lambda_min: Vec<f64> = extremes.iter().map(|e| e.0).collect();
    let lambda_max: Vec<f64> = extremes.iter().map(|e| e.1).collect();
    let condition = extremes
        .iter()
        .map(|&(lo, hi)| if lo > 0.0 { hi / lo } else { f64::INFINITY })
        .collect();

    let prefix = fam.points.prefix(last)?;
    let schur = match prefix.separation() {
        Ok(_) => schoenberg::schur_bound(&prefix, kernel.normalized())?.bound,
        Err(_) => f64::INFINITY,
    };
    let k = sizes.len() - 1;
    let lmin = lambda_min[k];
    let verdict = if lmin < DEGENERATE_FLOOR {
        Verdict::Degenerating
    } else {
        let half = sizes.iter().rposition(|&m| 2 * m <= last);
        match half {
            Some(h) if (lmin - lambda_min[h]).abs() < 0.05 * lmin && lambda_max[k] <= schur => {
                Verdict::RieszConsistent
            }
            _ => Verdict::Inconclusive,
        }
    };
    Ok(RieszReport {
        schema: SCHEMA,
        family: fam.id(),
        sizes: sizes.to_vec(),
        lambda_min,
        lambda_max,
        condition,
        schur_bound: schur,
        verdict,
    })
}

/// One two-route comparison.
#[derive(Debug, Clone, Serialize)]
pub struct GramCase {
    pub base: Base,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl GramCase {
    pub fn distance(&self) -> f64 {
        euclid(&self.xi, &self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Gaussian,
    Matern,
}

/// Deterministic random cases. Gaussian: n ∈ {1,2,3}, a log-uniform in
/// [1/4, 4]. Matérn: n ∈ {2,3}, μ ∈ [0, 0.9 n/4], a ∈ [1/2, 2]. Shift
/// distances are drawn as in [`random_pairs`].
pub fn random_cases(kind: FamilyKind, count: usize, seed: u64) -> Vec<GramCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let base = match kind {
                FamilyKind::Gaussian => Base::Gaussian {
                    n: rng.gen_range(1..=3u32),
                    a: 4f64.powf(rng.gen_range(-1.0..=1.0)),
                },
                FamilyKind::Matern => {
                    let n = rng.gen_range(2..=3u32);
                    Base::Matern {
                        mu: rng.gen_range(0.0..=0.9 * n as f64 / 4.0),
                        a: rng.gen_range(0.5..=2.0),
                        n,
                    }
                }
            };
            random_case(base, &mut rng)
        })
        .collect()
}

/// Random shift pairs of a fixed base: ξ uniform in [-2, 2]ⁿ and |ξ-η| in
/// [0.05, 3/√a] (Gaussian) or a|ξ-η| in [0.1, 4] (Matérn), where the kernel
/// is still well above the oracle's absolute accuracy.
pub fn random_pairs(base: &Base, count: usize, seed: u64) -> Vec<GramCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_case(*base, &mut rng)).collect()
}

fn random_case(base: Base, rng: &mut ChaCha8Rng) -> GramCase {
    let r = match base {
        Base::Gaussian { a, .. } => rng.gen_range(0.05..=3.0 / a.sqrt()),
        Base::Matern { a, .. } => rng.gen_range(0.1..=4.0) / a,
    };
    let n = base.dim() as usize;
    let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    let mut dir: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    dir.iter_mut().for_each(|v| *v *= r / len);
    let eta = xi.iter().zip(&dir).map(|(x, d)| x + d).collect();
    GramCase { base, xi, eta }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramRow {
    pub family: String,
    pub distance: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub oracle_error: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GramTable {
    pub schema: u32,
    pub rows: Vec<GramRow>,
    pub max_relative_deviation: f64,
}

impl GramTable {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        use crate::report::fmt17;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "family",
            "distance",
            "closed_form",
            "oracle",
            "oracle_error",
            "relative_deviation",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.family.clone(),
                fmt17(r.distance),
                fmt17(r.closed_form),
                fmt17(r.oracle),
                fmt17(r.oracle_error),
                fmt17(r.relative_deviation),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Closed form against oracle for every case, in parallel.
pub fn gram_verify(cases: &[GramCase]) -> Result<GramTable> {
    let rows = cases
        .par_iter()
        .map(|c| {
            let r = c.distance();
            let closed = gram_closed_form(&c.base)?.eval(r);
            let oracle = gram_oracle_at(&c.base, r)?;
            Ok(GramRow {
                family: c.base.id(),
                distance: r,
                closed_form: closed,
                oracle: oracle.value,
                oracle_error: oracle.error,
                relative_deviation: ((oracle.value - closed) / closed).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative_deviation = rows.iter().map(|r| r.relative_deviation).fold(0.0, f64::max);
    Ok(GramTable {
        schema: SCHEMA,
        rows,
        max_relative_deviation,
    })
}
