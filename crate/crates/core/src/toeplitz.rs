//! Schoenberg–Toeplitz operators on ℤ¹: the symbol
//! a(f, e^{iφ}) = Σ_k f(|k|) e^{ikφ}, its endpoints c_± and finite-section
//! checks.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::points::toeplitz_line;
use crate::report::{extended, fmt17};
use crate::schoenberg::{assemble, eigenvalues};
use crate::specfun;
use crate::symbols::{tail_integral, tail_moment, RadialSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolValue {
    #[serde(serialize_with = "extended")]
    pub value: f64,
    pub error_bar: f64,
}

/// Truncated Fourier coefficients f(0), ..., f(K) of a monotone summable
/// symbol together with the tail bound 2∫_K^∞ f.
#[derive(Debug, Clone)]
pub struct DirectSeries {
    coeffs: Vec<f64>,
    error_bar: f64,
}

impl DirectSeries {
    pub fn new(sym: &RadialSymbol, k_max: usize) -> Result<Self> {
        if !sym.claims().m_plus {
            return Err(Error::Unsupported(format!(
                "{}: direct summation needs a monotone symbol",
                sym.id()
            )));
        }
        if !tail_moment(sym, 1)?.is_finite() {
            return Err(Error::divergent(format!("{}: sum of f(k) diverges", sym.id())));
        }
        Ok(DirectSeries {
            coeffs: (0..=k_max).map(|k| sym.eval(k as f64)).collect(),
            error_bar: 2.0 * tail_integral(sym, k_max as f64)?,
        })
    }

    pub fn eval(&self, phi: f64) -> SymbolValue {
        let value = self.coeffs[0]
            + 2.0
                * self.coeffs[1..]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * ((k + 1) as f64 * phi).cos())
                    .sum::<f64>();
        SymbolValue {
            value,
            error_bar: self.error_bar,
        }
    }
}

/// f(0) + 2 Σ_{k=1}^K f(k) cos kφ. The error bar 2∫_K^∞ f bounds the
/// dropped tail for monotone symbols.
pub fn symbol_direct(sym: &RadialSymbol, phi: f64, k_max: usize) -> Result<SymbolValue> {
    Ok(DirectSeries::new(sym, k_max)?.eval(phi))
}

/// ∫ ϑ₃(φ/2, e^{-s}) σ(ds); +∞ when ∫ σ(ds)/√s diverges and φ ≡ 0.
pub fn symbol_theta(sigma: &SpectralMeasure, phi: f64) -> f64 {
    if reduced_phi(phi) == 0.0 && !sigma.moment(-0.5).is_finite() {
        return f64::INFINITY;
    }
    sigma.integrate(|s| specfun::theta3_exp(phi, s))
}

/// (1 - r²)/(1 - 2r cos φ + r²) at r = e^{-s}, without cancellation.
fn poisson_kernel(s: f64, phi: f64) -> f64 {
    let r = (-s).exp();
    let one_minus_r = -(-s).exp_m1();
    let half = (0.5 * phi).sin();
    -(-2.0 * s).exp_m1() / (one_minus_r * one_minus_r + 4.0 * r * half * half)
}

/// ∫ P(e^{-s}, e^{iφ}) τ(ds); +∞ at φ ≡ 0 when ∫ τ(ds)/s diverges.
pub fn symbol_poisson(tau: &SpectralMeasure, phi: f64) -> f64 {
    if reduced_phi(phi) == 0.0 && !tau.moment(-1.0).is_finite() {
        return f64::INFINITY;
    }
    tau.integrate(|s| poisson_kernel(s, phi))
}

fn reduced_phi(phi: f64) -> f64 {
    phi.rem_euclid(2.0 * std::f64::consts::PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    PhiInfty,
    Cm0,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumInterval {
    pub c_minus: f64,
    #[serde(serialize_with = "extended")]
    pub c_plus: f64,
    /// Moment condition that failed when c_+ is infinite.
    pub divergent_criterion: Option<String>,
}

/// (c_-, c_+) = symbol at φ = π and φ = 0.
pub fn spectrum_interval(sym: &RadialSymbol, kind: SpectrumKind) -> Result<SpectrumInterval> {
    match kind {
        SpectrumKind::PhiInfty => {
            let sigma = sym.schoenberg_measure().ok_or_else(|| {
                Error::Unsupported(format!("{}: no Gaussian-mixture measure", sym.id()))
            })?;
            let c_plus = symbol_theta(&sigma, 0.0);
            Ok(SpectrumInterval {
                c_minus: symbol_theta(&sigma, std::f64::consts::PI),
                c_plus,
                divergent_criterion: (!c_plus.is_finite())
                    .then(|| "integral of sigma(ds)/sqrt(s) diverges".to_string()),
            })
        }
        SpectrumKind::Cm0 => {
            let tau = sym.bernstein_measure().ok_or_else(|| {
                Error::Unsupported(format!("{}: no Bernstein measure", sym.id()))
            })?;
            let divergent = !tau.moment(-1.0).is_finite();
            Ok(SpectrumInterval {
                c_minus: tau.integrate(|s| (0.5 * s).tanh()),
                c_plus: if divergent {
                    f64::INFINITY
                } else {
                    tau.integrate(|s| 1.0 / (0.5 * s).tanh())
                },
                divergent_criterion: divergent
                    .then(|| "integral of tau(ds)/s diverges".to_string()),
            })
        }
    }
}

/// Spectrum endpoints from whichever representation the symbol carries;
/// symbols without one use the extreme direct-series values on a φ grid.
pub fn spectrum_interval_auto(sym: &RadialSymbol) -> Result<SpectrumInterval> {
    match sym.alpha_representation() {
        Some((alpha, _)) if alpha == 1.0 => spectrum_interval(sym, SpectrumKind::Cm0),
        Some((alpha, _)) if alpha == 2.0 => spectrum_interval(sym, SpectrumKind::PhiInfty),
        _ => {
            let series = DirectSeries::new(sym, 4096)?;
            let values: Vec<f64> = (0..=720)
                .into_par_iter()
                .map(|i| series.eval(std::f64::consts::PI * i as f64 / 720.0).value)
                .collect();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(SpectrumInterval {
                c_minus: lo,
                c_plus: hi,
                divergent_criterion: None,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteSectionReport {
    pub size: usize,
    pub c_minus: f64,
    #[serde(serialize_with = "extended")]
    pub c_plus: f64,
    pub eig_min: f64,
    pub eig_max: f64,
    /// Every eigenvalue lies in [c_- - 1e-8, c_+ + 1e-8].
    pub contained: bool,
    /// Fraction of [c_-, c_+] within 1e-2·(c_+ - c_-) of an eigenvalue.
    #[serde(serialize_with = "extended")]
    pub coverage: f64,
}

pub const CONTAINMENT_TOL: f64 = 1e-8;

/// Spectrum of the N×N section on {0, 1, ..., N-1} against (c_-, c_+).
pub fn finite_section_check(
    sym: &RadialSymbol,
    n: usize,
    interval: &SpectrumInterval,
) -> Result<FiniteSectionReport> {
    let ps = toeplitz_line(1, &[1.0], n)?;
    let ev = eigenvalues(&assemble(&ps, sym, 0..n)?)?;
    let (c_minus, c_plus) = (interval.c_minus, interval.c_plus);
    let eig_min = ev[0];
    let eig_max = ev[ev.len() - 1];
    let coverage = if c_plus.is_finite() {
        coverage_fraction(&ev, c_minus, c_plus, 1e-2 * (c_plus - c_minus))
    } else {
        f64::NAN
    };
    Ok(FiniteSectionReport {
        size: n,
        c_minus,
        c_plus,
        eig_min,
        eig_max,
        contained: eig_min >= c_minus - CONTAINMENT_TOL && eig_max <= c_plus + CONTAINMENT_TOL,
        coverage,
    })
}

/// Measure of [lo, hi] ∩ ⋃[λ - ε, λ + ε] divided by hi - lo; `ev` sorted.
pub fn coverage_fraction(ev: &[f64], lo: f64, hi: f64, eps: f64) -> f64 {
    if !(hi > lo) {
        return 1.0;
    }
    let mut covered = 0.0;
    let mut reach = lo;
    for &l in ev {
        let a = (l - eps).max(reach);
        let b = (l + eps).min(hi);
        if b > a {
            covered += b - a;
            reach = b;
        }
    }
    covered / (hi - lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolMethod {
    DirectSeries,
    ThetaMixture,
    PoissonMixture,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToeplitzSymbolEval {
    pub method: SymbolMethod,
    pub phi_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub error_bars: Vec<f64>,
}

impl ToeplitzSymbolEval {
    /// CSV with header phi,value,error_bar.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["phi", "value", "error_bar"])?;
        for ((p, v), e) in self.phi_grid.iter().zip(&self.values).zip(&self.error_bars) {
            w.write_record([fmt17(*p), fmt17(*v), fmt17(*e)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evaluate the symbol over `phi_grid` in parallel. Mixture methods carry
/// a zero error bar (quadrature error only).
pub fn symbol_sweep(
    sym: &RadialSymbol,
    method: SymbolMethod,
    phi_grid: &[f64],
    k_max: usize,
) -> Result<ToeplitzSymbolEval> {
    let measure = match method {
        SymbolMethod::DirectSeries => None,
        SymbolMethod::ThetaMixture => Some(sym.schoenberg_measure().ok_or_else(|| {
            Error::Unsupported(format!("{}: no Gaussian-mixture measure", sym.id()))
        })?),
        SymbolMethod::PoissonMixture => Some(sym.bernstein_measure().ok_or_else(|| {
            Error::Unsupported(format!("{}: no Bernstein measure", sym.id()))
        })?),
    };
    let series = match method {
        SymbolMethod::DirectSeries => Some(DirectSeries::new(sym, k_max)?),
        _ => None,
    };
    let rows: Vec<SymbolValue> = phi_grid
        .par_iter()
        .map(|&phi| match (method, &measure, &series) {
            (SymbolMethod::ThetaMixture, Some(m), _) => SymbolValue {
                value: symbol_theta(m, phi),
                error_bar: 0.0,
            },
            (SymbolMethod::PoissonMixture, Some(m), _) => SymbolValue {
                value: symbol_poisson(m, phi),
                error_bar: 0.0,
            },
            (_, _, Some(series)) => series.eval(phi),
            _ => unreachable!("method and representation are matched above"),
        })
        .collect();
    Ok(ToeplitzSymbolEval {
        method,
        phi_grid: phi_grid.to_vec(),
        values: rows.iter().map(|r| r.value).collect(),
        error_bars: rows.iter().map(|r| r.error_bar).collect(),
    })
}
