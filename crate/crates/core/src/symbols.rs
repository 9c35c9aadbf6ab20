//! Radial symbols f: ℝ₊ → ℝ, their representing measures, moment criteria
//! and class diagnostics.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::report::extended;
use crate::quad::{integrate, QuadOptions};
use crate::specfun;

/// Dimensions n for which the symbol is claimed positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PdDims {
    All,
    UpTo(u32),
    Unknown,
}

impl PdDims {
    pub fn covers(self, n: usize) -> bool {
        match self {
            PdDims::All => true,
            PdDims::UpTo(m) => n <= m as usize,
            PdDims::Unknown => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassClaims {
    pub m_plus: bool,
    pub cm0: bool,
    /// Smallest α with f ∈ Φ_∞(α), when known.
    pub phi_infty_alpha: Option<f64>,
    pub positive_definite: PdDims,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    Gaussian { a: f64 },
    Exponential { a: f64 },
    Matern { p: f64, a: f64 },
    InversePower { beta: f64, tau: SpectralMeasure },
    TruncatedPower { l: f64 },
    TruncatedLinear,
    OmegaScaled { n: u32, rho: f64 },
    AlphaMixture { alpha: f64, measure: SpectralMeasure },
    BernsteinMixture { measure: SpectralMeasure },
    OmegaMixture { n: u32, measure: SpectralMeasure },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSymbol {
    kind: SymbolKind,
    claims: ClassClaims,
}

fn positive(name: &'static str, what: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(name, format!("{what} must be positive, got {v}")))
    }
}

fn mixture_claims(alpha: f64) -> ClassClaims {
    ClassClaims {
        m_plus: true,
        cm0: alpha <= 1.0,
        phi_infty_alpha: Some(alpha),
        positive_definite: PdDims::All,
    }
}

/// ∫_{s0}^{s1} e^{-s x} ds, stable as x → 0.
fn laplace_cell(s0: f64, s1: f64, x: f64) -> f64 {
    if x == 0.0 {
        return s1 - s0;
    }
    (-s0 * x).exp() * -(-(s1 - s0) * x).exp_m1() / x
}

// Discretization used for the Gamma Bernstein measure of (1+r)^{-β}.
const GAMMA_S_MIN: f64 = 1e-4;
const GAMMA_S_MAX: f64 = 40.0;
const GAMMA_CELLS: usize = 4000;

impl RadialSymbol {
    pub fn gaussian(a: f64) -> Result<Self> {
        let a = positive("gaussian", "a", a)?;
        Ok(RadialSymbol {
            kind: SymbolKind::Gaussian { a },
            claims: mixture_claims(2.0),
        })
    }

    pub fn exponential(a: f64) -> Result<Self> {
        let a = positive("exponential", "a", a)?;
        Ok(RadialSymbol {
            kind: SymbolKind::Exponential { a },
            claims: mixture_claims(1.0),
        })
    }

    /// Whittle–Matérn M_p(a r).
    pub fn matern(p: f64, a: f64) -> Result<Self> {
        let p = positive("matern", "p", p)?;
        let a = positive("matern", "a", a)?;
        let cm0 = p <= 0.5;
        Ok(RadialSymbol {
            kind: SymbolKind::Matern { p, a },
            claims: ClassClaims {
                m_plus: true,
                cm0,
                phi_infty_alpha: Some(if cm0 { 1.0 } else { 2.0 }),
                positive_definite: PdDims::All,
            },
        })
    }

    /// (1 + r)^{-β}, carrying its discretized Gamma Bernstein measure.
    pub fn inverse_power(beta: f64) -> Result<Self> {
        let beta = positive("inverse_power", "beta", beta)?;
        let tau = SpectralMeasure::gamma_density(beta, GAMMA_S_MIN, GAMMA_S_MAX, GAMMA_CELLS)?;
        Ok(RadialSymbol {
            kind: SymbolKind::InversePower { beta, tau },
            claims: mixture_claims(1.0),
        })
    }

    /// (1 - r)₊^l; positive definite in ℝⁿ iff l ≥ (n+1)/2.
    pub fn truncated_power(l: f64) -> Result<Self> {
        let l = positive("truncated_power", "l", l)?;
        let n_max = (2.0 * l - 1.0).floor();
        Ok(RadialSymbol {
            kind: SymbolKind::TruncatedPower { l },
            claims: ClassClaims {
                m_plus: true,
                cm0: false,
                phi_infty_alpha: None,
                positive_definite: if n_max >= 1.0 {
                    PdDims::UpTo(n_max as u32)
                } else {
                    PdDims::Unknown
                },
            },
        })
    }

    /// (1 - r/2)₊.
    pub fn truncated_linear() -> Self {
        RadialSymbol {
            kind: SymbolKind::TruncatedLinear,
            claims: ClassClaims {
                m_plus: true,
                cm0: false,
                phi_infty_alpha: None,
                positive_definite: PdDims::UpTo(1),
            },
        }
    }

    /// Ω_n(ρ r).
    pub fn omega_scaled(n: u32, rho: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("omega_scaled", "n must be >= 1"));
        }
        let rho = positive("omega_scaled", "rho", rho)?;
        Ok(RadialSymbol {
            kind: SymbolKind::OmegaScaled { n, rho },
            claims: ClassClaims {
                m_plus: false,
                cm0: false,
                phi_infty_alpha: None,
                positive_definite: PdDims::UpTo(n),
            },
        })
    }

    /// ∫ e^{-s r^α} σ(ds).
    pub fn alpha_mixture(alpha: f64, measure: SpectralMeasure) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::domain("alpha_mixture", format!("alpha = {alpha} not in (0, 2]")));
        }
        if measure.is_zero() {
            return Err(Error::Degenerate("mixture over the zero measure".into()));
        }
        Ok(RadialSymbol {
            kind: SymbolKind::AlphaMixture { alpha, measure },
            claims: mixture_claims(alpha),
        })
    }

    /// ∫ e^{-s r} τ(ds).
    pub fn bernstein_mixture(measure: SpectralMeasure) -> Result<Self> {
        if measure.is_zero() {
            return Err(Error::Degenerate("mixture over the zero measure".into()));
        }
        Ok(RadialSymbol {
            kind: SymbolKind::BernsteinMixture { measure },
            claims: mixture_claims(1.0),
        })
    }

    /// ∫ Ω_n(r t) ν(dt).
    pub fn omega_mixture(n: u32, measure: SpectralMeasure) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("omega_mixture", "n must be >= 1"));
        }
        if measure.is_zero() {
            return Err(Error::Degenerate("mixture over the zero measure".into()));
        }
        Ok(RadialSymbol {
            kind: SymbolKind::OmegaMixture { n, measure },
            claims: ClassClaims {
                m_plus: false,
                cm0: false,
                phi_infty_alpha: None,
                positive_definite: PdDims::UpTo(n),
            },
        })
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn claims(&self) -> ClassClaims {
        self.claims
    }

    pub fn id(&self) -> String {
        match &self.kind {
            SymbolKind::Gaussian { a } => format!("gaussian(a={a})"),
            SymbolKind::Exponential { a } => format!("exponential(a={a})"),
            SymbolKind::Matern { p, a } => format!("matern(p={p},a={a})"),
            SymbolKind::InversePower { beta, .. } => format!("inverse_power(beta={beta})"),
            SymbolKind::TruncatedPower { l } => format!("truncated_power(l={l})"),
            SymbolKind::TruncatedLinear => "truncated_linear".into(),
            SymbolKind::OmegaScaled { n, rho } => format!("omega_scaled(n={n},rho={rho})"),
            SymbolKind::AlphaMixture { alpha, measure } => format!(
                "alpha_mixture(alpha={alpha},atoms={},cells={})",
                measure.atom_list().len(),
                measure.cells().count()
            ),
            SymbolKind::BernsteinMixture { measure } => format!(
                "bernstein_mixture(atoms={},cells={})",
                measure.atom_list().len(),
                measure.cells().count()
            ),
            SymbolKind::OmegaMixture { n, measure } => format!(
                "omega_mixture(n={n},atoms={},cells={})",
                measure.atom_list().len(),
                measure.cells().count()
            ),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        match &self.kind {
            SymbolKind::Gaussian { a } => (-a * r * r).exp(),
            SymbolKind::Exponential { a } => (-a * r).exp(),
            SymbolKind::Matern { p, a } => specfun::matern_unchecked(*p, a * r),
            SymbolKind::InversePower { beta, .. } => (1.0 + r).powf(-beta),
            SymbolKind::TruncatedPower { l } => {
                if r >= 1.0 {
                    0.0
                } else {
                    (1.0 - r).powf(*l)
                }
            }
            SymbolKind::TruncatedLinear => (1.0 - 0.5 * r).max(0.0),
            SymbolKind::OmegaScaled { n, rho } => {
                specfun::omega_unchecked(specfun::dimension_order(*n), rho * r)
            }
            SymbolKind::AlphaMixture { alpha, measure } => laplace_mixture(measure, r.powf(*alpha)),
            SymbolKind::BernsteinMixture { measure } => laplace_mixture(measure, r),
            SymbolKind::OmegaMixture { n, measure } => {
                let q = specfun::dimension_order(*n);
                measure.integrate(|t| specfun::omega_unchecked(q, r * t))
            }
        }
    }

    /// Relative accuracy of a single evaluation, used to size noise floors.
    pub fn eval_accuracy(&self) -> f64 {
        match &self.kind {
            SymbolKind::Matern { .. } | SymbolKind::OmegaMixture { .. } => 1e-12,
            SymbolKind::OmegaScaled { .. } => 1e-13,
            _ => 1e-15,
        }
    }

    /// (α, σ) with f(r) = ∫ e^{-s r^α} σ(ds), when the measure is known.
    pub fn alpha_representation(&self) -> Option<(f64, SpectralMeasure)> {
        match &self.kind {
            SymbolKind::Gaussian { a } => Some((2.0, SpectralMeasure::atom(*a).ok()?)),
            SymbolKind::Exponential { a } => Some((1.0, SpectralMeasure::atom(*a).ok()?)),
            SymbolKind::Matern { p, a } if *p == 0.5 => {
                Some((1.0, SpectralMeasure::atom(*a).ok()?))
            }
            SymbolKind::InversePower { tau, .. } => Some((1.0, tau.clone())),
            SymbolKind::AlphaMixture { alpha, measure } => Some((*alpha, measure.clone())),
            SymbolKind::BernsteinMixture { measure } => Some((1.0, measure.clone())),
            _ => None,
        }
    }

    /// Bernstein measure τ of a CM₀ symbol.
    pub fn bernstein_measure(&self) -> Option<SpectralMeasure> {
        match self.alpha_representation() {
            Some((alpha, m)) if alpha == 1.0 => Some(m),
            _ => None,
        }
    }

    /// Schoenberg measure σ of a Φ_∞ symbol written as ∫ e^{-s r²} σ(ds).
    pub fn schoenberg_measure(&self) -> Option<SpectralMeasure> {
        match self.alpha_representation() {
            Some((alpha, m)) if alpha == 2.0 => Some(m),
            _ => None,
        }
    }

    fn oscillatory(&self) -> bool {
        matches!(
            self.kind,
            SymbolKind::OmegaScaled { .. } | SymbolKind::OmegaMixture { .. }
        )
    }

    /// Kinks of the symbol, used as quadrature breakpoints.
    fn kinks(&self) -> Vec<f64> {
        match self.kind {
            SymbolKind::TruncatedPower { .. } => vec![1.0],
            SymbolKind::TruncatedLinear => vec![2.0],
            _ => Vec::new(),
        }
    }
}

fn laplace_mixture(measure: &SpectralMeasure, x: f64) -> f64 {
    let atoms: f64 = measure
        .atom_list()
        .iter()
        .map(|&(s, w)| w * (-s * x).exp())
        .sum();
    let cells: f64 = measure
        .cells()
        .map(|(a, b, c)| c * laplace_cell(a, b, x))
        .sum();
    atoms + cells
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub formula: &'static str,
    pub classes: &'static str,
}

pub fn builtin_symbols() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "gaussian",
            params: vec![("a", 1.0)],
            formula: "exp(-a r^2)",
            classes: "M+, Phi_inf(2)",
        },
        CatalogEntry {
            name: "exponential",
            params: vec![("a", 1.0)],
            formula: "exp(-a r)",
            classes: "M+, CM0 = Phi_inf(1)",
        },
        CatalogEntry {
            name: "matern",
            params: vec![("p", 0.5), ("a", 1.0)],
            formula: "(a r)^p K_p(a r) / (2^(p-1) Gamma(p))",
            classes: "M+, Phi_inf; CM0 iff p <= 1/2",
        },
        CatalogEntry {
            name: "inverse_power",
            params: vec![("beta", 1.0)],
            formula: "(1 + r)^(-beta)",
            classes: "M+, CM0",
        },
        CatalogEntry {
            name: "truncated_power",
            params: vec![("l", 1.0)],
            formula: "(1 - r)_+^l",
            classes: "M+, Phi_n iff l >= (n+1)/2",
        },
        CatalogEntry {
            name: "truncated_linear",
            params: vec![],
            formula: "(1 - r/2)_+",
            classes: "M+, Phi_1",
        },
        CatalogEntry {
            name: "omega_scaled",
            params: vec![("n", 3.0), ("rho", 1.0)],
            formula: "Omega_n(rho r)",
            classes: "Phi_n",
        },
    ]
}

/// Look up a closed-form catalog symbol; missing parameters take defaults.
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<RadialSymbol> {
    let entry = builtin_symbols()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
    for key in params.keys() {
        if !entry.params.iter().any(|(p, _)| p == key) {
            return Err(Error::Parse(format!("symbol `{name}` has no parameter `{key}`")));
        }
    }
    let get = |key: &str| {
        params.get(key).copied().unwrap_or_else(|| {
            entry
                .params
                .iter()
                .find(|(p, _)| *p == key)
                .map(|p| p.1)
                .unwrap_or(f64::NAN)
        })
    };
    let dim = |v: f64| -> Result<u32> {
        if v >= 1.0 && v.fract() == 0.0 && v < 1e6 {
            Ok(v as u32)
        } else {
            Err(Error::domain("omega_scaled", format!("n = {v} is not a positive integer")))
        }
    };
    match name {
        "gaussian" => RadialSymbol::gaussian(get("a")),
        "exponential" => RadialSymbol::exponential(get("a")),
        "matern" => RadialSymbol::matern(get("p"), get("a")),
        "inverse_power" => RadialSymbol::inverse_power(get("beta")),
        "truncated_power" => RadialSymbol::truncated_power(get("l")),
        "truncated_linear" => Ok(RadialSymbol::truncated_linear()),
        "omega_scaled" => RadialSymbol::omega_scaled(dim(get("n"))?, get("rho")),
        _ => Err(Error::UnknownSymbol(name.to_string())),
    }
}

/// Measure as it appears in an experiment file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    File { file: PathBuf },
    Gamma { gamma: GammaSpec },
    Inline(SpectralMeasure),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub beta: f64,
    #[serde(default = "default_s_min")]
    pub s_min: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    #[serde(default = "default_cells")]
    pub cells: usize,
}

fn default_s_min() -> f64 {
    GAMMA_S_MIN
}

fn default_s_max() -> f64 {
    GAMMA_S_MAX
}

fn default_cells() -> usize {
    GAMMA_CELLS
}

impl MeasureSpec {
    pub fn resolve(&self, base_dir: &Path) -> Result<SpectralMeasure> {
        match self {
            MeasureSpec::File { file } => SpectralMeasure::load(base_dir.join(file)),
            MeasureSpec::Gamma { gamma } => {
                SpectralMeasure::gamma_density(gamma.beta, gamma.s_min, gamma.s_max, gamma.cells)
            }
            MeasureSpec::Inline(m) => Ok(m.clone()),
        }
    }
}

/// Symbol as it appears in an experiment file: `{"name": ..., params...}`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SymbolSpec {
    AlphaMixture { alpha: f64, measure: MeasureSpec },
    BernsteinMixture { measure: MeasureSpec },
    OmegaMixture { n: u32, measure: MeasureSpec },
    #[serde(untagged)]
    Builtin {
        name: String,
        #[serde(flatten)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaFields {
    alpha: f64,
    measure: MeasureSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BernsteinFields {
    measure: MeasureSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OmegaFields {
    n: u32,
    measure: MeasureSpec,
}

impl<'de> Deserialize<'de> for SymbolSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut map = serde_json::Map::deserialize(de)?;
        let name = match map.remove("name") {
            Some(serde_json::Value::String(s)) => s,
            _ => return Err(D::Error::custom("symbol needs a string field `name`")),
        };
        let rest = serde_json::Value::Object(map);
        let spec = match name.as_str() {
            "alpha_mixture" => {
                let f: AlphaFields = serde_json::from_value(rest).map_err(D::Error::custom)?;
                SymbolSpec::AlphaMixture {
                    alpha: f.alpha,
                    measure: f.measure,
                }
            }
            "bernstein_mixture" => {
                let f: BernsteinFields = serde_json::from_value(rest).map_err(D::Error::custom)?;
                SymbolSpec::BernsteinMixture { measure: f.measure }
            }
            "omega_mixture" => {
                let f: OmegaFields = serde_json::from_value(rest).map_err(D::Error::custom)?;
                SymbolSpec::OmegaMixture {
                    n: f.n,
                    measure: f.measure,
                }
            }
            _ => SymbolSpec::Builtin {
                params: serde_json::from_value(rest)
                    .map_err(|e| D::Error::custom(format!("symbol `{name}`: {e}")))?,
                name,
            },
        };
        Ok(spec)
    }
}

impl SymbolSpec {
    pub fn resolve(&self, base_dir: &Path) -> Result<RadialSymbol> {
        match self {
            SymbolSpec::AlphaMixture { alpha, measure } => {
                RadialSymbol::alpha_mixture(*alpha, measure.resolve(base_dir)?)
            }
            SymbolSpec::BernsteinMixture { measure } => {
                RadialSymbol::bernstein_mixture(measure.resolve(base_dir)?)
            }
            SymbolSpec::OmegaMixture { n, measure } => {
                RadialSymbol::omega_mixture(*n, measure.resolve(base_dir)?)
            }
            SymbolSpec::Builtin { name, params } => builtin(name, params),
        }
    }
}

// Doubling pieces [2^{k-1}, 2^k] must be Cauchy by this k.
const CAUCHY_K: u32 = 30;
const CAUCHY_TOL: f64 = 1e-10;
const RATIO_WINDOW: usize = 5;
const RATIO_MAX: f64 = 0.95;

/// ∫₀^∞ t^{d-1} f(t) dt, or +∞ when the doubling-interval partial
/// integrals fail to converge.
///
/// Pieces are integrated over [0, 1] and then [2^{k-1}, 2^k]. A piece that
/// is negligible against the running total ends the sum. If the pieces are
/// still above 1e-10 of the total at k = 30, the integral is kept only when
/// the last few piece ratios sit below 0.95, and the remaining geometric
/// tail is added; otherwise the result is +∞.
pub fn tail_moment(sym: &RadialSymbol, d: u32) -> Result<f64> {
    tail_moment_of(sym, d, 0.0, |t| sym.eval(t))
}

/// ∫_a^∞ f(t) dt, by the same doubling rule applied to u ↦ f(a + u).
pub fn tail_integral(sym: &RadialSymbol, a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::domain("tail_integral", "lower limit must be >= 0"));
    }
    tail_moment_of(sym, 1, a, |u| sym.eval(a + u))
}

/// ∫₀^∞ t^{d-1} f(t)² dt, the square-summability criterion.
pub fn tail_moment_squared(sym: &RadialSymbol, d: u32) -> Result<f64> {
    tail_moment_of(sym, d, 0.0, |t| sym.eval(t).powi(2))
}

fn tail_moment_of<F: Fn(f64) -> f64>(
    sym: &RadialSymbol,
    d: u32,
    shift: f64,
    f: F,
) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("tail_moment", "d must be >= 1"));
    }
    if sym.oscillatory() {
        return Err(Error::Unsupported(format!(
            "{}: oscillatory, t^(d-1) f(t) is not absolutely integrable",
            sym.id()
        )));
    }
    let opts = QuadOptions::with_tol(1e-300, 1e-13);
    let kinks: Vec<f64> = sym.kinks().iter().map(|k| k - shift).collect();
    let g = |t: f64| t.powi(d as i32 - 1) * f(t);
    let piece = |lo: f64, hi: f64| {
        let mut breaks = vec![lo];
        breaks.extend(kinks.iter().copied().filter(|&k| k > lo && k < hi));
        breaks.push(hi);
        breaks
            .windows(2)
            .map(|w| integrate(g, w[0], w[1], &opts).value)
            .sum::<f64>()
    };

    let mut total = piece(0.0, 1.0);
    let mut pieces = vec![total];
    for k in 1..=CAUCHY_K {
        let lo = (2.0f64).powi(k as i32 - 1);
        let inc = piece(lo, 2.0 * lo);
        total += inc;
        pieces.push(inc);
        if inc.abs() <= 1e-16 * total.abs() {
            return Ok(total);
        }
    }
    if pieces.last().unwrap().abs() <= CAUCHY_TOL * total.abs() {
        return Ok(total);
    }
    let tail = &pieces[pieces.len() - RATIO_WINDOW - 1..];
    let rho = tail
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, |m, r| if r.is_nan() { f64::INFINITY } else { m.max(r) });
    if rho <= RATIO_MAX {
        Ok(total + pieces.last().unwrap() * rho / (1.0 - rho))
    } else {
        Ok(f64::INFINITY)
    }
}

pub fn measure_moment(measure: &SpectralMeasure, exponent: f64) -> f64 {
    measure.moment(exponent)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentCheck {
    pub alpha: f64,
    pub d: u32,
    #[serde(serialize_with = "extended")]
    pub lhs: f64,
    #[serde(serialize_with = "extended")]
    pub rhs: f64,
    pub relative_error: Option<f64>,
    /// Both sides finite within 1e-6, or both infinite.
    pub consistent: bool,
}

/// ∫ t^{d-1} f(t) dt against (1/α)Γ(d/α) ∫ s^{-d/α} σ(ds).
pub fn moment_identity_check(alpha: f64, d: u32, measure: &SpectralMeasure) -> Result<MomentCheck> {
    let sym = RadialSymbol::alpha_mixture(alpha, measure.clone())?;
    let lhs = tail_moment(&sym, d)?;
    let ratio = d as f64 / alpha;
    let rhs = specfun::gamma(ratio)? / alpha * measure.moment(-ratio);
    let (relative_error, consistent) = match (lhs.is_finite(), rhs.is_finite()) {
        (true, true) => {
            let e = (lhs - rhs).abs() / rhs.abs();
            (Some(e), e <= 1e-6)
        }
        (false, false) => (None, true),
        _ => (None, false),
    };
    Ok(MomentCheck {
        alpha,
        d,
        lhs,
        rhs,
        relative_error,
        consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmViolation {
    pub k: u32,
    pub t: f64,
    /// Estimate of (-1)^k f^{(k)}(t).
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub k_max: u32,
    pub cm_violation: Option<CmViolation>,
    pub nonnegative: bool,
    pub nonincreasing: bool,
    pub unit_at_zero: bool,
}

impl ClassReport {
    pub fn consistent_with_cm(&self) -> bool {
        self.cm_violation.is_none()
    }

    pub fn consistent_with_m_plus(&self) -> bool {
        self.nonnegative && self.nonincreasing && self.unit_at_zero
    }
}

fn binomial(k: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

fn central_difference<F: Fn(f64) -> f64>(f: &F, t: f64, k: u32, h: f64) -> f64 {
    let half = k as f64 / 2.0;
    let sum: f64 = (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(k, j) * f(t + (half - j as f64) * h)
        })
        .sum();
    sum / h.powi(k as i32)
}

/// Finite-difference sign check of (-1)^k f^{(k)} on `grid` for k ≤ k_max,
/// plus sampled M₊ properties. A CM violation is reported only when it
/// exceeds ten times the estimated truncation plus rounding error.
pub fn class_diagnostics(sym: &RadialSymbol, grid: &[f64], k_max: u32) -> ClassReport {
    let f = |t: f64| sym.eval(t);
    let eps = sym.eval_accuracy();
    let mut cm_violation = None;
    'outer: for k in 1..=k_max {
        for &t in grid {
            if !(t > 0.0) {
                continue;
            }
            let h = (1e-4f64).max(1e-2 * t).min(t / (k as f64 + 1.0));
            let coarse = central_difference(&f, t, k, h);
            let fine = central_difference(&f, t, k, h / 2.0);
            let extrapolated = (4.0 * fine - coarse) / 3.0;
            let scale = f(t - k as f64 * h / 2.0).abs().max(f(t).abs());
            let rounding = eps * scale * 2f64.powi(k as i32) / (h / 2.0).powi(k as i32);
            let truncation = (fine - coarse).abs() / 3.0;
            let error = truncation + rounding;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let value = sign * extrapolated;
            if value < -10.0 * error {
                cm_violation = Some(CmViolation { k, t, value, error });
                break 'outer;
            }
        }
    }

    let tol = 1e-12;
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    ClassReport {
        k_max,
        cm_violation,
        nonnegative: values.iter().all(|&v| v >= -tol),
        nonincreasing: values.windows(2).all(|w| w[1] <= w[0] + tol),
        unit_at_zero: (f(0.0) - 1.0).abs() <= tol,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DominationReport {
    pub a: f64,
    pub constant: f64,
    pub max_ratio: f64,
    pub holds: bool,
}

/// Check f(|x-ξ|) ≤ C f(|x-η|) over `sample` with C = 2e^{a|ξ-η|}, where a
/// is the first location at which τ carries more than half its mass.
pub fn domination_constant_check(
    sym: &RadialSymbol,
    xi: &[f64],
    eta: &[f64],
    sample: &[Vec<f64>],
) -> Result<DominationReport> {
    let tau = sym
        .bernstein_measure()
        .ok_or_else(|| Error::Unsupported(format!("{}: Bernstein measure not available", sym.id())))?;
    if xi.len() != eta.len() || sample.iter().any(|x| x.len() != xi.len()) {
        return Err(Error::domain("domination_constant_check", "dimension mismatch"));
    }
    let half = 0.5 * tau.total_mass();
    let a = tau
        .mass_quantile_location(half)
        .ok_or_else(|| Error::Degenerate("measure has no mass".into()))?;
    let constant = 2.0 * (a * crate::points::euclid(xi, eta)).exp();
    let mut max_ratio: f64 = 0.0;
    for x in sample {
        let num = sym.eval(crate::points::euclid(x, xi));
        let den = sym.eval(crate::points::euclid(x, eta));
        let ratio = if num == den { 1.0 } else { num / den };
        max_ratio = max_ratio.max(if ratio.is_nan() { f64::INFINITY } else { ratio });
    }
    Ok(DominationReport {
        a,
        constant,
        max_ratio,
        holds: max_ratio <= constant,
    })
}

/// Density φ_{n,σ}(u) of the spherical mixture measure of a Φ_∞ symbol.
pub fn nu_density(sym: &RadialSymbol, n: u32, u: f64) -> Result<f64> {
    let sigma = sym
        .schoenberg_measure()
        .ok_or_else(|| Error::Unsupported(format!("{}: not a Gaussian mixture", sym.id())))?;
    if n == 0 || !(u >= 0.0) {
        return Err(Error::domain("nu_density", "need n >= 1 and u >= 0"));
    }
    let q = specfun::dimension_order(n);
    let nf = n as f64;
    let norm = u.powi(n as i32 - 1) / (2f64.powf(q) * specfun::gamma(q + 1.0)?);
    let kernel = |s: f64| {
        if s <= 0.0 {
            0.0
        } else {
            (2.0 * s).powf(-nf / 2.0) * (-u * u / (4.0 * s)).exp()
        }
    };
    Ok(norm * sigma.integrate(kernel))
}
