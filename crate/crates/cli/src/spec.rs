//! Experiment files: one JSON object per run, one command per file.

use std::path::{Path, PathBuf};

use schoenberg_core::gram::Base;
use schoenberg_core::measure::SpectralMeasure;
use schoenberg_core::points::{self, PointSet};
use schoenberg_core::symbols::{MeasureSpec, RadialSymbol, SymbolSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bounds,
    SpectrumSweep,
    Toeplitz,
    GramVerify,
    Riesz,
    Layers,
    Moments,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Bounds => "bounds",
            Command::SpectrumSweep => "spectrum-sweep",
            Command::Toeplitz => "toeplitz",
            Command::GramVerify => "gram-verify",
            Command::Riesz => "riesz",
            Command::Layers => "layers",
            Command::Moments => "moments",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSpec {
    Lattice {
        n: usize,
        #[serde(default = "one")]
        scale: f64,
        lo: f64,
        hi: f64,
        /// Reorder by distance from the lattice point nearest this location.
        #[serde(default)]
        sort_from: Option<Vec<f64>>,
    },
    Line {
        #[serde(default)]
        direction: Option<Vec<f64>>,
        count: usize,
    },
    QuadraticGaps {
        count: usize,
    },
    Gaps {
        gaps: Vec<f64>,
    },
    Jittered {
        n: usize,
        count: usize,
        d_target: f64,
        seed: u64,
        #[serde(default)]
        side: Option<f64>,
    },
    Explicit {
        dim: usize,
        points: Vec<Vec<f64>>,
    },
    File {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

impl PointSpec {
    pub fn resolve(&self, base_dir: &Path) -> schoenberg_core::Result<PointSet> {
        match self {
            PointSpec::Lattice {
                n,
                scale,
                lo,
                hi,
                sort_from,
            } => {
                let ps = points::lattice(*n, *scale, *lo, *hi)?;
                match sort_from {
                    None => Ok(ps),
                    Some(c) => {
                        // Coordinates are stored relative to the first point.
                        let shift: Vec<f64> = (0..*n).map(|_| (lo / scale).ceil() * scale).collect();
                        let near = (0..ps.len())
                            .min_by(|&i, &j| {
                                let d = |k: usize| {
                                    ps.point(k)
                                        .iter()
                                        .zip(c)
                                        .zip(&shift)
                                        .map(|((x, c), s)| (x + s - c).powi(2))
                                        .sum::<f64>()
                                };
                                d(i).total_cmp(&d(j))
                            })
                            .unwrap_or(0);
                        Ok(ps.sorted_by_distance_from(near))
                    }
                }
            }
            PointSpec::Line { direction, count } => {
                let dir = direction.clone().unwrap_or_else(|| vec![1.0]);
                points::toeplitz_line(dir.len(), &dir, *count)
            }
            PointSpec::QuadraticGaps { count } => points::quadratic_gaps(*count),
            PointSpec::Gaps { gaps } => points::toeplitz_like(gaps),
            PointSpec::Jittered {
                n,
                count,
                d_target,
                seed,
                side,
            } => match side {
                Some(side) => points::jittered_separated_in_box(*n, *count, *d_target, *side, *seed),
                None => points::jittered_separated(*n, *count, *d_target, *seed),
            },
            PointSpec::Explicit { dim, points } => PointSet::new(*dim, points.clone()),
            PointSpec::File { path } => PointSet::load(base_dir.join(path)),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "base", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Gaussian { a: f64, n: u32 },
    Matern { a: f64, mu: f64, n: u32 },
}

impl FamilySpec {
    pub fn resolve(&self) -> schoenberg_core::Result<Base> {
        match *self {
            FamilySpec::Gaussian { a, n } => Base::gaussian(a, n),
            FamilySpec::Matern { a, mu, n } => Base::matern(a, mu, n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    Auto,
    Direct,
    Theta,
    Poisson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentCase {
    pub alpha: f64,
    pub d: u32,
    pub measure: MeasureSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub command: Command,
    #[serde(default)]
    pub symbol: Option<SymbolSpec>,
    #[serde(default)]
    pub points: Option<PointSpec>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    /// Section size for `bounds` (defaults to the whole point set).
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub p_grid: Vec<usize>,
    /// Number of equispaced φ in [0, π] for the symbol sweep.
    #[serde(default)]
    pub phi_points: Option<usize>,
    #[serde(default)]
    pub method: Option<MethodSpec>,
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub cases: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub center: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub max_layer: Option<usize>,
    #[serde(default)]
    pub moments: Vec<MomentCase>,
    /// Output directory, relative to the spec file.
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from(".")
}

/// Everything a command needs, already resolved.
pub struct Resolved {
    pub spec: ExperimentSpec,
    pub symbol: Option<RadialSymbol>,
    pub points: Option<PointSet>,
    pub base: Option<Base>,
    pub moments: Vec<(f64, u32, SpectralMeasure)>,
    pub output_dir: PathBuf,
}

pub fn parse(text: &str) -> Result<ExperimentSpec, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

fn require<T>(v: &Option<T>, field: &str, cmd: Command) -> Result<(), String> {
    if v.is_none() {
        Err(format!("field `{field}` is required for command `{}`", cmd.as_str()))
    } else {
        Ok(())
    }
}

fn check_sizes(sizes: &[usize], cmd: Command) -> Result<(), String> {
    if sizes.is_empty() {
        return Err(format!("field `sizes` is required for command `{}`", cmd.as_str()));
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err("field `sizes` must be positive and strictly increasing".into());
    }
    Ok(())
}

/// Field presence per command, then resolution of every referenced symbol,
/// point set and measure. All failures here are spec errors.
pub fn resolve(spec: ExperimentSpec, spec_dir: &Path) -> Result<Resolved, String> {
    let cmd = spec.command;
    match cmd {
        Command::Bounds => {
            require(&spec.symbol, "symbol", cmd)?;
            require(&spec.points, "points", cmd)?;
        }
        Command::SpectrumSweep => {
            require(&spec.symbol, "symbol", cmd)?;
            require(&spec.points, "points", cmd)?;
            check_sizes(&spec.sizes, cmd)?;
        }
        Command::Toeplitz => require(&spec.symbol, "symbol", cmd)?,
        Command::GramVerify => require(&spec.family, "family", cmd)?,
        Command::Riesz => {
            require(&spec.family, "family", cmd)?;
            require(&spec.points, "points", cmd)?;
            check_sizes(&spec.sizes, cmd)?;
        }
        Command::Layers => require(&spec.points, "points", cmd)?,
        Command::Moments => {
            if spec.moments.is_empty() {
                return Err("field `moments` must list at least one case".into());
            }
        }
    }
    if !spec.sizes.is_empty() && cmd != Command::SpectrumSweep && cmd != Command::Riesz {
        if spec.sizes[0] == 0 || spec.sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err("field `sizes` must be positive and strictly increasing".into());
        }
    }
    let symbol = spec
        .symbol
        .as_ref()
        .map(|s| s.resolve(spec_dir))
        .transpose()
        .map_err(|e| format!("field `symbol`: {e}"))?;
    let points = spec
        .points
        .as_ref()
        .map(|p| p.resolve(spec_dir))
        .transpose()
        .map_err(|e| format!("field `points`: {e}"))?;
    let base = spec
        .family
        .as_ref()
        .map(FamilySpec::resolve)
        .transpose()
        .map_err(|e| format!("field `family`: {e}"))?;
    let moments = spec
        .moments
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.measure
                .resolve(spec_dir)
                .map(|m| (c.alpha, c.d, m))
                .map_err(|e| format!("field `moments[{i}].measure`: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let (Some(ps), Some(last)) = (&points, spec.sizes.last()) {
        if *last > ps.len() {
            return Err(format!("field `sizes`: {last} exceeds the {} points", ps.len()));
        }
    }
    let output_dir = spec_dir.join(&spec.output);
    Ok(Resolved {
        spec,
        symbol,
        points,
        base,
        moments,
        output_dir,
    })
}
