//! Nonnegative measures on ℝ₊ stored as atoms plus a piecewise-constant
//! density. These carry the Schoenberg measure σ, the Bernstein measure τ
//! and the spherical-mixture measure ν of a radial symbol.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::specfun;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson", into = "MeasureJson")]
pub struct SpectralMeasure {
    atoms: Vec<(f64, f64)>,
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DensityJson {
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureJson {
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<DensityJson>,
}

impl TryFrom<MeasureJson> for SpectralMeasure {
    type Error = Error;

    fn try_from(j: MeasureJson) -> Result<Self> {
        let atoms = j.atoms.iter().map(|a| (a[0], a[1])).collect();
        let (grid, values) = match j.density {
            Some(d) => (d.grid, d.values),
            None => (Vec::new(), Vec::new()),
        };
        SpectralMeasure::new(atoms, grid, values)
    }
}

impl From<SpectralMeasure> for MeasureJson {
    fn from(m: SpectralMeasure) -> Self {
        MeasureJson {
            atoms: m.atoms.iter().map(|&(s, w)| [s, w]).collect(),
            density: if m.grid.is_empty() {
                None
            } else {
                Some(DensityJson {
                    grid: m.grid,
                    values: m.values,
                })
            },
        }
    }
}

impl SpectralMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        for &(s, w) in &atoms {
            if !(s > 0.0 && s.is_finite() && w > 0.0 && w.is_finite()) {
                return Err(Error::Parse(format!(
                    "atom ({s}, {w}): location and mass must be positive and finite"
                )));
            }
        }
        if grid.is_empty() != values.is_empty() {
            return Err(Error::Parse("density grid/values mismatch".into()));
        }
        if !grid.is_empty() {
            if grid.len() != values.len() + 1 {
                return Err(Error::Parse(format!(
                    "density grid has {} nodes for {} cells",
                    grid.len(),
                    values.len()
                )));
            }
            if !(grid[0] >= 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Parse("density grid must start >= 0 and increase".into()));
            }
            if grid.iter().chain(&values).any(|v| !v.is_finite()) || values.iter().any(|&v| v < 0.0)
            {
                return Err(Error::Parse("density values must be finite and >= 0".into()));
            }
        }
        Ok(SpectralMeasure {
            atoms,
            grid,
            values,
        })
    }

    pub fn atom(location: f64) -> Result<Self> {
        Self::new(vec![(location, 1.0)], Vec::new(), Vec::new())
    }

    pub fn atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(atoms, Vec::new(), Vec::new())
    }

    /// Discretized Gamma law s^{β-1}e^{-s}/Γ(β) ds on `cells` geometrically
    /// spaced cells of [s_min, s_max]; each cell carries its exact mass.
    ///
    /// For β ≤ 1 the density's mass below s_min is kept as a cell [0, s_min),
    /// because ∫ s^{-1} τ(ds) diverges at the origin exactly then; for β > 1
    /// it is dropped. The result is renormalized to total mass 1.
    pub fn gamma_density(beta: f64, s_min: f64, s_max: f64, cells: usize) -> Result<Self> {
        if !(beta > 0.0) || !(s_min > 0.0) || !(s_max > s_min) || cells == 0 {
            return Err(Error::domain("gamma_density", "need beta > 0, 0 < s_min < s_max"));
        }
        let g = specfun::gamma(beta)?;
        let density = |s: f64| s.powf(beta - 1.0) * (-s).exp() / g;
        let opts = QuadOptions::with_tol(1e-300, 1e-13);
        let mut grid = Vec::with_capacity(cells + 2);
        let mut values = Vec::with_capacity(cells + 1);
        if beta <= 1.0 {
            // Lower incomplete gamma on [0, s_min] in series form.
            let mut term = s_min.powf(beta) / (beta * g);
            let mut mass = 0.0;
            for k in 0..200 {
                mass += term;
                let kf = k as f64;
                term *= -s_min * (beta + kf) / ((kf + 1.0) * (beta + kf + 1.0));
                if term.abs() < 1e-18 * mass {
                    break;
                }
            }
            grid.push(0.0);
            values.push(mass / s_min);
        }
        let log_ratio = (s_max / s_min).ln() / cells as f64;
        grid.push(s_min);
        for i in 0..cells {
            let a = *grid.last().unwrap();
            let b = if i + 1 == cells {
                s_max
            } else {
                s_min * ((i + 1) as f64 * log_ratio).exp()
            };
            let mass = integrate(density, a, b, &opts).value;
            values.push(mass / (b - a));
            grid.push(b);
        }
        let m = SpectralMeasure::new(Vec::new(), grid, values)?;
        Ok(m.normalized())
    }

    pub fn atom_list(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.grid
            .windows(2)
            .zip(&self.values)
            .map(|(w, &c)| (w[0], w[1], c))
    }

    pub fn has_density(&self) -> bool {
        !self.values.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>()
            + self.cells().map(|(a, b, c)| c * (b - a)).sum::<f64>()
    }

    pub fn is_zero(&self) -> bool {
        self.total_mass() == 0.0
    }

    /// Rescale to unit total mass.
    pub fn normalized(&self) -> Self {
        let m = self.total_mass();
        if m == 0.0 {
            return self.clone();
        }
        SpectralMeasure {
            atoms: self.atoms.iter().map(|&(s, w)| (s, w / m)).collect(),
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v / m).collect(),
        }
    }

    /// ∫ s^exponent dμ, exact per atom and per cell; +∞ when a charged cell
    /// touches the origin and exponent ≤ -1.
    pub fn moment(&self, exponent: f64) -> f64 {
        let mut total: f64 = self.atoms.iter().map(|&(s, w)| w * s.powf(exponent)).sum();
        for (a, b, c) in self.cells() {
            if c == 0.0 {
                continue;
            }
            if a == 0.0 && exponent <= -1.0 {
                return f64::INFINITY;
            }
            let piece = if exponent == -1.0 {
                (b / a).ln()
            } else {
                let e1 = exponent + 1.0;
                (b.powf(e1) - a.powf(e1)) / e1
            };
            total += c * piece;
        }
        total
    }

    /// ∫ g dμ: atoms exactly, density cells by adaptive quadrature.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let opts = QuadOptions::with_tol(1e-15, 1e-12);
        let mut total: f64 = self.atoms.iter().map(|&(s, w)| w * g(s)).sum();
        for (a, b, c) in self.cells() {
            if c != 0.0 {
                total += c * integrate(&g, a, b, &opts).value;
            }
        }
        total
    }

    /// μ([lo, hi]) with partial cells prorated (the density is constant).
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|&&(s, _)| s >= lo && s <= hi)
            .map(|a| a.1)
            .sum();
        let cells: f64 = self
            .cells()
            .map(|(a, b, c)| c * (b.min(hi) - a.max(lo)).max(0.0))
            .sum();
        atoms + cells
    }

    /// Smallest atom location or grid node `a` with μ([0, a]) > threshold.
    pub fn mass_quantile_location(&self, threshold: f64) -> Option<f64> {
        let mut candidates: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| a.0)
            .chain(self.grid.iter().copied())
            .collect();
        candidates.sort_by(f64::total_cmp);
        candidates
            .into_iter()
            .find(|&a| self.mass_between(0.0, a) > threshold)
    }

    /// Largest observed ratio μ[2u, 2v] / μ[u, v] over pairs of the given
    /// nodes. Doubling over all intervals cannot be decided from a finite
    /// representation; this is a grid diagnostic only.
    pub fn doubling_ratio(&self, nodes: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                let inner = self.mass_between(u, v);
                let outer = self.mass_between(2.0 * u, 2.0 * v);
                if inner == 0.0 {
                    if outer > 0.0 {
                        return f64::INFINITY;
                    }
                    continue;
                }
                worst = worst.max(outer / inner);
            }
        }
        worst
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}
