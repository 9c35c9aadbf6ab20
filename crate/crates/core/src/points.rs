//! Finite point configurations X ⊂ ℝⁿ and the geometry the norm criteria
//! depend on: separation d_*(X), the dimension of the linear span, counts in
//! spherical layers and empirical δ-regularity profiles.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative singular-value threshold used by [`PointSet::span_dimension_default`].
pub const SPAN_TOL: f64 = 1e-9;

/// An ordered, immutable set of distinct points in ℝⁿ, translated so that
/// the first point sits at the origin.
#[derive(Debug, Clone)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    separation: OnceLock<f64>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coords == other.coords
    }
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Degenerate("ambient dimension must be >= 1".into()));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Degenerate(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Degenerate(format!("point {i} is not finite")));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Build from row-major coordinates.
    pub fn from_flat(dim: usize, mut coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::Degenerate("coordinate buffer is not n-aligned".into()));
        }
        if coords.len() >= dim {
            let origin: Vec<f64> = coords[..dim].to_vec();
            for chunk in coords.chunks_mut(dim) {
                for (c, o) in chunk.iter_mut().zip(&origin) {
                    *c -= o;
                }
            }
        }
        let ps = PointSet {
            dim,
            coords,
            separation: OnceLock::new(),
        };
        if ps.has_duplicates() {
            return Err(Error::Degenerate("point set contains duplicate points".into()));
        }
        Ok(ps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclid(self.point(i), self.point(j))
    }

    fn has_duplicates(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| lex_cmp(self.point(a), self.point(b)));
        idx.windows(2).any(|w| self.point(w[0]) == self.point(w[1]))
    }

    /// Sweep along the first axis: only pairs closer than the current best
    /// in that coordinate are compared.
    fn min_pair_distance(&self) -> f64 {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.point(a)[0].total_cmp(&self.point(b)[0]));
        let mut best = f64::INFINITY;
        for (k, &i) in idx.iter().enumerate() {
            let xi = self.point(i)[0];
            for &j in &idx[k + 1..] {
                if self.point(j)[0] - xi >= best {
                    break;
                }
                best = best.min(self.distance(i, j));
            }
        }
        best
    }

    /// d_*(X): the minimum pairwise Euclidean distance.
    pub fn separation(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::Degenerate(
                "separation needs at least two points".into(),
            ));
        }
        Ok(*self.separation.get_or_init(|| self.min_pair_distance()))
    }

    /// Leading section {x_0, ..., x_{count-1}}.
    pub fn prefix(&self, count: usize) -> Result<PointSet> {
        if count == 0 || count > self.len() {
            return Err(Error::Degenerate(format!(
                "prefix of {count} points from a set of {}",
                self.len()
            )));
        }
        PointSet::from_flat(self.dim, self.coords[..count * self.dim].to_vec())
    }

    /// Reorder by distance from point `center` (ties broken lexicographically),
    /// so leading sections are near-balls around it.
    pub fn sorted_by_distance_from(&self, center: usize) -> PointSet {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let c = self.point(center).to_vec();
        let norm = |i: usize| {
            self.point(i)
                .iter()
                .zip(&c)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
        };
        idx.sort_by(|&a, &b| {
            norm(a)
                .total_cmp(&norm(b))
                .then_with(|| lex_cmp(self.point(a), self.point(b)))
        });
        let coords = idx
            .iter()
            .flat_map(|&i| self.point(i).iter().copied())
            .collect();
        PointSet::from_flat(self.dim, coords).expect("reordering keeps points distinct")
    }

    /// Append points (coordinates relative to the current origin).
    pub fn with_points(&self, extra: &[Vec<f64>]) -> Result<PointSet> {
        let mut coords = self.coords.clone();
        for p in extra {
            if p.len() != self.dim {
                return Err(Error::Degenerate("dimension mismatch".into()));
            }
            coords.extend_from_slice(p);
        }
        PointSet::from_flat(self.dim, coords)
    }

    /// Numerical rank of the point matrix (rows = points).
    pub fn span_dimension(&self, tol: f64) -> usize {
        let sv = singular_values(&self.coords, self.len(), self.dim);
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol * top).count()
    }

    pub fn span_dimension_default(&self) -> usize {
        self.span_dimension(SPAN_TOL)
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<PointSet> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let dim = rdr.headers()?.len();
        let mut coords = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            for field in rec.iter() {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Parse(format!("row {}: `{field}` is not a number", line + 1))
                })?;
                coords.push(v);
            }
        }
        PointSet::from_flat(dim, coords)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let header: Vec<String> = (1..=self.dim).map(|k| format!("x{k}")).collect();
        wtr.write_record(&header)?;
        for p in self.iter() {
            wtr.write_record(p.iter().map(|c| format!("{c:.16e}")))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<PointSet> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.total_cmp(y);
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    std::cmp::Ordering::Equal
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Singular values of a rows×cols row-major matrix by one-sided Jacobi on
/// its columns.
fn singular_values(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut columns: Vec<Vec<f64>> = (0..cols)
        .map(|c| (0..rows).map(|r| data[r * cols + c]).collect())
        .collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha: f64 = columns[i].iter().map(|x| x * x).sum();
                let beta: f64 = columns[j].iter().map(|x| x * x).sum();
                let gamma: f64 = columns[i].iter().zip(&columns[j]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let xi = columns[i][r];
                    let xj = columns[j][r];
                    columns[i][r] = c * xi - s * xj;
                    columns[j][r] = s * xi + c * xj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    columns
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect()
}

/// Point counts N_m in the half-open layers mε ≤ |x_k - x_c| < (m+1)ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerProfile {
    pub center_index: usize,
    pub epsilon: f64,
    pub counts: Vec<usize>,
}

impl LayerProfile {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Index m of the layer containing distance `d`, honoring exact half-open
/// boundaries despite rounding in `d / eps`.
fn layer_index(d: f64, eps: f64) -> usize {
    let mut m = (d / eps).floor().max(0.0) as usize;
    if (m as f64 + 1.0) * eps <= d {
        m += 1;
    } else if m > 0 && (m as f64) * eps > d {
        m -= 1;
    }
    m
}

pub fn layer_counts(
    ps: &PointSet,
    center_index: usize,
    epsilon: f64,
    max_layer: usize,
) -> Result<LayerProfile> {
    if !(epsilon > 0.0) {
        return Err(Error::Degenerate(format!("epsilon = {epsilon} must be positive")));
    }
    if center_index >= ps.len() {
        return Err(Error::Degenerate(format!(
            "center {center_index} out of range for {} points",
            ps.len()
        )));
    }
    let mut counts = vec![0usize; max_layer + 1];
    for k in 0..ps.len() {
        let m = layer_index(ps.distance(k, center_index), epsilon);
        if m <= max_layer {
            counts[m] += 1;
        }
    }
    Ok(LayerProfile {
        center_index,
        epsilon,
        counts,
    })
}

/// The two layer-count bounds for a separated set of span dimension `d`:
/// ((2m+3)^d - (2m-1)^d, d·5^d·m^{d-1}).
pub fn layer_bound(d: u32, m: u64) -> Result<(u128, u128)> {
    if d == 0 || m == 0 {
        return Err(Error::Degenerate("layer_bound needs d >= 1 and m >= 1".into()));
    }
    let m = m as u128;
    let volume = (2 * m + 3).pow(d) - (2 * m - 1).pow(d);
    let crude = d as u128 * 5u128.pow(d) * m.pow(d - 1);
    Ok((volume, crude))
}

/// Integer lattice scale·ℤⁿ ∩ [lo, hi]ⁿ in lexicographic order.
pub fn lattice(n: usize, scale: f64, lo: f64, hi: f64) -> Result<PointSet> {
    if !(scale > 0.0) || n == 0 || !(hi >= lo) {
        return Err(Error::Generation(format!(
            "lattice(n={n}, scale={scale}, [{lo}, {hi}])"
        )));
    }
    let kmin = (lo / scale).ceil() as i64;
    let kmax = (hi / scale).floor() as i64;
    if kmax < kmin {
        return Err(Error::Generation("lattice box contains no points".into()));
    }
    let side = (kmax - kmin + 1) as usize;
    let total = side
        .checked_pow(n as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::Generation("lattice too large".into()))?;
    let mut coords = Vec::with_capacity(total * n);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        coords.extend(idx.iter().map(|&k| scale * (kmin + k as i64) as f64));
        for axis in (0..n).rev() {
            idx[axis] += 1;
            if idx[axis] < side {
                break;
            }
            idx[axis] = 0;
        }
    }
    PointSet::from_flat(n, coords)
}

/// {0, e, 2e, ..., (count-1)e} for the unit vector e along `direction`.
pub fn toeplitz_line(n: usize, direction: &[f64], count: usize) -> Result<PointSet> {
    if direction.len() != n || count == 0 {
        return Err(Error::Generation("toeplitz_line: bad direction or count".into()));
    }
    let norm = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Generation("toeplitz_line: zero direction".into()));
    }
    let unit: Vec<f64> = direction.iter().map(|c| c / norm).collect();
    let coords = (0..count)
        .flat_map(|k| unit.iter().map(move |u| k as f64 * u))
        .collect();
    PointSet::from_flat(n, coords)
}

/// Points on the real line with the prescribed consecutive gaps.
pub fn toeplitz_like(gaps: &[f64]) -> Result<PointSet> {
    if let Some(g) = gaps.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::Generation(format!("gap {g} must be positive and finite")));
    }
    let mut coords = Vec::with_capacity(gaps.len() + 1);
    let mut x = 0.0;
    coords.push(x);
    for g in gaps {
        x += g;
        coords.push(x);
    }
    PointSet::from_flat(1, coords)
}

/// {0, 1, 4, 9, ...}: consecutive gaps 2k+1 grow without bound.
pub fn quadratic_gaps(count: usize) -> Result<PointSet> {
    if count == 0 {
        return Err(Error::Generation("quadratic_gaps needs count >= 1".into()));
    }
    PointSet::from_flat(1, (0..count).map(|k| (k * k) as f64).collect())
}

/// Dart throwing in the cube [0, side]ⁿ with side = 2·d_target·count^{1/n}.
pub fn jittered_separated(n: usize, count: usize, d_target: f64, seed: u64) -> Result<PointSet> {
    let side = 2.0 * d_target * (count as f64).powf(1.0 / n as f64);
    jittered_separated_in_box(n, count, d_target, side, seed)
}

/// Dart throwing with a rejection budget of 1000·count samples.
pub fn jittered_separated_in_box(
    n: usize,
    count: usize,
    d_target: f64,
    side: f64,
    seed: u64,
) -> Result<PointSet> {
    if n == 0 || count == 0 || !(d_target > 0.0) || !(side > 0.0) {
        return Err(Error::Generation("jittered_separated: bad parameters".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 1000 * count;
    let mut coords: Vec<f64> = Vec::with_capacity(count * n);
    let mut tries = 0usize;
    let mut cand = vec![0.0; n];
    while coords.len() < count * n {
        if tries >= budget {
            return Err(Error::Generation(format!(
                "placed {} of {count} points with d_* >= {d_target} in [0,{side}]^{n} \
                 after {budget} samples",
                coords.len() / n
            )));
        }
        tries += 1;
        for c in cand.iter_mut() {
            *c = rng.gen::<f64>() * side;
        }
        if coords.chunks(n).all(|p| euclid(p, &cand) >= d_target) {
            coords.extend_from_slice(&cand);
        }
    }
    PointSet::from_flat(n, coords)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Centers {
    All,
    /// Centers at distance ≥ max(r) + δ from every face of the bounding box.
    Interior,
    Indices(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityProfile {
    pub delta: f64,
    pub span_dimension: usize,
    /// (r, min over centers of |Y_r(δ)| / r^{d-1}).
    pub profile: Vec<(f64, f64)>,
    /// Smallest grid radius from which the profile stays positive.
    pub r0: Option<f64>,
    pub centers_used: usize,
}

impl RegularityProfile {
    /// Positive profile minimum over r ≥ r0. A diagnostic, not a certificate.
    pub fn empirically_regular(&self) -> bool {
        self.r0.is_some()
    }
}

pub fn delta_regularity_profile(
    ps: &PointSet,
    delta: f64,
    r_grid: &[f64],
    centers: &Centers,
) -> Result<RegularityProfile> {
    if ps.len() < 2 {
        return Err(Error::Degenerate("regularity profile needs >= 2 points".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::Degenerate("delta must be positive".into()));
    }
    let d = ps.span_dimension_default().max(1);
    let chosen: Vec<usize> = match centers {
        Centers::All => (0..ps.len()).collect(),
        Centers::Indices(ix) => {
            if let Some(bad) = ix.iter().find(|&&i| i >= ps.len()) {
                return Err(Error::Degenerate(format!("center {bad} out of range")));
            }
            ix.clone()
        }
        Centers::Interior => {
            let reach = r_grid.iter().cloned().fold(0.0, f64::max) + delta;
            let (lo, hi) = bounding_box(ps);
            (0..ps.len())
                .filter(|&i| {
                    ps.point(i).iter().enumerate().all(|(a, &c)| {
                        hi[a] == lo[a] || (c - lo[a] >= reach && hi[a] - c >= reach)
                    })
                })
                .collect()
        }
    };
    let mut profile = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let mut worst = f64::INFINITY;
        for &j in &chosen {
            let count = (0..ps.len())
                .filter(|&k| {
                    let dist = ps.distance(k, j);
                    r <= dist && dist < r + delta
                })
                .count();
            worst = worst.min(count as f64 / r.powi(d as i32 - 1));
        }
        if chosen.is_empty() {
            worst = 0.0;
        }
        profile.push((r, worst));
    }
    let mut r0 = None;
    for &(r, v) in profile.iter().rev() {
        if v > 0.0 {
            r0 = Some(r);
        } else {
            break;
        }
    }
    Ok(RegularityProfile {
        delta,
        span_dimension: d,
        profile,
        r0,
        centers_used: chosen.len(),
    })
}

fn bounding_box(ps: &PointSet) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; ps.dim()];
    let mut hi = vec![f64::NEG_INFINITY; ps.dim()];
    for p in ps.iter() {
        for (a, &c) in p.iter().enumerate() {
            lo[a] = lo[a].min(c);
            hi[a] = hi[a].max(c);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_flat(1, xs.to_vec()).unwrap()
    }

    #[test]
    fn separation_examples() {
        let z = lattice(1, 1.0, 0.0, 100.0).unwrap();
        assert_eq!(z.separation().unwrap(), 1.0);
        assert_eq!(line(&[0.0, 0.5, 3.0, 4.0, 5.0]).separation().unwrap(), 0.5);
        let l2 = lattice(2, 2.0, 0.0, 20.0).unwrap();
        assert_eq!(l2.separation().unwrap(), 2.0);
        assert!(line(&[1.0]).separation().is_err());
    }

    #[test]
    fn construction_translates_first_point_to_origin() {
        let ps = PointSet::new(2, vec![vec![3.0, 4.0], vec![4.0, 4.0]]).unwrap();
        assert_eq!(ps.point(0), &[0.0, 0.0]);
        assert_eq!(ps.point(1), &[1.0, 0.0]);
    }

    #[test]
    fn duplicates_and_bad_rows_are_rejected() {
        assert!(PointSet::new(1, vec![vec![1.0], vec![1.0]]).is_err());
        assert!(PointSet::new(2, vec![vec![1.0]]).is_err());
        assert!(PointSet::new(1, vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn span_dimension_examples() {
        let e = [1.0, 2.0, -0.5];
        let pts: Vec<Vec<f64>> = [0.0, 1.0, 2.0, 5.0]
            .iter()
            .map(|t| e.iter().map(|c| c * t).collect())
            .collect();
        assert_eq!(PointSet::new(3, pts).unwrap().span_dimension(1e-9), 1);
        let mut planar = Vec::new();
        for i in 0..=5 {
            for j in 0..=5 {
                planar.push(vec![i as f64, j as f64, 0.0]);
            }
        }
        assert_eq!(PointSet::new(3, planar).unwrap().span_dimension(1e-9), 2);
        assert_eq!(PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap().span_dimension(1e-9), 0);
    }

    #[test]
    fn layer_count_examples() {
        let z = lattice(1, 1.0, -100.0, 100.0).unwrap();
        let center = (0..z.len()).find(|&i| z.point(i)[0] == 100.0).unwrap();
        let lp = layer_counts(&z, center, 1.0, 5).unwrap();
        assert_eq!(lp.counts[0], 1);
        assert_eq!(lp.counts[3], 2);

        let z2 = lattice(2, 1.0, -20.0, 20.0).unwrap();
        let c = (0..z2.len()).find(|&i| z2.point(i) == [20.0, 20.0]).unwrap();
        let lp = layer_counts(&z2, c, 1.0, 2).unwrap();
        // distances 1 (4 axis neighbours) land in [1,2) together with the
        // 4 diagonal neighbours at √2.
        assert_eq!(lp.counts[0], 1);
        assert_eq!(lp.counts[1], 8);
    }

    #[test]
    fn layer_boundaries_are_half_open() {
        assert_eq!(layer_index(3.0, 1.0), 3);
        assert_eq!(layer_index(0.75, 0.25), 3);
        // 3 * 0.1 rounds above 0.3, so 0.3 sits below the computed boundary.
        assert_eq!(layer_index(0.3, 0.1), 2);
        assert_eq!(layer_index(0.29999999, 0.1), 2);
        assert_eq!(layer_index(0.0, 0.7), 0);
    }

    #[test]
    fn layer_bound_examples() {
        assert_eq!(layer_bound(2, 1).unwrap(), (24, 50));
        assert_eq!(layer_bound(1, 7).unwrap(), (4, 5));
        assert_eq!(layer_bound(2, 3).unwrap(), (56, 150));
        assert!(layer_bound(0, 1).is_err());
    }

    #[test]
    fn generator_examples() {
        let t = toeplitz_line(3, &[1.0, 0.0, 0.0], 5).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.point(4), &[4.0, 0.0, 0.0]);
        assert_eq!(t.separation().unwrap(), 1.0);

        let q = quadratic_gaps(4).unwrap();
        let xs: Vec<f64> = q.iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 1.0, 4.0, 9.0]);
        assert_eq!(q.separation().unwrap(), 1.0);

        let l = lattice(2, 1.0, 0.0, 3.0).unwrap();
        assert_eq!(l.len(), 16);
        assert_eq!(l.separation().unwrap(), 1.0);

        let tl = toeplitz_like(&[1.0, 2.0, 1.5]).unwrap();
        assert_eq!(tl.point(3), &[4.5]);
        assert!(toeplitz_like(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn jittered_sets_are_reproducible_and_separated() {
        let a = jittered_separated(2, 60, 1.0, 7).unwrap();
        let b = jittered_separated(2, 60, 1.0, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.separation().unwrap() >= 1.0);
        assert_eq!(a.len(), 60);
    }

    #[test]
    fn jittered_reports_unsatisfiable_budget() {
        let err = jittered_separated_in_box(2, 50, 1.0, 2.0, 1).unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
    }

    #[test]
    fn regularity_profile_examples() {
        let z = lattice(1, 1.0, 0.0, 200.0).unwrap();
        let prof =
            delta_regularity_profile(&z, 1.0, &[5.0, 10.0, 20.0], &Centers::Interior).unwrap();
        assert!(prof.centers_used > 100);
        assert!(prof.profile.iter().all(|&(_, v)| v >= 1.0));
        assert!(prof.empirically_regular());

        let two = line(&[0.0, 1.0]);
        let prof = delta_regularity_profile(&two, 0.5, &[2.0, 3.0, 4.0], &Centers::All).unwrap();
        assert!(prof.profile.iter().all(|&(_, v)| v == 0.0));
        assert!(!prof.empirically_regular());

        let z2 = lattice(2, 1.0, -30.0, 30.0).unwrap();
        let origin = (0..z2.len()).find(|&i| z2.point(i) == [30.0, 30.0]).unwrap();
        let prof =
            delta_regularity_profile(&z2, 1.5, &[10.0], &Centers::Indices(vec![origin])).unwrap();
        // ratio is count / r; brute-force annulus count 10 <= |x| < 11.5
        let direct = (-30i32..=30)
            .flat_map(|i| (-30i32..=30).map(move |j| ((i * i + j * j) as f64).sqrt()))
            .filter(|&d| (10.0..11.5).contains(&d))
            .count();
        assert_eq!(prof.profile[0].1, direct as f64 / 10.0);
        assert!(prof.profile[0].1 > 1.0);
    }

    #[test]
    fn csv_round_trip_keeps_seventeen_digits() {
        let ps = PointSet::new(2, vec![vec![0.0, 0.0], vec![0.1, 1.0 / 3.0], vec![-2.5, 1e-7]])
            .unwrap();
        let mut buf = Vec::new();
        ps.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2\n"));
        let back = PointSet::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, ps);
    }

    #[test]
    fn csv_parse_error_names_row() {
        let err = PointSet::read_csv("x1\n0\nabc\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2"));
    }
}
