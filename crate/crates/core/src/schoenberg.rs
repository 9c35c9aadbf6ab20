//! Schoenberg matrix sections S_X(f) = ‖f(|x_i − x_j|)‖, Schur-test bounds,
//! the invertibility and compactness criteria, and eigenvalue sweeps.

use std::io::{Read, Write};
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{self, LanczosOptions};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::report::{extended, fmt17};
use crate::symbols::{tail_moment, tail_moment_squared, RadialSymbol};

/// Largest section the eigensolvers accept.
pub const EIGEN_CAP: usize = 4096;
/// Above this size the extremes come from Lanczos instead of the dense path.
pub const DENSE_LIMIT: usize = 1024;

const BINARY_MAGIC: &[u8; 4] = b"SCHN";

/// Dense symmetric section, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSection {
    n: usize,
    data: Vec<f64>,
    symbol: String,
    points: String,
    range: (usize, usize),
}

fn points_id(ps: &PointSet) -> String {
    format!("R^{}[{} points]", ps.dim(), ps.len())
}

impl MatrixSection {
    /// Wrap a dense symmetric matrix; symmetry is checked exactly.
    pub fn from_dense(n: usize, data: Vec<f64>, label: &str) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::Degenerate(format!("{} entries for size {n}", data.len())));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::Degenerate(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(MatrixSection {
            n,
            data,
            symbol: label.to_string(),
            points: String::new(),
            range: (0, n),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn symbol_id(&self) -> &str {
        &self.symbol
    }

    pub fn points_id(&self) -> &str {
        &self.points
    }

    pub fn range(&self) -> (usize, usize) {
        self.range
    }

    /// Leading m×m block.
    pub fn leading(&self, m: usize) -> Result<MatrixSection> {
        if m == 0 || m > self.n {
            return Err(Error::Degenerate(format!("leading {m} of {}", self.n)));
        }
        let mut data = Vec::with_capacity(m * m);
        for i in 0..m {
            data.extend_from_slice(&self.row(i)[..m]);
        }
        Ok(MatrixSection {
            n: m,
            data,
            symbol: self.symbol.clone(),
            points: self.points.clone(),
            range: (self.range.0, self.range.0 + m),
        })
    }

    pub fn scaled(&self, c: f64) -> MatrixSection {
        MatrixSection {
            data: self.data.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (yi, row) in y.iter_mut().zip(self.data.chunks(self.n)) {
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// Dense CSV, one matrix row per line.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for i in 0..self.n {
            w.write_record(self.row(i).iter().map(|&v| fmt17(v)))?;
        }
        w.flush()?;
        Ok(())
    }

    /// "SCHN", u32 N, u32 reserved, u32 padding, then N² little-endian f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let n = u32::try_from(self.n).map_err(|_| Error::SizeCap {
            size: self.n,
            cap: u32::MAX as usize,
        })?;
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&n.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        for v in &self.data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<MatrixSection> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[..4] != BINARY_MAGIC {
            return Err(Error::Parse("missing SCHN magic".into()));
        }
        let n = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
        let mut data = vec![0.0; n * n];
        let mut buf = [0u8; 8];
        for v in data.iter_mut() {
            r.read_exact(&mut buf)?;
            *v = f64::from_le_bytes(buf);
        }
        MatrixSection::from_dense(n, data, "binary")
    }
}

/// Section of S_X(f) over the index range. Each distinct pair distance is
/// evaluated once; lattices repeat distances heavily.
pub fn assemble(ps: &PointSet, sym: &RadialSymbol, range: Range<usize>) -> Result<MatrixSection> {
    if range.is_empty() {
        return Err(Error::Degenerate("empty index range".into()));
    }
    if range.end > ps.len() {
        return Err(Error::Degenerate(format!(
            "range {}..{} outside a set of {} points",
            range.start,
            range.end,
            ps.len()
        )));
    }
    let m = range.len();
    let off = range.start;
    let dist = |i: usize, j: usize| ps.distance(off + i.min(j), off + i.max(j));

    let mut keys: Vec<u64> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..m).map(move |j| dist(i, j).to_bits()))
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    let values: Vec<f64> = keys
        .par_iter()
        .map(|&k| sym.eval(f64::from_bits(k)))
        .collect();
    let lookup = |d: f64| values[keys.binary_search(&d.to_bits()).unwrap()];

    let f0 = sym.eval(0.0);
    let mut data = vec![0.0; m * m];
    data.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if i == j { f0 } else { lookup(dist(i, j)) };
        }
    });
    Ok(MatrixSection {
        n: m,
        data,
        symbol: sym.id(),
        points: points_id(ps),
        range: (range.start, range.end),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowSums {
    pub full_row_sup: f64,
    pub offdiag_row_sup: f64,
    pub full_row: usize,
    pub offdiag_row: usize,
}

/// sup_j Σ_i |a_ij| with and without the diagonal; first row wins ties.
pub fn row_sup(ms: &MatrixSection) -> RowSums {
    let mut out = RowSums {
        full_row_sup: f64::NEG_INFINITY,
        offdiag_row_sup: f64::NEG_INFINITY,
        full_row: 0,
        offdiag_row: 0,
    };
    for i in 0..ms.n {
        let row = ms.row(i);
        let off: f64 = row
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.abs())
            .sum();
        let full = off + row[i].abs();
        if full > out.full_row_sup {
            out.full_row_sup = full;
            out.full_row = i;
        }
        if off > out.offdiag_row_sup {
            out.offdiag_row_sup = off;
            out.offdiag_row = i;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurBound {
    pub d: usize,
    pub separation: f64,
    #[serde(serialize_with = "extended")]
    pub moment: f64,
    #[serde(serialize_with = "extended")]
    pub bound: f64,
}

impl SchurBound {
    pub fn require_finite(self) -> Result<Self> {
        if self.bound.is_finite() {
            Ok(self)
        } else {
            Err(Error::divergent(format!(
                "t^{}·f(t) is not integrable on (0, inf): operator may be unbounded",
                self.d - 1
            )))
        }
    }
}

fn require_m_plus(sym: &RadialSymbol, what: &str) -> Result<()> {
    if sym.claims().m_plus {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs a symbol in M+, got {}", sym.id())))
    }
}

/// 1 + d²(5/d_*)^d ∫₀^∞ t^{d-1} f(t) dt with d the span dimension of X.
/// A divergent moment gives an infinite bound.
pub fn schur_bound(ps: &PointSet, sym: &RadialSymbol) -> Result<SchurBound> {
    require_m_plus(sym, "schur_bound")?;
    let separation = ps.separation()?;
    let d = ps.span_dimension_default().max(1);
    let moment = tail_moment(sym, d as u32)?;
    let df = d as f64;
    let bound = 1.0 + df * df * (5.0 / separation).powi(d as i32) * moment;
    Ok(SchurBound {
        d,
        separation,
        moment,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Invertibility {
    pub d: usize,
    pub separation: f64,
    #[serde(serialize_with = "extended")]
    pub threshold: f64,
    pub satisfied: bool,
}

/// d_* > 5 d^{2/d} (∫ t^{d-1} f)^{1/d}. Failing it says nothing.
pub fn invertibility_criterion(ps: &PointSet, sym: &RadialSymbol) -> Result<Invertibility> {
    require_m_plus(sym, "invertibility_criterion")?;
    let separation = ps.separation()?;
    let d = ps.span_dimension_default().max(1);
    let moment = tail_moment(sym, d as u32)?;
    let df = d as f64;
    let threshold = 5.0 * df.powf(2.0 / df) * moment.powf(1.0 / df);
    Ok(Invertibility {
        d,
        separation,
        threshold,
        satisfied: separation > threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    Auto,
    Dense,
    Lanczos,
}

fn check_cap(n: usize) -> Result<()> {
    if n > EIGEN_CAP {
        Err(Error::SizeCap {
            size: n,
            cap: EIGEN_CAP,
        })
    } else {
        Ok(())
    }
}

/// Full spectrum, ascending.
pub fn eigenvalues(ms: &MatrixSection) -> Result<Vec<f64>> {
    check_cap(ms.n)?;
    eigen::symmetric_eigenvalues(&ms.data, ms.n)
}

pub fn eigen_extremes(ms: &MatrixSection) -> Result<(f64, f64)> {
    eigen_extremes_with(ms, EigenMethod::Auto)
}

pub fn eigen_extremes_with(ms: &MatrixSection, method: EigenMethod) -> Result<(f64, f64)> {
    check_cap(ms.n)?;
    let lanczos = match method {
        EigenMethod::Auto => ms.n > DENSE_LIMIT,
        EigenMethod::Dense => false,
        EigenMethod::Lanczos => true,
    };
    if lanczos {
        eigen::lanczos_extremes(ms.n, |x, y| ms.matvec(x, y), &LanczosOptions::default())
    } else {
        let ev = eigenvalues(ms)?;
        Ok((ev[0], ev[ev.len() - 1]))
    }
}

pub(crate) fn check_sizes(sizes: &[usize], available: usize) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::Degenerate("no section sizes".into()));
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Degenerate("sizes must be positive and strictly increasing".into()));
    }
    let last = *sizes.last().unwrap();
    if last > available {
        return Err(Error::Degenerate(format!("size {last} exceeds {available} points")));
    }
    Ok(())
}

/// λ_min of the nested leading sections of the given sizes.
pub fn strong_positivity_sweep(
    ps: &PointSet,
    sym: &RadialSymbol,
    sizes: &[usize],
) -> Result<Vec<(usize, f64)>> {
    check_sizes(sizes, ps.len())?;
    let full = assemble(ps, sym, 0..*sizes.last().unwrap())?;
    sizes
        .iter()
        .map(|&m| Ok((m, eigen_extremes(&full.leading(m)?)?.0)))
        .collect()
}

/// δ_p = sup_{j≥p} Σ_{k≥p, k≠j} |a_jk| with 1-based p.
pub fn compactness_profile_of(ms: &MatrixSection, p_grid: &[usize]) -> Result<Vec<(usize, f64)>> {
    p_grid
        .iter()
        .map(|&p| {
            if p == 0 || p > ms.n {
                return Err(Error::Degenerate(format!("p = {p} outside 1..={}", ms.n)));
            }
            let start = p - 1;
            let delta = (start..ms.n)
                .map(|j| {
                    ms.row(j)[start..]
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| start + k != j)
                        .map(|(_, v)| v.abs())
                        .sum::<f64>()
                })
                .fold(0.0f64, f64::max);
            Ok((p, delta))
        })
        .collect()
}

pub fn compactness_profile(
    ps: &PointSet,
    sym: &RadialSymbol,
    p_grid: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let ms = assemble(ps, sym, 0..ps.len())?;
    compactness_profile_of(&ms, p_grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnSquareSum {
    pub column: usize,
    pub sum: f64,
    /// ∫ t^{d-1} f(t)² dt; finiteness guarantees bounded column sums.
    #[serde(serialize_with = "extended")]
    pub square_moment: f64,
    pub criterion_finite: bool,
}

/// Σ_k f(|x_k − x_j|)² over all points of `ps` (0-based j), computed
/// without forming the matrix.
pub fn column_square_sum(ps: &PointSet, sym: &RadialSymbol, j: usize) -> Result<ColumnSquareSum> {
    if j >= ps.len() {
        return Err(Error::Degenerate(format!("column {j} of {}", ps.len())));
    }
    let d = ps.span_dimension_default().max(1);
    let square_moment = tail_moment_squared(sym, d as u32)?;
    let sum = (0..ps.len())
        .into_par_iter()
        .map(|k| sym.eval(ps.distance(k, j)).powi(2))
        .sum();
    Ok(ColumnSquareSum {
        column: j,
        sum,
        square_moment,
        criterion_finite: square_moment.is_finite(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub schema: u32,
    pub symbol: String,
    pub points: String,
    pub size: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    #[serde(serialize_with = "extended")]
    pub schur_bound: f64,
    pub full_row_sup: f64,
    pub offdiag_row_sup: f64,
    #[serde(serialize_with = "extended")]
    pub condition: f64,
    pub delta_profile: Vec<(usize, f64)>,
}

/// Extremes, row sums, Schur bound and δ_p profile of the leading section
/// of size `n`. Symbols outside M₊ get an infinite Schur bound.
pub fn spectral_report(
    ps: &PointSet,
    sym: &RadialSymbol,
    n: usize,
    p_grid: &[usize],
) -> Result<SpectralReport> {
    let ms = assemble(ps, sym, 0..n)?;
    let (lambda_min, lambda_max) = eigen_extremes(&ms)?;
    let rows = row_sup(&ms);
    let schur = if sym.claims().m_plus && ps.len() >= 2 {
        schur_bound(ps, sym)?.bound
    } else {
        f64::INFINITY
    };
    Ok(SpectralReport {
        schema: crate::report::SCHEMA,
        symbol: ms.symbol.clone(),
        points: ms.points.clone(),
        size: n,
        lambda_min,
        lambda_max,
        schur_bound: schur,
        full_row_sup: rows.full_row_sup,
        offdiag_row_sup: rows.offdiag_row_sup,
        condition: if lambda_min > 0.0 {
            lambda_max / lambda_min
        } else {
            f64::INFINITY
        },
        delta_profile: compactness_profile_of(&ms, p_grid)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::{lattice, quadratic_gaps, toeplitz_like, toeplitz_line};
    use std::f64::consts::PI;

    fn z1(count: usize) -> PointSet {
        toeplitz_line(1, &[1.0], count).unwrap()
    }

    fn exp1() -> RadialSymbol {
        RadialSymbol::exponential(1.0).unwrap()
    }

    #[test]
    fn three_point_exponential() {
        let ms = assemble(&z1(3), &exp1(), 0..3).unwrap();
        let e = |k: f64| (-k).exp();
        let expect = [1.0, e(1.0), e(2.0), e(1.0), 1.0, e(1.0), e(2.0), e(1.0), 1.0];
        assert_eq!(ms.data(), &expect);
        assert!(assemble(&z1(3), &exp1(), 1..1).is_err());
        assert!(assemble(&z1(3), &exp1(), 0..4).is_err());
        assert_eq!(assemble(&z1(3), &exp1(), 2..3).unwrap().data(), &[1.0]);
    }

    #[test]
    fn truncated_linear_is_jacobi() {
        let ms = assemble(&z1(6), &RadialSymbol::truncated_linear(), 0..6).unwrap();
        for i in 0..6usize {
            for j in 0..6usize {
                let expect = match i.abs_diff(j) {
                    0 => 1.0,
                    1 => 0.5,
                    _ => 0.0,
                };
                assert_eq!(ms.get(i, j), expect);
            }
        }
        let (lo, hi) = eigen_extremes(&assemble(&z1(50), &RadialSymbol::truncated_linear(), 0..50).unwrap()).unwrap();
        assert!((lo - (1.0 + (50.0 * PI / 51.0).cos())).abs() < 1e-13);
        assert!((hi - (1.0 + (PI / 51.0).cos())).abs() < 1e-13);
    }

    #[test]
    fn bit_symmetric_on_jittered_sets() {
        let ps = crate::points::jittered_separated(2, 60, 1.0, 9).unwrap();
        let ms = assemble(&ps, &RadialSymbol::matern(1.5, 1.0).unwrap(), 0..60).unwrap();
        for i in 0..60 {
            for j in 0..60 {
                assert_eq!(ms.get(i, j).to_bits(), ms.get(j, i).to_bits());
            }
        }
    }

    #[test]
    fn schur_bound_examples() {
        let b = schur_bound(&z1(20), &exp1()).unwrap();
        assert!((b.bound - 6.0).abs() < 1e-11, "{b:?}");
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let b = schur_bound(&z1(20), &g).unwrap();
        assert!((b.bound - (1.0 + 2.5 * PI.sqrt())).abs() < 1e-11);
        let two_z2 = lattice(2, 2.0, 0.0, 10.0).unwrap();
        let b = schur_bound(&two_z2, &exp1()).unwrap();
        assert_eq!(b.d, 2);
        assert!((b.bound - 26.0).abs() < 1e-10, "{b:?}");
        let h = RadialSymbol::inverse_power(1.0).unwrap();
        let b = schur_bound(&z1(20), &h).unwrap();
        assert_eq!(b.bound, f64::INFINITY);
        assert!(matches!(b.require_finite(), Err(Error::Divergent { .. })));
        let om = RadialSymbol::omega_scaled(3, 1.0).unwrap();
        assert!(matches!(schur_bound(&z1(5), &om), Err(Error::Unsupported(_))));
    }

    #[test]
    fn row_sums_on_z() {
        let ms = assemble(&z1(201), &exp1(), 0..201).unwrap();
        let r = row_sup(&ms);
        let off = 2.0 / (1f64.exp() - 1.0);
        assert!((r.offdiag_row_sup - off).abs() < 1e-12);
        assert!((r.full_row_sup - (1.0 + off)).abs() < 1e-12);
        let far = toeplitz_line(1, &[1.0], 10).unwrap();
        let spread = PointSet::new(1, far.iter().map(|p| vec![p[0] * 100.0]).collect()).unwrap();
        let r = row_sup(&assemble(&spread, &exp1(), 0..10).unwrap());
        assert!(r.full_row_sup == 1.0 && r.offdiag_row_sup < 1e-40);
    }

    #[test]
    fn hilbert_row_sums_grow_logarithmically() {
        let h = RadialSymbol::inverse_power(1.0).unwrap();
        for n in [100usize, 1000] {
            let r = row_sup(&assemble(&z1(n), &h, 0..n).unwrap());
            // Middle row n/2: distances 1..=n/2 on one side, 1..n/2 on the other.
            let side = |m: usize| (1..=m).map(|k| 1.0 / (1.0 + k as f64)).sum::<f64>();
            let expect = 1.0 + side(n / 2) + side(n / 2 - 1);
            assert!((r.full_row_sup - expect).abs() < 1e-12);
            assert!((r.full_row_sup / (2.0 * (n as f64).ln()) - 1.0).abs() < 0.25);
        }
    }

    #[test]
    fn invertibility_examples() {
        let spaced = PointSet::new(1, (0..10).map(|k| vec![5.1 * k as f64]).collect()).unwrap();
        let c = invertibility_criterion(&spaced, &exp1()).unwrap();
        assert!((c.threshold - 5.0).abs() < 1e-11 && c.satisfied);
        assert!(!invertibility_criterion(&z1(10), &exp1()).unwrap().satisfied);
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let spaced = PointSet::new(1, (0..10).map(|k| vec![4.5 * k as f64]).collect()).unwrap();
        let c = invertibility_criterion(&spaced, &g).unwrap();
        assert!((c.threshold - 2.5 * PI.sqrt()).abs() < 1e-11 && c.satisfied);
    }

    #[test]
    fn gershgorin_under_criterion() {
        let spaced = PointSet::new(1, (0..200).map(|k| vec![5.1 * k as f64]).collect()).unwrap();
        let ms = assemble(&spaced, &exp1(), 0..200).unwrap();
        let (lo, _) = eigen_extremes(&ms).unwrap();
        let r = row_sup(&ms);
        assert!(lo >= 1.0 - r.offdiag_row_sup && 1.0 - r.offdiag_row_sup > 0.97);
    }

    #[test]
    fn size_cap() {
        let ms = MatrixSection::from_dense(1, vec![1.0], "x").unwrap();
        assert_eq!(eigen_extremes(&ms).unwrap(), (1.0, 1.0));
        let big = MatrixSection {
            n: EIGEN_CAP + 1,
            data: Vec::new(),
            symbol: String::new(),
            points: String::new(),
            range: (0, 0),
        };
        assert!(matches!(eigen_extremes(&big), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn sweep_interlaces() {
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let sweep = strong_positivity_sweep(&z1(128), &g, &[1, 8, 32, 128]).unwrap();
        assert_eq!(sweep[0], (1, 1.0));
        for w in sweep.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12 && w[1].1 > 0.0, "{sweep:?}");
        }
        assert!(strong_positivity_sweep(&z1(10), &g, &[4, 4]).is_err());
    }

    #[test]
    fn two_point_sections_lose_positivity() {
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1.0, 0.3, 0.1, 0.03, 0.01] {
            let ps = PointSet::new(1, vec![vec![0.0], vec![eps]]).unwrap();
            let (lo, _) = eigen_extremes(&assemble(&ps, &g, 0..2).unwrap()).unwrap();
            assert!((lo - (1.0 - g.eval(eps))).abs() < 1e-15);
            assert!(lo < last);
            last = lo;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn compactness_examples() {
        let qg = quadratic_gaps(200).unwrap();
        let prof = compactness_profile(&qg, &exp1(), &[1, 50, 100, 150]).unwrap();
        for w in prof.windows(2) {
            assert!(w[1].1 < w[0].1, "{prof:?}");
        }
        let prof = compactness_profile(&z1(400), &exp1(), &[1, 100, 200]).unwrap();
        // On a finite section the sup is attained in the middle of the range.
        let c = 2.0 / (1f64.exp() - 1.0);
        for (_, d) in &prof {
            assert!((d - c).abs() < 1e-12);
        }
        let mut gaps = vec![0.5, 0.5];
        gaps.extend(std::iter::repeat(1.0).take(20));
        let block = toeplitz_like(&gaps).unwrap();
        let t1 = RadialSymbol::truncated_power(1.0).unwrap();
        let prof = compactness_profile(&block, &t1, &[1, 3, 4, 10]).unwrap();
        assert!(prof[0].1 > 0.0);
        assert!(prof[1..].iter().all(|&(_, d)| d == 0.0), "{prof:?}");
    }

    #[test]
    fn column_sums() {
        let h = RadialSymbol::inverse_power(1.0).unwrap();
        let c = column_square_sum(&z1(10_000), &h, 0).unwrap();
        assert!((c.sum - PI * PI / 6.0).abs() < 1.1e-4, "{c:?}");
        assert!(c.criterion_finite);
        let e = column_square_sum(&z1(50), &exp1(), 25).unwrap();
        assert!(e.criterion_finite && e.sum.is_finite());
    }

    #[test]
    fn diagonal_enumeration_of_the_quarter_plane() {
        // Points (i, j) of ℤ₊² in order of the anti-diagonals i + j = m.
        let mut pts = Vec::new();
        for m in 0..60usize {
            for i in 0..=m {
                pts.push(vec![i as f64, (m - i) as f64]);
            }
        }
        let ps = PointSet::new(2, pts).unwrap();
        let h = RadialSymbol::inverse_power(1.0).unwrap();
        let c = column_square_sum(&ps, &h, 0).unwrap();
        assert!(!c.criterion_finite);
        let small = column_square_sum(&ps.prefix(465).unwrap(), &h, 0).unwrap();
        assert!(c.sum - small.sum > 0.5, "{} vs {}", c.sum, small.sum);
    }

    #[test]
    fn csv_and_binary_round_trip() {
        let ms = assemble(&z1(5), &RadialSymbol::gaussian(0.7).unwrap(), 0..5).unwrap();
        let mut bin = Vec::new();
        ms.write_binary(&mut bin).unwrap();
        assert_eq!(&bin[..4], b"SCHN");
        assert_eq!(u32::from_le_bytes(bin[4..8].try_into().unwrap()), 5);
        assert_eq!(bin.len(), 16 + 8 * 25);
        let back = MatrixSection::read_binary(&bin[..]).unwrap();
        assert_eq!(back.data(), ms.data());
        let mut text = Vec::new();
        ms.write_csv(&mut text).unwrap();
        let text = String::from_utf8(text).unwrap();
        let parsed: Vec<f64> = text
            .lines()
            .flat_map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .collect();
        assert_eq!(parsed, ms.data());
        assert!(MatrixSection::read_binary(&b"NOPE0000000000000000"[..]).is_err());
    }

    #[test]
    fn report_json() {
        let r = spectral_report(&z1(64), &exp1(), 64, &[1, 32]).unwrap();
        let j: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(j["schema"], 1);
        assert!((j["schur_bound"].as_f64().unwrap() - 6.0).abs() < 1e-11);
        let h = spectral_report(&z1(16), &RadialSymbol::inverse_power(1.0).unwrap(), 16, &[1]).unwrap();
        assert_eq!(serde_json::to_value(&h).unwrap()["schur_bound"], "inf");
        assert!(r.lambda_min <= r.lambda_max && r.lambda_max <= r.full_row_sup);
    }
}
