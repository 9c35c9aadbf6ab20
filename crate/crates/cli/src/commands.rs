use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use schoenberg_core::gram::{self, GramCase};
use schoenberg_core::points::{layer_bound, layer_counts};
use schoenberg_core::report::{fmt17, Extended, SCHEMA};
use schoenberg_core::schoenberg::{self, assemble, eigen_extremes, row_sup};
use schoenberg_core::symbols::{moment_identity_check, RadialSymbol};
use schoenberg_core::toeplitz::{self, SymbolMethod};
use schoenberg_core::Error;
use serde_json::{json, Map, Value};

use crate::spec::{Command, MethodSpec, Resolved};

pub enum Failure {
    /// Bad spec: syntax, missing fields, unresolvable references.
    Spec(String),
    /// A computation diverged, left its domain, or a verification failed.
    Numeric(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => Failure::Io(e.to_string()),
            Error::Parse(_) | Error::UnknownSymbol(_) => Failure::Spec(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

struct Out {
    dir: PathBuf,
    stem: String,
}

impl Out {
    fn path(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.stem))
    }

    fn wrote(&self, path: PathBuf) {
        println!("wrote {}", path.display());
    }

    fn json(&self, header: &Map<String, Value>, body: Value) -> Result<(), Failure> {
        let mut obj = header.clone();
        if let Value::Object(m) = body {
            obj.extend(m);
        }
        let path = self.path("json");
        let mut text = serde_json::to_string_pretty(&Value::Object(obj)).map_err(Error::from)?;
        text.push('\n');
        fs::write(&path, text)?;
        self.wrote(path);
        Ok(())
    }

    fn csv(&self, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Failure> {
        let path = self.path("csv");
        let mut w = csv_writer(&path)?;
        w.write_record(header).map_err(Error::from)?;
        for r in rows {
            w.write_record(&r).map_err(Error::from)?;
        }
        w.flush()?;
        self.wrote(path);
        Ok(())
    }
}

fn csv_writer(path: &PathBuf) -> Result<csv::Writer<BufWriter<File>>, Failure> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn header(r: &Resolved) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("name".into(), json!(r.spec.name));
    m.insert("command".into(), json!(r.spec.command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    if let Some(seed) = r.spec.seed {
        m.insert("seed".into(), json!(seed));
    }
    m
}

/// Runs the resolved experiment and returns a one-line summary.
pub fn run(r: Resolved) -> Result<String, Failure> {
    fs::create_dir_all(&r.output_dir)?;
    let out = Out {
        dir: r.output_dir.clone(),
        stem: r.spec.name.clone(),
    };
    let summary = match r.spec.command {
        Command::Bounds => bounds(&r, &out),
        Command::SpectrumSweep => spectrum_sweep(&r, &out),
        Command::Toeplitz => toeplitz_cmd(&r, &out),
        Command::GramVerify => gram_verify(&r, &out),
        Command::Riesz => riesz(&r, &out),
        Command::Layers => layers(&r, &out),
        Command::Moments => moments(&r, &out),
    }?;
    Ok(summary)
}

fn symbol(r: &Resolved) -> &RadialSymbol {
    r.symbol.as_ref().expect("checked during resolution")
}

fn ext(v: f64) -> Value {
    serde_json::to_value(Extended(v)).expect("plain number or string")
}

/// Schur data only exists for M₊ symbols; others get null.
fn criteria(r: &Resolved) -> Result<(Value, Value, Option<String>), Failure> {
    let ps = r.points.as_ref().expect("checked");
    let sym = symbol(r);
    if !sym.claims().m_plus || ps.len() < 2 {
        return Ok((Value::Null, Value::Null, None));
    }
    let schur = schoenberg::schur_bound(ps, sym)?;
    let inv = schoenberg::invertibility_criterion(ps, sym)?;
    let divergent = schur.require_finite().err().map(|e| e.to_string());
    Ok((
        serde_json::to_value(schur).map_err(Error::from)?,
        serde_json::to_value(inv).map_err(Error::from)?,
        divergent,
    ))
}

fn bounds(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let ps = r.points.as_ref().expect("checked");
    let n = r.spec.size.unwrap_or(ps.len());
    let p_grid: Vec<usize> = if r.spec.p_grid.is_empty() {
        vec![1]
    } else {
        r.spec.p_grid.clone()
    };
    let report = schoenberg::spectral_report(ps, symbol(r), n, &p_grid)?;
    let (schur, inv, divergent) = criteria(r)?;
    out.json(
        &header(r),
        json!({
            "report": report,
            "schur": schur,
            "invertibility": inv,
        }),
    )?;
    if let Some(msg) = divergent {
        return Err(Failure::Numeric(msg));
    }
    Ok(format!(
        "N={n}: lambda in [{:.6}, {:.6}], row sup {:.6}, schur bound {}",
        report.lambda_min,
        report.lambda_max,
        report.full_row_sup,
        fmt17(report.schur_bound)
    ))
}

fn spectrum_sweep(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let ps = r.points.as_ref().expect("checked");
    let sym = symbol(r);
    let sizes = &r.spec.sizes;
    let full = assemble(ps, sym, 0..*sizes.last().unwrap())?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for &m in sizes {
        let ms = full.leading(m)?;
        let (lo, hi) = eigen_extremes(&ms)?;
        let rs = row_sup(&ms);
        let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        rows.push(vec![
            m.to_string(),
            fmt17(lo),
            fmt17(hi),
            fmt17(rs.full_row_sup),
            fmt17(rs.offdiag_row_sup),
            fmt17(cond),
        ]);
        records.push(json!({
            "size": m,
            "lambda_min": lo,
            "lambda_max": hi,
            "full_row_sup": rs.full_row_sup,
            "offdiag_row_sup": rs.offdiag_row_sup,
            "condition": ext(cond),
        }));
    }
    out.csv(
        &["size", "lambda_min", "lambda_max", "full_row_sup", "offdiag_row_sup", "condition"],
        rows,
    )?;
    let (schur, inv, divergent) = criteria(r)?;
    out.json(
        &header(r),
        json!({
            "symbol": sym.id(),
            "sweep": records,
            "schur": schur,
            "invertibility": inv,
        }),
    )?;
    if let Some(msg) = divergent {
        return Err(Failure::Numeric(msg));
    }
    Ok(format!("{} sizes swept", sizes.len()))
}

fn toeplitz_cmd(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let sym = symbol(r);
    let alpha = sym.alpha_representation().map(|a| a.0);
    let method = match r.spec.method.unwrap_or(MethodSpec::Auto) {
        MethodSpec::Direct => SymbolMethod::DirectSeries,
        MethodSpec::Theta => SymbolMethod::ThetaMixture,
        MethodSpec::Poisson => SymbolMethod::PoissonMixture,
        MethodSpec::Auto => match alpha {
            Some(a) if a == 2.0 => SymbolMethod::ThetaMixture,
            Some(a) if a == 1.0 => SymbolMethod::PoissonMixture,
            _ => SymbolMethod::DirectSeries,
        },
    };
    let count = r.spec.phi_points.unwrap_or(361).max(2);
    let grid: Vec<f64> = (0..count).map(|i| PI * i as f64 / (count - 1) as f64).collect();
    let sweep = toeplitz::symbol_sweep(sym, method, &grid, r.spec.k_max.unwrap_or(4096))?;
    let csv_path = out.path("csv");
    sweep.write_csv(BufWriter::new(File::create(&csv_path)?))?;
    out.wrote(csv_path);

    let interval = toeplitz::spectrum_interval_auto(sym)?;
    let sections = r
        .spec
        .sizes
        .iter()
        .map(|&n| toeplitz::finite_section_check(sym, n, &interval))
        .collect::<Result<Vec<_>, _>>()?;
    out.json(
        &header(r),
        json!({
            "symbol": sym.id(),
            "method": method,
            "phi_points": count,
            "c_minus": interval.c_minus,
            "c_plus": ext(interval.c_plus),
            "divergent_criterion": interval.divergent_criterion,
            "finite_sections": sections,
        }),
    )?;
    if let Some(c) = &interval.divergent_criterion {
        return Err(Failure::Numeric(format!("c_+ is infinite: {c}")));
    }
    Ok(format!(
        "endpoints ({}, {})",
        fmt17(interval.c_minus),
        fmt17(interval.c_plus)
    ))
}

/// Relative tolerance for the closed-form/oracle comparison.
const GRAM_TOL: f64 = 1e-5;

fn gram_verify(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let base = r.base.expect("checked");
    let cases: Vec<GramCase> = match &r.points {
        Some(ps) => {
            if ps.dim() != base.dim() as usize {
                return Err(Failure::Spec(format!(
                    "field `points`: R^{} points for a family in R^{}",
                    ps.dim(),
                    base.dim()
                )));
            }
            let mut v = Vec::new();
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    v.push(GramCase {
                        base,
                        xi: ps.point(i).to_vec(),
                        eta: ps.point(j).to_vec(),
                    });
                }
            }
            v
        }
        None => gram::random_pairs(&base, r.spec.cases.unwrap_or(50), r.spec.seed.unwrap_or(0)),
    };
    let table = gram::gram_verify(&cases)?;
    let csv_path = out.path("csv");
    table.write_csv(BufWriter::new(File::create(&csv_path)?))?;
    out.wrote(csv_path);
    let passed = table.max_relative_deviation <= GRAM_TOL;
    let mut head = header(r);
    if r.points.is_none() && r.spec.seed.is_none() {
        head.insert("seed".into(), json!(0));
    }
    out.json(
        &head,
        json!({
            "family": base.id(),
            "cases": table.rows.len(),
            "tolerance": GRAM_TOL,
            "max_relative_deviation": table.max_relative_deviation,
            "passed": passed,
        }),
    )?;
    if !passed {
        return Err(Failure::Numeric(format!(
            "closed form and oracle disagree: max relative deviation {:e} > {GRAM_TOL:e}",
            table.max_relative_deviation
        )));
    }
    Ok(format!(
        "{} pairs, max relative deviation {:.3e}",
        table.rows.len(),
        table.max_relative_deviation
    ))
}

fn riesz(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let fam = gram::ShiftFamily::new(r.base.expect("checked"), r.points.clone().expect("checked"))?;
    let rep = gram::riesz_diagnostic(&fam, &r.spec.sizes)?;
    out.csv(
        &["size", "lambda_min", "lambda_max", "condition"],
        (0..rep.sizes.len()).map(|k| {
            vec![
                rep.sizes[k].to_string(),
                fmt17(rep.lambda_min[k]),
                fmt17(rep.lambda_max[k]),
                fmt17(rep.condition[k]),
            ]
        }),
    )?;
    out.json(&header(r), serde_json::to_value(&rep).map_err(Error::from)?)?;
    Ok(format!("verdict: {}", rep.verdict))
}

fn layers(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let ps = r.points.as_ref().expect("checked");
    let center = r.spec.center.unwrap_or(0);
    let eps = match r.spec.epsilon {
        Some(e) => e,
        None => ps.separation()?,
    };
    let max_layer = r.spec.max_layer.unwrap_or(30);
    let d = ps.span_dimension_default().max(1) as u32;
    let prof = layer_counts(ps, center, eps, max_layer)?;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for m in 1..=max_layer {
        let (bound, crude) = layer_bound(d, m as u64)?;
        let count = prof.counts[m];
        if count as u128 > bound {
            violations.push(m);
        }
        rows.push(vec![m.to_string(), count.to_string(), bound.to_string(), crude.to_string()]);
    }
    out.csv(&["m", "count", "bound", "crude_bound"], rows)?;
    out.json(
        &header(r),
        json!({
            "center": center,
            "epsilon": eps,
            "d": d,
            "counts": prof.counts,
            "violations": violations,
        }),
    )?;
    if !violations.is_empty() {
        return Err(Failure::Numeric(format!(
            "layer bound exceeded at m = {violations:?}"
        )));
    }
    Ok(format!("{max_layer} layers, no violations"))
}

fn moments(r: &Resolved, out: &Out) -> Result<String, Failure> {
    let checks = r
        .moments
        .iter()
        .map(|(alpha, d, m)| moment_identity_check(*alpha, *d, m))
        .collect::<Result<Vec<_>, _>>()?;
    out.json(&header(r), json!({ "checks": checks }))?;
    let bad: Vec<usize> = (0..checks.len()).filter(|&i| !checks[i].consistent).collect();
    if !bad.is_empty() {
        return Err(Failure::Numeric(format!(
            "moment identity fails for cases {bad:?}"
        )));
    }
    Ok(format!("{} cases consistent", checks.len()))
}
