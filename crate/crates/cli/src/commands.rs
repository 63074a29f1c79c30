//! Subcommand implementations. Each returns one [`Table`] plus the digests
//! of the data files it read.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};
use hyplatt::almost_periodic::{dirichlet_search, omega_witness_scan, Mollifier};
use hyplatt::error_terms::{geometric_grid, linear_grid, pr_mean, spectral_m_estimate, ErrorCurve};
use hyplatt::lattice::{count_curve, enumerate};
use hyplatt::specfun::{a_of_x, sign_a, sign_b, sign_c, sign_c_threshold, TransformSample};
use hyplatt::spectral::{eval_eisenstein, eval_maass, load_registry, scattering, weyl_sum, SpectralRegistry};
use hyplatt::{GroupModel, Point};
use serde::Serializer;

use crate::output::{Cell, Table};
use crate::{sha256_hex, Command, Pair};

/// Malformed input file contents.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct DataError(pub String);

pub struct Outcome {
    pub table: Table,
    pub data_files: BTreeMap<String, String>,
    pub notes: BTreeMap<&'static str, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Geometric(f64),
    Linear(f64),
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Geometric(r) => write!(f, "geometric:{r}"),
            GridSpec::Linear(s) => write!(f, "linear:{s}"),
        }
    }
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let (kind, value) = s.split_once(':').ok_or("expected geometric:RATIO or linear:STEP")?;
    let v = f64::from_str(value).map_err(|e| format!("bad grid parameter {value:?}: {e}"))?;
    match kind {
        "geometric" if v > 1.0 => Ok(GridSpec::Geometric(v)),
        "linear" if v > 0.0 => Ok(GridSpec::Linear(v)),
        "geometric" | "linear" => Err(format!("grid parameter out of range: {v}")),
        _ => Err(format!("unknown grid kind {kind:?}")),
    }
}

pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected R1:R2")?;
    let r1 = f64::from_str(a.trim()).map_err(|e| format!("bad R1 {a:?}: {e}"))?;
    let r2 = f64::from_str(b.trim()).map_err(|e| format!("bad R2 {b:?}: {e}"))?;
    if !(r1 < r2) {
        return Err(format!("window {r1}:{r2} is empty"));
    }
    Ok((r1, r2))
}

pub fn display_opt<S: Serializer, T: fmt::Display>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

struct Ctx {
    data_files: BTreeMap<String, String>,
    notes: BTreeMap<&'static str, f64>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.data_files.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    fn registry(&mut self, path: &Path) -> Result<SpectralRegistry> {
        self.read(path)?;
        Ok(load_registry(path)?)
    }

    /// The file registry when given, else the bare registry of `group`.
    fn registry_for(&mut self, group: GroupModel, path: Option<&Path>) -> Result<SpectralRegistry> {
        match path {
            Some(p) => self.registry(p),
            None => Ok(SpectralRegistry::for_group(group)),
        }
    }
}

pub fn dispatch(command: &Command) -> Result<Outcome> {
    let mut ctx = Ctx { data_files: BTreeMap::new(), notes: BTreeMap::new() };
    let table = run(command, &mut ctx)?;
    Ok(Outcome { table, data_files: ctx.data_files, notes: ctx.notes })
}

fn run(command: &Command, ctx: &mut Ctx) -> Result<Table> {
    match command {
        Command::Count { pair, xmax, grid } => count(pair, *xmax, *grid),
        Command::Error { pair, xmax, ratio, registry } => {
            let reg = ctx.registry_for(pair.group, registry.as_deref())?;
            error_table(&reg, pair, *xmax, *ratio)
        }
        Command::Average { pair, xmax, ratio, registry } => {
            let reg = ctx.registry_for(pair.group, registry.as_deref())?;
            average(&reg, pair, *xmax, *ratio)
        }
        Command::PrMean { group, z, t, registry } => {
            let reg = ctx.registry_for(*group, registry.as_deref())?;
            let mut table = Table::new(&["T", "mean"]);
            for &t_end in t {
                table.push(vec![t_end.into(), pr_mean(&reg, *group, *z, t_end)?.into()]);
            }
            Ok(table)
        }
        Command::SpectralM { z, w, r, a, registry, with_average } => {
            let reg = ctx.registry(registry)?;
            spectral_m(&reg, *z, *w, r, *a, *with_average)
        }
        Command::Transform { x, t } => {
            let mut table = Table::new(&["X", "t", "h_quad", "h_asym", "difference", "A"]);
            for &x in x {
                let a = a_of_x(x)?;
                for &t in t {
                    let s = TransformSample::new(x, t)?;
                    table.push(vec![x.into(), t.into(), s.h_quad.into(), s.h_asym.into(), s.difference().into(), a.into()]);
                }
            }
            Ok(table)
        }
        Command::Signs { tmax, step } => signs(ctx, *tmax, *step),
        Command::MaassLoad { file, eval } => {
            let reg = ctx.registry(file)?;
            let mut columns = vec!["t", "eigenvalue", "parity", "n_max", "norm"];
            if eval.is_some() {
                columns.push("value");
            }
            let mut table = Table::new(&columns);
            for form in reg.cusp_forms() {
                let mut row: Vec<Cell> = vec![
                    form.t().into(),
                    form.eigenvalue().into(),
                    form.parity().to_string().into(),
                    form.n_max().into(),
                    form.norm_note().into(),
                ];
                if let Some(z) = eval {
                    row.push(eval_maass(form, *z)?.into());
                }
                table.push(row);
            }
            Ok(table)
        }
        Command::Eisenstein { z, t } => {
            let mut table = Table::new(&["x", "y", "t", "re", "im", "phi_re", "phi_im"]);
            for &t in t {
                let e = eval_eisenstein(*z, t)?;
                let phi = scattering(t)?;
                table.push(vec![z.x().into(), z.y().into(), t.into(), e.re.into(), e.im.into(), phi.re.into(), phi.im.into()]);
            }
            Ok(table)
        }
        Command::Weyl { file, z, t } => {
            let reg = ctx.registry(file)?;
            let mut table = Table::new(&["T", "discrete", "continuous", "total_over_T2", "forms_used"]);
            for &t_max in t {
                let s = weyl_sum(&reg, *z, t_max)?;
                table.push(vec![t_max.into(), s.discrete.into(), s.continuous.into(), s.total_over_t2.into(), s.forms_used.into()]);
            }
            Ok(table)
        }
        Command::Dirichlet { r, m, t } => {
            let rec = dirichlet_search(r, *m, *t)?;
            let mut table = Table::new(&["R", "stated_bound", "guaranteed_bound", "within_stated_range", "max_deviation"]);
            table.push(vec![
                rec.r.into(),
                rec.stated_bound.into(),
                rec.guaranteed_bound.into(),
                rec.within_stated_range.into(),
                rec.max_deviation.into(),
            ]);
            Ok(table)
        }
        Command::Mollify { eps, input } => {
            let bytes = ctx.read(input)?;
            let samples = read_series(&bytes).with_context(|| format!("in {}", input.display()))?;
            let out = Mollifier::new(*eps)?.mollify(&samples)?;
            let mut table = Table::new(&["R", "value"]);
            for (r, v) in out {
                table.push(vec![r.into(), v.into()]);
            }
            Ok(table)
        }
        Command::OmegaScan { pair, window, eps, registry, series } => {
            let reg = ctx.registry_for(pair.group, registry.as_deref())?;
            omega_scan(&reg, pair, *window, *eps, *series)
        }
    }
}

fn count(pair: &Pair, xmax: f64, grid: Option<GridSpec>) -> Result<Table> {
    let mut table = Table::new(&["X", "N"]);
    match grid {
        Some(kind) => {
            if xmax < 2.0 {
                return Err(hyplatt::Error::Domain(format!("grid needs xmax ≥ 2, got {xmax}")).into());
            }
            let points = match kind {
                GridSpec::Geometric(ratio) => geometric_grid(2.0, xmax, ratio)?,
                GridSpec::Linear(step) => linear_grid(2.0, xmax, step)?,
            };
            for (x, n) in count_curve(pair.group, pair.z, pair.w, &points)? {
                table.push(vec![x.into(), n.into()]);
            }
        }
        None => {
            let mut total = 0u64;
            if xmax >= 2.0 {
                let profile = enumerate(pair.group, pair.z, pair.w, xmax)?;
                for &(v, m) in profile.values() {
                    total += m;
                    if v < xmax {
                        table.push(vec![v.into(), total.into()]);
                    }
                }
            }
            table.push(vec![xmax.into(), total.into()]);
        }
    }
    Ok(table)
}

fn error_table(reg: &SpectralRegistry, pair: &Pair, xmax: f64, ratio: f64) -> Result<Table> {
    let grid = geometric_grid(2.0, xmax, ratio)?;
    let curve = ErrorCurve::build(reg, pair.group, pair.z, pair.w, &grid)?;
    let mut table = Table::new(&["X", "N", "main", "E", "e", "e_over_sqrtX"]);
    for s in curve.samples() {
        table.push(vec![s.x.into(), s.n.into(), s.main.into(), s.big_e.into(), s.small_e.into(), (s.small_e / s.x.sqrt()).into()]);
    }
    Ok(table)
}

fn average(reg: &SpectralRegistry, pair: &Pair, xmax: f64, ratio: f64) -> Result<Table> {
    let grid: Vec<f64> = geometric_grid(2.0, xmax, ratio)?.into_iter().skip(1).collect();
    let curve = ErrorCurve::build(reg, pair.group, pair.z, pair.w, &grid)?;
    let mut table = Table::new(&["X", "M"]);
    for &x in &grid {
        table.push(vec![x.into(), curve.m_average(x)?.into()]);
    }
    Ok(table)
}

fn spectral_m(reg: &SpectralRegistry, z: Point, w: Point, rs: &[f64], a: f64, with_average: bool) -> Result<Table> {
    let mut columns = vec!["R", "A", "estimate", "discrete", "continuous_floor", "tail_bound", "small_eig_bound", "forms_used"];
    if with_average {
        columns.extend(["M", "residual"]);
    }
    let mut table = Table::new(&columns);
    let curve = if with_average {
        let xmax = rs.iter().copied().fold(2.0, f64::max).exp();
        Some(ErrorCurve::build(reg, reg.group(), z, w, &[xmax])?)
    } else {
        None
    };
    for &r in rs {
        let s = spectral_m_estimate(reg, z, w, r, a)?;
        let mut row: Vec<Cell> = vec![
            r.into(),
            a.into(),
            s.value.into(),
            s.discrete.into(),
            s.continuous_floor.into(),
            s.tail_bound.into(),
            s.small_eig_bound.into(),
            s.forms_used.into(),
        ];
        if let Some(curve) = &curve {
            let m = curve.m_average(r.exp())?;
            row.push(m.into());
            row.push((m - s.value).into());
        }
        table.push(row);
    }
    Ok(table)
}

fn signs(ctx: &mut Ctx, tmax: f64, step: f64) -> Result<Table> {
    if !(step > 0.0) || !(tmax >= step) {
        return Err(hyplatt::Error::Domain(format!("need 0 < step ≤ tmax, got step {step}, tmax {tmax}")).into());
    }
    let mut table = Table::new(&["t", "sign_a", "sign_b", "product_c"]);
    let n = (tmax / step * (1.0 + 1e-12)).floor() as usize;
    for k in 1..=n {
        let t = k as f64 * step;
        table.push(vec![t.into(), sign_a(t)?.into(), sign_b(t)?.into(), sign_c(t)?.into()]);
    }
    let c = sign_c_threshold()?;
    ctx.notes.insert("threshold_c", c);
    ctx.notes.insert("threshold_a", 0.25 + c * c);
    Ok(table)
}

fn omega_scan(reg: &SpectralRegistry, pair: &Pair, window: (f64, f64), eps: f64, series: bool) -> Result<Table> {
    let mollifier = Mollifier::new(eps)?;
    let xmax = (window.1 + eps).exp() * (1.0 + 1e-9);
    let curve = ErrorCurve::build(reg, pair.group, pair.z, pair.w, &[xmax])?;
    let report = omega_witness_scan(&curve, &mollifier, window)?;
    if series {
        let mut table = Table::new(&["R", "mollified"]);
        for &(r, v) in &report.mollified {
            table.push(vec![r.into(), v.into()]);
        }
        return Ok(table);
    }
    let mut table = Table::new(&[
        "R1",
        "R2",
        "epsilon",
        "step",
        "raw_min_R",
        "raw_min",
        "raw_max_R",
        "raw_max",
        "mollified_min_R",
        "mollified_min",
        "mollified_max_R",
        "mollified_max",
        "negative_count",
        "positive_count",
    ]);
    table.push(vec![
        window.0.into(),
        window.1.into(),
        report.epsilon.into(),
        report.step.into(),
        report.raw_min.0.into(),
        report.raw_min.1.into(),
        report.raw_max.0.into(),
        report.raw_max.1.into(),
        report.mollified_min.0.into(),
        report.mollified_min.1.into(),
        report.mollified_max.0.into(),
        report.mollified_max.1.into(),
        report.negative_count.into(),
        report.positive_count.into(),
    ]);
    Ok(table)
}

/// Two numeric columns `R,value`; a non-numeric first record is a header.
fn read_series(bytes: &[u8]) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(bytes);
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() < 2 {
            return Err(DataError(format!("line {}: expected two columns", i + 1)).into());
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(r), Ok(v)) => out.push((r, v)),
            _ if i == 0 => continue,
            _ => return Err(DataError(format!("line {}: non-numeric record", i + 1)).into()),
        }
    }
    Ok(out)
}
