//! Command-line front end: quadrature/basis/matrix dumps, the collocation
//! solvers, and the benchmark-experiment reproductions, all emitted as
//! deterministic CSV or JSON tables (17 significant digits, '.' decimal,
//! '\n' line endings — identical configs give byte-identical files).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use crate::diffmat::{ek_dm_direct, ek_dm_stable, DmSide};
use crate::error::{MuntzError, Result};
use crate::experiments::{
    self, burgers_exact, cauchy_euler_exact, riccati_exact, DmApproach, DmSweepRow,
};
use crate::interp::{eval_interpolant, interpolate, InterpolantKind, MuntzNodeSet};
use crate::jacobi::JacobiParams;
use crate::jacobi_muntz::{eval_jmf, JmfKind, JmfSpec};
use crate::quadrature::{gjmqr_weights, mapped_rule, GjmqrVariant, MuntzBasisParams, QuadKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Quad,
    Basis,
    DiffMat,
    Interp,
    SolveLinear,
    SolveNonlinear,
    SolvePde,
    SolveBurgers,
    PaperRepro,
}

impl Command {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "quad" => Self::Quad,
            "basis" => Self::Basis,
            "diffmat" => Self::DiffMat,
            "interp" => Self::Interp,
            "solve-linear" => Self::SolveLinear,
            "solve-nonlinear" => Self::SolveNonlinear,
            "solve-pde" => Self::SolvePde,
            "solve-burgers" => Self::SolveBurgers,
            "paper-repro" => Self::PaperRepro,
            other => {
                return Err(MuntzError::Validation(format!("unknown command '{other}'")))
            }
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Quad => "quad",
            Self::Basis => "basis",
            Self::DiffMat => "diffmat",
            Self::Interp => "interp",
            Self::SolveLinear => "solve-linear",
            Self::SolveNonlinear => "solve-nonlinear",
            Self::SolvePde => "solve-pde",
            Self::SolveBurgers => "solve-burgers",
            Self::PaperRepro => "paper-repro",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parsed invocation: command, flat key/value parameters, optional
/// N-sweep, output destination.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub sweep: Option<Vec<usize>>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Keys each command accepts beyond the shared numeric bundle.
fn allowed_keys(command: Command) -> &'static [&'static str] {
    const SHARED: &[&str] = &["alpha", "beta", "sigma", "eta", "mu", "b", "n"];
    match command {
        Command::Quad => &["alpha", "beta", "sigma", "eta", "mu", "b", "n", "rule"],
        Command::Basis => &[
            "alpha", "beta", "sigma", "eta", "mu", "b", "kind", "degree", "points",
        ],
        Command::DiffMat => &[
            "alpha", "beta", "sigma", "eta", "mu", "b", "n", "side", "approach", "degree",
        ],
        Command::Interp => &[
            "alpha", "beta", "sigma", "eta", "mu", "b", "n", "kind", "target", "points",
        ],
        Command::SolveLinear => &["problem", "n", "mu", "sigma"],
        Command::SolveNonlinear => &["problem", "n"],
        Command::SolvePde => &["n", "samples"],
        Command::SolveBurgers => &["sigma", "n", "dt", "t-end"],
        Command::PaperRepro => &["experiment"],
        #[allow(unreachable_patterns)]
        _ => SHARED,
    }
}

fn parse_usize(s: &str, key: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| MuntzError::Validation(format!("'{s}' is not a valid integer for {key}")))
}

fn parse_f64(s: &str, key: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| MuntzError::Validation(format!("'{s}' is not a valid number for {key}")))
}

fn parse_sweep(s: &str) -> Result<Vec<usize>> {
    let list: Result<Vec<usize>> = s.split(',').map(|t| parse_usize(t.trim(), "sweep")).collect();
    let list = list?;
    if list.is_empty() {
        return Err(MuntzError::Validation("empty sweep list".into()));
    }
    Ok(list)
}

/// Parse `key = value` lines; '#' starts a comment.
fn parse_config_file(path: &str) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MuntzError::Validation(format!("cannot read config '{path}': {e}")))?;
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            MuntzError::Validation(format!("config line {} is not 'key = value'", lineno + 1))
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Parse argv (without the program name) into a RunConfig.
pub fn parse_args(args: &[String]) -> Result<RunConfig> {
    let mut it = args.iter().peekable();
    let command = Command::parse(
        it.next()
            .ok_or_else(|| MuntzError::Validation("missing command".into()))?,
    )?;
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    let mut file_params: BTreeMap<String, String> = BTreeMap::new();
    let mut sweep = None;
    let mut output = None;
    let mut format = OutputFormat::Csv;

    // paper-repro takes its experiment name positionally
    if command == Command::PaperRepro {
        let name = it
            .next()
            .ok_or_else(|| MuntzError::Validation("paper-repro needs an experiment name".into()))?;
        if name.starts_with("--") {
            return Err(MuntzError::Validation(
                "paper-repro needs an experiment name before flags".into(),
            ));
        }
        params.insert("experiment".into(), name.clone());
    }

    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| MuntzError::Validation(format!("unexpected argument '{arg}'")))?;
        let mut value = || -> Result<String> {
            it.next()
                .cloned()
                .ok_or_else(|| MuntzError::Validation(format!("--{key} needs a value")))
        };
        match key {
            "sweep" => sweep = Some(parse_sweep(&value()?)?),
            "output" => output = Some(PathBuf::from(value()?)),
            "format" => {
                format = match value()?.as_str() {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => {
                        return Err(MuntzError::Validation(format!(
                            "unknown format '{other}' (csv or json)"
                        )))
                    }
                }
            }
            "config" => file_params = parse_config_file(&value()?)?,
            other => {
                if !allowed_keys(command).contains(&other) {
                    return Err(MuntzError::Validation(format!(
                        "unknown option '--{other}' for {}",
                        command.name()
                    )));
                }
                params.insert(other.to_string(), value()?);
            }
        }
    }

    // file values fill anything the flags did not set
    for (k, v) in file_params {
        match k.as_str() {
            "sweep" => {
                if sweep.is_none() {
                    sweep = Some(parse_sweep(&v)?);
                }
            }
            "output" => {
                if output.is_none() {
                    output = Some(PathBuf::from(v));
                }
            }
            "format" => {
                if format == OutputFormat::Csv {
                    format = match v.as_str() {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => {
                            return Err(MuntzError::Validation(format!(
                                "unknown format '{other}' in config"
                            )))
                        }
                    };
                }
            }
            other => {
                if !allowed_keys(command).contains(&other) {
                    return Err(MuntzError::Validation(format!(
                        "unknown key '{other}' in config for {}",
                        command.name()
                    )));
                }
                params.entry(other.to_string()).or_insert(v);
            }
        }
    }

    Ok(RunConfig {
        command,
        params,
        sweep,
        output,
        format,
    })
}

// ---------------------------------------------------------------------
// tables

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Str(String),
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits, '.' decimal separator, deterministic.
fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

fn cell_to_csv(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Float(f) => fmt_float(*f),
        Cell::Str(s) => s.clone(),
    }
}

fn cell_to_json(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Float(f) if f.is_finite() => fmt_float(*f),
        Cell::Float(f) => format!("\"{}\"", fmt_float(*f)),
        Cell::Str(s) => format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
    }
}

impl Table {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(cell_to_csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write, command: &str) -> std::io::Result<()> {
        writeln!(w, "{{")?;
        writeln!(w, "  \"schema_version\": 1,")?;
        writeln!(w, "  \"command\": \"{command}\",")?;
        let cols: Vec<String> = self.columns.iter().map(|c| format!("\"{c}\"")).collect();
        writeln!(w, "  \"columns\": [{}],", cols.join(", "))?;
        writeln!(w, "  \"rows\": [")?;
        for (i, row) in self.rows.iter().enumerate() {
            let line: Vec<String> = row.iter().map(cell_to_json).collect();
            let comma = if i + 1 < self.rows.len() { "," } else { "" };
            writeln!(w, "    [{}]{}", line.join(", "), comma)?;
        }
        writeln!(w, "  ]")?;
        writeln!(w, "}}")
    }
}

// ---------------------------------------------------------------------
// parameter extraction

struct ParamReader<'a> {
    map: &'a BTreeMap<String, String>,
}

impl ParamReader<'_> {
    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.map.get(key) {
            Some(v) => parse_f64(v, key),
            None => Ok(default),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.map.get(key) {
            Some(v) => parse_usize(v, key),
            None => Ok(default),
        }
    }

    fn str_or<'s>(&'s self, key: &str, default: &'s str) -> &'s str {
        self.map.get(key).map(|s| s.as_str()).unwrap_or(default)
    }
}

/// Shared basis bundle with the left-benchmark defaults.
fn basis_from(params: &ParamReader) -> Result<MuntzBasisParams> {
    let alpha = params.f64_or("alpha", -0.5)?;
    let beta = params.f64_or("beta", 2.0)?;
    let sigma = params.f64_or("sigma", 0.5)?;
    let eta = params.f64_or("eta", 0.0)?;
    let mu = params.f64_or("mu", 0.5)?;
    let b = params.f64_or("b", 10.0)?;
    MuntzBasisParams::new(JacobiParams::new(alpha, beta)?, sigma, eta, mu, b)
}

// ---------------------------------------------------------------------
// sweep concurrency

fn sweep_thread_cap() -> usize {
    std::env::var("MUNTZ_SPECTRAL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Run `job` for every sweep entry concurrently (capped), merging results
/// in sweep order.
fn run_sweep<T: Send>(
    entries: &[usize],
    job: impl Fn(usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let cap = sweep_thread_cap().max(1);
    let mut results: Vec<Option<Result<T>>> = Vec::new();
    for _ in entries {
        results.push(None);
    }
    std::thread::scope(|scope| {
        for chunk in entries
            .iter()
            .enumerate()
            .collect::<Vec<_>>()
            .chunks((entries.len() + cap - 1) / cap)
        {
            let job = &job;
            let handles: Vec<_> = chunk
                .iter()
                .map(|(i, &n)| (*i, scope.spawn(move || job(n))))
                .collect();
            for (i, h) in handles {
                results[i] = Some(h.join().expect("sweep worker panicked"));
            }
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("sweep entry not computed"))
        .collect()
}

// ---------------------------------------------------------------------
// command implementations

fn cmd_quad(params: &ParamReader) -> Result<Table> {
    let basis = basis_from(params)?;
    let n = params.usize_or("n", 8)?;
    let rule = mapped_rule(n, basis)?;
    let rule = match params.str_or("rule", "base") {
        "base" => rule,
        "gjmqr1" => gjmqr_weights(&rule, GjmqrVariant::First)?,
        "gjmqr2" => gjmqr_weights(&rule, GjmqrVariant::Second)?,
        other => {
            return Err(MuntzError::Validation(format!(
                "unknown rule '{other}' (base, gjmqr1 or gjmqr2)"
            )))
        }
    };
    let _ = QuadKind::Base;
    let rows = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .enumerate()
        .map(|(j, (x, w))| vec![Cell::Int(j as i64), Cell::Float(*x), Cell::Float(*w)])
        .collect();
    Ok(Table {
        columns: vec!["j", "node", "weight"],
        rows,
    })
}

fn cmd_basis(params: &ParamReader) -> Result<Table> {
    let basis = basis_from(params)?;
    let kind = match params.str_or("kind", "first") {
        "first" => JmfKind::First,
        "second" => JmfKind::Second,
        other => {
            return Err(MuntzError::Validation(format!(
                "unknown kind '{other}' (first or second)"
            )))
        }
    };
    let degree = params.usize_or("degree", 5)?;
    let points = params.usize_or("points", 101)?.max(2);
    let mut rows = Vec::new();
    for deg in 0..=degree {
        let spec = JmfSpec {
            kind,
            n: deg,
            params: basis,
        };
        for i in 1..points {
            let x = basis.b * i as f64 / points as f64;
            rows.push(vec![
                Cell::Int(deg as i64),
                Cell::Float(x),
                Cell::Float(eval_jmf(&spec, x)?),
            ]);
        }
    }
    Ok(Table {
        columns: vec!["degree", "x", "value"],
        rows,
    })
}

fn dm_rows_to_cells(rows: &[DmSweepRow]) -> Vec<Vec<Cell>> {
    rows.iter()
        .map(|r| {
            vec![
                Cell::Int(r.n as i64),
                Cell::Float(r.mu),
                Cell::Str(
                    match r.approach {
                        DmApproach::Direct => "direct",
                        DmApproach::Stable => "stable",
                    }
                    .to_string(),
                ),
                Cell::Float(r.cond),
                Cell::Float(r.cond_over_2n2mu),
                Cell::Float(r.max_err),
            ]
        })
        .collect()
}

const DM_SWEEP_COLUMNS: [&str; 6] = ["N", "mu", "approach", "cond", "cond_over_2n2mu", "max_err"];

fn cmd_diffmat(params: &ParamReader, sweep: &Option<Vec<usize>>) -> Result<Table> {
    let side = match params.str_or("side", "left") {
        "left" => DmSide::Left,
        "right" => DmSide::Right,
        other => {
            return Err(MuntzError::Validation(format!(
                "unknown side '{other}' (left or right)"
            )))
        }
    };
    let mu = params.f64_or("mu", 0.5)?;
    let approaches: Vec<DmApproach> = match params.str_or("approach", "both") {
        "direct" => vec![DmApproach::Direct],
        "stable" => vec![DmApproach::Stable],
        "both" => vec![DmApproach::Direct, DmApproach::Stable],
        other => {
            return Err(MuntzError::Validation(format!(
                "unknown approach '{other}' (direct, stable or both)"
            )))
        }
    };
    let degree = params.usize_or(
        "degree",
        match side {
            DmSide::Left => experiments::MATRIX_BENCH_LEFT_DEGREE,
            DmSide::Right => experiments::MATRIX_BENCH_RIGHT_DEGREE,
        },
    )?;

    if let Some(ns) = sweep {
        let results = run_sweep(ns, |n| {
            experiments::dm_sweep_rows(side, n, mu, degree, &approaches)
        })?;
        let mut rows = Vec::new();
        for r in results {
            rows.extend(dm_rows_to_cells(&r));
        }
        return Ok(Table {
            columns: DM_SWEEP_COLUMNS.to_vec(),
            rows,
        });
    }

    // matrix dump
    let basis = basis_from(params)?;
    let n = params.usize_or("n", 16)?;
    let node_set = MuntzNodeSet::new(n, basis)?;
    let d = match approaches[0] {
        DmApproach::Direct => ek_dm_direct(side, &node_set, mu)?,
        DmApproach::Stable => ek_dm_stable(side, &node_set, mu)?,
    };
    let mut rows = Vec::new();
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            rows.push(vec![
                Cell::Int(i as i64),
                Cell::Int(j as i64),
                Cell::Float(d.get(i, j)),
            ]);
        }
    }
    Ok(Table {
        columns: vec!["row", "col", "value"],
        rows,
    })
}

fn cmd_interp(params: &ParamReader) -> Result<Table> {
    let basis = basis_from(params)?;
    let kind = match params.str_or("kind", "mji") {
        "mji" => InterpolantKind::Mji,
        "njmi1" => InterpolantKind::Njmi1,
        "njmi2" => InterpolantKind::Njmi2,
        other => {
            return Err(MuntzError::Validation(format!(
                "unknown kind '{other}' (mji, njmi1 or njmi2)"
            )))
        }
    };
    let target: fn(f64) -> f64 = match params.str_or("target", "sqrt-sin") {
        "sqrt-sin" => |x: f64| x.sqrt() * x.sqrt().sin(),
        other => {
            return Err(MuntzError::Validation(format!(
                "unknown target '{other}' (sqrt-sin)"
            )))
        }
    };
    let n = params.usize_or("n", 40)?;
    let points = params.usize_or("points", 201)?.max(2);
    let ns = MuntzNodeSet::new(n, basis)?;
    let gf = interpolate(kind, target, &ns)?;
    let mut rows = Vec::new();
    for i in 0..=points {
        let x = basis.b * i as f64 / points as f64;
        let approx = eval_interpolant(kind, &gf, x)?;
        let exact = target(x);
        rows.push(vec![
            Cell::Float(x),
            Cell::Float(exact),
            Cell::Float(approx),
            Cell::Float((approx - exact).abs()),
        ]);
    }
    Ok(Table {
        columns: vec!["x", "exact", "approx", "abs_err"],
        rows,
    })
}

fn solution_table(
    report: &crate::solvers::SolverReport,
    exact: Option<&dyn Fn(f64) -> f64>,
) -> Table {
    let nodes = report.solution.nodeset().nodes();
    let mut rows = Vec::new();
    for (&x, &y) in nodes.iter().zip(report.solution.values()) {
        match exact {
            Some(f) => {
                let e = f(x);
                rows.push(vec![
                    Cell::Float(x),
                    Cell::Float(y),
                    Cell::Float(e),
                    Cell::Float((y - e).abs()),
                ]);
            }
            None => rows.push(vec![Cell::Float(x), Cell::Float(y)]),
        }
    }
    Table {
        columns: if exact.is_some() {
            vec!["x", "y", "exact", "abs_err"]
        } else {
            vec!["x", "y"]
        },
        rows,
    }
}

fn cmd_solve_linear(params: &ParamReader, sweep: &Option<Vec<usize>>) -> Result<Table> {
    let problem = params.str_or("problem", "cauchy-euler").to_string();
    match problem.as_str() {
        "cauchy-euler" => {
            if let Some(ns) = sweep {
                let results = run_sweep(ns, |n| {
                    let report = experiments::run_cauchy_euler(n, false)?;
                    Ok((n, report.e_infty.unwrap_or(f64::NAN), report.cond.unwrap_or(f64::NAN)))
                })?;
                let rows = results
                    .into_iter()
                    .map(|(n, e, c)| vec![Cell::Int(n as i64), Cell::Float(e), Cell::Float(c)])
                    .collect();
                Ok(Table {
                    columns: vec!["N", "e_inf", "cond"],
                    rows,
                })
            } else {
                let n = params.usize_or("n", 50)?;
                let report = experiments::run_cauchy_euler(n, true)?;
                Ok(solution_table(&report, Some(&cauchy_euler_exact)))
            }
        }
        "cauchy-euler-2" => {
            let n = params.usize_or("n", 50)?;
            let mu = params.f64_or("mu", 2.0)?;
            let sigma = params.f64_or("sigma", 0.5)?;
            let report =
                crate::solvers::solve_linear_fde(&experiments::cauchy_euler_second_problem(
                    mu, sigma, n,
                ))?;
            Ok(solution_table(&report, None))
        }
        "zero" => {
            let n = params.usize_or("n", 20)?;
            let mut p = experiments::cauchy_euler_problem(n, true);
            p.rhs = Box::new(|_| 0.0);
            p.exact = Some(Box::new(|_| 0.0));
            let report = crate::solvers::solve_linear_fde(&p)?;
            Ok(solution_table(&report, Some(&|_| 0.0)))
        }
        other => Err(MuntzError::Validation(format!(
            "unknown problem '{other}' (cauchy-euler, cauchy-euler-2 or zero)"
        ))),
    }
}

fn cmd_solve_nonlinear(params: &ParamReader, sweep: &Option<Vec<usize>>) -> Result<Table> {
    match params.str_or("problem", "riccati") {
        "riccati" => {
            if let Some(ns) = sweep {
                let results = run_sweep(ns, |n| {
                    let report = experiments::run_riccati(n)?;
                    Ok((n, report.e_infty.unwrap_or(f64::NAN), report.iterations))
                })?;
                let rows = results
                    .into_iter()
                    .map(|(n, e, it)| {
                        vec![Cell::Int(n as i64), Cell::Float(e), Cell::Int(it as i64)]
                    })
                    .collect();
                Ok(Table {
                    columns: vec!["N", "e_inf", "iterations"],
                    rows,
                })
            } else {
                let n = params.usize_or("n", 50)?;
                let report = experiments::run_riccati(n)?;
                Ok(solution_table(&report, Some(&riccati_exact)))
            }
        }
        other => Err(MuntzError::Validation(format!(
            "unknown problem '{other}' (riccati)"
        ))),
    }
}

fn pde_table(report: &crate::solvers::SolverReport) -> Table {
    let nodes = report.solution.nodeset().nodes();
    let sigma_nu = 2.5;
    let mut rows = Vec::new();
    for (t, state) in &report.history {
        for (&x, &u) in nodes.iter().zip(state) {
            let exact = x.powf(sigma_nu) * (t * t).sin();
            rows.push(vec![
                Cell::Float(*t),
                Cell::Float(x),
                Cell::Float(u),
                Cell::Float(exact),
                Cell::Float((u - exact).abs()),
            ]);
        }
    }
    Table {
        columns: vec!["t", "x", "u", "exact", "abs_err"],
        rows,
    }
}

fn cmd_solve_pde(params: &ParamReader) -> Result<Table> {
    let n = params.usize_or("n", 10)?;
    let samples = params.usize_or("samples", 25)?.max(1);
    let report = experiments::run_pde_benchmark(n, samples)?;
    Ok(pde_table(&report))
}

fn burgers_rows(sigma: f64, n: usize, dt: f64, t_end: f64) -> Result<Vec<Vec<Cell>>> {
    let mut problem = experiments::burgers_benchmark_problem(sigma, n, dt);
    problem.t_end = t_end;
    let report = crate::solvers::solve_burgers(&problem)?;
    let nodes = report.solution.nodeset().nodes();
    Ok(nodes
        .iter()
        .zip(report.solution.values())
        .map(|(&x, &u)| {
            let e = burgers_exact(x, t_end);
            vec![
                Cell::Float(sigma),
                Cell::Float(x),
                Cell::Float(u),
                Cell::Float(e),
                Cell::Float((u - e).abs()),
            ]
        })
        .collect())
}

fn cmd_solve_burgers(params: &ParamReader) -> Result<Table> {
    let sigma = params.f64_or("sigma", 0.5)?;
    let n = params.usize_or("n", 20)?;
    let dt = params.f64_or("dt", 1e-3)?;
    let t_end = params.f64_or("t-end", 10.0)?;
    Ok(Table {
        columns: vec!["sigma", "x", "u", "exact", "abs_err"],
        rows: burgers_rows(sigma, n, dt, t_end)?,
    })
}

fn cmd_paper_repro(params: &ParamReader, sweep: &Option<Vec<usize>>) -> Result<Table> {
    let experiment = params.str_or("experiment", "");
    match experiment {
        "ex1" | "ex2" => {
            let side = if experiment == "ex1" {
                DmSide::Left
            } else {
                DmSide::Right
            };
            let degree = match side {
                DmSide::Left => experiments::MATRIX_BENCH_LEFT_DEGREE,
                DmSide::Right => experiments::MATRIX_BENCH_RIGHT_DEGREE,
            };
            let default_sweep = if experiment == "ex1" {
                vec![45, 95, 145, 165]
            } else {
                vec![45, 95]
            };
            let ns = sweep.clone().unwrap_or(default_sweep);
            let mut rows = Vec::new();
            for &mu in &[0.25, 0.5, 0.75] {
                let results = run_sweep(&ns, |n| {
                    experiments::dm_sweep_rows(
                        side,
                        n,
                        mu,
                        degree,
                        &[DmApproach::Direct, DmApproach::Stable],
                    )
                })?;
                for r in results {
                    rows.extend(dm_rows_to_cells(&r));
                }
            }
            Ok(Table {
                columns: DM_SWEEP_COLUMNS.to_vec(),
                rows,
            })
        }
        "ex3" => {
            let ns = sweep.clone().unwrap_or_else(|| vec![10, 20, 30, 40, 50]);
            let results = run_sweep(&ns, |n| {
                let report = experiments::run_cauchy_euler(n, false)?;
                Ok((n, report.e_infty.unwrap_or(f64::NAN), report.cond.unwrap_or(f64::NAN)))
            })?;
            let rows = results
                .into_iter()
                .map(|(n, e, c)| vec![Cell::Int(n as i64), Cell::Float(e), Cell::Float(c)])
                .collect();
            Ok(Table {
                columns: vec!["N", "e_inf", "cond"],
                rows,
            })
        }
        "ex4" => {
            let n = 50;
            let mut rows = Vec::new();
            for &sigma in &[0.5, 1.0] {
                for &mu in &[1.25, 1.5, 1.75, 2.0] {
                    let report = crate::solvers::solve_linear_fde(
                        &experiments::cauchy_euler_second_problem(mu, sigma, n),
                    )?;
                    for (&x, &y) in report
                        .solution
                        .nodeset()
                        .nodes()
                        .iter()
                        .zip(report.solution.values())
                    {
                        rows.push(vec![
                            Cell::Float(sigma),
                            Cell::Float(mu),
                            Cell::Float(x),
                            Cell::Float(y),
                        ]);
                    }
                }
            }
            Ok(Table {
                columns: vec!["sigma", "mu", "x", "y"],
                rows,
            })
        }
        "riccati" => {
            let ns = sweep.clone().unwrap_or_else(|| vec![10, 20, 30, 40, 50]);
            let results = run_sweep(&ns, |n| {
                let report = experiments::run_riccati(n)?;
                Ok((n, report.e_infty.unwrap_or(f64::NAN), report.iterations))
            })?;
            let rows = results
                .into_iter()
                .map(|(n, e, it)| vec![Cell::Int(n as i64), Cell::Float(e), Cell::Int(it as i64)])
                .collect();
            Ok(Table {
                columns: vec!["N", "e_inf", "iterations"],
                rows,
            })
        }
        "pde" => {
            let report = experiments::run_pde_benchmark(10, 25)?;
            Ok(pde_table(&report))
        }
        "burgers" => {
            let mut rows = burgers_rows(0.5, 20, 1e-3, 10.0)?;
            rows.extend(burgers_rows(1.0, 20, 1e-3, 10.0)?);
            Ok(Table {
                columns: vec!["sigma", "x", "u", "exact", "abs_err"],
                rows,
            })
        }
        other => Err(MuntzError::Validation(format!(
            "unknown experiment '{other}' (ex1, ex2, ex3, ex4, riccati, pde or burgers)"
        ))),
    }
}

// ---------------------------------------------------------------------
// entry points

/// Execute a parsed configuration, writing the table to the configured
/// destination.
pub fn run(config: &RunConfig) -> Result<()> {
    let reader = ParamReader {
        map: &config.params,
    };
    let table = match config.command {
        Command::Quad => cmd_quad(&reader)?,
        Command::Basis => cmd_basis(&reader)?,
        Command::DiffMat => cmd_diffmat(&reader, &config.sweep)?,
        Command::Interp => cmd_interp(&reader)?,
        Command::SolveLinear => cmd_solve_linear(&reader, &config.sweep)?,
        Command::SolveNonlinear => cmd_solve_nonlinear(&reader, &config.sweep)?,
        Command::SolvePde => cmd_solve_pde(&reader)?,
        Command::SolveBurgers => cmd_solve_burgers(&reader)?,
        Command::PaperRepro => cmd_paper_repro(&reader, &config.sweep)?,
    };

    let mut buffer: Vec<u8> = Vec::new();
    match config.format {
        OutputFormat::Csv => table.write_csv(&mut buffer),
        OutputFormat::Json => table.write_json(&mut buffer, config.command.name()),
    }
    .map_err(|e| MuntzError::Validation(format!("write failed: {e}")))?;

    match &config.output {
        Some(path) => std::fs::write(path, &buffer)
            .map_err(|e| MuntzError::Validation(format!("cannot write '{}': {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(&buffer)
                .map_err(|e| MuntzError::Validation(format!("stdout write failed: {e}")))
        }
    }
}

pub const USAGE: &str = "usage: muntz-spectral <command> [options]

commands:
  quad             quadrature nodes/weights       (csv: j,node,weight)
  basis            basis function values          (csv: degree,x,value)
  diffmat          differentiation matrix / sweep (csv: row,col,value | N,mu,approach,cond,cond_over_2n2mu,max_err)
  interp           interpolate a named target     (csv: x,exact,approx,abs_err)
  solve-linear     linear fractional ODE          (csv: x,y,exact,abs_err)
  solve-nonlinear  nonlinear fractional ODE       (csv: x,y,exact,abs_err)
  solve-pde        fractional PDE benchmark       (csv: t,x,u,exact,abs_err)
  solve-burgers    viscous Burgers benchmark      (csv: sigma,x,u,exact,abs_err)
  paper-repro      named benchmark experiment: ex1 ex2 ex3 ex4 riccati pde burgers

shared options: --alpha --beta --sigma --eta --mu --b --n
                --sweep N1,N2,...  --output PATH  --format csv|json  --config FILE
environment:    MUNTZ_SPECTRAL_THREADS caps sweep parallelism
exit codes:     0 success, 2 validation error, 3 numeric failure";

/// CLI main: returns the process exit code (0 ok, 2 validation,
/// 3 numeric failure).
pub fn main_impl(args: &[String]) -> i32 {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        println!("{USAGE}");
        return if args.is_empty() { 2 } else { 0 };
    }
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e @ (MuntzError::Validation(_) | MuntzError::InvalidParam(_))) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}
