//! The `eval`, `compare` and `golden` subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ellint2::{default_quad_tol, evaluate, quad2d, Amplitudes64, Method, ToleranceConfig64};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::fmt_num;
use crate::grid::GridSpec;
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Grid, methods and output file for `compare`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub grid: GridSpec,
    pub methods: Vec<Method>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub const COMPARE_HEADER: &str = "a,b,method,value,error_estimate";
pub const GOLDEN_HEADER: &str = "a,b,value,error_estimate,nodes_total,converged";
pub const SKIPPED_DOMAIN: &str = "skipped-domain";
pub const FAILED_CONVERGENCE: &str = "failed-convergence";

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.flush().map_err(io)
}

fn json_text(rows: Vec<Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("rows serialize");
    s.push('\n');
    s
}

/// Runs a single evaluation and returns the `key=value` line to print.
pub fn cmd_eval(
    a: f64,
    b: f64,
    method: Method,
    cfg: &ToleranceConfig64,
    timing: bool,
) -> Result<Outcome, CliError> {
    let p = Amplitudes64::new(a, b)?;
    let start = Instant::now();
    let mut fields = vec![("a", fmt_num(a)), ("b", fmt_num(b))];
    let mut not_converged = false;
    if method == Method::Quadrature {
        cfg.validate()?;
        let q = quad2d(p, cfg)?;
        let elapsed = start.elapsed();
        not_converged = !q.converged;
        fields.extend([
            ("method", Method::Quadrature.to_string()),
            ("value", fmt_num(q.value)),
            ("error_estimate", fmt_num(q.error_estimate)),
            ("levels_used", q.levels_used.to_string()),
            ("nodes_total", q.nodes_total.to_string()),
            ("converged", q.converged.to_string()),
        ]);
        if timing {
            fields.push(("time_us", fmt_micros(elapsed)));
        }
    } else {
        let e = evaluate(p, method, cfg)?;
        let elapsed = start.elapsed();
        fields.extend([
            ("method", e.method.to_string()),
            ("value", fmt_num(e.value)),
            ("error_estimate", fmt_num(e.error_estimate)),
        ]);
        if timing {
            fields.push(("time_us", fmt_micros(elapsed)));
        }
    }
    let line = fields
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    let failure = not_converged.then_some(CliError::NotConverged { count: 1 });
    Ok(Outcome::new(line + "\n", failure))
}

fn fmt_micros(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e6)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value { value: f64, error_estimate: f64 },
    SkippedDomain,
    FailedConvergence,
}

/// One `(point, method)` result of a comparison sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub a: f64,
    pub b: f64,
    pub method: Method,
    pub cell: Cell,
    pub elapsed: Duration,
}

/// Aggregate deviations of a comparison sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub grid_points: usize,
    pub skipped_points: usize,
    pub skipped_cells: usize,
    pub failed_cells: usize,
    pub rows: Vec<CompareRow>,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    pub worst_point: Option<(f64, f64)>,
    pub worst_method: Option<Method>,
}

impl CompareReport {
    pub fn admissible_points(&self) -> usize {
        self.grid_points - self.skipped_points
    }

    /// Median latency of a method over the rows where it produced a value.
    pub fn median_latency(&self, method: Method) -> Option<Duration> {
        let mut t: Vec<_> = self
            .rows
            .iter()
            .filter(|r| r.method == method && matches!(r.cell, Cell::Value { .. }))
            .map(|r| r.elapsed)
            .collect();
        if t.is_empty() {
            return None;
        }
        t.sort();
        let n = t.len();
        Some(if n % 2 == 1 {
            t[n / 2]
        } else {
            (t[n / 2 - 1] + t[n / 2]) / 2
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(COMPARE_HEADER);
        s.push('\n');
        for r in &self.rows {
            let (value, err) = match r.cell {
                Cell::Value {
                    value,
                    error_estimate,
                } => (fmt_num(value), fmt_num(error_estimate)),
                Cell::SkippedDomain => (SKIPPED_DOMAIN.to_string(), String::new()),
                Cell::FailedConvergence => (FAILED_CONVERGENCE.to_string(), String::new()),
            };
            s.push_str(&format!(
                "{},{},{},{value},{err}\n",
                fmt_num(r.a),
                fmt_num(r.b),
                r.method
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let (value, err) = match r.cell {
                    Cell::Value {
                        value,
                        error_estimate,
                    } => (json!(value), json!(error_estimate)),
                    Cell::SkippedDomain => (json!(SKIPPED_DOMAIN), Value::Null),
                    Cell::FailedConvergence => (json!(FAILED_CONVERGENCE), Value::Null),
                };
                json!({
                    "a": r.a,
                    "b": r.b,
                    "method": r.method.as_str(),
                    "value": value,
                    "error_estimate": err,
                })
            })
            .collect();
        json_text(rows)
    }

    /// The `key=value` summary printed after a sweep.
    pub fn summary(&self, timing: bool) -> String {
        let mut lines = vec![
            format!("grid_points={}", self.grid_points),
            format!("admissible_points={}", self.admissible_points()),
            format!("skipped_points={}", self.skipped_points),
            format!("skipped_cells={}", self.skipped_cells),
            format!("failed_cells={}", self.failed_cells),
            format!("max_abs_dev={}", fmt_num(self.max_abs_dev)),
            format!("max_rel_dev={}", fmt_num(self.max_rel_dev)),
        ];
        match (self.worst_point, self.worst_method) {
            (Some((a, b)), Some(m)) => {
                lines.push(format!("worst_point={},{}", fmt_num(a), fmt_num(b)));
                lines.push(format!("worst_method={m}"));
            }
            _ => lines.push("worst_point=none".to_string()),
        }
        if timing {
            let mut methods: Vec<_> = self.rows.iter().map(|r| r.method).collect();
            methods.sort();
            methods.dedup();
            for m in &methods {
                if let Some(t) = self.median_latency(*m) {
                    lines.push(format!("median_time_us_{m}={}", fmt_micros(t)));
                }
            }
            let fast = self.median_latency(Method::Elliptic);
            let slow = self.median_latency(Method::Quadrature);
            if let (Some(f), Some(s)) = (fast, slow) {
                let ratio = s.as_secs_f64() / f.as_secs_f64().max(1e-12);
                lines.push(format!("speedup_elliptic7_vs_quad={ratio:.1}"));
            }
        }
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

fn run_cell(
    p: Amplitudes64,
    method: Method,
    cfg: &ToleranceConfig64,
) -> Result<(Cell, Duration), CliError> {
    let start = Instant::now();
    let cell = if method == Method::Quadrature {
        let q = quad2d(p, cfg)?;
        if q.converged {
            Cell::Value {
                value: q.value,
                error_estimate: q.error_estimate,
            }
        } else {
            Cell::FailedConvergence
        }
    } else {
        match evaluate(p, method, cfg) {
            Ok(e) => Cell::Value {
                value: e.value,
                error_estimate: e.error_estimate,
            },
            Err(e) if e.is_domain() => Cell::SkippedDomain,
            Err(e) if e.is_convergence() => Cell::FailedConvergence,
            Err(e) => return Err(e.into()),
        }
    };
    Ok((cell, start.elapsed()))
}

/// Evaluates every requested method at every admissible grid point.
pub fn run_compare(spec: &SweepSpec, cfg: &ToleranceConfig64) -> Result<CompareReport, CliError> {
    spec.grid.validate()?;
    cfg.validate()?;
    if spec.methods.is_empty() {
        return Err(CliError::Usage(
            "--methods must name at least one method".into(),
        ));
    }
    let all = spec.grid.points();
    let points: Vec<Amplitudes64> = all
        .iter()
        .filter_map(|&(a, b)| Amplitudes64::new(a, b).ok())
        .collect();
    let skipped_points = all.len() - points.len();
    if points.is_empty() {
        return Err(CliError::NoAdmissiblePoints);
    }

    let jobs: Vec<(Amplitudes64, Method)> = points
        .iter()
        .flat_map(|&p| spec.methods.iter().map(move |&m| (p, m)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(p, m)| run_cell(p, m, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<CompareRow> = jobs
        .iter()
        .zip(cells)
        .map(|(&(p, method), (cell, elapsed))| CompareRow {
            a: p.a(),
            b: p.b(),
            method,
            cell,
            elapsed,
        })
        .collect();

    let references = points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            reference_value(
                p,
                &rows[i * spec.methods.len()..][..spec.methods.len()],
                cfg,
            )
        })
        .collect::<Vec<_>>();

    let mut report = CompareReport {
        grid_points: all.len(),
        skipped_points,
        skipped_cells: rows
            .iter()
            .filter(|r| r.cell == Cell::SkippedDomain)
            .count(),
        failed_cells: rows
            .iter()
            .filter(|r| r.cell == Cell::FailedConvergence)
            .count(),
        rows: Vec::new(),
        max_abs_dev: 0.0,
        max_rel_dev: 0.0,
        worst_point: None,
        worst_method: None,
    };
    for (chunk, reference) in rows.chunks(spec.methods.len()).zip(references) {
        let Some(reference) = reference else { continue };
        for r in chunk {
            if let Cell::Value { value, .. } = r.cell {
                let abs = (value - reference).abs();
                let rel = abs / reference.abs();
                report.max_abs_dev = report.max_abs_dev.max(abs);
                if report.worst_point.is_none() || rel > report.max_rel_dev {
                    report.max_rel_dev = rel;
                    report.worst_point = Some((r.a, r.b));
                    report.worst_method = Some(r.method);
                }
            }
        }
    }
    report.rows = rows;
    Ok(report)
}

/// Quadrature value when it was requested and converged, else the elliptic closed form
/// (with its axis specialisation where one amplitude vanishes).
fn reference_value(
    p: Amplitudes64,
    row_cells: &[CompareRow],
    cfg: &ToleranceConfig64,
) -> Option<f64> {
    let quad = row_cells.iter().find_map(|r| match (r.method, &r.cell) {
        (Method::Quadrature, Cell::Value { value, .. }) => Some(*value),
        _ => None,
    });
    quad.or_else(|| evaluate(p, Method::Auto, cfg).ok().map(|e| e.value))
}

/// Runs `compare`: sweep, optional file, summary, threshold check.
pub fn cmd_compare(
    spec: &SweepSpec,
    cfg: &ToleranceConfig64,
    fail_above: Option<f64>,
    timing: bool,
) -> Result<Outcome, CliError> {
    let report = run_compare(spec, cfg)?;
    if let Some(path) = &spec.out {
        let text = match spec.format {
            Format::Csv => report.to_csv(),
            Format::Json => report.to_json(),
        };
        write_file(path, &text)?;
    }
    Ok(Outcome::new(
        report.summary(timing),
        compare_status(&report, fail_above).err(),
    ))
}

/// Checks the outcome of `compare` against convergence failures and `--fail-above`.
pub fn compare_status(report: &CompareReport, fail_above: Option<f64>) -> Result<(), CliError> {
    if report.failed_cells > 0 {
        return Err(CliError::NotConverged {
            count: report.failed_cells,
        });
    }
    if let Some(limit) = fail_above {
        if report.max_rel_dev.is_nan() || report.max_rel_dev > limit {
            return Err(CliError::Threshold {
                dev: report.max_rel_dev,
                limit,
            });
        }
    }
    Ok(())
}

/// One row of a golden file.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRow {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub nodes_total: usize,
    pub converged: bool,
}

/// Quadrature target used for golden values: a hundredfold tighter than the
/// default oracle target.
pub fn golden_tol(p: Amplitudes64) -> f64 {
    default_quad_tol(p.margin()) * 1e-2
}

/// Quadrature values over the admissible grid points, in grid order.
pub fn run_golden(
    grid: &GridSpec,
    cfg: &ToleranceConfig64,
) -> Result<(Vec<GoldenRow>, usize), CliError> {
    grid.validate()?;
    cfg.validate()?;
    let all = grid.points();
    let points: Vec<Amplitudes64> = all
        .iter()
        .filter_map(|&(a, b)| Amplitudes64::new(a, b).ok())
        .collect();
    if points.is_empty() {
        return Err(CliError::NoAdmissiblePoints);
    }
    let rows = points
        .par_iter()
        .map(|&p| {
            let tight = cfg.with_quad_rel_tol(golden_tol(p));
            let q = quad2d(p, &tight)?;
            Ok(GoldenRow {
                a: p.a(),
                b: p.b(),
                value: q.value,
                error_estimate: q.error_estimate,
                nodes_total: q.nodes_total,
                converged: q.converged,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((rows, all.len() - points.len()))
}

pub fn golden_csv(rows: &[GoldenRow]) -> String {
    let mut s = String::from(GOLDEN_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_num(r.a),
            fmt_num(r.b),
            fmt_num(r.value),
            fmt_num(r.error_estimate),
            r.nodes_total,
            r.converged
        ));
    }
    s
}

pub fn golden_json(rows: &[GoldenRow]) -> String {
    json_text(
        rows.iter()
            .map(|r| {
                json!({
                    "a": r.a,
                    "b": r.b,
                    "value": r.value,
                    "error_estimate": r.error_estimate,
                    "nodes_total": r.nodes_total,
                    "converged": r.converged,
                })
            })
            .collect(),
    )
}

/// Runs `golden`: writes the file and returns the summary text. Points that did
/// not converge stay in the file with `converged=false` and fail the run.
pub fn cmd_golden(
    grid: &GridSpec,
    cfg: &ToleranceConfig64,
    out: &Path,
    format: Format,
) -> Result<Outcome, CliError> {
    let (rows, skipped) = run_golden(grid, cfg)?;
    let text = match format {
        Format::Csv => golden_csv(&rows),
        Format::Json => golden_json(&rows),
    };
    write_file(out, &text)?;
    let bad = rows.iter().filter(|r| !r.converged).count();
    let summary = format!(
        "rows={}\nskipped_points={skipped}\nnot_converged={bad}\nout={}\n",
        rows.len(),
        out.display()
    );
    let failure = (bad > 0).then_some(CliError::NotConverged { count: bad });
    Ok(Outcome::new(summary, failure))
}
