//! Invariant suites run by `ellint2 selftest`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use ellint2::{
    complete_ke, elliptic_e_identity, elliptic_ke_identity, eval_appell, eval_axis, eval_diagonal,
    eval_elliptic, eval_product, evaluate, map_uv, quad2d, Amplitudes64, EllipticModulus64, Error,
    Method, ToleranceConfig64,
};

use crate::error::CliError;
use crate::Outcome;

/// Result of one suite.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Self::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    /// Records a check whose computation may itself fail.
    fn check_result(&mut self, r: Result<bool, Error>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

type Suite = fn(&ToleranceConfig64) -> SuiteReport;

/// Suite names in run order, with accepted aliases.
pub const SUITES: &[(&str, &[&str], Suite)] = &[
    ("legendre", &[], legendre),
    ("identities", &["eq6"], identities),
    ("uv", &[], uv),
    ("agreement", &[], agreement),
    ("axis", &[], axis),
    ("diagonal", &[], diagonal),
    ("convergence", &[], convergence),
];

/// Values of `E(a, b)` computed independently to 20 digits.
#[allow(clippy::excessive_precision)]
const FROZEN: &[(f64, f64, f64)] = &[
    (0.3, 0.4, 9.6990408375829146052),
    (0.1, 0.2, 9.8382685798275924588),
    (0.05, 0.05, 9.866514708315214089),
    (0.4, 0.4, 9.6421659995074017853),
    (0.2, 0.6, 9.5861893882249463801),
    (0.05, 0.95, 9.064281983745462984),
    (0.7, 0.3, 9.3940104930883453979),
    (0.5, 0.5, 9.4559830850861169509),
    (0.9, 0.0, 9.2065544110400853269),
    (0.5, 0.0, 9.7052029538694469815),
];

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn amp(a: f64, b: f64) -> Amplitudes64 {
    Amplitudes64::new(a, b).expect("suite points are admissible")
}

fn legendre(cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("legendre");
    for i in 1..=9 {
        let k = i as f64 / 10.0;
        let r = EllipticModulus64::new(k).and_then(|m| {
            let v = complete_ke(m, cfg)?;
            let w = complete_ke(m.complementary(), cfg)?;
            let lhs = v.second_kind * w.first_kind + w.second_kind * v.first_kind
                - v.first_kind * w.first_kind;
            Ok(rel(lhs, FRAC_PI_2) <= 1e-13)
        });
        s.check_result(r, || format!("Legendre relation at k = {k}"));
    }
    s
}

fn identities(cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("identities");
    for i in 1..=18 {
        let z = i as f64 * 0.05;
        let r = elliptic_e_identity(z, cfg).map(|d| d.rel_gap() <= 1e-10);
        s.check_result(r, || format!("second-kind identity at z = {z}"));
        let r = elliptic_ke_identity(z, cfg).map(|d| d.rel_gap() <= 1e-10);
        s.check_result(r, || format!("K - E identity at z = {z}"));
    }
    s
}

/// Low-discrepancy points covering the admissible region, signs included.
fn spread_points(n: usize) -> impl Iterator<Item = (f64, f64)> {
    const G1: f64 = 0.754_877_666_246_692_7;
    const G2: f64 = 0.569_840_290_998_053_3;
    (1..=n).map(|i| {
        let s = (0.5 + G1 * i as f64).fract();
        let t = (0.5 + G2 * i as f64).fract();
        let (a, b) = (s * t, s * (1.0 - t));
        let sa = if i % 2 == 0 { a } else { -a };
        let sb = if i % 3 == 0 { -b } else { b };
        (sa, sb)
    })
}

fn uv(_cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("uv");
    for (a, b) in spread_points(1000) {
        let r = map_uv(amp(a, b));
        let res = (r.u * (1.0 - r.v) - a * a)
            .abs()
            .max((r.v * (1.0 - r.u) - b * b).abs());
        let sum = (r.u * (1.0 - r.v)).sqrt() + (r.v * (1.0 - r.u)).sqrt();
        let ok = (0.0..=1.0).contains(&r.u)
            && (0.0..=1.0).contains(&r.v)
            && res <= 1e-12
            && (sum - (a.abs() + b.abs())).abs() <= 1e-12;
        s.check(ok, || format!("(u, v) round trip at ({a}, {b})"));
    }
    s
}

fn agreement(cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("agreement");
    let axis = [0.0, 0.05, 0.1, 0.2, 0.3, 0.4];
    for a in axis {
        for b in axis {
            if a + b > 0.8 {
                continue;
            }
            let p = amp(a, b);
            let r = quad2d(p, cfg).and_then(|q| {
                let vals = [
                    eval_elliptic(p, cfg)?.value,
                    eval_product(p, cfg)?.value,
                    eval_appell(p, cfg)?.value,
                ];
                Ok(q.converged && vals.iter().all(|&v| rel(v, q.value) <= 1e-8))
            });
            s.check_result(r, || format!("four-way agreement at ({a}, {b})"));
        }
    }
    s
}

fn axis(cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("axis");
    let exact = 2.0 * SQRT_2 * PI;
    let r = eval_axis(1.0, cfg).map(|e| rel(e.value, exact) <= 1e-13);
    s.check_result(r, || "axis value at a = 1".into());
    let r = evaluate(amp(0.0, -1.0), Method::Auto, cfg).map(|e| rel(e.value, exact) <= 1e-13);
    s.check_result(r, || "automatic route at (0, -1)".into());
    let refused = matches!(eval_elliptic(amp(1.0, 0.0), cfg), Err(Error::Corner { .. }));
    s.check(refused, || {
        "elliptic route refuses the corner (1, 0)".into()
    });
    for i in 1..=99 {
        let a = i as f64 / 100.0;
        let r = eval_elliptic(amp(a, 0.0), cfg)
            .and_then(|e| Ok(rel(e.value, eval_axis(a, cfg)?.value) <= 1e-11));
        s.check_result(r, || format!("elliptic route against axis form at a = {a}"));
    }
    s
}

fn diagonal(cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("diagonal");
    for a in [0.05, 0.1, 0.2, 0.3, 0.4, 0.45] {
        let r = eval_diagonal(a, cfg)
            .and_then(|d| Ok(rel(d.value, eval_elliptic(amp(a, a), cfg)?.value) <= 1e-10));
        s.check_result(r, || format!("diagonal against elliptic route at a = {a}"));
    }
    let r = eval_diagonal(0.5, cfg).and_then(|d| {
        let q = quad2d(amp(0.5, 0.5), cfg)?;
        Ok(rel(d.value, q.value) <= 1e-7)
    });
    s.check_result(r, || "diagonal against quadrature at a = 0.5".into());
    s
}

/// Every route must reproduce the frozen values and report honest error estimates.
fn convergence(cfg: &ToleranceConfig64) -> SuiteReport {
    let mut s = SuiteReport::new("convergence");
    for &(a, b, exact) in FROZEN {
        let p = amp(a, b);
        let r = evaluate(p, Method::Auto, cfg)
            .map(|e| rel(e.value, exact) <= 1e-13 && e.error_estimate <= 1e-12 * exact);
        s.check_result(r, || {
            format!("automatic route against frozen value at ({a}, {b})")
        });
        let tol = if a + b > 0.95 { 1e-8 } else { 1e-10 };
        let r = quad2d(p, cfg).map(|q| q.converged && rel(q.value, exact) <= tol);
        s.check_result(r, || {
            format!("quadrature against frozen value at ({a}, {b})")
        });
        if a + b < 1.0 {
            let r = eval_product(p, cfg).map(|e| rel(e.value, exact) <= 1e-12);
            s.check_result(r, || {
                format!("product series against frozen value at ({a}, {b})")
            });
        }
    }
    s
}

/// Resolves a suite name or alias.
pub fn find_suite(name: &str) -> Option<(&'static str, Suite)> {
    SUITES
        .iter()
        .find(|(n, aliases, _)| *n == name || aliases.contains(&name))
        .map(|&(n, _, f)| (n, f))
}

/// Runs the selected suites (all when `only` is empty).
pub fn run_suites(only: &[String], cfg: &ToleranceConfig64) -> Result<Vec<SuiteReport>, CliError> {
    let selected: Vec<Suite> = if only.is_empty() {
        SUITES.iter().map(|&(_, _, f)| f).collect()
    } else {
        let mut picked: Vec<(&str, Suite)> = Vec::new();
        for name in only {
            let found = find_suite(name).ok_or_else(|| {
                let names: Vec<_> = SUITES.iter().map(|(n, _, _)| *n).collect();
                CliError::Usage(format!(
                    "unknown suite {name:?}; expected one of {}",
                    names.join(", ")
                ))
            })?;
            if !picked.iter().any(|(n, _)| *n == found.0) {
                picked.push(found);
            }
        }
        picked.into_iter().map(|(_, f)| f).collect()
    };
    Ok(selected.into_iter().map(|f| f(cfg)).collect())
}

pub fn cmd_selftest(only: &[String], cfg: &ToleranceConfig64) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let reports = run_suites(only, cfg)?;
    let mut out = String::new();
    let mut failed = 0;
    for r in &reports {
        out.push_str(&format!(
            "suite={} passed={} total={} status={}\n",
            r.name,
            r.passed,
            r.total,
            if r.ok() { "ok" } else { "FAILED" }
        ));
        for f in &r.failures {
            out.push_str(&format!("  failed: {f}\n"));
        }
        failed += r.failures.len();
    }
    let passed: usize = reports.iter().map(|r| r.passed).sum();
    let total: usize = reports.iter().map(|r| r.total).sum();
    out.push_str(&format!("passed={passed} total={total}\n"));
    let failure = (failed > 0).then_some(CliError::SelftestFailed { failed });
    Ok(Outcome::new(out, failure))
}
