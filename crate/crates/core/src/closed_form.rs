//! Evaluators of `E(a, b) = ∫₀^π ∫₀^π √(1 + a cos x + b cos y) dx dy`.
//!
//! | method      | route                                                      | domain            |
//! |-------------|------------------------------------------------------------|-------------------|
//! | `elliptic7` | combination of `K`, `E` at `k(√u)`, `k(√v)`                | `|a|+|b| ≤ 1`, no corners |
//! | `product5`  | `π²[F(u)F(v) + uv/16·G(u)G(v)]`, `F, G` Gauss `₂F₁`        | `|a|+|b| < 1`     |
//! | `appell3`   | `π²·F₄(−¼, ¼; 1, 1; a², b²)`                               | `|a|+|b| < 1`     |
//! | `diag8`     | `a = b`: `K`, `E` at one modulus, checked against `₃F₂`    | `|a| ≤ ½`, `|a| = |b|` |
//! | `axis`      | `b = 0`: `2π√(1+|a|)·E(√(2|a|/(1+|a|)))`                   | `|a| ≤ 1`         |
//! | `quad`      | tensor Gauss-Legendre                                      | `|a|+|b| ≤ 1`     |
//!
//! Every evaluator applies `E(a, b) = E(|a|, |b|)` first.

use std::fmt;
use std::str::FromStr;

use crate::elliptic::{complete_e, complete_ke, EllipticValues};
use crate::error::{Error, Result};
use crate::hypergeometric::{appell_f4, gauss_2f1, series_3f2, SeriesResult};
use crate::quadrature::quad2d;
use crate::reduction::{map_uv, modulus_from_z, Amplitudes};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Picks the fastest route defined at the point.
    Auto,
    Elliptic,
    Product,
    Appell,
    Diagonal,
    Axis,
    Quadrature,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Auto,
        Method::Elliptic,
        Method::Product,
        Method::Appell,
        Method::Diagonal,
        Method::Axis,
        Method::Quadrature,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Elliptic => "elliptic7",
            Method::Product => "product5",
            Method::Appell => "appell3",
            Method::Diagonal => "diag8",
            Method::Axis => "axis",
            Method::Quadrature => "quad",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Method::ALL.iter().map(|m| m.as_str()).collect();
                Error::Domain(format!(
                    "unknown method {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// A value of `E(a, b)` tagged with its route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub value: T,
    pub method: Method,
    pub error_estimate: T,
}

fn method_domain<T: Scalar>(method: Method, p: Amplitudes<T>, hint: &str) -> Error {
    Error::MethodDomain {
        method: method.as_str(),
        a: p.a().as_f64(),
        b: p.b().as_f64(),
        hint: hint.to_string(),
    }
}

/// Relative error carried by one AGM-derived factor.
fn factor_err<T: Scalar>(v: &EllipticValues<T>) -> T {
    v.rel_residual + T::epsilon() * T::lit(8.0)
}

/// Closed form in complete elliptic integrals:
///
/// ```text
/// E(a,b)/4 = 2·S_u S_v·E_u E_v + K_u K_v/(S_u S_v) − (S_u/S_v)·E_u K_v − (S_v/S_u)·E_v K_u
/// ```
///
/// with `S = √(1 + √u)`, and `K_u, E_u` taken at modulus `√(2√u/(1+√u))`.
/// Refuses the corners `(±1, 0)`, `(0, ±1)`, where `K_u` diverges and the
/// two `K_u` terms cancel analytically.
pub fn eval_elliptic<T: Scalar>(
    p: Amplitudes<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<Evaluation<T>> {
    let p = p.abs();
    let r = map_uv(p);
    if p.is_corner() || r.u >= T::one() || r.v >= T::one() {
        return Err(Error::Corner {
            a: p.a().as_f64(),
            b: p.b().as_f64(),
        });
    }
    let (ru, rv) = (r.u.sqrt(), r.v.sqrt());
    let eu = complete_ke(modulus_from_z(ru)?, cfg)?;
    let ev = complete_ke(modulus_from_z(rv)?, cfg)?;
    let su = (T::one() + ru).sqrt();
    let sv = (T::one() + rv).sqrt();

    let (ku, e_u) = (eu.first_kind, eu.second_kind);
    let (kv, e_v) = (ev.first_kind, ev.second_kind);
    let terms = [
        T::lit(2.0) * su * sv * e_u * e_v,
        ku * kv / (su * sv),
        -(su / sv) * e_u * kv,
        -(sv / su) * e_v * ku,
    ];
    let four = T::lit(4.0);
    let value = four * terms.iter().copied().sum::<T>();
    let rel = factor_err(&eu) + factor_err(&ev);
    let error_estimate = four * rel * terms.iter().map(|t| t.abs()).sum::<T>();
    Ok(Evaluation {
        value,
        method: Method::Elliptic,
        error_estimate,
    })
}

/// Product of Gauss series in `u` and `v`:
///
/// ```text
/// E(a,b) = π²·[₂F₁(−¼,¼;1;u)·₂F₁(−¼,¼;1;v) + (uv/16)·₂F₁(¾,5⁄4;2;u)·₂F₁(¾,5⁄4;2;v)]
/// ```
///
/// Strict interior only.
pub fn eval_product<T: Scalar>(
    p: Amplitudes<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<Evaluation<T>> {
    let p = p.abs();
    if !p.is_interior() {
        return Err(method_domain(
            Method::Product,
            p,
            "needs |a| + |b| < 1; use elliptic7 or quad on the boundary",
        ));
    }
    let r = map_uv(p);
    let q = T::lit(0.25);
    let f = |z: T| -> Result<SeriesResult<T>> {
        gauss_2f1(-q, q, T::one(), z, cfg)?.require_converged()
    };
    let g = |z: T| -> Result<SeriesResult<T>> {
        gauss_2f1(T::lit(0.75), T::lit(1.25), T::lit(2.0), z, cfg)?.require_converged()
    };
    let (fu, fv, gu, gv) = (f(r.u)?, f(r.v)?, g(r.u)?, g(r.v)?);
    let w = r.u * r.v / T::lit(16.0);
    let pi2 = T::PI() * T::PI();
    let value = pi2 * (fu.value * fv.value + w * gu.value * gv.value);
    let tails = fu.value.abs() * fv.tail_estimate
        + fv.value.abs() * fu.tail_estimate
        + w * (gu.value.abs() * gv.tail_estimate + gv.value.abs() * gu.tail_estimate);
    Ok(Evaluation {
        value,
        method: Method::Product,
        error_estimate: pi2 * tails + value.abs() * T::epsilon() * T::lit(8.0),
    })
}

/// Double series `π²·F₄(−¼, ¼; 1, 1; a², b²)`. Strict interior only.
pub fn eval_appell<T: Scalar>(p: Amplitudes<T>, cfg: &ToleranceConfig<T>) -> Result<Evaluation<T>> {
    let p = p.abs();
    if !p.is_interior() {
        return Err(method_domain(
            Method::Appell,
            p,
            "double series diverges unless |a| + |b| < 1; use elliptic7 or quad",
        ));
    }
    let q = T::lit(0.25);
    let s = appell_f4(-q, q, p.a() * p.a(), p.b() * p.b(), cfg)?.require_converged()?;
    let pi2 = T::PI() * T::PI();
    let value = pi2 * s.value;
    Ok(Evaluation {
        value,
        method: Method::Appell,
        error_estimate: pi2 * s.tail_estimate + value.abs() * T::epsilon() * T::lit(8.0),
    })
}

/// Diagonal series `π²·₃F₂(−¼, ¼, ½; 1, 1; 4a²)`, for `|a| ≤ ½`.
///
/// At `|a| = ½` the argument is 1 and terms decay only like `n^{−5/2}`; expect
/// `converged = false` at the default term cap.
pub fn diagonal_series<T: Scalar>(a: T, cfg: &ToleranceConfig<T>) -> Result<SeriesResult<T>> {
    let a = a.abs();
    if !(a <= T::lit(0.5)) {
        return Err(Error::Domain(format!(
            "diagonal route needs |a| ≤ 1/2, got {a}"
        )));
    }
    let q = T::lit(0.25);
    let z = (T::lit(4.0) * a * a).min(T::one());
    let mut s = series_3f2([-q, q, T::lit(0.5)], [T::one(), T::one()], z, cfg)?;
    let pi2 = T::PI() * T::PI();
    s.value = s.value * pi2;
    s.tail_estimate = s.tail_estimate * pi2;
    Ok(s)
}

/// Diagonal closed form `4·[2(1+√u)E² + K²/(1+√u) − 2EK]`, with
/// `u = (1 − √(1−4a²))/2` and `K, E` at modulus `√(2√u/(1+√u))`.
pub fn diagonal_elliptic<T: Scalar>(a: T, cfg: &ToleranceConfig<T>) -> Result<T> {
    let a = a.abs();
    if !(a <= T::lit(0.5)) {
        return Err(Error::Domain(format!(
            "diagonal route needs |a| ≤ 1/2, got {a}"
        )));
    }
    let a2 = a * a;
    let disc = (T::one() - T::lit(4.0) * a2).max(T::zero());
    let u = T::lit(2.0) * a2 / (T::one() + disc.sqrt());
    let ru = u.sqrt();
    let ke = complete_ke(modulus_from_z(ru)?, cfg)?;
    let s = T::one() + ru;
    let (k, e) = (ke.first_kind, ke.second_kind);
    Ok(T::lit(4.0) * (T::lit(2.0) * s * e * e + k * k / s - T::lit(2.0) * e * k))
}

/// `E(a, a)`: returns the elliptic diagonal form; `error_estimate` is its gap
/// to the `₃F₂` route plus that series' tail.
pub fn eval_diagonal<T: Scalar>(a: T, cfg: &ToleranceConfig<T>) -> Result<Evaluation<T>> {
    let closed = diagonal_elliptic(a, cfg)?;
    let series = diagonal_series(a, cfg)?;
    Ok(Evaluation {
        value: closed,
        method: Method::Diagonal,
        error_estimate: (closed - series.value).abs() + series.tail_estimate,
    })
}

/// `E(a, 0) = 2π·√(1+|a|)·E(√(2|a|/(1+|a|)))`, defined up to and including `|a| = 1`.
pub fn eval_axis<T: Scalar>(a: T, cfg: &ToleranceConfig<T>) -> Result<Evaluation<T>> {
    let p = Amplitudes::new(a, T::zero())?.abs();
    let a = p.a().min(T::one());
    let k = modulus_from_z(a)?;
    let e = complete_e(k, cfg)?;
    let value = T::lit(2.0) * T::PI() * (T::one() + a).sqrt() * e;
    let rel = if k.is_singular() {
        T::epsilon()
    } else {
        complete_ke(k, cfg)?.rel_residual + T::epsilon() * T::lit(8.0)
    };
    Ok(Evaluation {
        value,
        method: Method::Axis,
        error_estimate: value.abs() * rel,
    })
}

/// Dispatches to the requested route after sign reduction.
///
/// `Auto` uses the axis form when either amplitude is zero (covering the
/// corners) and the elliptic combination everywhere else.
pub fn evaluate<T: Scalar>(
    p: Amplitudes<T>,
    method: Method,
    cfg: &ToleranceConfig<T>,
) -> Result<Evaluation<T>> {
    cfg.validate()?;
    let p = p.abs();
    match method {
        Method::Auto => {
            if p.b() == T::zero() {
                eval_axis(p.a(), cfg)
            } else if p.a() == T::zero() {
                eval_axis(p.b(), cfg)
            } else {
                eval_elliptic(p, cfg)
            }
        }
        Method::Elliptic => eval_elliptic(p, cfg),
        Method::Product => eval_product(p, cfg),
        Method::Appell => eval_appell(p, cfg),
        Method::Diagonal => {
            if p.a() != p.b() {
                return Err(method_domain(
                    Method::Diagonal,
                    p,
                    "needs |a| = |b|; use elliptic7",
                ));
            }
            eval_diagonal(p.a(), cfg)
        }
        Method::Axis => {
            if p.b() == T::zero() {
                eval_axis(p.a(), cfg)
            } else if p.a() == T::zero() {
                eval_axis(p.b(), cfg)
            } else {
                Err(method_domain(
                    Method::Axis,
                    p,
                    "needs a = 0 or b = 0; use elliptic7",
                ))
            }
        }
        Method::Quadrature => {
            let q = quad2d(p, cfg)?;
            Ok(Evaluation {
                value: q.value,
                method: Method::Quadrature,
                error_estimate: q.error_estimate,
            })
        }
    }
}
