//! Truncated hypergeometric series: Gauss `₂F₁`, `₃F₂`, and Appell `F₄` with
//! unit lower parameters.
//!
//! Every coefficient is built by running products of term ratios. Gamma
//! function ratios are never used.
//!
//! Stop rule: a series stops once three consecutive terms (or anti-diagonal
//! blocks, for `F₄`) each satisfy `|t| ≤ max(rel_tol·|partial|, abs_tol)`.
//! When `max_terms` is reached first the partial sum is still returned, with
//! `converged = false`.

use crate::elliptic::{complete_e, complete_ke};
use crate::error::{Error, Result};
use crate::reduction::modulus_from_z;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

const SMALL_RUN: usize = 3;

/// A truncated series value with convergence metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult<T> {
    pub value: T,
    /// Terms (or blocks) added, including the leading term.
    pub terms_used: usize,
    pub converged: bool,
    /// Magnitude of the last accepted term.
    pub tail_estimate: T,
}

impl<T: Scalar> SeriesResult<T> {
    /// Turns a truncated result into [`Error::Truncation`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Truncation {
                terms: self.terms_used,
                tail: self.tail_estimate.as_f64(),
            })
        }
    }
}

/// Tracks the "three consecutive small terms" rule.
struct StopRule<'a, T> {
    cfg: &'a ToleranceConfig<T>,
    small_run: usize,
}

impl<'a, T: Scalar> StopRule<'a, T> {
    fn new(cfg: &'a ToleranceConfig<T>) -> Self {
        Self { cfg, small_run: 0 }
    }

    /// Records one accepted term; returns true once the series may stop.
    fn accept(&mut self, term: T, partial: T) -> bool {
        if term.abs() <= self.cfg.threshold(partial) {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= SMALL_RUN
    }
}

fn is_non_positive_integer<T: Scalar>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

fn check_lower<T: Scalar>(params: &[T]) -> Result<()> {
    for &b in params {
        if !b.is_finite() || is_non_positive_integer(b) {
            return Err(Error::Domain(format!(
                "lower parameter {b} is zero or a negative integer"
            )));
        }
    }
    Ok(())
}

/// Generalized `pFq` by its term-ratio recurrence.
fn pfq<T: Scalar>(upper: &[T], lower: &[T], z: T, cfg: &ToleranceConfig<T>) -> SeriesResult<T> {
    let mut term = T::one();
    let mut sum = T::one();
    let mut used = 1usize;
    let mut rule = StopRule::new(cfg);
    let mut done = rule.accept(term, sum);
    let mut n = T::zero();
    while !done {
        if used >= cfg.max_terms {
            return SeriesResult {
                value: sum,
                terms_used: used,
                converged: false,
                tail_estimate: term.abs(),
            };
        }
        let num = upper.iter().fold(z, |acc, &a| acc * (a + n));
        let den = lower.iter().fold(n + T::one(), |acc, &b| acc * (b + n));
        term = term * num / den;
        sum = sum + term;
        used += 1;
        n = n + T::one();
        done = rule.accept(term, sum);
    }
    SeriesResult {
        value: sum,
        terms_used: used,
        converged: true,
        tail_estimate: term.abs(),
    }
}

/// Gauss hypergeometric series `₂F₁(α, β; γ; z)`.
///
/// Defined for `|z| < 1`, and for `z = 1` when `γ − α − β > 0`.
pub fn gauss_2f1<T: Scalar>(
    alpha: T,
    beta: T,
    gamma: T,
    z: T,
    cfg: &ToleranceConfig<T>,
) -> Result<SeriesResult<T>> {
    check_lower(&[gamma])?;
    let excess = gamma - alpha - beta;
    if !(z.abs() < T::one() || (z == T::one() && excess > T::zero())) {
        return Err(Error::Domain(format!(
            "2F1({alpha}, {beta}; {gamma}; z) needs |z| < 1, or z = 1 with γ − α − β > 0; got z = {z}"
        )));
    }
    Ok(pfq(&[alpha, beta], &[gamma], z, cfg))
}

/// Generalized series `₃F₂(a1, a2, a3; b1, b2; z)`.
///
/// Defined for `|z| < 1`, and for `z = 1` when `b1 + b2 − a1 − a2 − a3 > 0`.
pub fn series_3f2<T: Scalar>(
    upper: [T; 3],
    lower: [T; 2],
    z: T,
    cfg: &ToleranceConfig<T>,
) -> Result<SeriesResult<T>> {
    check_lower(&lower)?;
    let excess = lower[0] + lower[1] - upper[0] - upper[1] - upper[2];
    if !(z.abs() < T::one() || (z == T::one() && excess > T::zero())) {
        return Err(Error::Domain(format!(
            "3F2 needs |z| < 1, or z = 1 with b1 + b2 − a1 − a2 − a3 > 0; got z = {z}"
        )));
    }
    Ok(pfq(&upper, &lower, z, cfg))
}

/// Appell double series `F₄(α, β; 1, 1; x, y)`:
///
/// ```text
/// Σ_{m,n≥0} (α)_{m+n} (β)_{m+n} / ((m!)² (n!)²) xᵐ yⁿ
/// ```
///
/// summed by anti-diagonals `s = m + n`. Requires `x, y ≥ 0` and `√x + √y < 1`.
///
/// Each term on diagonal `s` is stepped from a neighbour on diagonal `s − 1`,
/// either `(m − 1, n)` or `(m, n − 1)`. The larger of the two candidates is
/// kept so terms near the peak of a diagonal never inherit an underflowed
/// zero from the far ends.
pub fn appell_f4<T: Scalar>(
    alpha: T,
    beta: T,
    x: T,
    y: T,
    cfg: &ToleranceConfig<T>,
) -> Result<SeriesResult<T>> {
    if !(x >= T::zero() && y >= T::zero()) || !(x.sqrt() + y.sqrt() < T::one()) {
        return Err(Error::Domain(format!(
            "F4 needs x, y ≥ 0 and √x + √y < 1; got x = {x}, y = {y}"
        )));
    }

    let mut prev: Vec<T> = vec![T::one()];
    let mut next: Vec<T> = Vec::new();
    let mut sum = T::one();
    let mut last_block = T::one();
    let mut used = 1usize;
    let mut rule = StopRule::new(cfg);
    let mut done = rule.accept(last_block, sum);
    let mut s = 0usize;

    while !done {
        if used >= cfg.max_terms {
            return Ok(SeriesResult {
                value: sum,
                terms_used: used,
                converged: false,
                tail_estimate: last_block.abs(),
            });
        }
        s += 1;
        let sm1 = T::from_usize_lossy(s - 1);
        let poch = (alpha + sm1) * (beta + sm1);
        next.clear();
        for m in 0..=s {
            let n = s - m;
            // (m-1, n) sits at index m-1 of the previous diagonal, (m, n-1) at index m.
            let from_left = (m >= 1).then(|| {
                let mf = T::from_usize_lossy(m);
                prev[m - 1] * poch * x / (mf * mf)
            });
            let from_below = (n >= 1).then(|| {
                let nf = T::from_usize_lossy(n);
                prev[m] * poch * y / (nf * nf)
            });
            let t = match (from_left, from_below) {
                (Some(l), Some(d)) => {
                    if l.abs() >= d.abs() {
                        l
                    } else {
                        d
                    }
                }
                (Some(l), None) => l,
                (None, Some(d)) => d,
                (None, None) => unreachable!("s >= 1 has at least one predecessor"),
            };
            next.push(t);
        }
        // Pair mirror terms so that swapping x and y reproduces the sum bit for bit.
        let mut block = if s.is_multiple_of(2) {
            next[s / 2]
        } else {
            T::zero()
        };
        for m in 0..s.div_ceil(2) {
            block = block + (next[m] + next[s - m]);
        }
        std::mem::swap(&mut prev, &mut next);
        sum = sum + block;
        last_block = block;
        used += 1;
        done = rule.accept(block, sum);
    }

    Ok(SeriesResult {
        value: sum,
        terms_used: used,
        converged: true,
        tail_estimate: last_block.abs(),
    })
}

/// Two independently computed sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySides<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Scalar> IdentitySides<T> {
    pub fn rel_gap(&self) -> T {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == T::zero() {
            T::zero()
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

/// `₂F₁(−¼, ¼; 1; z²)` against `(2/π)·√(1+z)·E(k(z))`, `k(z) = √(2z/(1+z))`,
/// for `0 ≤ z < 1`.
pub fn elliptic_e_identity<T: Scalar>(z: T, cfg: &ToleranceConfig<T>) -> Result<IdentitySides<T>> {
    if !(z >= T::zero() && z < T::one()) {
        return Err(Error::Domain(format!("identity needs 0 ≤ z < 1, got {z}")));
    }
    let quarter = T::lit(0.25);
    let lhs = gauss_2f1(-quarter, quarter, T::one(), z * z, cfg)?
        .require_converged()?
        .value;
    let k = modulus_from_z(z)?;
    let rhs = T::FRAC_2_PI() * (T::one() + z).sqrt() * complete_e(k, cfg)?;
    Ok(IdentitySides { lhs, rhs })
}

/// `₂F₁(¾, 5⁄4; 2; z²)` against `8/(π z² √(1+z))·[K(k) − (1+z)·E(k)]`,
/// `k(z) = √(2z/(1+z))`, for `0 < z < 1`.
pub fn elliptic_ke_identity<T: Scalar>(z: T, cfg: &ToleranceConfig<T>) -> Result<IdentitySides<T>> {
    if !(z > T::zero() && z < T::one()) {
        return Err(Error::Domain(format!("identity needs 0 < z < 1, got {z}")));
    }
    let lhs = gauss_2f1(T::lit(0.75), T::lit(1.25), T::lit(2.0), z * z, cfg)?
        .require_converged()?
        .value;
    let k = modulus_from_z(z)?;
    let ke = complete_ke(k, cfg)?;
    let one_z = T::one() + z;
    let rhs =
        T::lit(8.0) / (T::PI() * z * z * one_z.sqrt()) * (ke.first_kind - one_z * ke.second_kind);
    Ok(IdentitySides { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    #[test]
    fn zero_argument_is_one() {
        let r = gauss_2f1(-0.25, 0.25, 1.0, 0.0, &cfg()).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
        let r = series_3f2([-0.25, 0.25, 0.5], [1.0, 1.0], 0.0, &cfg()).unwrap();
        assert_eq!(r.value, 1.0);
        let r = appell_f4(-0.25, 0.25, 0.0, 0.0, &cfg()).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn domain_errors() {
        let c = cfg();
        assert!(gauss_2f1(0.5, 0.5, 0.0, 0.1, &c).is_err());
        assert!(gauss_2f1(0.5, 0.5, -2.0, 0.1, &c).is_err());
        assert!(gauss_2f1(0.5, 0.5, 1.0, 1.01, &c).is_err());
        // z = 1 with γ − α − β = 0 diverges
        assert!(gauss_2f1(0.5, 0.5, 1.0, 1.0, &c).is_err());
        assert!(gauss_2f1(-0.25, 0.25, 1.0, 1.0, &c).is_ok());
        assert!(series_3f2([1.0, 1.0, 1.0], [1.0, 1.0], 1.0, &c).is_err());
        assert!(appell_f4(-0.25, 0.25, 0.25, 0.25, &c).is_err());
        assert!(appell_f4(-0.25, 0.25, -0.01, 0.1, &c).is_err());
    }

    #[test]
    fn terminating_series_is_polynomial() {
        // 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (0.7, 1.3, 0.4);
        let r = gauss_2f1(-2.0, b, c, z, &cfg()).unwrap();
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!((r.value - exact).abs() < 1e-15);
    }

    #[test]
    fn quarter_parameters_do_not_terminate() {
        let r = gauss_2f1(-0.25, 0.25, 1.0, 0.5, &cfg()).unwrap();
        assert!(r.terms_used > 10);
        assert!(r.tail_estimate > 0.0);
    }

    #[test]
    fn truncation_is_reported_not_hidden() {
        let c = cfg().with_max_terms(5);
        let r = gauss_2f1(-0.25, 0.25, 1.0, 0.9, &c).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_used, 5);
        assert!(r.tail_estimate > 0.0);
        assert!(matches!(
            r.require_converged(),
            Err(Error::Truncation { terms: 5, .. })
        ));
        let r = appell_f4(-0.25, 0.25, 0.2, 0.2, &c).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_used, 5);
    }

    #[test]
    fn converged_tail_meets_threshold() {
        let c = cfg();
        for z in [0.1, 0.5, 0.9, 0.99] {
            let r = gauss_2f1(0.75, 1.25, 2.0, z, &c).unwrap();
            assert!(r.converged);
            assert!(r.tail_estimate <= c.threshold(r.value));
            assert!(r.terms_used <= c.max_terms);
        }
    }

    #[test]
    fn f4_with_zero_y_matches_2f1_exactly() {
        let c = cfg();
        for x in [0.0, 0.16, 0.5, 0.9] {
            let f4 = appell_f4(-0.25, 0.25, x, 0.0, &c).unwrap();
            let g = gauss_2f1(-0.25, 0.25, 1.0, x, &c).unwrap();
            assert_eq!(f4.value, g.value);
            assert_eq!(f4.terms_used, g.terms_used);
        }
    }

    #[test]
    fn f4_deep_diagonals_do_not_underflow() {
        // √x + √y = 0.99: the peak of each diagonal sits far from both axes,
        // where the axis terms underflow long before the series converges.
        let c = cfg();
        let a = 0.495f64;
        let r = appell_f4(-0.25, 0.25, a * a, a * a, &c).unwrap();
        assert!(r.converged);
        let reference = crate::closed_form::diagonal_elliptic(a, &c).unwrap()
            / (std::f64::consts::PI * std::f64::consts::PI);
        assert!(
            (r.value - reference).abs() < 1e-13,
            "{} vs {reference}",
            r.value
        );
    }

    #[test]
    fn identities_at_zero() {
        let s = elliptic_e_identity(0.0, &cfg()).unwrap();
        assert_eq!(s.lhs, 1.0);
        assert!((s.rhs - 1.0).abs() < 1e-15);
        assert!(elliptic_e_identity(1.0, &cfg()).is_err());
        assert!(elliptic_ke_identity(0.0, &cfg()).is_err());
        assert!(elliptic_ke_identity(1.0, &cfg()).is_err());
    }
}
