//! Complete elliptic integrals `K(k)` and `E(k)` by the arithmetic-geometric mean.
//!
//! All routines take the *modulus* `k`, not the parameter `m = k²`:
//!
//! ```text
//! K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)
//! E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ
//! ```
//!
//! `K` comes from `π / (2·AGM(1, k'))` with `k' = √(1 − k²)`; `E` reuses the same
//! iteration through the Landen companion sum
//! `E = K·(1 − Σ_{n≥0} 2^{n−1} c_n²)`, `c_0 = k`, `c_{n+1} = (a_n − b_n)/2`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Elliptic modulus `k ∈ [0, 1]` together with its complement `k' = √(1 − k²)`.
///
/// Carrying `k'` explicitly lets callers that know it in closed form (see
/// [`crate::reduction::modulus_from_z`]) avoid the cancellation in `1 − k²`
/// when `k` is close to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus<T> {
    k: T,
    kc: T,
}

impl<T: Scalar> EllipticModulus<T> {
    pub fn new(k: T) -> Result<Self> {
        if !(k >= T::zero() && k <= T::one()) {
            return Err(Error::Domain(format!(
                "elliptic modulus k = {k} outside [0, 1]"
            )));
        }
        let kc = ((T::one() - k) * (T::one() + k)).sqrt();
        Ok(Self { k, kc })
    }

    /// Builds a modulus from a precomputed `(k, k')` pair. Both must lie in
    /// `[0, 1]` and satisfy `k² + k'² = 1` up to rounding.
    pub(crate) fn from_parts(k: T, kc: T) -> Self {
        debug_assert!(k >= T::zero() && k <= T::one());
        debug_assert!(kc >= T::zero() && kc <= T::one());
        Self { k, kc }
    }

    #[inline]
    pub fn k(&self) -> T {
        self.k
    }

    /// Complementary modulus `k'`.
    #[inline]
    pub fn complement(&self) -> T {
        self.kc
    }

    /// The complementary modulus as an [`EllipticModulus`] (`k ↔ k'`).
    pub fn complementary(&self) -> Self {
        Self {
            k: self.kc,
            kc: self.k,
        }
    }

    /// `k = 1`: `K` diverges there while `E(1) = 1`.
    #[inline]
    pub fn is_singular(&self) -> bool {
        self.k == T::one() || self.kc == T::zero()
    }
}

/// The pair `(K(k), E(k))` from a single AGM run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticValues<T> {
    pub first_kind: T,
    pub second_kind: T,
    /// Relative AGM gap `|a_n − b_n| / a_n` at the stopping step.
    pub rel_residual: T,
}

#[derive(Debug, Clone, Copy)]
struct AgmRun<T> {
    mean: T,
    rel_gap: T,
    /// `Σ 2^{n−1} c_n²`
    landen_sum: T,
}

fn agm_run<T: Scalar>(a0: T, b0: T, c0: T, cfg: &ToleranceConfig<T>) -> Result<AgmRun<T>> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let (mut a, mut b, mut c) = (a0, b0, c0);
    let mut weight = T::lit(0.5);
    let mut landen_sum = weight * c * c;
    for iter in 0..=cfg.max_iters {
        let gap = (a - b).abs();
        if gap <= cfg.rel_tol * a {
            return Ok(AgmRun {
                mean: (a + b) / two,
                rel_gap: gap / a,
                landen_sum,
            });
        }
        if iter == cfg.max_iters {
            return Err(Error::IterationLimit {
                iters: cfg.max_iters,
                gap: gap.as_f64(),
            });
        }
        let a_next = (a + b) / two;
        b = (a * b).sqrt();
        // c_{n+1} = (a_n - b_n)/2 = c_n² / (4 a_{n+1}), since c_n² = a_n² - b_n².
        c = c * c / (four * a_next);
        a = a_next;
        weight = weight * two;
        landen_sum = landen_sum + weight * c * c;
    }
    unreachable!("loop returns on its final iteration")
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm<T: Scalar>(a0: T, b0: T, cfg: &ToleranceConfig<T>) -> Result<T> {
    if !(a0 > T::zero() && b0 > T::zero()) || !a0.is_finite() || !b0.is_finite() {
        return Err(Error::Domain(format!(
            "agm requires finite positive arguments, got ({a0}, {b0})"
        )));
    }
    agm_run(a0, b0, T::zero(), cfg).map(|run| run.mean)
}

/// `K(k)` and `E(k)` from one AGM pass. Fails with [`Error::Divergent`] at `k = 1`.
pub fn complete_ke<T: Scalar>(
    k: EllipticModulus<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<EllipticValues<T>> {
    if k.is_singular() {
        return Err(Error::Divergent);
    }
    let run = agm_run(T::one(), k.complement(), k.k(), cfg)?;
    let first_kind = T::FRAC_PI_2() / run.mean;
    let second_kind = first_kind * (T::one() - run.landen_sum);
    Ok(EllipticValues {
        first_kind,
        second_kind,
        rel_residual: run.rel_gap,
    })
}

/// Complete elliptic integral of the first kind, `0 ≤ k < 1`.
pub fn complete_k<T: Scalar>(k: EllipticModulus<T>, cfg: &ToleranceConfig<T>) -> Result<T> {
    complete_ke(k, cfg).map(|v| v.first_kind)
}

/// Complete elliptic integral of the second kind, `0 ≤ k ≤ 1`. Exactly `1` at `k = 1`.
pub fn complete_e<T: Scalar>(k: EllipticModulus<T>, cfg: &ToleranceConfig<T>) -> Result<T> {
    if k.is_singular() {
        return Ok(T::one());
    }
    complete_ke(k, cfg).map(|v| v.second_kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn m(k: f64) -> EllipticModulus<f64> {
        EllipticModulus::new(k).unwrap()
    }

    #[test]
    fn agm_fixed_points() {
        assert_eq!(agm(1.0, 1.0, &cfg()).unwrap(), 1.0);
        for c in [1e-3, 0.7, 3.0, 1e6] {
            assert_eq!(agm(c, c, &cfg()).unwrap(), c);
        }
    }

    #[test]
    fn agm_rejects_non_positive() {
        assert!(matches!(agm(0.0, 1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(agm(1.0, -2.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(agm(f64::NAN, 1.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn agm_iteration_limit_reports_gap() {
        let mut c = cfg();
        c.max_iters = 1;
        match agm(1.0, 1e-8, &c) {
            Err(Error::IterationLimit { iters, gap }) => {
                assert_eq!(iters, 1);
                assert!(gap > 0.0);
            }
            other => panic!("expected iteration limit, got {other:?}"),
        }
    }

    #[test]
    fn special_values() {
        assert_eq!(complete_k(m(0.0), &cfg()).unwrap(), FRAC_PI_2);
        assert_eq!(complete_e(m(0.0), &cfg()).unwrap(), FRAC_PI_2);
        assert_eq!(complete_e(m(1.0), &cfg()).unwrap(), 1.0);
        assert_eq!(complete_k(m(1.0), &cfg()), Err(Error::Divergent));
    }

    #[test]
    fn modulus_domain() {
        assert!(EllipticModulus::new(-0.1).is_err());
        assert!(EllipticModulus::new(1.0 + 1e-12).is_err());
        assert!(EllipticModulus::new(f64::NAN).is_err());
        assert!(m(1.0).is_singular());
        assert!(!m(0.999_999_999_999).is_singular());
    }

    #[test]
    fn near_one_stays_finite() {
        let k = 1.0 - 1e-13;
        let kk = complete_k(m(k), &cfg()).unwrap();
        // K ~ ln(4/k') for k' -> 0
        let kc = ((1.0 - k) * (1.0 + k)).sqrt();
        assert!((kk - (4.0 / kc).ln()).abs() < 1e-6);
    }

    #[test]
    fn ordering_and_bounds() {
        for i in 1..100 {
            let k = i as f64 / 100.0;
            let v = complete_ke(m(k), &cfg()).unwrap();
            assert!(v.second_kind < v.first_kind);
            assert!(v.first_kind >= FRAC_PI_2);
            assert!(v.second_kind >= 1.0 && v.second_kind <= FRAC_PI_2);
        }
    }

    #[test]
    fn f32_instantiation() {
        let c = ToleranceConfig::<f32>::default();
        let k = EllipticModulus::new(0.5f32).unwrap();
        let v = complete_ke(k, &c).unwrap();
        assert!((v.first_kind - 1.685_750_4).abs() < 1e-5);
        assert!((v.second_kind - 1.467_462_2).abs() < 1e-5);
        assert!(
            (complete_k(EllipticModulus::new(0.0f32).unwrap(), &c).unwrap()
                - std::f32::consts::FRAC_PI_2)
                .abs()
                < 1e-6
        );
    }
}
