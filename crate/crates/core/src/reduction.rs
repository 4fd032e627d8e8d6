//! The amplitude pair `(a, b)`, its reduction to `(u, v)`, and the modulus map
//! `k(z) = √(2z/(1+z))`.

use crate::elliptic::EllipticModulus;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cosine amplitudes of `√(1 + a cos x + b cos y)`, with `|a| + |b| ≤ 1`.
///
/// Negative amplitudes are admitted: `x → π − x` flips the sign of `a`
/// (likewise for `b`), so the integral only depends on `(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes<T> {
    a: T,
    b: T,
}

impl<T: Scalar> Amplitudes<T> {
    /// Fails unless both values are finite and `|a| + |b| ≤ 1` (with a
    /// `1e-14` slack for points computed to lie on the boundary).
    pub fn new(a: T, b: T) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "amplitudes must be finite, got (a, b) = ({a}, {b})"
            )));
        }
        let sum = a.abs() + b.abs();
        if sum > T::one() + T::boundary_slack() {
            return Err(Error::Domain(format!(
                "|a| + |b| ≤ 1 violated: |{a}| + |{b}| = {sum}"
            )));
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn b(&self) -> T {
        self.b
    }

    /// `(|a|, |b|)`.
    pub fn abs(&self) -> Self {
        Self {
            a: self.a.abs(),
            b: self.b.abs(),
        }
    }

    pub fn swap(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    /// `1 − |a| − |b|`, clamped at zero for points within the boundary slack.
    pub fn margin(&self) -> T {
        (T::one() - (self.a.abs() + self.b.abs())).max(T::zero())
    }

    /// Strictly inside the region (`|a| + |b| < 1`).
    pub fn is_interior(&self) -> bool {
        self.a.abs() + self.b.abs() < T::one()
    }

    /// `(±1, 0)` or `(0, ±1)`.
    pub fn is_corner(&self) -> bool {
        let (a, b) = (self.a.abs(), self.b.abs());
        (a >= T::one() && b == T::zero()) || (b >= T::one() && a == T::zero())
    }
}

/// The `(u, v)` pair with `u(1 − v) = a²` and `v(1 − u) = b²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPair<T> {
    pub u: T,
    pub v: T,
}

/// Maps `(a, b)` to the minus-branch roots
///
/// ```text
/// u = ½[1 + a² − b² − √D],   v = ½[1 − a² + b² − √D],
/// D = (1 − |a| − |b|)(1 + |a| + |b|)(1 − |a| + |b|)(1 + |a| − |b|).
/// ```
///
/// Evaluated as `u = 2a² / (1 + a² − b² + √D)` (and likewise for `v`), which
/// is the same root without the cancellation when `a` is small.
pub fn map_uv<T: Scalar>(p: Amplitudes<T>) -> ReducedPair<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let (a, b) = (p.a().abs(), p.b().abs());
    // (1 − a + b)(1 + a − b) = 1 − (a − b)²; both forms of D are symmetric under a ↔ b.
    let diff = a - b;
    let d = p.margin() * (one + (a + b)) * (one - diff * diff).max(T::zero());
    let root = d.sqrt();
    let (a2, b2) = (a * a, b * b);
    let skew = a2 - b2;
    let den_u = one + skew + root;
    let den_v = one - skew + root;
    let u = if a2 == T::zero() {
        T::zero()
    } else {
        two * a2 / den_u
    };
    let v = if b2 == T::zero() {
        T::zero()
    } else {
        two * b2 / den_v
    };
    ReducedPair {
        u: u.min(one),
        v: v.min(one),
    }
}

/// `k(z) = √(2z/(1+z))` with complement `k' = √((1−z)/(1+z))`, for `0 ≤ z ≤ 1`.
pub fn modulus_from_z<T: Scalar>(z: T) -> Result<EllipticModulus<T>> {
    if !(z >= T::zero() && z <= T::one()) {
        return Err(Error::Domain(format!(
            "modulus map needs 0 ≤ z ≤ 1, got {z}"
        )));
    }
    let one_p = T::one() + z;
    let k = (T::lit(2.0) * z / one_p).sqrt().min(T::one());
    let kc = ((T::one() - z) / one_p).sqrt();
    Ok(EllipticModulus::from_parts(k, kc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(a: f64, b: f64) -> ReducedPair<f64> {
        map_uv(Amplitudes::new(a, b).unwrap())
    }

    #[test]
    fn trivial_points() {
        assert_eq!(uv(0.0, 0.0), ReducedPair { u: 0.0, v: 0.0 });
        let r = uv(0.5, 0.0);
        assert!((r.u - 0.25).abs() < 1e-16);
        assert_eq!(r.v, 0.0);
        let r = uv(0.5, 0.5);
        assert!((r.u - 0.5).abs() < 1e-15 && (r.v - 0.5).abs() < 1e-15);
        let r = uv(1.0, 0.0);
        assert_eq!((r.u, r.v), (1.0, 0.0));
    }

    #[test]
    fn rejects_outside_region() {
        assert!(Amplitudes::new(0.7, 0.7).is_err());
        assert!(Amplitudes::new(-0.6, 0.5).is_err());
        assert!(Amplitudes::new(f64::NAN, 0.0).is_err());
        assert!(Amplitudes::new(0.5, 0.5 + 1e-15).is_ok());
        assert!(Amplitudes::new(0.5, 0.5 + 1e-13).is_err());
    }

    #[test]
    fn corner_detection() {
        assert!(Amplitudes::new(1.0, 0.0).unwrap().is_corner());
        assert!(Amplitudes::new(0.0, -1.0).unwrap().is_corner());
        assert!(!Amplitudes::new(0.5, 0.5).unwrap().is_corner());
        assert!(!Amplitudes::new(0.5, 0.5).unwrap().is_interior());
    }

    #[test]
    fn boundary_gives_u_equal_a() {
        for a in [0.05, 0.2, 0.37, 0.8, 0.95] {
            let b = 1.0 - a;
            let r = uv(a, b);
            assert!((r.u - a).abs() < 1e-7, "a = {a}: u = {}", r.u);
            assert!((r.v - b).abs() < 1e-7);
        }
    }

    #[test]
    fn modulus_map_values() {
        assert_eq!(modulus_from_z(0.0).unwrap().k(), 0.0);
        let one = modulus_from_z(1.0).unwrap();
        assert_eq!(one.k(), 1.0);
        assert!(one.is_singular());
        let k = modulus_from_z(1.0 / 3.0).unwrap();
        assert!((k.k() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((k.complement() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(modulus_from_z(-0.1).is_err());
        assert!(modulus_from_z(1.1).is_err());
    }

    #[test]
    fn modulus_map_is_increasing() {
        let mut last = -1.0;
        for i in 0..=1000 {
            let k = modulus_from_z(i as f64 / 1000.0).unwrap().k();
            assert!(k > last);
            last = k;
        }
    }
}
