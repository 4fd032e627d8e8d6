//! Stop criteria and iteration caps shared by every evaluator.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Environment variable that overrides the default relative tolerance.
pub const DEFAULT_TOL_ENV: &str = "ELLINT2_DEFAULT_TOL";

/// Tolerances and caps threaded through AGM, series and quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Relative stop criterion.
    pub rel_tol: T,
    /// Absolute floor for the stop criterion.
    pub abs_tol: T,
    /// Cap on AGM iterations.
    pub max_iters: usize,
    /// Cap on series terms (anti-diagonal blocks for the double series).
    pub max_terms: usize,
    /// Gauss-Legendre nodes per axis on the first quadrature level.
    pub quad_base_nodes: usize,
    /// Maximum number of quadrature levels (node count doubles per level).
    pub quad_max_levels: usize,
    /// Quadrature target. `None` selects `1e-11` in the interior and `1e-8`
    /// within `0.05` of `|a| + |b| = 1`. The effective target is never tighter
    /// than `rel_tol`.
    pub quad_rel_tol: Option<T>,
}

impl<T: Scalar> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-15).max(T::epsilon() * T::lit(4.0)),
            abs_tol: T::zero(),
            max_iters: 64,
            max_terms: 20_000,
            quad_base_nodes: 32,
            quad_max_levels: 6,
            quad_rel_tol: None,
        }
    }
}

impl<T: Scalar> ToleranceConfig<T> {
    /// Default configuration with `rel_tol` taken from `ELLINT2_DEFAULT_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(raw) = std::env::var(DEFAULT_TOL_ENV) {
            let tol: f64 = raw.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("{DEFAULT_TOL_ENV}={raw:?} is not a number"))
            })?;
            cfg.rel_tol = T::lit(tol);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_quad_rel_tol(mut self, tol: T) -> Self {
        self.quad_rel_tol = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.rel_tol > T::zero()) {
            return bad("rel_tol must be > 0");
        }
        if !(self.abs_tol >= T::zero()) {
            return bad("abs_tol must be >= 0");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1");
        }
        if self.max_terms == 0 {
            return bad("max_terms must be >= 1");
        }
        if self.quad_base_nodes == 0 {
            return bad("quad_base_nodes must be >= 1");
        }
        if self.quad_max_levels == 0 {
            return bad("quad_max_levels must be >= 1");
        }
        if let Some(q) = self.quad_rel_tol {
            if !(q > T::zero()) {
                return bad("quad_rel_tol must be > 0");
            }
        }
        Ok(())
    }

    /// `max(rel_tol * |reference|, abs_tol)`.
    #[inline]
    pub(crate) fn threshold(&self, reference: T) -> T {
        (self.rel_tol * reference.abs()).max(self.abs_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_values() {
        let cfg = ToleranceConfig::<f64>::default();
        assert_eq!(cfg.rel_tol, 1e-15);
        assert_eq!(cfg.max_iters, 64);
        assert_eq!(cfg.max_terms, 20_000);
        assert_eq!(cfg.quad_base_nodes, 32);
        assert_eq!(cfg.quad_max_levels, 6);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let cfg = ToleranceConfig::<f64>::default();
        assert!(cfg.with_rel_tol(0.0).validate().is_err());
        assert!(cfg.with_max_terms(0).validate().is_err());
        let mut c = cfg;
        c.abs_tol = -1.0;
        assert!(c.validate().is_err());
        c = cfg;
        c.max_iters = 0;
        assert!(c.validate().is_err());
    }
}
