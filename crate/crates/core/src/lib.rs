//! Evaluation of the two-parameter elliptic-type integral
//!
//! ```text
//! E(a, b) = ∫₀^π ∫₀^π √(1 + a cos x + b cos y) dx dy,   |a| + |b| ≤ 1
//! ```
//!
//! by four independent routes: a closed form in complete elliptic integrals,
//! a product of Gauss `₂F₁` series, an Appell `F₄` double series, and direct
//! tensor-product quadrature. The routes are meant to be cross-checked
//! against each other; see [`closed_form`] for the method table.
//!
//! Every routine is generic over [`Scalar`] (`f32` or `f64`). The `*64`
//! aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use ellint2::{evaluate, Amplitudes, Method, ToleranceConfig64};
//!
//! let cfg = ToleranceConfig64::default();
//! let p = Amplitudes::new(0.3, 0.4)?;
//! let fast = evaluate(p, Method::Elliptic, &cfg)?;
//! let slow = evaluate(p, Method::Quadrature, &cfg)?;
//! assert!((fast.value - slow.value).abs() < 1e-9 * fast.value);
//! # Ok::<(), ellint2::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod elliptic;
pub mod error;
pub mod gauss_legendre;
pub mod hypergeometric;
pub mod quadrature;
pub mod reduction;
pub mod scalar;
pub mod tolerance;

pub use closed_form::{
    diagonal_elliptic, diagonal_series, eval_appell, eval_axis, eval_diagonal, eval_elliptic,
    eval_product, evaluate, Evaluation, Method,
};
pub use elliptic::{agm, complete_e, complete_k, complete_ke, EllipticModulus, EllipticValues};
pub use error::{Error, Result};
pub use gauss_legendre::{gauss_legendre, GaussLegendre};
pub use hypergeometric::{
    appell_f4, elliptic_e_identity, elliptic_ke_identity, gauss_2f1, series_3f2, IdentitySides,
    SeriesResult,
};
pub use quadrature::{default_quad_tol, quad1d, quad2d, QuadResult};
pub use reduction::{map_uv, modulus_from_z, Amplitudes, ReducedPair};
pub use scalar::Scalar;
pub use tolerance::{ToleranceConfig, DEFAULT_TOL_ENV};

pub type Amplitudes64 = Amplitudes<f64>;
pub type ReducedPair64 = ReducedPair<f64>;
pub type EllipticModulus64 = EllipticModulus<f64>;
pub type EllipticValues64 = EllipticValues<f64>;
pub type ToleranceConfig64 = ToleranceConfig<f64>;
pub type SeriesResult64 = SeriesResult<f64>;
pub type Evaluation64 = Evaluation<f64>;
pub type QuadResult64 = QuadResult<f64>;

pub type Amplitudes32 = Amplitudes<f32>;
pub type ToleranceConfig32 = ToleranceConfig<f32>;
pub type Evaluation32 = Evaluation<f32>;
