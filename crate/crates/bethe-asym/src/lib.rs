//! Thermodynamic-limit quantities and leading long-distance asymptotics of
//! correlation functions for the XXZ spin-1/2 chain (gapless regime, non-zero
//! field) and the one-dimensional Bose gas, together with a battery of
//! numerical identity checks for the machinery behind them.
//!
//! Layout, bottom-up:
//!
//! * [`numkit`] — Gauss–Legendre grids, complex LU with log-determinant,
//!   Brent root finding, barycentric differentiation. Generic over
//!   [`Scalar`] (`f32`/`f64`).
//! * [`specfun`] — complex log-Gamma and the Barnes G function. Generic.
//! * [`models`] — kernels and bare momenta of the two models.
//! * [`thermo`] — Nyström solution of the linear integral equations, Fermi
//!   boundary, dressed quantities.
//! * [`fredholm`] — Fredholm determinants on an interval and on a closed
//!   contour, and the rank-one shift / θ-independence identities.
//! * [`gsk`] — the generalized sine kernel: exact determinant versus its
//!   asymptotic expansion.
//! * [`asymptotics`] — Cauchy transform of the dressed charge, the constants
//!   C₀, C₁, Ã, the generating function and the correlation expansions.
//! * [`verify`] — cycle expansion, Lagrange-series family, finite-N
//!   Fredholm identities and the free-fermion suite.
//!
//! Everything above `specfun` works in `f64`: the tolerances of the physical
//! checks (down to 1e-10) are meaningless in single precision.

// `!(x > 0.0)` is used on purpose throughout: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod fredholm;
pub mod gsk;
pub mod models;
pub mod numkit;
pub mod scalar;
pub mod specfun;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Real type used by the physics layers.
pub type Real = f64;
/// Complex type used by the physics layers.
pub type C64 = num_complex::Complex<f64>;

/// Double-precision quadrature grid.
pub type Grid = numkit::Grid<f64>;
/// Double-precision dense complex matrix.
pub type ComplexMatrix = numkit::ComplexMatrix<f64>;
/// Double-precision LU factorization.
pub type Lu = numkit::Lu<f64>;
