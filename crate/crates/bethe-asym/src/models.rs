//! Model ingredients: kernels, bare momenta and the hyperbolic/rational
//! building blocks that distinguish the XXZ chain from the Bose gas.
//!
//! The XXZ formulas are trigonometric in the anisotropy angle ζ (Δ = cos ζ);
//! the Bose-gas formulas are their rational limits with ζ → c. Where a
//! construction needs "sinh", "coth" etc. of a rapidity difference, the
//! corresponding method on [`ModelSpec`] returns `x` resp. `1/x` for the
//! Bose gas.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

/// Which of the two integrable models, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    /// XXZ chain, `0 < zeta < π`, magnetic field `h > 0`.
    Xxz { zeta: f64, h: f64 },
    /// Lieb–Liniger gas, coupling `c > 0`, chemical potential `h > 0`.
    LiebLiniger { c: f64, h: f64 },
}

/// Sign of the integral operator in the linear integral equations:
/// `f + sign·(1/2π)∫K f = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSign {
    Plus,
    Minus,
}

impl KernelSign {
    pub fn value(self) -> f64 {
        match self {
            KernelSign::Plus => 1.0,
            KernelSign::Minus => -1.0,
        }
    }
}

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn pole_guard(function: &'static str, at: C64, den: C64) -> Result<()> {
    if den.norm() < 1e-300 || !den.is_finite() {
        return Err(Error::Pole { function, at: format!("{at}") });
    }
    Ok(())
}

impl ModelSpec {
    pub fn xxz(zeta: f64, h: f64) -> Result<Self> {
        let m = ModelSpec::Xxz { zeta, h };
        m.validate()?;
        Ok(m)
    }

    /// XXZ model from the anisotropy Δ ∈ (−1, 1), ζ = arccos Δ.
    pub fn xxz_from_delta(delta: f64, h: f64) -> Result<Self> {
        if !(delta > -1.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!("anisotropy Δ = {delta} outside (-1, 1)")));
        }
        Self::xxz(delta.acos(), h)
    }

    pub fn lieb_liniger(c: f64, h: f64) -> Result<Self> {
        let m = ModelSpec::LiebLiniger { c, h };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Xxz { zeta, h } => {
                if !(zeta > 0.0 && zeta < PI) {
                    return Err(Error::InvalidArgument(format!("zeta = {zeta} outside (0, π)")));
                }
                if !(h > 0.0) || !h.is_finite() {
                    return Err(Error::InvalidArgument(format!("field h = {h} must be positive")));
                }
            }
            ModelSpec::LiebLiniger { c, h } => {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::InvalidArgument(format!("coupling c = {c} must be positive")));
                }
                if !(h > 0.0) || !h.is_finite() {
                    return Err(Error::InvalidArgument(format!("chemical potential h = {h} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        match *self {
            ModelSpec::Xxz { h, .. } | ModelSpec::LiebLiniger { h, .. } => h,
        }
    }

    pub fn with_h(&self, h: f64) -> Self {
        match *self {
            ModelSpec::Xxz { zeta, .. } => ModelSpec::Xxz { zeta, h },
            ModelSpec::LiebLiniger { c, .. } => ModelSpec::LiebLiniger { c, h },
        }
    }

    pub fn is_xxz(&self) -> bool {
        matches!(self, ModelSpec::Xxz { .. })
    }

    /// Imaginary shift appearing in the kernel poles: ζ (XXZ) or c (Bose gas).
    pub fn shift(&self) -> f64 {
        match *self {
            ModelSpec::Xxz { zeta, .. } => zeta,
            ModelSpec::LiebLiniger { c, .. } => c,
        }
    }

    pub fn kernel_sign(&self) -> KernelSign {
        match self {
            ModelSpec::Xxz { .. } => KernelSign::Plus,
            ModelSpec::LiebLiniger { .. } => KernelSign::Minus,
        }
    }

    /// Largest admissible half-height of a contour around the cut: contour
    /// points must not differ by the kernel pole offsets (±iζ, and ±i(π−ζ)
    /// modulo iπ for the XXZ chain; ±ic for the Bose gas).
    pub fn contour_height_limit(&self) -> f64 {
        match *self {
            ModelSpec::Xxz { zeta, .. } => 0.5 * zeta.min(PI - zeta),
            ModelSpec::LiebLiniger { c, .. } => 0.5 * c,
        }
    }

    /// `sinh x` (XXZ) or `x` (Bose gas).
    pub fn sh(&self, x: C64) -> C64 {
        match self {
            ModelSpec::Xxz { .. } => x.sinh(),
            ModelSpec::LiebLiniger { .. } => x,
        }
    }

    /// `coth x` (XXZ) or `1/x` (Bose gas): the Cauchy kernel of the model.
    pub fn cth(&self, x: C64) -> C64 {
        match self {
            ModelSpec::Xxz { .. } => x.cosh() / x.sinh(),
            ModelSpec::LiebLiniger { .. } => 1.0 / x,
        }
    }

    /// `1/sinh² x` (XXZ) or `1/x²` (Bose gas).
    pub fn inv_sh2(&self, x: C64) -> C64 {
        let s = self.sh(x);
        1.0 / (s * s)
    }

    /// `1/tanh x` (XXZ) or `1/x` (Bose gas), for real arguments.
    pub fn cth_real(&self, x: f64) -> f64 {
        match self {
            ModelSpec::Xxz { .. } => 1.0 / x.tanh(),
            ModelSpec::LiebLiniger { .. } => 1.0 / x,
        }
    }
}

/// The kernel K(λ).
pub fn kernel_k(model: &ModelSpec, lambda: C64) -> Result<C64> {
    match *model {
        ModelSpec::Xxz { zeta, .. } => {
            let den = (lambda + I * zeta).sinh() * (lambda - I * zeta).sinh();
            pole_guard("kernel_k", lambda, den)?;
            Ok((2.0 * zeta).sin() / den)
        }
        ModelSpec::LiebLiniger { c, .. } => {
            let den = lambda * lambda + c * c;
            pole_guard("kernel_k", lambda, den)?;
            Ok(2.0 * c / den)
        }
    }
}

/// K(λ), K′(λ), K″(λ) on the real line (no poles there for valid models).
pub fn kernel_real_derivs(model: &ModelSpec, lambda: f64) -> (f64, f64, f64) {
    // K = A/u
    let (a, u, u1, u2) = match *model {
        ModelSpec::Xxz { zeta, .. } => {
            let ch = (2.0 * lambda).cosh();
            (2.0 * (2.0 * zeta).sin(), ch - (2.0 * zeta).cos(), 2.0 * (2.0 * lambda).sinh(), 4.0 * ch)
        }
        ModelSpec::LiebLiniger { c, .. } => (2.0 * c, lambda * lambda + c * c, 2.0 * lambda, 2.0),
    };
    let k = a / u;
    let k1 = -a * u1 / (u * u);
    let k2 = -a * (u2 * u - 2.0 * u1 * u1) / (u * u * u);
    (k, k1, k2)
}

/// Kernel on the real line, `K(λ)`.
pub fn kernel_real(model: &ModelSpec, lambda: f64) -> f64 {
    kernel_real_derivs(model, lambda).0
}

/// Twisted kernel `K_κ(λ) = coth(λ+iζ) − κ coth(λ−iζ)` (XXZ) or
/// `1/(λ+ic) − κ/(λ−ic)` (Bose gas). At κ = 1 it equals `−i K(λ)`.
pub fn twisted_kernel(model: &ModelSpec, lambda: C64, kappa: C64) -> C64 {
    let s = model.shift();
    model.cth(lambda + I * s) - kappa * model.cth(lambda - I * s)
}

/// Bare momentum `p₀(λ)` on the real line, with `p₀(0) = 0`.
///
/// For the XXZ chain this is the argument of
/// `sinh(iζ/2 − λ)/sinh(iζ/2 + λ)`; on the real line |p₀| < π − ζ, so the
/// principal argument is already continuous and no unwrapping is needed.
pub fn bare_momentum(model: &ModelSpec, lambda: f64) -> f64 {
    match *model {
        ModelSpec::Xxz { zeta, .. } => {
            let a = (I * (zeta / 2.0) - lambda).sinh();
            let b = (I * (zeta / 2.0) + lambda).sinh();
            (a / b).arg()
        }
        ModelSpec::LiebLiniger { .. } => lambda,
    }
}

/// `p₀′(λ)` for complex λ.
pub fn bare_momentum_deriv(model: &ModelSpec, lambda: C64) -> Result<C64> {
    match *model {
        ModelSpec::Xxz { zeta, .. } => {
            let den = (lambda + I * (zeta / 2.0)).sinh() * (lambda - I * (zeta / 2.0)).sinh();
            pole_guard("bare_momentum_deriv", lambda, den)?;
            Ok(zeta.sin() / den)
        }
        ModelSpec::LiebLiniger { .. } => Ok(C64::new(1.0, 0.0)),
    }
}

/// Real-line `p₀′(λ)` and `p₀″(λ)`.
pub fn bare_momentum_real_derivs(model: &ModelSpec, lambda: f64) -> (f64, f64) {
    match *model {
        ModelSpec::Xxz { zeta, .. } => {
            // p₀′ = 2 sin ζ / (cosh 2λ − cos ζ)
            let u = (2.0 * lambda).cosh() - zeta.cos();
            let u1 = 2.0 * (2.0 * lambda).sinh();
            let a = 2.0 * zeta.sin();
            (a / u, -a * u1 / (u * u))
        }
        ModelSpec::LiebLiniger { .. } => (1.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn kernel_examples() {
        let ff = ModelSpec::xxz(PI / 2.0, 1.0).unwrap();
        for x in [-2.0, 0.0, 0.3, 5.0] {
            assert!(kernel_k(&ff, c(x)).unwrap().norm() < 1e-15);
        }
        let m = ModelSpec::xxz(PI / 3.0, 1.0).unwrap();
        assert!((kernel_k(&m, c(0.0)).unwrap() - c(2.0 / 3f64.sqrt())).norm() < 1e-14);
        let ll = ModelSpec::lieb_liniger(1.0, 1.0).unwrap();
        assert!((kernel_k(&ll, c(0.0)).unwrap() - c(2.0)).norm() < 1e-15);
        assert!(matches!(kernel_k(&ll, C64::new(0.0, 1.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn momentum_examples() {
        for z in [0.3, 1.0, 2.5] {
            let m = ModelSpec::xxz(z, 0.5).unwrap();
            assert_eq!(bare_momentum(&m, 0.0), 0.0);
            let d = bare_momentum_deriv(&m, c(0.0)).unwrap();
            assert!((d.re - 2.0 / (z / 2.0).tan()).abs() < 1e-13);
        }
        let ff = ModelSpec::xxz(PI / 2.0, 1.0).unwrap();
        for x in [-1.3, 0.2, 0.9] {
            let d = bare_momentum_deriv(&ff, c(x)).unwrap();
            assert!((d.re - 2.0 / (2.0 * x).cosh()).abs() < 1e-14);
            assert!((bare_momentum(&ff, x) - 2.0 * x.tanh().atan()).abs() < 1e-14);
            // density at free fermions: p₀′/2π = 1/(π cosh 2λ)
            assert!((d.re / (2.0 * PI) - 1.0 / (PI * (2.0 * x).cosh())).abs() < 1e-15);
        }
        assert!(matches!(bare_momentum_deriv(&ff, C64::new(0.0, PI / 4.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn twisted_kernel_reduces_to_kernel() {
        for m in [ModelSpec::xxz(1.1, 1.0).unwrap(), ModelSpec::lieb_liniger(2.0, 1.0).unwrap()] {
            let x = C64::new(0.4, 0.1);
            let lhs = twisted_kernel(&m, x, c(1.0));
            let rhs = -I * kernel_k(&m, x).unwrap();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn validation() {
        assert!(ModelSpec::xxz(0.0, 1.0).is_err());
        assert!(ModelSpec::xxz(PI, 1.0).is_err());
        assert!(ModelSpec::xxz(1.0, 0.0).is_err());
        assert!(ModelSpec::lieb_liniger(-1.0, 1.0).is_err());
        let m = ModelSpec::xxz_from_delta(0.5, 1.0).unwrap();
        assert!((m.shift() - PI / 3.0).abs() < 1e-15);
        assert!(ModelSpec::xxz_from_delta(1.0, 1.0).is_err());
    }

    #[test]
    fn real_derivatives_match_finite_differences() {
        for m in [ModelSpec::xxz(0.7, 1.0).unwrap(), ModelSpec::lieb_liniger(1.5, 1.0).unwrap()] {
            for x in [-1.2, 0.0, 0.45, 2.0] {
                let (k, k1, k2) = kernel_real_derivs(&m, x);
                assert!((k - kernel_k(&m, c(x)).unwrap().re).abs() < 1e-13);
                let dlt = 1e-4;
                let fd1 = (kernel_real(&m, x + dlt) - kernel_real(&m, x - dlt)) / (2.0 * dlt);
                let fd2 = (kernel_real(&m, x + dlt) - 2.0 * k + kernel_real(&m, x - dlt)) / (dlt * dlt);
                assert!((k1 - fd1).abs() < 1e-7, "{m:?} {x}");
                assert!((k2 - fd2).abs() < 1e-5, "{m:?} {x}");
                let (p1, p2) = bare_momentum_real_derivs(&m, x);
                assert!((p1 - bare_momentum_deriv(&m, c(x)).unwrap().re).abs() < 1e-13);
                let fdp = (bare_momentum_real_derivs(&m, x + dlt).0 - bare_momentum_real_derivs(&m, x - dlt).0) / (2.0 * dlt);
                assert!((p2 - fdp).abs() < 1e-7);
            }
        }
    }

    proptest! {
        #[test]
        fn parity(zeta in 0.05f64..3.09, x in -3.0f64..3.0) {
            let m = ModelSpec::xxz(zeta, 1.0).unwrap();
            let kp = kernel_k(&m, c(x)).unwrap();
            let km = kernel_k(&m, c(-x)).unwrap();
            prop_assert!((kp - km).norm() <= 1e-12 * kp.norm().max(1.0));
            prop_assert!((bare_momentum(&m, x) + bare_momentum(&m, -x)).abs() < 1e-12);
            let dp = bare_momentum_deriv(&m, c(x)).unwrap();
            let dm = bare_momentum_deriv(&m, c(-x)).unwrap();
            prop_assert!((dp - dm).norm() <= 1e-12 * dp.norm().max(1.0));
        }

        #[test]
        fn momentum_derivative_is_second_order(zeta in 0.2f64..2.9, x in -2.0f64..2.0) {
            let m = ModelSpec::xxz(zeta, 1.0).unwrap();
            let exact = bare_momentum_deriv(&m, c(x)).unwrap().re;
            let err = |d: f64| ((bare_momentum(&m, x + d) - bare_momentum(&m, x - d)) / (2.0 * d) - exact).abs();
            let scale = exact.abs().max(1.0) * (1.0 + (1.0 / zeta.sin()).powi(3));
            prop_assert!(err(1e-4) < 1e-6 * scale);
            prop_assert!(err(1e-5) < 1e-7 * scale);
            prop_assert!(bare_momentum(&m, x).abs() < PI - zeta + 1e-12);
        }
    }
}
