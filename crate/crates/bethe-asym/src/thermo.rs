//! Thermodynamic-limit ground state: Nyström solution of the linear integral
//! equations on `[−q, q]`, the Fermi boundary `q` and the dressed quantities.
//!
//! Equations solved (σ = +1 for XXZ, −1 for the Bose gas):
//!
//! ```text
//! f(λ) + σ/(2π) ∫_{−q}^{q} K(λ−μ) f(μ) dμ = rhs(λ)
//! ```
//!
//! | quantity | XXZ rhs                 | Bose gas rhs |
//! |----------|-------------------------|--------------|
//! | ρ        | p₀′(λ)/2π               | 1/2π         |
//! | Z        | 1                       | 1            |
//! | ε        | h − 2 sin ζ · p₀′(λ)    | λ² − h       |

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::models::{bare_momentum_real_derivs, kernel_real_derivs, ModelSpec};
use crate::numkit::{find_root, gauss_legendre, lu_solve_det};
use crate::{ComplexMatrix, Error, Grid, Result, C64};

/// Right-hand side of the dressed-energy equation of the Bose gas:
/// `ε − K∗ε/2π = λ² − h`. This is the conventional choice (energy measured
/// from the chemical potential, unit mass ½) and the only place it is fixed.
pub fn ll_dressed_energy_rhs(lambda: f64, h: f64) -> (f64, f64, f64) {
    (lambda * lambda - h, 2.0 * lambda, 2.0)
}

/// Numerical settings of the thermodynamic solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoConfig {
    /// Gauss–Legendre nodes on `[−q, q]`.
    pub nodes: usize,
    /// Absolute tolerance on `q` in the outer root find.
    pub root_tol: f64,
    /// Starting value of the geometric bracket search for `q`.
    pub q_start: f64,
    /// Give up (no Fermi sea / no bracket) beyond this boundary.
    pub q_max: f64,
}

impl Default for ThermoConfig {
    fn default() -> Self {
        Self { nodes: 128, root_tol: 1e-13, q_start: 1e-3, q_max: 40.0 }
    }
}

impl ThermoConfig {
    pub fn with_nodes(nodes: usize) -> Self {
        Self { nodes, ..Self::default() }
    }
}

/// Right-hand side of a linear integral equation: value, first and second
/// derivative at a real point.
pub type Rhs = Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

/// Sampled solution of a linear integral equation plus its Nyström
/// interpolant.
#[derive(Clone)]
pub struct IeSolution {
    pub model: ModelSpec,
    pub grid: Grid,
    pub values: Vec<f64>,
    rhs: Rhs,
}

impl fmt::Debug for IeSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IeSolution")
            .field("model", &self.model)
            .field("nodes", &self.grid.len())
            .field("values", &self.values)
            .finish()
    }
}

impl IeSolution {
    fn sign(&self) -> f64 {
        self.model.kernel_sign().value()
    }

    /// `(f, f′, f″)` at an arbitrary real point by the Nyström formula.
    pub fn eval_derivs(&self, lambda: f64) -> (f64, f64, f64) {
        let (r0, r1, r2) = (self.rhs)(lambda);
        let mut s = (0.0, 0.0, 0.0);
        for ((&mu, &w), &f) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.values) {
            let (k0, k1, k2) = kernel_real_derivs(&self.model, lambda - mu);
            s.0 += w * k0 * f;
            s.1 += w * k1 * f;
            s.2 += w * k2 * f;
        }
        let c = self.sign() / (2.0 * PI);
        (r0 - c * s.0, r1 - c * s.1, r2 - c * s.2)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.eval_derivs(lambda).0
    }

    pub fn deriv(&self, lambda: f64) -> f64 {
        self.eval_derivs(lambda).1
    }

    /// Residual of the continuous equation at `x`, with the integral done on
    /// an independent reference grid using the interpolant.
    pub fn residual_at(&self, x: f64, reference: &Grid) -> f64 {
        let integral = reference.integrate(|mu| kernel_real_derivs(&self.model, x - mu).0 * self.eval(mu));
        self.eval(x) + self.sign() / (2.0 * PI) * integral - (self.rhs)(x).0
    }
}

/// Solve `f + σ K∗f/2π = rhs` on `[−q, q]` with `n` Gauss–Legendre nodes.
pub fn solve_linear_ie(model: &ModelSpec, q: f64, rhs: Rhs, n: usize) -> Result<IeSolution> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidArgument(format!("Fermi boundary q = {q} must be positive")));
    }
    if n < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 nodes, got {n}")));
    }
    let grid = gauss_legendre(n, -q, q)?;
    let c = model.kernel_sign().value() / (2.0 * PI);
    let a = ComplexMatrix::from_fn(n, |i, j| {
        let k = kernel_real_derivs(model, grid.nodes[i] - grid.nodes[j]).0;
        let delta = if i == j { 1.0 } else { 0.0 };
        C64::new(delta + c * grid.weights[j] * k, 0.0)
    });
    let b: Vec<C64> = grid.nodes.iter().map(|&x| C64::new(rhs(x).0, 0.0)).collect();
    let (sol, _) = lu_solve_det(&a, Some(&b))?;
    let values = sol.expect("rhs supplied").into_iter().map(|z| z.re).collect();
    Ok(IeSolution { model: *model, grid, values, rhs })
}

fn density_rhs(model: &ModelSpec) -> Rhs {
    let m = *model;
    match m {
        ModelSpec::Xxz { .. } => Arc::new(move |x| {
            let (p1, p2) = bare_momentum_real_derivs(&m, x);
            // p₀‴ is needed only for ρ″, which nothing consumes; finite difference keeps it honest.
            let dx = 1e-4;
            let p3 = (bare_momentum_real_derivs(&m, x + dx).1 - bare_momentum_real_derivs(&m, x - dx).1) / (2.0 * dx);
            (p1 / (2.0 * PI), p2 / (2.0 * PI), p3 / (2.0 * PI))
        }),
        ModelSpec::LiebLiniger { .. } => Arc::new(|_| (1.0 / (2.0 * PI), 0.0, 0.0)),
    }
}

fn charge_rhs() -> Rhs {
    Arc::new(|_| (1.0, 0.0, 0.0))
}

fn energy_rhs(model: &ModelSpec) -> Rhs {
    let m = *model;
    match m {
        ModelSpec::Xxz { zeta, h } => Arc::new(move |x| {
            let (p1, p2) = bare_momentum_real_derivs(&m, x);
            let dx = 1e-4;
            let p3 = (bare_momentum_real_derivs(&m, x + dx).1 - bare_momentum_real_derivs(&m, x - dx).1) / (2.0 * dx);
            let s = 2.0 * zeta.sin();
            (h - s * p1, -s * p2, -s * p3)
        }),
        ModelSpec::LiebLiniger { h, .. } => Arc::new(move |x| ll_dressed_energy_rhs(x, h)),
    }
}

/// Dressed-energy solution for a trial boundary `q`.
pub fn dressed_energy(model: &ModelSpec, q: f64, n: usize) -> Result<IeSolution> {
    solve_linear_ie(model, q, energy_rhs(model), n)
}

/// Fermi boundary: the `q` at which the dressed energy solved on `[−q, q]`
/// vanishes at `λ = q`.
pub fn find_fermi_boundary(model: &ModelSpec, cfg: &ThermoConfig) -> Result<f64> {
    model.validate()?;
    let eps_q = |q: f64| -> Result<f64> { Ok(dressed_energy(model, q, cfg.nodes)?.eval(q)) };
    let mut lo = cfg.q_start;
    let f_lo = eps_q(lo)?;
    if f_lo >= 0.0 {
        return Err(Error::NoFermiSea(format!(
            "dressed energy is non-negative already at q = {lo} (ε = {f_lo:e}); field/potential h = {} too strong",
            model.h()
        )));
    }
    let mut hi = lo;
    loop {
        hi *= 2.0;
        if hi > cfg.q_max {
            return Err(Error::NoFermiSea(format!(
                "no sign change of ε(q) for q up to {}; h = {} too small",
                cfg.q_max,
                model.h()
            )));
        }
        if eps_q(hi)? > 0.0 {
            break;
        }
        lo = hi;
    }
    let mut failure = None;
    let q = find_root(
        |q| match eps_q(q) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        cfg.root_tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    q
}

/// Ground-state data in the thermodynamic limit.
#[derive(Debug, Clone)]
pub struct ThermoSolution {
    pub model: ModelSpec,
    pub q: f64,
    pub grid: Grid,
    pub rho: Vec<f64>,
    pub z: Vec<f64>,
    pub eps: Vec<f64>,
    /// Fermi momentum p(q) = 2π∫₀^q ρ.
    pub p_f: f64,
    /// Average density ∫ρ.
    pub d: f64,
    /// Dressed charge at the Fermi boundary.
    pub z_q: f64,
    pub rho_q: f64,
    pub rho_fn: IeSolution,
    pub z_fn: IeSolution,
    pub eps_fn: IeSolution,
}

impl ThermoSolution {
    pub fn z_at(&self, lambda: f64) -> f64 {
        self.z_fn.eval(lambda)
    }

    /// `(Z, Z′, Z″)` at a real point.
    pub fn z_derivs(&self, lambda: f64) -> (f64, f64, f64) {
        self.z_fn.eval_derivs(lambda)
    }

    pub fn rho_at(&self, lambda: f64) -> f64 {
        self.rho_fn.eval(lambda)
    }

    pub fn eps_at(&self, lambda: f64) -> f64 {
        self.eps_fn.eval(lambda)
    }

    /// Dressed momentum p(λ) = 2π ∫₀^λ ρ.
    pub fn dressed_momentum(&self, lambda: f64) -> Result<f64> {
        if lambda == 0.0 {
            return Ok(0.0);
        }
        let (a, b, s) = if lambda > 0.0 { (0.0, lambda, 1.0) } else { (lambda, 0.0, -1.0) };
        let g = gauss_legendre(self.grid.len(), a, b)?;
        Ok(s * 2.0 * PI * g.integrate(|x| self.rho_at(x)))
    }
}

/// Solve for `q` and every dressed quantity.
pub fn dressed_quantities(model: &ModelSpec, cfg: &ThermoConfig) -> Result<ThermoSolution> {
    let q = find_fermi_boundary(model, cfg)?;
    let n = cfg.nodes;
    let eps_fn = dressed_energy(model, q, n)?;
    let z_fn = solve_linear_ie(model, q, charge_rhs(), n)?;
    let rho_fn = match model {
        ModelSpec::Xxz { .. } => solve_linear_ie(model, q, density_rhs(model), n)?,
        // The density of the Bose gas is the dressed charge over 2π; keep the
        // interpolant consistent with that by scaling the same solution.
        ModelSpec::LiebLiniger { .. } => {
            let mut r = solve_linear_ie(model, q, density_rhs(model), n)?;
            r.values = z_fn.values.iter().map(|z| z / (2.0 * PI)).collect();
            r
        }
    };
    let grid = z_fn.grid.clone();
    let d = grid.nodes.iter().zip(&grid.weights).zip(&rho_fn.values).map(|((_, w), r)| w * r).sum();
    let g_half = gauss_legendre(n, 0.0, q)?;
    let p_f = 2.0 * PI * g_half.integrate(|x| rho_fn.eval(x));
    let sol = ThermoSolution {
        model: *model,
        q,
        rho: rho_fn.values.clone(),
        z: z_fn.values.clone(),
        eps: eps_fn.values.clone(),
        p_f,
        d,
        z_q: z_fn.eval(q),
        rho_q: rho_fn.eval(q),
        grid,
        rho_fn,
        z_fn,
        eps_fn,
    };
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff(h: f64) -> ModelSpec {
        ModelSpec::xxz(PI / 2.0, h).unwrap()
    }

    #[test]
    fn free_fermion_density_and_charge() {
        let m = ff(2.0);
        let rho = solve_linear_ie(&m, 0.7, density_rhs(&m), 32).unwrap();
        for (&x, &r) in rho.grid.nodes.iter().zip(&rho.values) {
            assert!((r - 1.0 / (PI * (2.0 * x).cosh())).abs() < 1e-14);
        }
        let z = solve_linear_ie(&m, 0.7, charge_rhs(), 32).unwrap();
        assert!(z.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn strong_coupling_bose_gas_charge_is_one() {
        let m = ModelSpec::lieb_liniger(1e6, 1.0).unwrap();
        let z = solve_linear_ie(&m, 1.0, charge_rhs(), 32).unwrap();
        assert!(z.values.iter().all(|&v| (v - 1.0).abs() < 2e-6));
    }

    #[test]
    fn free_fermion_boundary_and_momentum() {
        let s = dressed_quantities(&ff(2.0), &ThermoConfig::default()).unwrap();
        let q_exact = 0.5 * 2f64.acosh();
        assert!((s.q - q_exact).abs() < 1e-11, "q = {}", s.q);
        assert!((s.p_f - PI / 3.0).abs() < 1e-10);
        assert!((s.d - 1.0 / 3.0).abs() < 1e-10);
        assert!((s.p_f.sin() - (2.0 * s.q).tanh()).abs() < 1e-10);
        assert!((s.z_q - 1.0).abs() < 1e-14);
    }

    #[test]
    fn boundary_shrinks_near_critical_field() {
        let q = find_fermi_boundary(&ff(3.999), &ThermoConfig::default()).unwrap();
        assert!(q < 0.03, "q = {q}");
        assert!(matches!(find_fermi_boundary(&ff(4.5), &ThermoConfig::default()), Err(Error::NoFermiSea(_))));
    }

    #[test]
    fn rejects_bad_boundaries() {
        let m = ff(1.0);
        assert!(solve_linear_ie(&m, -1.0, charge_rhs(), 16).is_err());
        assert!(solve_linear_ie(&m, 1.0, charge_rhs(), 4).is_err());
    }

    #[test]
    fn interacting_xxz_invariants() {
        let m = ModelSpec::xxz(PI / 3.0, 1.0).unwrap();
        let s = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
        assert!(s.eps_at(s.q).abs() < 1e-10);
        assert!(s.eps_at(-s.q).abs() < 1e-10);
        assert!(s.eps.iter().all(|&e| e < 0.0));
        assert!(s.rho.iter().all(|&r| r > 0.0) && s.z.iter().all(|&z| z > 0.0));
        let n = s.grid.len();
        for i in 0..n / 2 {
            assert!((s.rho[i] - s.rho[n - 1 - i]).abs() < 1e-10);
            assert!((s.z[i] - s.z[n - 1 - i]).abs() < 1e-10);
        }
        assert!((s.d - s.p_f / PI).abs() < 1e-10);
        assert!(s.d > 0.0 && s.d <= 0.5);
        let reference = gauss_legendre(256, -s.q, s.q).unwrap();
        for k in 0..50 {
            let x = -s.q + (2.0 * s.q) * (k as f64 + 0.37) / 50.0;
            assert!(s.z_fn.residual_at(x, &reference).abs() < 1e-9);
            assert!(s.rho_fn.residual_at(x, &reference).abs() < 1e-9);
        }
    }

    #[test]
    fn bose_gas_density_is_charge_over_two_pi() {
        let m = ModelSpec::lieb_liniger(4.0, 1.0).unwrap();
        let s = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
        for (r, z) in s.rho.iter().zip(&s.z) {
            assert!((r - z / (2.0 * PI)).abs() < 1e-12);
        }
        assert!((s.rho_q - s.z_q / (2.0 * PI)).abs() < 1e-12);
        assert!((s.d - s.p_f / PI).abs() < 1e-10);
    }
}
