//! Every closed form available at ζ = π/2 (Δ = 0), where the chain maps to
//! free fermions: Z ≡ 1, ρ(λ) = 1/(π cosh 2λ), cosh 2q = 4/h,
//! sin p_F = tanh 2q, C₁ = 0, C₀ = 2πi[z̃(q−iπ/2) − z̃(−q−iπ/2)], unit
//! contour determinant, oscillating coefficient 2/π², the finite-N
//! Cauchy-type determinants, and the exact Δ = 0 generating function.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::finite_n::{free_fermion_closed_forms, FiniteBetheData};
use super::CheckRecord;
use crate::asymptotics::{szsz_leading, AsymptoticContext};
use crate::gsk::{exact_gsk_logdet, GskProblem};
use crate::models::ModelSpec;
use crate::thermo::{dressed_quantities, ThermoConfig};
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Runs the suite at field `h ∈ (0, 4)`; failures are data, not errors.
pub fn free_fermion_suite(h: f64, contour_nodes: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    if !(h > 0.0 && h < 4.0) {
        return Err(Error::InvalidArgument(format!("free-fermion field h = {h} must lie in (0, 4)")));
    }
    let model = ModelSpec::xxz(PI / 2.0, h)?;
    let thermo = dressed_quantities(&model, &ThermoConfig::default())?;
    let mut out = Vec::new();
    let mut push = |name: &str, residual: f64, tol: f64| out.push(CheckRecord::new(format!("free-fermion/h={h}/{name}"), residual, tol));

    let q_exact = 0.5 * (4.0 / h).acosh();
    push("q", (thermo.q - q_exact).abs(), 1e-8);
    let probes: Vec<f64> = (0..=40).map(|k| -thermo.q + 2.0 * thermo.q * k as f64 / 40.0).collect();
    let z_err = probes.iter().map(|&x| (thermo.z_at(x) - 1.0).abs()).fold(0.0, f64::max);
    push("Z=1", z_err, 1e-10);
    let rho_err = probes.iter().map(|&x| (thermo.rho_at(x) - 1.0 / (PI * (2.0 * x).cosh())).abs()).fold(0.0, f64::max);
    push("rho", rho_err, 1e-10);
    push("sin(pF)=tanh(2q)", (thermo.p_f.sin() - (2.0 * thermo.q).tanh()).abs(), 1e-10);
    push("D=pF/pi", (thermo.d - thermo.p_f / PI).abs(), 1e-10);

    let q = thermo.q;
    let ctx = AsymptoticContext::new(thermo, Some(contour_nodes), None)?;
    push("C1=0", ctx.c1.abs(), 1e-8);
    let c0_path = 2.0 * PI * I * (ctx.z_tilde(C64::new(q, -PI / 2.0))? - ctx.z_tilde(C64::new(-q, -PI / 2.0))?);
    push("C0 boundary form", (c0_path - ctx.c0).norm(), 1e-8);
    push("det[I+U/2pi i]=1", (ctx.atilde_determinant(None)? - 1.0).norm(), 1e-8);
    let e = szsz_leading(&ctx)?;
    push("osc coefficient 2/pi^2", (e.osc_amp - 2.0 / (PI * PI)).abs(), 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in [2, 3] {
        let data = FiniteBetheData::random(&mut rng, n, 1.0, PI / 2.0, C64::new(0.7, 0.0), C64::new(0.4, 0.1))?;
        let (rl, rz) = free_fermion_closed_forms(&data)?;
        push(&format!("cauchy det lambda N={n}"), rl, 1e-10);
        push(&format!("cauchy det z N={n}"), rz, 1e-10);
    }

    let beta = C64::new(0.2, 0.0);
    let m = 160.0;
    let approx = ctx.generating_fn_full(beta, m)?;
    let p = GskProblem::free_fermion(q, beta, m);
    let exact = exact_gsk_logdet(&p, p.default_nodes())?.exp();
    push("generating function m=160", ((approx - exact) / exact).norm(), 1e-6);
    Ok(out)
}
