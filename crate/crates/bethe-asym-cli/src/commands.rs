//! The six commands. Each builds a [`Report`]; sweeps over `m` run on the
//! rayon pool and are collected in input order.

use std::f64::consts::PI;

use bethe_asym::asymptotics::{ll_jj_leading, szsz_leading, AsymptoticContext, AsymptoticExpansion};
use bethe_asym::gsk::{self, GskProblem};
use bethe_asym::thermo::{dressed_quantities, ThermoConfig, ThermoSolution};
use bethe_asym::verify::{self, GROUPS};
use bethe_asym::C64;
use rayon::prelude::*;

use crate::args::{CommandKind, RunConfig};
use crate::output::{CheckRow, CorrelationRow, GeneratingRow, GskRow, Report, ThermoRow};
use crate::Failure;

/// A finished command: the report plus, for checking commands, the reason
/// the checks failed (the report is still written).
pub struct Outcome<R> {
    pub report: Report<R>,
    pub verification_failure: Option<String>,
}

impl<R> From<Report<R>> for Outcome<R> {
    fn from(report: Report<R>) -> Self {
        Self { report, verification_failure: None }
    }
}

fn thermo_solution(cfg: &RunConfig) -> Result<ThermoSolution, Failure> {
    let model = cfg.model()?;
    let tc = cfg.nodes.map(ThermoConfig::with_nodes).unwrap_or_default();
    Ok(dressed_quantities(&model, &tc)?)
}

fn context(cfg: &RunConfig) -> Result<AsymptoticContext, Failure> {
    let thermo = thermo_solution(cfg)?;
    Ok(AsymptoticContext::new(thermo, cfg.nodes.map(|n| 2 * n), cfg.contour_height)?)
}

fn require_model(cfg: &RunConfig, xxz: bool) -> Result<(), Failure> {
    let is_xxz = cfg.model()?.is_xxz();
    if is_xxz != xxz {
        let wanted = if xxz { "xxz" } else { "ll" };
        return Err(Failure::Usage(format!("{} is only defined for --model {wanted}", cfg.command.name())));
    }
    Ok(())
}

pub fn thermo(cfg: &RunConfig) -> Result<Outcome<ThermoRow>, Failure> {
    let t = thermo_solution(cfg)?;
    let rows = (0..t.grid.len())
        .map(|i| ThermoRow { lambda: t.grid.nodes[i], rho: t.rho[i], z: t.z[i], eps: t.eps[i] })
        .collect();
    Ok(Report::new(CommandKind::Thermo.name(), rows)
        .scalar("q", t.q)
        .scalar("p_F", t.p_f)
        .scalar("D", t.d)
        .scalar("Z_q", t.z_q)
        .scalar("rho_q", t.rho_q)
        .scalar("D_minus_pF_over_pi", t.d - t.p_f / PI)
        .into())
}

fn correlation_rows(e: &AsymptoticExpansion, ms: &[f64]) -> Vec<CorrelationRow> {
    ms.par_iter()
        .map(|&m| {
            let power_term = -e.power_amp / m.powf(e.power_exp);
            let osc_term = e.osc_amp * (e.osc_phase_rate * m).cos() / m.powf(e.osc_exp);
            CorrelationRow { m, const_term: e.const_term, power_term, osc_term, total: e.const_term + power_term + osc_term }
        })
        .collect()
}

fn correlation_report(name: &str, e: &AsymptoticExpansion, ms: &[f64]) -> Report<CorrelationRow> {
    let k = &e.constants;
    Report::new(name, correlation_rows(e, ms))
        .scalar("Z_q", k.z_q)
        .scalar("p_F", k.p_f)
        .scalar("D", k.d)
        .scalar("C0", k.c0)
        .scalar("C1", k.c1)
        .scalar("A_tilde", k.a_tilde)
        .scalar("F_sigma_sq", e.form_factor_sq)
        .scalar("q", k.q)
        .scalar("rho_q", k.rho_q)
        .scalar("power_amp", e.power_amp)
        .scalar("osc_amp", e.osc_amp)
        .scalar("osc_exp", e.osc_exp)
}

pub fn szsz(cfg: &RunConfig) -> Result<Outcome<CorrelationRow>, Failure> {
    require_model(cfg, true)?;
    let ctx = context(cfg)?;
    let e = szsz_leading(&ctx)?;
    Ok(correlation_report(CommandKind::Szsz.name(), &e, &cfg.m).into())
}

pub fn jj(cfg: &RunConfig) -> Result<Outcome<CorrelationRow>, Failure> {
    require_model(cfg, false)?;
    let ctx = context(cfg)?;
    let e = ll_jj_leading(&ctx)?;
    Ok(correlation_report(CommandKind::Jj.name(), &e, &cfg.m).into())
}

pub fn generating(cfg: &RunConfig) -> Result<Outcome<GeneratingRow>, Failure> {
    require_model(cfg, true)?;
    let ctx = context(cfg)?;
    let beta = cfg.beta;
    let rows = cfg
        .m
        .par_iter()
        .map(|&m| -> Result<GeneratingRow, Failure> {
            let g = ctx.generating_fn_full(beta, m)?;
            let g0 = ctx.generating_fn_g0(beta, m, true)?;
            Ok(GeneratingRow { m, g_re: g.re, g_im: g.im, g0_re: g0.re, g0_im: g0.im })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new(CommandKind::Generating.name(), rows)
        .scalar("beta_re", beta.re)
        .scalar("beta_im", beta.im)
        .scalar("Z_q", ctx.thermo.z_q)
        .scalar("D", ctx.thermo.d)
        .scalar("C0", ctx.c0)
        .scalar("C1", ctx.c1)
        .into())
}

/// Sine kernel on [−1, 1] with p₀(λ) = λ, F ≡ 1, g ≡ 0. Fails verification
/// unless `|exact − W₀|` strictly decreases with `m`.
pub fn gsk_check(cfg: &RunConfig) -> Result<Outcome<GskRow>, Failure> {
    let gamma = C64::new(cfg.gamma, 0.0);
    let rows = cfg
        .m
        .par_iter()
        .map(|&m| -> Result<GskRow, Failure> {
            let r = gsk::compare(&GskProblem::sine_kernel(1.0, gamma, m), cfg.nodes)?;
            let full = r.w0 + r.w_plus + r.w_minus;
            Ok(GskRow {
                m,
                exact_logdet_re: r.exact.re,
                exact_logdet_im: r.exact.im,
                w0_re: r.w0.re,
                w0_im: r.w0.im,
                w0_wosc_re: full.re,
                w0_wosc_im: full.im,
                residual_w0: r.residual_w0,
                residual_full: r.residual_full,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let relation = gsk::relation_residual(&GskProblem::sine_kernel(1.0, gamma, cfg.m[0]))?;

    let mut by_m: Vec<&GskRow> = rows.iter().collect();
    by_m.sort_by(|a, b| a.m.total_cmp(&b.m));
    let verification_failure = by_m.windows(2).find(|w| !(w[1].residual_w0 < w[0].residual_w0)).map(|w| {
        format!(
            "|exact − W₀| does not decrease: {:e} at m = {} vs {:e} at m = {}",
            w[1].residual_w0, w[1].m, w[0].residual_w0, w[0].m
        )
    });
    let report = Report::new(CommandKind::GskCheck.name(), rows)
        .scalar("gamma", cfg.gamma)
        .scalar("q", 1.0)
        .scalar("relation_residual", relation);
    Ok(Outcome { report, verification_failure })
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome<CheckRow>, Failure> {
    if let Some(g) = &cfg.only {
        if !GROUPS.contains(&g.as_str()) {
            return Err(Failure::Usage(format!("unknown check group '{g}' (known: {})", GROUPS.join(", "))));
        }
    }
    let records = verify::run_suite(cfg.only.as_deref(), cfg.seed)?;
    let failed: Vec<&str> = records.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    let verification_failure =
        (!failed.is_empty()).then(|| format!("{} of {} checks failed: {}", failed.len(), records.len(), failed.join(", ")));
    let total = records.len();
    let rows: Vec<CheckRow> = records
        .into_iter()
        .map(|r| CheckRow { name: r.name, residual: r.residual, tolerance: r.tolerance, passed: r.passed })
        .collect();
    let passed = rows.iter().filter(|r| r.passed).count();
    let report = Report::new(CommandKind::Verify.name(), rows)
        .scalar("seed", cfg.seed as f64)
        .scalar("checks", total as f64)
        .scalar("passed", passed as f64);
    Ok(Outcome { report, verification_failure })
}

