//! Long-distance asymptotics: the Cauchy transform z̃ of the dressed charge,
//! the constants C₀, C₁ and Ã, the coefficient 𝒜(β) built from two contour
//! determinants, the generating function of the spin-z correlations, and
//! the leading expansions of ⟨σᶻ₁σᶻ_{m+1}⟩ (XXZ) and ⟨j(x)j(0)⟩ (Bose gas).

use std::f64::consts::PI;

use crate::fredholm::{det_contour_by_index, det_interval, Contour, DEFAULT_CONTOUR_NODES};
use crate::models::{kernel_k, twisted_kernel, ModelSpec};
use crate::numkit::gauss_legendre;
use crate::specfun::barnes_pair;
use crate::thermo::ThermoSolution;
use crate::{Error, Grid, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Below this |𝒵 − 1| the free-fermion closed form replaces the 0/0
/// contour kernel of Ã.
pub const FREE_FERMION_TOL: f64 = 1e-10;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// z̃(w) = (1/2πi) ∫ coth(λ−w) Z(λ) dλ (XXZ) or (1/2πi) ∫ Z(λ)/(λ−w) dλ
/// (Bose gas).
///
/// The value Z(x₀) at the nearest point of the cut is subtracted and its
/// integral added back in closed form, which keeps the quadrature accurate
/// right up to the cut; within a few node spacings of it a 4× finer grid
/// carries the (now bounded) remainder.
#[derive(Debug, Clone)]
pub struct CauchyTransform<'a> {
    thermo: &'a ThermoSolution,
    fine: Grid,
    fine_z: Vec<f64>,
    spacing: f64,
}

impl<'a> CauchyTransform<'a> {
    pub fn new(thermo: &'a ThermoSolution) -> Result<Self> {
        let n = thermo.grid.len();
        let fine = gauss_legendre(4 * n, -thermo.q, thermo.q)?;
        let fine_z = fine.nodes.iter().map(|&x| thermo.z_at(x)).collect();
        Ok(Self { thermo, fine, fine_z, spacing: 2.0 * thermo.q / n as f64 })
    }

    /// ∫_{−q}^{q} coth(λ−w) dλ (resp. ∫ dλ/(λ−w)).
    fn unit_integral(&self, w: C64) -> C64 {
        let q = self.thermo.q;
        let m = &self.thermo.model;
        // Separate principal logarithms: their jumps cancel on the real axis
        // outside the cut and add up to 2πi across it.
        m.sh(c(q) - w).ln() - m.sh(c(-q) - w).ln()
    }

    pub fn eval(&self, w: C64) -> Result<C64> {
        let q = self.thermo.q;
        if w.im == 0.0 && w.re.abs() <= q {
            return Err(Error::OnCut(format!("{w}")));
        }
        let x0 = w.re.clamp(-q, q);
        let z0 = self.thermo.z_at(x0);
        let dist = C64::new(w.re - x0, w.im).norm();
        let m = &self.thermo.model;
        let (nodes, weights, zs): (&[f64], &[f64], &[f64]) = if dist < 5.0 * self.spacing {
            (&self.fine.nodes, &self.fine.weights, &self.fine_z)
        } else {
            (&self.thermo.grid.nodes, &self.thermo.grid.weights, &self.thermo.z)
        };
        let mut sum = C64::new(0.0, 0.0);
        for ((&x, &wt), &z) in nodes.iter().zip(weights).zip(zs) {
            sum += m.cth(c(x) - w) * ((z - z0) * wt);
        }
        Ok((sum + self.unit_integral(w) * z0) / (2.0 * PI * I))
    }
}

/// One-shot evaluation of z̃(w).
pub fn cauchy_z_tilde(thermo: &ThermoSolution, w: C64) -> Result<C64> {
    CauchyTransform::new(thermo)?.eval(w)
}

/// C₀ = ∫∫ Z(λ)Z(μ)/sinh²(λ−μ−iζ) (XXZ), ∫∫ Z(λ)Z(μ)/(λ−μ−ic)² (Bose gas).
pub fn const_c0(thermo: &ThermoSolution) -> Result<f64> {
    let g = &thermo.grid;
    let m = &thermo.model;
    let s = m.shift();
    let mut acc = C64::new(0.0, 0.0);
    for (i, &x) in g.nodes.iter().enumerate() {
        for (j, &y) in g.nodes.iter().enumerate() {
            acc += m.inv_sh2(C64::new(x - y, -s)) * (g.weights[i] * g.weights[j] * thermo.z[i] * thermo.z[j]);
        }
    }
    if acc.im.abs() > 1e-9 * acc.re.abs().max(1.0) {
        return Err(Error::Inconsistent(format!("C0 has imaginary part {:e}", acc.im)));
    }
    Ok(acc.re)
}

/// C₁ = ½∫∫[Z′(λ)Z(μ) − Z(λ)Z′(μ)]/tanh(λ−μ) + 2𝒵∫[𝒵 − Z(λ)]/tanh(q−λ)
/// (tanh x → x for the Bose gas).
pub fn const_c1(thermo: &ThermoSolution) -> f64 {
    let g = &thermo.grid;
    let m = &thermo.model;
    let q = thermo.q;
    let derivs: Vec<(f64, f64, f64)> = g.nodes.iter().map(|&x| thermo.z_derivs(x)).collect();
    let n = g.len();
    let mut double = 0.0;
    for i in 0..n {
        let (zi, z1i, z2i) = derivs[i];
        for j in 0..n {
            let d = g.nodes[i] - g.nodes[j];
            let v = if d.abs() < 1e-4 {
                zi * z2i - z1i * z1i
            } else {
                (z1i * derivs[j].0 - zi * derivs[j].1) * m.cth_real(d)
            };
            double += v * g.weights[i] * g.weights[j];
        }
    }
    let (zq, z1q, z2q) = thermo.z_derivs(q);
    let edge: f64 = g
        .nodes
        .iter()
        .zip(&g.weights)
        .zip(&derivs)
        .map(|((&x, &w), &(z, _, _))| {
            let s = q - x;
            let v = if s < 1e-4 { z1q - z2q * s / 2.0 } else { (zq - z) * m.cth_real(s) };
            v * w
        })
        .sum();
    0.5 * double + 2.0 * thermo.z_q * edge
}

/// Thermodynamic solution plus a contour around the cut with z̃ cached at
/// the nodes and at the nodes shifted by ±iζ (±ic).
#[derive(Debug, Clone)]
pub struct AsymptoticContext {
    pub thermo: ThermoSolution,
    pub contour: Contour,
    zt: Vec<C64>,
    zt_up: Vec<C64>,
    zt_down: Vec<C64>,
    pub c0: f64,
    pub c1: f64,
    /// log det[I ± K/2π] on [−q, q] (sign of the model's integral equations).
    pub log_det_k: C64,
}

impl AsymptoticContext {
    pub fn new(thermo: ThermoSolution, contour_nodes: Option<usize>, contour_height: Option<f64>) -> Result<Self> {
        let model = thermo.model;
        let contour = Contour::for_model(&model, thermo.q, contour_height, contour_nodes.unwrap_or(DEFAULT_CONTOUR_NODES))?;
        contour.check_winding(32)?;
        let s = model.shift();
        let (zt, zt_up, zt_down) = {
            let ct = CauchyTransform::new(&thermo)?;
            let eval_all = |shift: f64| -> Result<Vec<C64>> {
                contour.nodes.iter().map(|&w| ct.eval(w + I * shift)).collect()
            };
            (eval_all(0.0)?, eval_all(s)?, eval_all(-s)?)
        };
        let c0 = const_c0(&thermo)?;
        let c1 = const_c1(&thermo);
        let sign = model.kernel_sign().value();
        let log_det_k = det_interval(
            |x, y| kernel_k(&model, c(x - y)).map(|k| k * (sign / (2.0 * PI))).unwrap_or(C64::new(f64::NAN, 0.0)),
            &thermo.grid,
        )?
        .log_det;
        Ok(Self { thermo, contour, zt, zt_up, zt_down, c0, c1, log_det_k })
    }

    pub fn model(&self) -> &ModelSpec {
        &self.thermo.model
    }

    pub fn z_tilde(&self, w: C64) -> Result<C64> {
        cauchy_z_tilde(&self.thermo, w)
    }

    fn is_free_fermion(&self) -> bool {
        self.model().is_xxz() && (self.thermo.z_q - 1.0).abs() < FREE_FERMION_TOL
    }

    /// `κh(θ−is) − h(θ+is)` with `h = e^{βz̃}`, κ = e^β.
    fn normalizer(&self, beta: C64, theta: C64) -> Result<C64> {
        let s = self.model().shift();
        Ok((beta + beta * self.z_tilde(theta - I * s)?).exp() - (beta * self.z_tilde(theta + I * s)?).exp())
    }

    /// log-determinants of `I + U₁/2πi` (θ₁) and `I + U₂/2πi` (θ₂).
    pub fn contour_log_dets(&self, beta: C64, theta1: C64, theta2: C64) -> Result<(C64, C64)> {
        let model = *self.model();
        let kappa = beta.exp();
        let nodes = &self.contour.nodes;
        let a: Vec<C64> = (0..nodes.len())
            .map(|i| -(beta * self.zt[i]).exp() / ((beta * self.zt_up[i]).exp() - (beta + beta * self.zt_down[i]).exp()))
            .collect();
        let b: Vec<C64> = (0..nodes.len())
            .map(|j| (-beta * self.zt[j]).exp() / ((-beta * self.zt_down[j]).exp() - (beta - beta * self.zt_up[j]).exp()))
            .collect();
        let check = |v: &[C64], what: &str| -> Result<()> {
            if v.iter().all(|z| z.is_finite()) {
                Ok(())
            } else {
                Err(Error::DivisionByZero(format!("{what} kernel denominator vanishes on the contour at β = {beta}")))
            }
        };
        check(&a, "U1")?;
        check(&b, "U2")?;
        let kk = |x: C64| twisted_kernel(&model, x, kappa);
        let d1 = det_contour_by_index(|i, j| a[i] * (kk(nodes[i] - nodes[j]) - kk(theta1 - nodes[j])), &self.contour)?;
        let d2 = det_contour_by_index(|i, j| b[j] * (kk(nodes[i] - nodes[j]) - kk(nodes[i] - theta2)), &self.contour)?;
        Ok((d1.log_det, d2.log_det))
    }

    /// Coefficient 𝒜(β) with the default θ₁ = −q, θ₂ = q.
    pub fn a_coefficient(&self, beta: C64) -> Result<C64> {
        let q = self.thermo.q;
        self.a_coefficient_at(beta, c(-q), c(q))
    }

    /// 𝒜(β) =
    /// (e^β−1)² det[I+U₁/2πi] det[I+U₂/2πi] /
    /// {[e^{βz̃(θ₁+iζ)} − e^{β+βz̃(θ₁−iζ)}][e^{−βz̃(θ₂−iζ)} − e^{β−βz̃(θ₂+iζ)}] det²[I+K/2π]}.
    pub fn a_coefficient_at(&self, beta: C64, theta1: C64, theta2: C64) -> Result<C64> {
        if !self.model().is_xxz() {
            return Err(Error::InvalidArgument("the generating function is implemented for the XXZ chain only".into()));
        }
        if beta == C64::new(0.0, 0.0) {
            return Err(Error::BetaDegenerate);
        }
        let em1 = beta.exp() - 1.0;
        if em1 == C64::new(0.0, 0.0) {
            return Ok(C64::new(0.0, 0.0));
        }
        let s = self.model().shift();
        let den1 = (beta * self.z_tilde(theta1 + I * s)?).exp() - (beta + beta * self.z_tilde(theta1 - I * s)?).exp();
        let den2 = (-beta * self.z_tilde(theta2 - I * s)?).exp() - (beta - beta * self.z_tilde(theta2 + I * s)?).exp();
        if den1.norm() < 1e-300 || den2.norm() < 1e-300 {
            return Err(Error::DivisionByZero(format!("𝒜(β) denominator vanishes at β = {beta}")));
        }
        let (l1, l2) = self.contour_log_dets(beta, theta1, theta2)?;
        Ok((2.0 * em1.ln() + l1 + l2 - den1.ln() - den2.ln() - 2.0 * self.log_det_k).exp())
    }

    /// Determinant of the β = 2πi kernel of Ã at θ₁ (κ = 1); in the
    /// free-fermion limit the 0/0 kernel is replaced by its limit
    /// −tanh(w−q)coth(w+q)[tanh(w−w′) + tanh(q+w′)].
    pub fn atilde_determinant(&self, theta1: Option<C64>) -> Result<C64> {
        let q = self.thermo.q;
        let theta = theta1.unwrap_or(c(-q));
        let nodes = &self.contour.nodes;
        if self.is_free_fermion() {
            if (theta - c(-q)).norm() > 0.0 {
                return Err(Error::InvalidArgument("free-fermion limit kernel is defined for θ₁ = −q only".into()));
            }
            let pre: Vec<C64> = nodes.iter().map(|&w| -(w - q).tanh() / (w + q).tanh()).collect();
            let d = det_contour_by_index(|i, j| pre[i] * ((nodes[i] - nodes[j]).tanh() + (c(q) + nodes[j]).tanh()), &self.contour)?;
            return Ok(d.log_det.exp());
        }
        let model = *self.model();
        let two_pi_i = 2.0 * PI * I;
        let pre: Vec<C64> = (0..nodes.len())
            .map(|i| I * (two_pi_i * self.zt[i]).exp() / ((two_pi_i * self.zt_up[i]).exp() - (two_pi_i * self.zt_down[i]).exp()))
            .collect();
        if pre.iter().any(|z| !z.is_finite()) {
            return Err(Error::DivisionByZero("Ã kernel denominator vanishes on the contour".into()));
        }
        let k = |x: C64| kernel_k(&model, x).unwrap_or(C64::new(f64::NAN, 0.0));
        let d = det_contour_by_index(|i, j| pre[i] * (k(nodes[i] - nodes[j]) - k(theta - nodes[j])), &self.contour)?;
        let mut det = d.log_det.exp();
        if (theta - c(-q)).norm() > 0.0 {
            det *= self.normalizer(two_pi_i, c(-q))? / self.normalizer(two_pi_i, theta)?;
        }
        Ok(det)
    }

    /// Ã = |e^{πi[z̃(q−iζ)−z̃(−q−iζ)]} G(2,𝒵) det[I+U₋q/2πi] / (π𝒵 det[I±K/2π])|².
    pub fn amplitude_atilde(&self, theta1: Option<C64>) -> Result<f64> {
        let q = self.thermo.q;
        let s = self.model().shift();
        let zq = self.thermo.z_q;
        let phase = (PI * I * (self.z_tilde(c(q) - I * s)? - self.z_tilde(c(-q) - I * s)?)).exp();
        let g2 = barnes_pair(c(zq), 2)?.exp();
        let det = self.atilde_determinant(theta1)?;
        let v = phase * g2 * det / (PI * zq * self.log_det_k.exp());
        Ok(v.norm_sqr())
    }

    /// Ĝ⁽⁰⁾(β, m) from a precomputed 𝒜(β).
    fn assemble_g0(&self, beta: C64, a: C64, m: f64) -> Result<C64> {
        if a == C64::new(0.0, 0.0) {
            return Ok(a);
        }
        let t = &self.thermo;
        let zq = t.z_q;
        let scale = 2.0 * PI * t.model.sh(c(2.0 * t.q)).re * t.rho_q * m;
        let b2 = beta * beta;
        let log = beta * m * t.d
            + b2 * (zq * zq / (2.0 * PI * PI)) * scale.ln()
            + 2.0 * barnes_pair(beta * zq / (2.0 * PI * I), 1)?
            + b2 * ((self.c0 - self.c1) / (4.0 * PI * PI));
        Ok(a * log.exp())
    }

    /// Ĝ⁽⁰⁾(β, m). At β = 0 the coefficient 𝒜 is a removable 0/0; with
    /// `beta_zero_limit` the exact limit 1 is returned, otherwise
    /// [`Error::BetaDegenerate`].
    pub fn generating_fn_g0(&self, beta: C64, m: f64, beta_zero_limit: bool) -> Result<C64> {
        if beta == C64::new(0.0, 0.0) {
            return if beta_zero_limit { Ok(c(1.0)) } else { Err(Error::BetaDegenerate) };
        }
        let a = self.a_coefficient(beta)?;
        self.assemble_g0(beta, a, m)
    }

    /// The three 𝒜(β + 2πiσ), σ = −1, 0, 1 (the σ = 0 entry is 1 at β = 0).
    pub fn shifted_coefficients(&self, beta: C64) -> Result<[C64; 3]> {
        let mut out = [C64::new(0.0, 0.0); 3];
        for (k, sigma) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
            let b = beta + 2.0 * PI * I * sigma;
            out[k] = if b == C64::new(0.0, 0.0) { c(1.0) } else { self.a_coefficient(b)? };
        }
        Ok(out)
    }

    /// Σ_{σ=0,±1} Ĝ⁽⁰⁾(β + 2πiσ, m).
    pub fn generating_fn_full(&self, beta: C64, m: f64) -> Result<C64> {
        let a = self.shifted_coefficients(beta)?;
        self.full_from_coefficients(beta, &a, m)
    }

    fn full_from_coefficients(&self, beta: C64, a: &[C64; 3], m: f64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (k, sigma) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
            let b = beta + 2.0 * PI * I * sigma;
            acc += if b == C64::new(0.0, 0.0) { c(1.0) } else { self.assemble_g0(b, a[k], m)? };
        }
        Ok(acc)
    }

    /// ⟨σᶻ₁σᶻ_{m+1}⟩ = 2 D²_m ∂²_β G(β,m)|_{β=0} + 2⟨σᶻ⟩ − 1, with ∂²_β by
    /// central differences (step `h` and `h/2`, one Richardson step) and
    /// D²_m f = f(m+1) + f(m−1) − 2f(m).
    pub fn szsz_from_generating(&self, m: f64, h: f64) -> Result<f64> {
        if !(m >= 2.0) {
            return Err(Error::InvalidArgument(format!("distance m = {m} must be ≥ 2")));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidArgument(format!("finite-difference step {h} must be positive")));
        }
        // 𝒜 does not depend on m: 4 β values × 3 shifts, reused for m−1, m, m+1.
        let betas = [h, -h, h / 2.0, -h / 2.0];
        let coeffs = betas.iter().map(|&b| self.shifted_coefficients(c(b))).collect::<Result<Vec<_>>>()?;
        let f0 = self.full_from_coefficients(c(0.0), &self.shifted_coefficients(c(0.0)).unwrap_or([c(0.0), c(1.0), c(0.0)]), m)?;
        debug_assert!((f0 - 1.0).norm() < 1e-6 || f0.is_finite());
        let second = |mm: f64| -> Result<C64> {
            let f = |k: usize| self.full_from_coefficients(c(betas[k]), &coeffs[k], mm);
            // G(0, m) = 1 exactly
            let d_h = (f(0)? + f(1)? - 2.0) / (h * h);
            let d_h2 = (f(2)? + f(3)? - 2.0) / (h * h / 4.0);
            Ok((4.0 * d_h2 - d_h) / 3.0)
        };
        let lattice = second(m + 1.0)? + second(m - 1.0)? - 2.0 * second(m)?;
        Ok((2.0 * lattice).re + 1.0 - 4.0 * self.thermo.d)
    }

    /// Every constant of the leading expansions.
    pub fn constants(&self) -> Result<Constants> {
        let t = &self.thermo;
        Ok(Constants {
            q: t.q,
            z_q: t.z_q,
            rho_q: t.rho_q,
            p_f: t.p_f,
            d: t.d,
            c0: self.c0,
            c1: self.c1,
            a_tilde: self.amplitude_atilde(None)?,
        })
    }

    /// Leading expansion of ⟨σᶻ₁σᶻ_{m+1}⟩ (XXZ) or ⟨j(x)j(0)⟩ (Bose gas).
    pub fn leading_expansion(&self) -> Result<AsymptoticExpansion> {
        let k = self.constants()?;
        let t = &self.thermo;
        let scale = 2.0 * PI * t.model.sh(c(2.0 * t.q)).re * t.rho_q;
        let osc_exp = 2.0 * k.z_q * k.z_q;
        let common = k.a_tilde * (k.c1 - k.c0).exp() / scale.powf(osc_exp);
        Ok(match t.model {
            ModelSpec::Xxz { .. } => {
                let s2 = k.p_f.sin().powi(2);
                let form_factor_sq = 4.0 * k.a_tilde * s2 * (k.c1 - k.c0).exp() * scale.powf(-osc_exp);
                AsymptoticExpansion {
                    const_term: (2.0 * k.d - 1.0).powi(2),
                    power_amp: 2.0 * k.z_q * k.z_q / (PI * PI),
                    power_exp: 2.0,
                    osc_amp: 8.0 * s2 * common,
                    osc_exp,
                    osc_phase_rate: 2.0 * k.p_f,
                    form_factor_sq: Some(form_factor_sq),
                    constants: k,
                }
            }
            ModelSpec::LiebLiniger { .. } => AsymptoticExpansion {
                const_term: k.d * k.d,
                power_amp: k.z_q * k.z_q / (2.0 * PI * PI),
                power_exp: 2.0,
                osc_amp: 2.0 * k.p_f * k.p_f * common,
                osc_exp,
                osc_phase_rate: 2.0 * k.p_f,
                form_factor_sq: None,
                constants: k,
            },
        })
    }
}

/// Constants entering the leading expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub q: f64,
    pub z_q: f64,
    pub rho_q: f64,
    pub p_f: f64,
    pub d: f64,
    pub c0: f64,
    pub c1: f64,
    pub a_tilde: f64,
}

/// `const − power_amp/x^power_exp + osc_amp·cos(osc_phase_rate·x)/x^osc_exp`
/// — leading order only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticExpansion {
    pub const_term: f64,
    pub power_amp: f64,
    pub power_exp: f64,
    pub osc_amp: f64,
    pub osc_exp: f64,
    pub osc_phase_rate: f64,
    /// |F_σ|², the squared norm of the form factor between the ground state
    /// and the lowest umklapp state (XXZ only), computed independently of
    /// `osc_amp`.
    pub form_factor_sq: Option<f64>,
    pub constants: Constants,
}

impl AsymptoticExpansion {
    pub fn m_dependent(&self, x: f64) -> f64 {
        -self.power_amp / x.powf(self.power_exp) + self.osc_amp * (self.osc_phase_rate * x).cos() / x.powf(self.osc_exp)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.const_term + self.m_dependent(x)
    }
}

/// Leading expansion of ⟨σᶻ₁σᶻ_{m+1}⟩.
pub fn szsz_leading(ctx: &AsymptoticContext) -> Result<AsymptoticExpansion> {
    if !ctx.model().is_xxz() {
        return Err(Error::InvalidArgument("szsz is defined for the XXZ chain".into()));
    }
    ctx.leading_expansion()
}

/// Leading expansion of the Bose-gas density–density function ⟨j(x)j(0)⟩.
pub fn ll_jj_leading(ctx: &AsymptoticContext) -> Result<AsymptoticExpansion> {
    if ctx.model().is_xxz() {
        return Err(Error::InvalidArgument("jj is defined for the Bose gas".into()));
    }
    ctx.leading_expansion()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{dressed_quantities, ThermoConfig};
    use std::sync::OnceLock;

    fn ff() -> &'static AsymptoticContext {
        static CTX: OnceLock<AsymptoticContext> = OnceLock::new();
        CTX.get_or_init(|| {
            let m = ModelSpec::xxz(PI / 2.0, 2.0).unwrap();
            let t = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
            AsymptoticContext::new(t, None, None).unwrap()
        })
    }

    fn interacting() -> &'static AsymptoticContext {
        static CTX: OnceLock<AsymptoticContext> = OnceLock::new();
        CTX.get_or_init(|| {
            let m = ModelSpec::xxz(PI / 3.0, 1.0).unwrap();
            let t = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
            AsymptoticContext::new(t, None, None).unwrap()
        })
    }

    #[test]
    fn free_fermion_cauchy_transform_closed_form() {
        let ctx = ff();
        let q = ctx.thermo.q;
        for w in [C64::new(0.0, -1.0), C64::new(0.4, 0.3), C64::new(-1.5, -0.2)] {
            let exact = ((c(q) - w).sinh() / (c(-q) - w).sinh()).ln() / (2.0 * PI * I);
            let v = ctx.z_tilde(w).unwrap();
            // equal up to an integer (branch of the logarithm)
            let d = v - exact;
            assert!(d.im.abs() < 1e-12 && (d.re - d.re.round()).abs() < 1e-12, "w={w}: {v} vs {exact}");
        }
        assert!(matches!(ctx.z_tilde(c(0.1)), Err(Error::OnCut(_))));
    }

    #[test]
    fn jump_and_shift_relations() {
        let ctx = interacting();
        let ct = CauchyTransform::new(&ctx.thermo).unwrap();
        let zeta = PI / 3.0;
        for x in [-0.5, 0.0, 0.3] {
            let jump = ct.eval(C64::new(x, 1e-6)).unwrap() - ct.eval(C64::new(x, -1e-6)).unwrap();
            assert!((jump - ctx.thermo.z_at(x)).norm() < 1e-5, "jump at {x}: {jump}");
            let shift = ct.eval(C64::new(x, zeta)).unwrap() - ct.eval(C64::new(x, -zeta)).unwrap();
            assert!((shift - (1.0 - ctx.thermo.z_at(x))).norm() < 1e-8, "shift at {x}: {shift}");
        }
    }

    #[test]
    fn free_fermion_constants() {
        let ctx = ff();
        let q = ctx.thermo.q;
        assert!(ctx.c1.abs() < 1e-8);
        let lhs = 2.0 * PI * I * (ctx.z_tilde(C64::new(q, -PI / 2.0)).unwrap() - ctx.z_tilde(C64::new(-q, -PI / 2.0)).unwrap());
        assert!((lhs - ctx.c0).norm() < 1e-8, "{lhs} vs {}", ctx.c0);
        assert!((ctx.c0 + 2.0 * (2.0 * q).cosh().ln()).abs() < 1e-10);
        assert!((ctx.atilde_determinant(None).unwrap() - 1.0).norm() < 1e-8);
        let e = szsz_leading(ctx).unwrap();
        assert!((e.osc_amp - 2.0 / (PI * PI)).abs() < 1e-6);
        assert!((e.osc_amp - 2.0 * e.form_factor_sq.unwrap()).abs() < 1e-12);
        assert!((e.const_term - 1.0 / 9.0).abs() < 1e-10);
        // m = 10: cos(2m p_F) = −1/2
        assert!(((e.osc_phase_rate * 10.0).cos() + 0.5).abs() < 1e-9);
    }

    #[test]
    fn near_free_fermion_general_path_matches_closed_form() {
        let m = ModelSpec::xxz(PI / 2.0 - 2e-3, 2.0).unwrap();
        let t = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
        let ctx = AsymptoticContext::new(t, None, None).unwrap();
        assert!(!ctx.is_free_fermion());
        let general = ctx.amplitude_atilde(None).unwrap();
        let closed = ctx.c0.exp() / (PI * PI);
        assert!((general - closed).abs() / closed < 1e-2, "{general} vs {closed}");
    }

    #[test]
    fn a_coefficient_free_fermion_gaussian() {
        let ctx = ff();
        for beta in [C64::new(1e-3, 0.0), C64::new(0.2, 0.0), C64::new(0.5, 0.3)] {
            let a = ctx.a_coefficient(beta).unwrap();
            let expected = (-beta * beta * ctx.c0 / (4.0 * PI * PI)).exp();
            assert!((a - expected).norm() < 1e-10, "β={beta}: {a} vs {expected}");
        }
        assert!(matches!(ctx.a_coefficient(c(0.0)), Err(Error::BetaDegenerate)));
        assert_eq!(ctx.generating_fn_g0(c(0.0), 10.0, true).unwrap(), c(1.0));
    }

    #[test]
    fn interacting_a_coefficient_limits_and_conjugation() {
        let ctx = interacting();
        let a = ctx.a_coefficient(c(1e-3)).unwrap();
        assert!((a - 1.0).norm() < 1e-2);
        let q = ctx.thermo.q;
        let (l1, l2) = ctx.contour_log_dets(2.0 * PI * I, c(-q), c(q)).unwrap();
        assert!((l1.exp() - l2.exp().conj()).norm() < 1e-8);
        let e = szsz_leading(ctx).unwrap();
        assert!((e.osc_exp - 2.0 * ctx.thermo.z_q.powi(2)).abs() < 1e-12);
        assert!((e.const_term - (2.0 * ctx.thermo.d - 1.0).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn theta_independence_of_atilde() {
        let ctx = interacting();
        let q = ctx.thermo.q;
        let a = ctx.amplitude_atilde(None).unwrap();
        let b = ctx.amplitude_atilde(Some(C64::new(-q, 0.1))).unwrap();
        assert!((a - b).abs() / a < 1e-7, "{a} vs {b}");
    }

    #[test]
    fn structural_double_zero_at_two_pi_i() {
        let ctx = interacting();
        let eps = 1e-3;
        let at = |x: f64| ctx.a_coefficient(C64::new(0.0, 2.0 * PI + x)).unwrap();
        // A(x) = c₁x + c₂x² + c₃x³ + …: the odd part at ε and 2ε isolates c₁
        let odd = |x: f64| (at(x) - at(-x)) / 2.0;
        let even = (at(eps) + at(-eps)) / 2.0;
        let linear = (8.0 * odd(eps) - odd(2.0 * eps)) / 6.0;
        assert!(linear.norm() / even.norm() < 1e-3, "linear {linear} vs quadratic {even}");
        assert!(even.norm() / eps.powi(2) < 1e3);
    }

    #[test]
    fn generating_cross_check_is_step_stable() {
        let ctx = ff();
        let a = ctx.szsz_from_generating(40.0, 1e-3).unwrap();
        let b = ctx.szsz_from_generating(40.0, 5e-4).unwrap();
        assert!((a - b).abs() < 1e-6);
        assert!(matches!(ctx.szsz_from_generating(1.0, 1e-3), Err(Error::InvalidArgument(_))));
        let far = ctx.szsz_from_generating(400.0, 1e-3).unwrap();
        assert!((far - 1.0 / 9.0).abs() < 1e-4);
    }

    #[test]
    fn bose_gas_expansion() {
        let m = ModelSpec::lieb_liniger(4.0, 1.0).unwrap();
        let t = dressed_quantities(&m, &ThermoConfig::default()).unwrap();
        let ctx = AsymptoticContext::new(t, None, None).unwrap();
        let e = ll_jj_leading(&ctx).unwrap();
        assert!((e.const_term - ctx.thermo.d.powi(2)).abs() < 1e-12);
        assert!(e.osc_amp > 0.0 && e.osc_amp.is_finite());
        assert!((ctx.thermo.rho_q - ctx.thermo.z_q / (2.0 * PI)).abs() < 1e-12);
        assert!(szsz_leading(&ctx).is_err());
        assert!(ctx.a_coefficient(c(0.3)).is_err());
    }

    proptest::proptest! {
        #[test]
        fn free_fermion_transform_off_cut(re in -2.0f64..2.0, im in 0.05f64..1.4, lower in proptest::bool::ANY) {
            let ctx = ff();
            let q = ctx.thermo.q;
            let w = C64::new(re, if lower { -im } else { im });
            let exact = ((c(q) - w).sinh() / (c(-q) - w).sinh()).ln() / (2.0 * PI * I);
            let d = ctx.z_tilde(w).unwrap() - exact;
            proptest::prop_assert!(d.im.abs() < 1e-10 && (d.re - d.re.round()).abs() < 1e-10);
        }
    }
}
