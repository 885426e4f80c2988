//! Generalized sine kernel
//!
//! ```text
//! V(λ,μ) = F(λ) · sin{(m/2)[p₀(λ)−p₀(μ)] − (i/2)[g(λ)−g(μ)]} / (π sinh(λ−μ))
//! ```
//!
//! on `[−q, q]`: the exact Fredholm determinant `det(I + γV)` at finite `m`,
//! its leading large-`m` term `W₀`, the first oscillating corrections `W±₁`,
//! and the relation `W₊₁ = exp(W₀[ν−1] − W₀[ν])` between them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::fredholm::det_interval;
use crate::numkit::{barycentric_derivative, barycentric_eval, barycentric_weights, gauss_legendre};
use crate::specfun::{barnes_pair, log_gamma};
use crate::{Error, Grid, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Separation below which removable singularities are replaced by their
/// Taylor limits.
const REMOVABLE_EPS: f64 = 1e-4;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;
/// `λ ↦ (F′(λ), F″(λ))`.
pub type ComplexDerivs = Arc<dyn Fn(f64) -> (C64, C64) + Send + Sync>;

/// A generalized-sine-kernel determinant `det(I + γV)` at distance `m`.
#[derive(Clone)]
pub struct GskProblem {
    pub q: f64,
    pub p0: RealFn,
    pub p0_deriv: RealFn,
    pub f: ComplexFn,
    /// Analytic `F′, F″` when available; otherwise ν′ and ν″ come from
    /// spectral differentiation of the sampled ν.
    pub f_derivs: Option<ComplexDerivs>,
    pub g: ComplexFn,
    pub g_deriv: ComplexFn,
    pub gamma: C64,
    pub m: f64,
}

impl fmt::Debug for GskProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GskProblem")
            .field("q", &self.q)
            .field("gamma", &self.gamma)
            .field("m", &self.m)
            .field("analytic_f_derivs", &self.f_derivs.is_some())
            .finish()
    }
}

impl GskProblem {
    /// The pure sine kernel: `p₀(λ) = λ`, `F ≡ 1`, `g ≡ 0`.
    pub fn sine_kernel(q: f64, gamma: C64, m: f64) -> Self {
        Self {
            q,
            p0: Arc::new(|x| x),
            p0_deriv: Arc::new(|_| 1.0),
            f: Arc::new(|_| C64::new(1.0, 0.0)),
            f_derivs: Some(Arc::new(|_| (C64::new(0.0, 0.0), C64::new(0.0, 0.0)))),
            g: Arc::new(|_| C64::new(0.0, 0.0)),
            g_deriv: Arc::new(|_| C64::new(0.0, 0.0)),
            gamma,
            m,
        }
    }

    /// Free-fermion point of the XXZ chain: `p₀(λ) = 2 arctan(tanh λ)`,
    /// `F ≡ 1`, `g ≡ 0`, `γ = e^β − 1`.
    pub fn free_fermion(q: f64, beta: C64, m: f64) -> Self {
        Self {
            p0: Arc::new(|x: f64| 2.0 * x.tanh().atan()),
            p0_deriv: Arc::new(|x: f64| 2.0 / (2.0 * x).cosh()),
            ..Self::sine_kernel(q, beta.exp() - 1.0, m)
        }
    }

    pub fn with_m(&self, m: f64) -> Self {
        Self { m, ..self.clone() }
    }

    pub fn with_gamma(&self, gamma: C64) -> Self {
        Self { gamma, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0) || !self.q.is_finite() {
            return Err(Error::InvalidArgument(format!("q = {} must be positive", self.q)));
        }
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidArgument(format!("distance m = {} must be positive", self.m)));
        }
        Ok(())
    }

    /// Kernel `V(λ, μ)` with the analytic diagonal.
    pub fn kernel(&self, lambda: f64, mu: f64) -> C64 {
        let d = lambda - mu;
        if d.abs() < 1e-12 {
            return (self.f)(lambda) * (self.m * (self.p0_deriv)(lambda) - I * (self.g_deriv)(lambda)) / (2.0 * PI);
        }
        let arg = 0.5 * self.m * ((self.p0)(lambda) - (self.p0)(mu)) - 0.5 * I * ((self.g)(lambda) - (self.g)(mu));
        (self.f)(lambda) * arg.sin() / (PI * d.sinh())
    }

    /// Node count that resolves the oscillations of the kernel.
    pub fn default_nodes(&self) -> usize {
        let span = (self.p0)(self.q) - (self.p0)(-self.q);
        (1.25 * self.m * span / 2.0 + 120.0).ceil() as usize
    }

    /// ν(λ) = −log(1 + γF(λ))/2πi.
    pub fn nu(&self, lambda: f64) -> Result<C64> {
        let a = 1.0 + self.gamma * (self.f)(lambda);
        if a.norm() < 1e-300 {
            return Err(Error::InvalidArgument(format!("1 + γF vanishes at λ = {lambda}")));
        }
        Ok(-a.ln() / (2.0 * PI * I))
    }
}

/// `log det(I + γV)` by symmetrized Gauss–Legendre Nyström with `n` nodes.
pub fn exact_gsk_logdet(p: &GskProblem, n: usize) -> Result<C64> {
    p.validate()?;
    if p.gamma == C64::new(0.0, 0.0) {
        return Ok(C64::new(0.0, 0.0));
    }
    let grid = gauss_legendre(n, -p.q, p.q)?;
    Ok(det_interval(|x, y| p.gamma * p.kernel(x, y), &grid)?.log_det)
}

/// How ν′, ν″ were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuDerivativeSource {
    Analytic,
    Spectral,
}

/// Samples of ν and its first two derivatives on a grid, plus edge values.
#[derive(Debug, Clone)]
pub struct NuFunction {
    pub grid: Grid,
    pub samples: Vec<C64>,
    pub d1: Vec<C64>,
    pub d2: Vec<C64>,
    pub nu_plus: C64,
    pub nu_minus: C64,
    /// `(ν′, ν″)` at `+q` and `−q`.
    pub edge_plus: (C64, C64),
    pub edge_minus: (C64, C64),
    pub source: NuDerivativeSource,
}

impl NuFunction {
    pub fn new(p: &GskProblem, n: usize) -> Result<Self> {
        p.validate()?;
        let grid = gauss_legendre(n, -p.q, p.q)?;
        let samples = grid.nodes.iter().map(|&x| p.nu(x)).collect::<Result<Vec<_>>>()?;
        let nu_plus = p.nu(p.q)?;
        let nu_minus = p.nu(-p.q)?;
        let tpi = 2.0 * PI * I;
        match &p.f_derivs {
            Some(fd) => {
                let derivs = |x: f64| {
                    let f = (p.f)(x);
                    let (f1, f2) = fd(x);
                    let a = 1.0 + p.gamma * f;
                    let d1 = -p.gamma * f1 / (tpi * a);
                    let d2 = -(p.gamma * f2 * a - p.gamma * p.gamma * f1 * f1) / (tpi * a * a);
                    (d1, d2)
                };
                let (d1, d2) = grid.nodes.iter().map(|&x| derivs(x)).unzip();
                Ok(Self {
                    edge_plus: derivs(p.q),
                    edge_minus: derivs(-p.q),
                    grid,
                    samples,
                    d1,
                    d2,
                    nu_plus,
                    nu_minus,
                    source: NuDerivativeSource::Analytic,
                })
            }
            None => {
                let bw = barycentric_weights(&grid.nodes);
                let d1 = barycentric_derivative(&grid.nodes, &bw, &samples);
                let d2 = barycentric_derivative(&grid.nodes, &bw, &d1);
                let at = |x: f64| (barycentric_eval(&grid.nodes, &bw, &d1, x), barycentric_eval(&grid.nodes, &bw, &d2, x));
                Ok(Self {
                    edge_plus: at(p.q),
                    edge_minus: at(-p.q),
                    grid,
                    samples,
                    d1,
                    d2,
                    nu_plus,
                    nu_minus,
                    source: NuDerivativeSource::Spectral,
                })
            }
        }
    }
}

/// Default quadrature size for the W₀ integrals.
pub const W0_NODES: usize = 160;

/// Leading term `W₀` of `log det(I + γV)`.
pub fn w0(p: &GskProblem) -> Result<C64> {
    let nu = NuFunction::new(p, W0_NODES)?;
    w0_with_nu(p, &nu, C64::new(0.0, 0.0))
}

/// `W₀` for the function `ν + shift` (shift constant).
pub fn w0_with_nu(p: &GskProblem, nu: &NuFunction, shift: C64) -> Result<C64> {
    p.validate()?;
    let q = p.q;
    let m = p.m;
    let g = &nu.grid;
    let vals: Vec<C64> = nu.samples.iter().map(|&v| v + shift).collect();
    let nu_sigma = [(1.0, nu.nu_plus + shift, nu.edge_plus), (-1.0, nu.nu_minus + shift, nu.edge_minus)];

    // −∫ (i m p₀′ + g′) ν
    let t1: C64 = -g
        .nodes
        .iter()
        .zip(&g.weights)
        .zip(&vals)
        .map(|((&x, &w), &v)| (I * m * (p.p0_deriv)(x) + (p.g_deriv)(x)) * v * w)
        .sum::<C64>();

    // −Σ_σ [ν_σ² log(m sinh 2q p₀′(σq)) − log G(1, ν_σ)]
    let mut t2 = C64::new(0.0, 0.0);
    for &(s, ns, _) in &nu_sigma {
        let arg = m * (2.0 * q).sinh() * (p.p0_deriv)(s * q);
        t2 -= ns * ns * arg.ln() - barnes_pair(ns, 1)?;
    }

    // ½ ∫∫ [ν′(λ)ν(μ) − ν(λ)ν′(μ)] / tanh(λ−μ)
    let n = g.len();
    let mut t3 = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let dx = g.nodes[i] - g.nodes[j];
            let integrand = if dx.abs() < REMOVABLE_EPS {
                vals[i] * nu.d2[i] - nu.d1[i] * nu.d1[i]
            } else {
                (nu.d1[i] * vals[j] - vals[i] * nu.d1[j]) / dx.tanh()
            };
            t3 += integrand * (g.weights[i] * g.weights[j]);
        }
    }
    t3 *= 0.5;

    // Σ_σ σ ν_σ ∫ (ν_σ − ν(λ)) / tanh(σq − λ)
    let mut t4 = C64::new(0.0, 0.0);
    for &(s, ns, (e1, e2)) in &nu_sigma {
        let integral: C64 = g
            .nodes
            .iter()
            .zip(&g.weights)
            .zip(&vals)
            .map(|((&x, &w), &v)| {
                let sep = s * q - x;
                let val = if sep.abs() < REMOVABLE_EPS { e1 - e2 * sep / 2.0 } else { (ns - v) / sep.tanh() };
                val * w
            })
            .sum();
        t4 += s * ns * integral;
    }
    Ok(t1 + t2 + t3 + t4)
}

/// Edge integral `∫ (ν_σ − ν(λ)) / tanh(q − σλ)`.
fn edge_integral(p: &GskProblem, nu: &NuFunction, sigma: f64) -> C64 {
    let (ns, (e1, e2)) = if sigma > 0.0 { (nu.nu_plus, nu.edge_plus) } else { (nu.nu_minus, nu.edge_minus) };
    nu.grid
        .nodes
        .iter()
        .zip(&nu.grid.weights)
        .zip(&nu.samples)
        .map(|((&x, &w), &v)| {
            // q − σλ = σ(σq − λ)
            let sep = sigma * p.q - x;
            let val = if sep.abs() < REMOVABLE_EPS { sigma * (e1 - e2 * sep / 2.0) } else { (ns - v) / (p.q - sigma * x).tanh() };
            val * w
        })
        .sum()
}

/// `u(q)` of the oscillating corrections,
///
/// ```text
/// u = Π_σ e^{σg(σq)} [sinh 2q · p₀′(σq)]^{2ν_σ} Γ(−ν_σ)/Γ(ν_σ) · exp[−2∫(ν_σ−ν(λ))/tanh(q−σλ) dλ]
/// ```
///
/// The edge exponent carries −2 for both σ (not −2σ): that is the factor
/// forced by `W₊₁ = exp(W₀[ν−1] − W₀[ν])` after integrating the double
/// integral of `W₀` by parts, and it is the sign that matches the exact
/// determinant when `W₊₁` dominates the remainder.
pub fn u_factor(p: &GskProblem, nu: &NuFunction) -> Result<C64> {
    let mut u = C64::new(1.0, 0.0);
    for (s, ns) in [(1.0, nu.nu_plus), (-1.0, nu.nu_minus)] {
        let sh = (2.0 * p.q).sinh() * (p.p0_deriv)(s * p.q);
        let gamma_ratio = (log_gamma(-ns)? - log_gamma(ns)?).exp();
        u *= (s * (p.g)(s * p.q)).exp() * (2.0 * ns * sh.ln()).exp() * gamma_ratio * (-2.0 * edge_integral(p, nu, s)).exp();
    }
    Ok(u)
}

/// `W±₁` including its phase `e^{±im[p₀(q)−p₀(−q)]}`.
pub fn w_osc(p: &GskProblem, sign: i32) -> Result<C64> {
    let nu = NuFunction::new(p, W0_NODES)?;
    w_osc_with_nu(p, &nu, sign)
}

pub fn w_osc_with_nu(p: &GskProblem, nu: &NuFunction, sign: i32) -> Result<C64> {
    p.validate()?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
    }
    let s = sign as f64;
    let prod = nu.nu_plus * nu.nu_minus;
    if prod == C64::new(0.0, 0.0) {
        return Ok(C64::new(0.0, 0.0));
    }
    let q = p.q;
    let u = u_factor(p, nu)?;
    let u_pow = if sign > 0 { u } else { 1.0 / u };
    let den = (2.0 * q).sinh().powi(2) * (p.p0_deriv)(q) * (p.p0_deriv)(-q);
    let m_pow = ((-2.0 + 2.0 * s * (nu.nu_plus + nu.nu_minus)) * p.m.ln()).exp();
    let phase = (I * s * p.m * ((p.p0)(q) - (p.p0)(-q))).exp();
    Ok(prod * u_pow / den * m_pow * phase)
}

/// `|W₊₁ − exp(W₀[ν−1] − W₀[ν])| / |W₊₁|`.
pub fn relation_residual(p: &GskProblem) -> Result<f64> {
    let nu = NuFunction::new(p, W0_NODES)?;
    let wp = w_osc_with_nu(p, &nu, 1)?;
    let base = w0_with_nu(p, &nu, C64::new(0.0, 0.0))?;
    let shifted = w0_with_nu(p, &nu, C64::new(-1.0, 0.0))?;
    let rel = (shifted - base).exp();
    Ok((wp - rel).norm() / wp.norm())
}

/// Exact determinant against its expansion at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GskComparison {
    pub m: f64,
    pub exact: C64,
    pub w0: C64,
    pub w_plus: C64,
    pub w_minus: C64,
    /// `|exact − W₀|`.
    pub residual_w0: f64,
    /// `|exact − (W₀ + W₊₁ + W₋₁)|`.
    pub residual_full: f64,
}

/// Compare at one `m`; `n` exact-engine nodes (default from the problem).
pub fn compare(p: &GskProblem, n: Option<usize>) -> Result<GskComparison> {
    let exact = exact_gsk_logdet(p, n.unwrap_or_else(|| p.default_nodes()))?;
    let nu = NuFunction::new(p, W0_NODES)?;
    let w0v = w0_with_nu(p, &nu, C64::new(0.0, 0.0))?;
    let wp = w_osc_with_nu(p, &nu, 1)?;
    let wm = w_osc_with_nu(p, &nu, -1)?;
    Ok(GskComparison {
        m: p.m,
        exact,
        w0: w0v,
        w_plus: wp,
        w_minus: wm,
        residual_w0: (exact - w0v).norm(),
        residual_full: (exact - w0v - wp - wm).norm(),
    })
}
