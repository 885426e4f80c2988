//! The Lagrange series and three generalizations — several variables, a
//! continuum of variables (series of multiple integrals) and several such
//! series at once — each checked against its closed form `F(z)/Jacobian`.
//!
//! Mixed partial derivatives are never taken numerically: they are read off
//! truncated polynomial expansions in the ε's.

use std::sync::Arc;

use crate::fredholm::det_interval;
use crate::numkit::gauss_legendre;
use crate::{ComplexMatrix, Error, Grid, Lu, Result, C64};

/// Damping of every nonlinear fixed-point iteration: `z ← (1−a)z + a·Φ(z)`.
pub const PICARD_DAMPING: f64 = 0.5;
/// Steps allowed before a fixed-point iteration is declared divergent.
pub const PICARD_MAX_STEPS: usize = 200;
/// Increment the iteration must fall below within [`PICARD_MAX_STEPS`].
pub const PICARD_CONTRACTION_TOL: f64 = 1e-12;

/// An entire function of one variable, known through its value, derivative
/// and Taylor coefficients at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesFn {
    /// `scale·e^{rate·x} + offset`
    Exp { scale: f64, rate: f64, offset: f64 },
    /// `offset + slope·x`
    Affine { offset: f64, slope: f64 },
}

impl SeriesFn {
    pub fn constant(c: f64) -> Self {
        SeriesFn::Affine { offset: c, slope: 0.0 }
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            SeriesFn::Exp { scale, rate, offset } => scale * (rate * x).exp() + offset,
            SeriesFn::Affine { offset, slope } => offset + slope * x,
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match *self {
            SeriesFn::Exp { scale, rate, .. } => scale * rate * (rate * x).exp(),
            SeriesFn::Affine { slope, .. } => slope,
        }
    }

    /// `f^{(k)}(0)/k!` for `k = 0..=order`.
    pub fn taylor(&self, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        match *self {
            SeriesFn::Exp { scale, rate, offset } => {
                let mut c = scale;
                for (k, slot) in out.iter_mut().enumerate() {
                    if k > 0 {
                        c *= rate / k as f64;
                    }
                    *slot = c;
                }
                out[0] += offset;
            }
            SeriesFn::Affine { offset, slope } => {
                out[0] = offset;
                if order >= 1 {
                    out[1] = slope;
                }
            }
        }
        out
    }

    /// `f^{(k)}(0)` for `k = 0..=order`.
    pub fn derivatives_at_zero(&self, order: usize) -> Vec<f64> {
        let mut fact = 1.0;
        self.taylor(order)
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }
}

pub type Kernel2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Weight1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Result of a series-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeOutcome {
    pub series: f64,
    pub closed_form: f64,
    pub residual: f64,
    /// Magnitude of the highest-order contribution kept (tail indicator).
    pub last_term: f64,
}

impl LagrangeOutcome {
    fn new(series: f64, closed_form: f64, last_term: f64) -> Self {
        Self { series, closed_form, residual: (series - closed_form).abs() / closed_form.abs(), last_term }
    }
}

/// Damped Picard iteration `z ← (1−a)z + aΦ(z)`. Fails with
/// [`Error::NoConvergence`] if the increment has not dropped below
/// [`PICARD_CONTRACTION_TOL`] within [`PICARD_MAX_STEPS`] steps; otherwise
/// keeps iterating (up to the same budget) towards machine precision.
pub fn damped_picard<F>(mut z: Vec<f64>, map: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut last = f64::INFINITY;
    for _ in 0..PICARD_MAX_STEPS {
        let next = map(&z);
        let mut inc: f64 = 0.0;
        for (zi, ni) in z.iter_mut().zip(&next) {
            let new = (1.0 - PICARD_DAMPING) * *zi + PICARD_DAMPING * ni;
            inc = inc.max((new - *zi).abs() / zi.abs().max(1.0));
            *zi = new;
        }
        if !inc.is_finite() {
            break;
        }
        last = inc;
        if inc < 1e-16 {
            return Ok(z);
        }
    }
    if last < PICARD_CONTRACTION_TOL {
        Ok(z)
    } else {
        Err(Error::NoConvergence(format!(
            "Picard iteration: increment {last:e} after {PICARD_MAX_STEPS} steps (need < {PICARD_CONTRACTION_TOL:e})"
        )))
    }
}

fn real_det(n: usize, entry: impl FnMut(usize, usize) -> f64) -> Result<f64> {
    let mut entry = entry;
    let m = ComplexMatrix::from_fn(n, |i, j| C64::new(entry(i, j), 0.0));
    Ok(Lu::new(&m)?.det().re)
}

// ---------------------------------------------------------------- scalar

/// `Σ_{n≤N} nⁿtⁿ/n!` (φ(ε) = t·e^ε, F ≡ 1) against `1/(1−T)`, `T = t·e^T`.
pub fn lagrange_scalar_check(t: f64, truncation: usize) -> Result<LagrangeOutcome> {
    if !(t.abs() < (-1.0f64).exp()) {
        return Err(Error::InvalidArgument(format!("|t| = {} must be below 1/e", t.abs())));
    }
    let fixed = damped_picard(vec![0.0], |z| vec![t * z[0].exp()])?[0];
    let closed = 1.0 / (1.0 - fixed);
    let mut sum = 1.0;
    let mut last = if truncation == 0 { 1.0 } else { 0.0 };
    for n in 1..=truncation {
        let term: f64 = (1..=n).map(|k| n as f64 * t / k as f64).product();
        sum += term;
        last = term.abs();
    }
    Ok(LagrangeOutcome::new(sum, closed, last))
}

// ---------------------------------------------------------------- matrix

/// Dense polynomial in `N` variables truncated to the box `0 ≤ kₐ ≤ dimsₐ − 1`.
#[derive(Debug, Clone)]
struct BoxPoly {
    dims: Vec<usize>,
    coef: Vec<f64>,
}

impl BoxPoly {
    fn zeros(dims: &[usize]) -> Self {
        Self { dims: dims.to_vec(), coef: vec![0.0; dims.iter().product()] }
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (a, &d) in self.dims.iter().enumerate().rev() {
            idx[a] = flat % d;
            flat /= d;
        }
        idx
    }

    fn flat(&self, idx: &[usize]) -> Option<usize> {
        let mut f = 0;
        for (&k, &d) in idx.iter().zip(&self.dims) {
            if k >= d {
                return None;
            }
            f = f * d + k;
        }
        Some(f)
    }

    /// Taylor polynomial of `h(Σ cₐ εₐ)`: coefficient `h^{(|k|)}(0) Π cₐ^{kₐ}/kₐ!`.
    fn composed(dims: &[usize], derivs: &[f64], c: &[f64]) -> Self {
        let mut p = Self::zeros(dims);
        for flat in 0..p.coef.len() {
            let k = p.multi_index(flat);
            let total: usize = k.iter().sum();
            let mut v = derivs.get(total).copied().unwrap_or(0.0);
            for (&ka, &ca) in k.iter().zip(c) {
                for m in 1..=ka {
                    v *= ca / m as f64;
                }
            }
            p.coef[flat] = v;
        }
        p
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.dims);
        let idx: Vec<Vec<usize>> = (0..self.coef.len()).map(|f| self.multi_index(f)).collect();
        for (i, &a) in self.coef.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coef.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let sum: Vec<usize> = idx[i].iter().zip(&idx[j]).map(|(x, y)| x + y).collect();
                if let Some(f) = out.flat(&sum) {
                    out.coef[f] += a * b;
                }
            }
        }
        out
    }
}

fn multi_indices(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn rec(a: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if a == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(a + 1, n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, max_total, &mut Vec::new(), &mut out);
    out
}

/// Several-variable series with `φⱼ(ε) = f(Σₐ εₐ θ(μₐ, μⱼ))` and
/// `F(ε) = F(Σₐ g(μₐ) εₐ)`.
#[derive(Clone)]
pub struct LagrangeMatrixProblem {
    pub mu: Vec<f64>,
    pub f: SeriesFn,
    pub theta: Kernel2,
    pub g1: Weight1,
    pub big_f: SeriesFn,
    /// Multi-indices with `s₁ + … + s_N ≤ truncation` are summed.
    pub truncation: usize,
}

impl std::fmt::Debug for LagrangeMatrixProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LagrangeMatrixProblem")
            .field("mu", &self.mu)
            .field("f", &self.f)
            .field("big_f", &self.big_f)
            .field("truncation", &self.truncation)
            .finish_non_exhaustive()
    }
}

impl LagrangeMatrixProblem {
    /// `f(x) = 0.1·eˣ`, `θ(a, b) = cos(a − b)`, `F` = first moment `Σ μₐ εₐ`.
    pub fn cosine_example(mu: Vec<f64>, truncation: usize) -> Self {
        Self {
            mu,
            f: SeriesFn::Exp { scale: 0.1, rate: 1.0, offset: 0.0 },
            theta: Arc::new(|a: f64, b: f64| (a - b).cos()),
            g1: Arc::new(|m: f64| m),
            big_f: SeriesFn::Affine { offset: 0.0, slope: 1.0 },
            truncation,
        }
    }

    fn theta_matrix(&self) -> Vec<Vec<f64>> {
        // th[a][j] = θ(μ_a, μ_j)
        self.mu.iter().map(|&a| self.mu.iter().map(|&j| (self.theta)(a, j)).collect()).collect()
    }

    /// Truncated sum of `Π (1/sⱼ!) ∂^{sⱼ} [Π φⱼ^{sⱼ} · F]|₀`.
    pub fn series(&self) -> (f64, f64) {
        let n = self.mu.len();
        let t = self.truncation;
        let th = self.theta_matrix();
        let fd = self.f.derivatives_at_zero(t);
        let big_fd = self.big_f.derivatives_at_zero(t);
        let g: Vec<f64> = self.mu.iter().map(|&m| (self.g1)(m)).collect();
        let mut sum = 0.0;
        let mut by_order = vec![0.0; t + 1];
        for s in multi_indices(n, t) {
            let dims: Vec<usize> = s.iter().map(|k| k + 1).collect();
            let mut p = BoxPoly::composed(&dims, &big_fd, &g);
            for (j, &sj) in s.iter().enumerate() {
                if sj == 0 {
                    continue;
                }
                let col: Vec<f64> = (0..n).map(|a| th[a][j]).collect();
                let phi = BoxPoly::composed(&dims, &fd, &col);
                for _ in 0..sj {
                    p = p.mul(&phi);
                }
            }
            let v = p.coef[p.flat(&s).expect("index inside its own box")];
            sum += v;
            by_order[s.iter().sum::<usize>()] += v;
        }
        (sum, by_order[t].abs())
    }

    /// `F(Σ g(μₐ) zₐ) / det[δⱼₖ − θ(μₖ, μⱼ) f′(xⱼ)]` with `zⱼ = f(xⱼ)`,
    /// `xⱼ = Σₐ zₐ θ(μₐ, μⱼ)`.
    pub fn closed_form(&self) -> Result<f64> {
        let n = self.mu.len();
        let th = self.theta_matrix();
        let args = |z: &[f64]| -> Vec<f64> { (0..n).map(|j| (0..n).map(|a| z[a] * th[a][j]).sum()).collect() };
        let z = damped_picard(vec![0.0; n], |z| args(z).into_iter().map(|x| self.f.value(x)).collect())?;
        let x = args(&z);
        let det = real_det(n, |j, k| if j == k { 1.0 } else { 0.0 } - th[k][j] * self.f.deriv(x[j]))?;
        let u: f64 = self.mu.iter().zip(&z).map(|(&m, &za)| (self.g1)(m) * za).sum();
        Ok(self.big_f.value(u) / det)
    }
}

pub fn lagrange_matrix_check(problem: &LagrangeMatrixProblem) -> Result<LagrangeOutcome> {
    if problem.mu.is_empty() {
        return Err(Error::InvalidArgument("at least one variable is needed".into()));
    }
    let (series, last) = problem.series();
    Ok(LagrangeOutcome::new(series, problem.closed_form()?, last))
}

// ---------------------------------------------------------------- continuous

/// Series of multiple integrals over `[−q, q]` with one-body function `f`,
/// two-body weight `θ`, and `F(∫ g⁽¹⁾ ε)`.
#[derive(Clone)]
pub struct LagrangeContinuousProblem {
    pub q: f64,
    pub f: SeriesFn,
    pub theta: Kernel2,
    pub g1: Weight1,
    pub big_f: SeriesFn,
    /// Highest order `n` (number of integrations) kept.
    pub truncation: usize,
}

impl std::fmt::Debug for LagrangeContinuousProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LagrangeContinuousProblem")
            .field("q", &self.q)
            .field("f", &self.f)
            .field("big_f", &self.big_f)
            .field("truncation", &self.truncation)
            .finish_non_exhaustive()
    }
}

impl LagrangeContinuousProblem {
    /// `f(x) = 0.05(eˣ − 1) + 0.05`, `θ(λ, μ) = e^{−(λ−μ)²}`, `g⁽¹⁾ ≡ 1`,
    /// `F = exp`, `q = 1`.
    pub fn gaussian_example(truncation: usize) -> Self {
        Self {
            q: 1.0,
            f: SeriesFn::Exp { scale: 0.05, rate: 1.0, offset: 0.0 },
            theta: Arc::new(|l: f64, m: f64| (-(l - m) * (l - m)).exp()),
            g1: Arc::new(|_| 1.0),
            big_f: SeriesFn::Exp { scale: 1.0, rate: 1.0, offset: 0.0 },
            truncation,
        }
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        Self { truncation, ..self.clone() }
    }

    /// Order-by-order terms of the series discretized on `grid` (the
    /// multi-variable series with `θ → wθ`, `g → wg`), `n = 0..=truncation`.
    ///
    /// Expanding in a bookkeeping coupling `f → t·f`, the order-`n` term is
    /// the sum over maps `{1..n} → {0..n}` (functional graphs): vertices
    /// hanging off the root `0` form rooted trees, whose generating series
    /// solves `z = t·f(Wz)`; the remaining components are cycles of trees,
    /// resummed by `exp(Σ_k tr Mᵏ/k) = 1/det(I − M)` with
    /// `M = t·diag f′(Wz)·W`.
    pub fn series_terms(&self, grid: &Grid) -> Vec<f64> {
        let t = self.truncation;
        let n = grid.len();
        let w: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|k| grid.weights[k] * (self.theta)(grid.nodes[k], grid.nodes[j])).collect())
            .collect();
        let ft = self.f.taylor(t + 1);
        let fpt: Vec<f64> = (0..=t).map(|k| (k + 1) as f64 * ft[k + 1]).collect();

        // trees: z = t f(Wz), one order gained per sweep
        let mut z = vec![vec![0.0; t + 1]; n];
        let mut x = vec![vec![0.0; t + 1]; n];
        for _ in 0..t {
            x = (0..n)
                .map(|j| {
                    let mut s = vec![0.0; t + 1];
                    for (k, zk) in z.iter().enumerate() {
                        for (o, v) in s.iter_mut().enumerate() {
                            *v += w[j][k] * zk[o];
                        }
                    }
                    s
                })
                .collect();
            z = x
                .iter()
                .map(|xj| {
                    let c = compose(&ft, xj, t);
                    let mut s = vec![0.0; t + 1];
                    s[1..].copy_from_slice(&c[..t]);
                    s
                })
                .collect();
        }
        let d: Vec<Vec<f64>> = x.iter().map(|xj| compose(&fpt, xj, t)).collect();

        // cycles: L = log det(I − M) = −Σ_n t^n (1/n) Σ_k k tr(M_k R_{n−k}),
        // R = (I − M)⁻¹, M_k = diag(d_{k−1})·W
        let wm = ComplexMatrix::from_fn(n, |i, j| C64::new(w[i][j], 0.0));
        let mut r: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(n)];
        let mut p: Vec<ComplexMatrix> = vec![wm.clone()]; // P_m = W R_m
        let mut l = vec![0.0; t + 1];
        for order in 1..=t {
            let mut rn = ComplexMatrix::zeros(n);
            let mut tr = 0.0;
            for k in 1..=order {
                let pm = &p[order - k];
                for i in 0..n {
                    let di = d[i][k - 1];
                    if di == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        rn[(i, j)] += pm[(i, j)] * di;
                    }
                    tr += k as f64 * di * pm[(i, i)].re;
                }
            }
            l[order] = -tr / order as f64;
            p.push(wm.matmul(&rn));
            r.push(rn);
        }
        let mut e = vec![0.0; t + 1];
        e[0] = 1.0;
        for order in 1..=t {
            e[order] = (1..=order).map(|k| k as f64 * -l[k] * e[order - k]).sum::<f64>() / order as f64;
        }
        let mut u = vec![0.0; t + 1];
        for (k, zk) in z.iter().enumerate() {
            let c = grid.weights[k] * (self.g1)(grid.nodes[k]);
            for (o, v) in u.iter_mut().enumerate() {
                *v += c * zk[o];
            }
        }
        let fu = compose(&self.big_f.taylor(t), &u, t);
        (0..=t).map(|o| (0..=o).map(|k| fu[k] * e[o - k]).sum()).collect()
    }

    /// The same terms straight from the definition:
    /// `(1/n!) Σ_{λ₁..λₙ} Π w · ∂_{ε₁}…∂_{εₙ}[Π_j f(Σₐ εₐθ(λₐ,λⱼ)) F(Σₐ g(λₐ)εₐ)]|₀`,
    /// the multilinear coefficient being extracted by subset convolution.
    /// Cost `Nⁿ·3ⁿ`; meant for coarse grids and `n ≤ 5`.
    pub fn literal_terms(&self, grid: &Grid, max_order: usize) -> Result<Vec<f64>> {
        if max_order > 6 {
            return Err(Error::InvalidArgument(format!("literal enumeration limited to order 6, got {max_order}")));
        }
        let nn = grid.len();
        let fd = self.f.derivatives_at_zero(max_order);
        let big_fd = self.big_f.derivatives_at_zero(max_order);
        let mut out = vec![self.big_f.value(0.0)];
        for order in 1..=max_order {
            let full = (1usize << order) - 1;
            let mut idx = vec![0usize; order];
            let mut total = 0.0;
            loop {
                let lam: Vec<f64> = idx.iter().map(|&i| grid.nodes[i]).collect();
                let weight: f64 = idx.iter().map(|&i| grid.weights[i]).product();
                let g: Vec<f64> = lam.iter().map(|&l| (self.g1)(l)).collect();
                let mut acc = multilinear(&big_fd, &g, order);
                for lj in &lam {
                    let c: Vec<f64> = lam.iter().map(|&la| (self.theta)(la, *lj)).collect();
                    acc = subset_mul(&acc, &multilinear(&fd, &c, order));
                }
                total += weight * acc[full];
                // odometer
                let mut pos = 0;
                while pos < order {
                    idx[pos] += 1;
                    if idx[pos] < nn {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == order {
                    break;
                }
            }
            let fact: f64 = (1..=order).map(|k| k as f64).product();
            out.push(total / fact);
        }
        Ok(out)
    }

    /// `F(∫ g⁽¹⁾ z) / det[δ(λ−μ) − θ(μ,λ) f′(∫ θ(ν,λ) z(ν) dν)]` with
    /// `z(μ) = f(∫ θ(λ,μ) z(λ) dλ)` solved by damped Picard on `n` nodes.
    pub fn closed_form(&self, n: usize) -> Result<f64> {
        let grid = gauss_legendre(n, -self.q, self.q)?;
        let th: Vec<Vec<f64>> = grid.nodes.iter().map(|&a| grid.nodes.iter().map(|&b| (self.theta)(a, b)).collect()).collect();
        let args = |z: &[f64]| -> Vec<f64> {
            (0..n).map(|j| (0..n).map(|a| grid.weights[a] * th[a][j] * z[a]).sum()).collect()
        };
        let z = damped_picard(vec![0.0; n], |z| args(z).into_iter().map(|x| self.f.value(x)).collect())?;
        let x = args(&z);
        let fp: Vec<f64> = x.iter().map(|&xi| self.f.deriv(xi)).collect();
        let slot: std::collections::HashMap<u64, usize> = grid.nodes.iter().enumerate().map(|(i, v)| (v.to_bits(), i)).collect();
        let index = |v: f64| slot[&v.to_bits()];
        let det = det_interval(
            |l, m| {
                let (i, j) = (index(l), index(m));
                C64::new(-th[j][i] * fp[i], 0.0)
            },
            &grid,
        )?
        .det()
        .re;
        let u: f64 = (0..n).map(|a| grid.weights[a] * (self.g1)(grid.nodes[a]) * z[a]).sum();
        Ok(self.big_f.value(u) / det)
    }
}

/// Power series `Σ_m c_m x(t)^m` truncated at `t^order`; requires `x₀ = 0`.
fn compose(c: &[f64], x: &[f64], order: usize) -> Vec<f64> {
    debug_assert!(x[0] == 0.0);
    let mut out = vec![0.0; order + 1];
    out[0] = c[0];
    let mut pow = vec![0.0; order + 1];
    pow[0] = 1.0;
    for cm in c.iter().take(order + 1).skip(1) {
        let mut next = vec![0.0; order + 1];
        for (i, &pi) in pow.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate().take(order + 1 - i).skip(1) {
                next[i + j] += pi * xj;
            }
        }
        pow = next;
        for (o, v) in out.iter_mut().enumerate() {
            *v += cm * pow[o];
        }
    }
    out
}

/// Multilinear part of `h(Σ cₐ εₐ)` over subsets `S ⊆ {1..n}`:
/// `h^{(|S|)}(0) Π_{a∈S} cₐ`.
fn multilinear(derivs: &[f64], c: &[f64], n: usize) -> Vec<f64> {
    (0..1usize << n)
        .map(|s| {
            let mut v = derivs[s.count_ones() as usize];
            for (a, &ca) in c.iter().enumerate().take(n) {
                if s >> a & 1 == 1 {
                    v *= ca;
                }
            }
            v
        })
        .collect()
}

fn subset_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    for (s, slot) in out.iter_mut().enumerate() {
        // iterate over submasks of s
        let mut t = s;
        loop {
            *slot += p[t] * q[s ^ t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    out
}

/// Series on an `n_nodes` lattice versus the closed form on a grid four
/// times finer (standing in for the continuum).
pub fn lagrange_continuous_check(problem: &LagrangeContinuousProblem, n_nodes: usize) -> Result<LagrangeOutcome> {
    let grid = gauss_legendre(n_nodes, -problem.q, problem.q)?;
    let terms = problem.series_terms(&grid);
    let series: f64 = terms.iter().sum();
    let closed = problem.closed_form((4 * n_nodes).max(64))?;
    Ok(LagrangeOutcome::new(series, closed, terms.last().copied().unwrap_or(0.0).abs()))
}

// ---------------------------------------------------------------- multiple series

/// Several continuous series at once, with one-body functions `f_s`.
#[derive(Clone)]
pub struct LagrangeMultiProblem {
    pub q: f64,
    pub fs: Vec<SeriesFn>,
    pub theta: Kernel2,
    pub g1: Weight1,
    pub big_f: SeriesFn,
}

impl std::fmt::Debug for LagrangeMultiProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LagrangeMultiProblem").field("q", &self.q).field("fs", &self.fs).finish_non_exhaustive()
    }
}

impl LagrangeMultiProblem {
    /// `f_s(x) = (γˢ/s)·eˣ`, `s = 1..=n`, Gaussian θ, `F = exp`, `g⁽¹⁾ ≡ 1`.
    pub fn gaussian_example(n: usize, gamma: f64) -> Self {
        Self {
            q: 1.0,
            fs: (1..=n).map(|s| SeriesFn::Exp { scale: gamma.powi(s as i32) / s as f64, rate: 1.0, offset: 0.0 }).collect(),
            theta: Arc::new(|l: f64, m: f64| (-(l - m) * (l - m)).exp()),
            g1: Arc::new(|_| 1.0),
            big_f: SeriesFn::Exp { scale: 1.0, rate: 1.0, offset: 0.0 },
        }
    }

    /// Closed form from the `n·N` system for the separate species `z_{s,a}`
    /// and its `n·N` Jacobian.
    pub fn closed_form_species(&self, n_nodes: usize) -> Result<f64> {
        let grid = gauss_legendre(n_nodes, -self.q, self.q)?;
        let n = n_nodes;
        let ns = self.fs.len();
        let wt = self.weighted_theta(&grid);
        let args = |z: &[f64]| -> Vec<f64> {
            (0..n).map(|a| (0..n).map(|b| wt[a][b] * (0..ns).map(|s| z[s * n + b]).sum::<f64>()).sum()).collect()
        };
        let z = damped_picard(vec![0.0; ns * n], |z| {
            let x = args(z);
            (0..ns * n).map(|i| self.fs[i / n].value(x[i % n])).collect()
        })?;
        let x = args(&z);
        let det = real_det(ns * n, |i, j| {
            let (s, a) = (i / n, i % n);
            let b = j % n;
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - self.fs[s].deriv(x[a]) * wt[a][b]
        })?;
        let u: f64 = (0..ns * n).map(|i| grid.weights[i % n] * (self.g1)(grid.nodes[i % n]) * z[i]).sum();
        Ok(self.big_f.value(u) / det)
    }

    /// Closed form from the single equation with `f_Σ = Σ_s f_s`.
    pub fn closed_form_summed(&self, n_nodes: usize) -> Result<f64> {
        let grid = gauss_legendre(n_nodes, -self.q, self.q)?;
        let n = n_nodes;
        let wt = self.weighted_theta(&grid);
        let f_sum = |x: f64| self.fs.iter().map(|f| f.value(x)).sum::<f64>();
        let fp_sum = |x: f64| self.fs.iter().map(|f| f.deriv(x)).sum::<f64>();
        let args = |z: &[f64]| -> Vec<f64> { (0..n).map(|a| (0..n).map(|b| wt[a][b] * z[b]).sum()).collect() };
        let z = damped_picard(vec![0.0; n], |z| args(z).into_iter().map(f_sum).collect())?;
        let x = args(&z);
        let det = real_det(n, |a, b| if a == b { 1.0 } else { 0.0 } - fp_sum(x[a]) * wt[a][b])?;
        let u: f64 = (0..n).map(|a| grid.weights[a] * (self.g1)(grid.nodes[a]) * z[a]).sum();
        Ok(self.big_f.value(u) / det)
    }

    /// `wt[a][b] = w_b θ(μ_b, μ_a)`.
    fn weighted_theta(&self, grid: &Grid) -> Vec<Vec<f64>> {
        grid.nodes
            .iter()
            .map(|&a| grid.nodes.iter().zip(&grid.weights).map(|(&b, &w)| w * (self.theta)(b, a)).collect())
            .collect()
    }
}

/// Relative difference between the two assemblies of the multiple series.
pub fn lagrange_multi_check(problem: &LagrangeMultiProblem, n_nodes: usize) -> Result<f64> {
    if problem.fs.is_empty() {
        return Err(Error::InvalidArgument("at least one series is needed".into()));
    }
    let a = problem.closed_form_species(n_nodes)?;
    let b = problem.closed_form_summed(n_nodes)?;
    Ok((a - b).abs() / b.abs())
}
