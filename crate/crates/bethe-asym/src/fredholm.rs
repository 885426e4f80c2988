//! Fredholm determinants `det(I + V)` of integral operators on the interval
//! `[−q, q]` (Gauss–Legendre) and on a closed contour around it (trapezoid
//! rule on an ellipse), plus the rank-one shift identity and the
//! θ-independence check built on it.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::models::ModelSpec;
use crate::numkit::Lu;
use crate::{ComplexMatrix, Error, Grid, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default number of contour nodes.
pub const DEFAULT_CONTOUR_NODES: usize = 256;

/// Closed contour: ellipse with semi-axes `(q + d, d)` centred at 0,
/// traversed counter-clockwise, discretized by the trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub q: f64,
    pub d: f64,
    pub nodes: Vec<C64>,
    /// `w′(tᵢ)·Δt`.
    pub dw: Vec<C64>,
}

impl Contour {
    pub fn ellipse(q: f64, d: f64, n: usize) -> Result<Self> {
        if !(q > 0.0 && d > 0.0) || !q.is_finite() || !d.is_finite() {
            return Err(Error::InvalidArgument(format!("ellipse needs q > 0, d > 0 (q = {q}, d = {d})")));
        }
        if n < 4 {
            return Err(Error::InvalidArgument(format!("contour needs at least 4 nodes, got {n}")));
        }
        let a = q + d;
        let dt = 2.0 * PI / n as f64;
        let (nodes, dw) = (0..n)
            .map(|k| {
                let t = dt * k as f64;
                (C64::new(a * t.cos(), d * t.sin()), C64::new(-a * t.sin(), d * t.cos()) * dt)
            })
            .unzip();
        Ok(Self { q, d, nodes, dw })
    }

    /// Default half-height for a model: half the admissible limit, and no
    /// more than `q` (for a very weakly interacting rational kernel the limit
    /// is huge, and a tall, nearly circular contour only wastes nodes).
    pub fn default_height(model: &ModelSpec, q: f64) -> f64 {
        (0.5 * model.contour_height_limit()).min(q.max(0.05))
    }

    /// Ellipse satisfying the analyticity constraint of `model`.
    pub fn for_model(model: &ModelSpec, q: f64, d: Option<f64>, n: usize) -> Result<Self> {
        let d = d.unwrap_or_else(|| Self::default_height(model, q));
        let limit = model.contour_height_limit();
        if !(d < limit) {
            return Err(Error::ContourAnalyticity(format!(
                "half-height d = {d} must be below {limit} for {model:?} (contour points may not differ by a kernel pole offset)"
            )));
        }
        Self::ellipse(q, d, n)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(1/2πi) Σ dwᵢ/(wᵢ − λ)`.
    pub fn winding_number(&self, lambda: C64) -> C64 {
        self.nodes.iter().zip(&self.dw).map(|(&w, &dw)| dw / (w - lambda)).sum::<C64>() / (2.0 * PI * I)
    }

    /// Check that the contour winds once around the whole cut.
    pub fn check_winding(&self, samples: usize) -> Result<()> {
        for k in 0..=samples {
            let x = -self.q + 2.0 * self.q * k as f64 / samples.max(1) as f64;
            let wn = self.winding_number(C64::new(x, 0.0));
            // trapezoid error peaks at the cut ends, close to a thin ellipse
            if (wn - 1.0).norm() > 1e-6 {
                return Err(Error::ContourAnalyticity(format!("winding number {wn} around {x}")));
            }
        }
        Ok(())
    }

    /// Quadrature measure `dw/(2πi)` — the natural measure for
    /// `det[I + U/2πi]`.
    pub fn measure(&self) -> Discretization {
        Discretization {
            points: self.nodes.clone(),
            weights: self.dw.iter().map(|&dw| dw / (2.0 * PI * I)).collect(),
        }
    }
}

/// Points and (complex) weights of a quadrature rule, on an interval or a
/// contour.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub points: Vec<C64>,
    pub weights: Vec<C64>,
}

impl From<&Grid> for Discretization {
    fn from(g: &Grid) -> Self {
        Self {
            points: g.nodes.iter().map(|&x| C64::new(x, 0.0)).collect(),
            weights: g.weights.iter().map(|&w| C64::new(w, 0.0)).collect(),
        }
    }
}

impl Discretization {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Matrix `δᵢⱼ + wᵢ·V(xᵢ, xⱼ)` (row weights), filled in parallel.
    pub fn operator_matrix<F>(&self, kernel: F) -> ComplexMatrix
    where
        F: Fn(C64, C64) -> C64 + Sync,
    {
        let n = self.len();
        let mut m = ComplexMatrix::zeros(n);
        m.as_mut_slice().par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let wi = self.points[i];
            let mu = self.weights[i];
            for (j, slot) in row.iter_mut().enumerate() {
                let v = mu * kernel(wi, self.points[j]);
                *slot = if i == j { v + 1.0 } else { v };
            }
        });
        m
    }

    /// `log det(I + V)` on this discretization.
    pub fn log_det<F>(&self, kernel: F) -> Result<C64>
    where
        F: Fn(C64, C64) -> C64 + Sync,
    {
        let m = self.operator_matrix(kernel);
        Ok(Lu::new(&m)?.log_det())
    }
}

/// Value of a Fredholm determinant with its discretization diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FredholmResult {
    pub log_det: C64,
    pub n_nodes: usize,
    /// `|Δ log det|` under node doubling (imaginary part taken mod 2π), when
    /// the refinement was computed.
    pub refinement_delta: Option<f64>,
}

impl FredholmResult {
    pub fn det(&self) -> C64 {
        self.log_det.exp()
    }
}

/// Difference of two logarithms with the imaginary part reduced to (−π, π].
pub fn log_difference(a: C64, b: C64) -> C64 {
    let d = a - b;
    let im = d.im - 2.0 * PI * (d.im / (2.0 * PI)).round();
    C64::new(d.re, im)
}

/// `log det(I + V)` on `[a, b]`, symmetrized Nyström:
/// `det[δᵢⱼ + √wᵢ V(λᵢ, λⱼ) √wⱼ]`.
pub fn det_interval<F>(kernel: F, grid: &Grid) -> Result<FredholmResult>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let n = grid.len();
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut m = ComplexMatrix::zeros(n);
    m.as_mut_slice().par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, slot) in row.iter_mut().enumerate() {
            let v = kernel(grid.nodes[i], grid.nodes[j]) * (sw[i] * sw[j]);
            *slot = if i == j { v + 1.0 } else { v };
        }
    });
    Ok(FredholmResult { log_det: Lu::new(&m)?.log_det(), n_nodes: n, refinement_delta: None })
}

/// [`det_interval`] at `n` and `2n` Gauss–Legendre nodes.
pub fn det_interval_refined<F>(kernel: F, a: f64, b: f64, n: usize) -> Result<FredholmResult>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let coarse = det_interval(&kernel, &crate::numkit::gauss_legendre(n, a, b)?)?;
    let fine = det_interval(&kernel, &crate::numkit::gauss_legendre(2 * n, a, b)?)?;
    Ok(FredholmResult {
        refinement_delta: Some(log_difference(fine.log_det, coarse.log_det).norm()),
        ..fine
    })
}

/// `log det(I + U/2πi)` on a closed contour:
/// `det[δᵢⱼ + dwᵢ U(wᵢ, wⱼ)/2πi]`.
pub fn det_contour<F>(kernel: F, contour: &Contour) -> Result<FredholmResult>
where
    F: Fn(C64, C64) -> C64 + Sync,
{
    let log_det = contour.measure().log_det(kernel)?;
    Ok(FredholmResult { log_det, n_nodes: contour.len(), refinement_delta: None })
}

/// `log det(I + U/2πi)` when the kernel is cheaper to express through node
/// indices (e.g. with per-node cached factors): `entry(i, j) = U(wᵢ, wⱼ)`.
pub fn det_contour_by_index<F>(entry: F, contour: &Contour) -> Result<FredholmResult>
where
    F: Fn(usize, usize) -> C64 + Sync,
{
    let n = contour.len();
    let mut m = ComplexMatrix::zeros(n);
    m.as_mut_slice().par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let mu = contour.dw[i] / (2.0 * PI * I);
        for (j, slot) in row.iter_mut().enumerate() {
            let v = mu * entry(i, j);
            *slot = if i == j { v + 1.0 } else { v };
        }
    });
    Ok(FredholmResult { log_det: Lu::new(&m)?.log_det(), n_nodes: n, refinement_delta: None })
}

/// [`det_contour`] on `contour` and on the same ellipse with twice the nodes.
pub fn det_contour_refined<F>(kernel: F, contour: &Contour) -> Result<FredholmResult>
where
    F: Fn(C64, C64) -> C64 + Sync,
{
    let coarse = det_contour(&kernel, contour)?;
    let fine_contour = Contour::ellipse(contour.q, contour.d, 2 * contour.len())?;
    let fine = det_contour(&kernel, &fine_contour)?;
    Ok(FredholmResult {
        refinement_delta: Some(log_difference(fine.log_det, coarse.log_det).norm()),
        ..fine
    })
}

/// Both sides of
/// `det[I+V] = (g(w₀)/h(w₀))·det[I + V(w,w′) − (g(w)/g(w₀))V(w₀,w′)]`,
/// `g = h + V h`, on a discretization. Returns `|lhs − rhs|/|lhs|`.
pub fn shift_identity_check<V, H>(v: V, h: H, w0: C64, disc: &Discretization) -> Result<f64>
where
    V: Fn(C64, C64) -> C64 + Sync,
    H: Fn(C64) -> C64,
{
    let hv: Vec<C64> = disc.points.iter().map(|&w| h(w)).collect();
    let apply = |w: C64| -> C64 {
        disc.points
            .iter()
            .zip(&disc.weights)
            .zip(&hv)
            .map(|((&p, &mu), &hp)| v(w, p) * mu * hp)
            .sum()
    };
    let h0 = h(w0);
    let g0 = h0 + apply(w0);
    if g0.norm() < 1e-300 || h0.norm() < 1e-300 {
        return Err(Error::DivisionByZero(format!("g(w₀) = {g0}, h(w₀) = {h0} at w₀ = {w0}")));
    }
    let g: Vec<C64> = disc.points.iter().zip(&hv).map(|(&w, &hw)| hw + apply(w)).collect();
    let lhs = disc.log_det(&v)?;
    let v0: Vec<C64> = disc.points.iter().map(|&wp| v(w0, wp)).collect();
    let mut shifted = disc.operator_matrix(&v);
    let n = disc.len();
    for i in 0..n {
        let c = disc.weights[i] * g[i] / g0;
        for j in 0..n {
            shifted[(i, j)] -= c * v0[j];
        }
    }
    let rhs = (g0 / h0).ln() + Lu::new(&shifted)?.log_det();
    Ok((log_difference(rhs, lhs).exp() - 1.0).norm())
}

/// Relative difference of `det[I + U_θ/2πi]/normalizer(θ)` between `θ₁` and
/// `θ₂`.
pub fn theta_independence_check<U, K, N>(family: U, theta1: C64, theta2: C64, normalizer: N, contour: &Contour) -> Result<f64>
where
    U: Fn(C64) -> K,
    K: Fn(C64, C64) -> C64 + Sync,
    N: Fn(C64) -> C64,
{
    let side = |theta: C64| -> Result<C64> {
        let n = normalizer(theta);
        if n.norm() < 1e-300 {
            return Err(Error::DivisionByZero(format!("normalizer vanishes at θ = {theta}")));
        }
        Ok(det_contour(family(theta), contour)?.log_det - n.ln())
    };
    let a = side(theta1)?;
    let b = side(theta2)?;
    Ok((log_difference(a, b).exp() - 1.0).norm())
}
