//! Foundational numerics: Gauss–Legendre quadrature, dense complex LU with a
//! log-determinant, Brent root finding and barycentric differentiation.
//!
//! Everything here is generic over [`Scalar`] so the same code serves `f32`
//! and `f64`; the physics layers use the `f64` aliases from the crate root.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::{Error, Result, Scalar};

/// Gauss–Legendre nodes and weights on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub a: T,
    pub b: T,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> Grid<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Quadrature sum of a real integrand.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// Quadrature sum of a complex integrand.
    pub fn integrate_c<F: FnMut(T) -> Complex<T>>(&self, mut f: F) -> Complex<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&x, &w)| acc + f(x) * w)
    }
}

/// n-point Gauss–Legendre rule on `[a, b]`.
///
/// Nodes come from Newton iteration on the three-term Legendre recurrence,
/// started from the asymptotic guess `cos(π(i − 1/4)/(n + 1/2))`; only half
/// of them are computed and the rule is mirrored, so it is exactly symmetric.
pub fn gauss_legendre<T: Scalar>(n: usize, a: T, b: T) -> Result<Grid<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("gauss_legendre: n must be >= 1".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!(
            "gauss_legendre: need a < b, got a = {a}, b = {b}"
        )));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let nf = T::from_usize(n).expect("node count");
    let mut x_ref = vec![T::zero(); n];
    let mut w_ref = vec![T::zero(); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let fi = T::from_usize(i).expect("index");
        let mut x = (T::PI() * (fi + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = one;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::iter_tol() {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = two / ((one - x * x) * dp * dp);
        // cos(...) is decreasing in i: store largest nodes at the top end.
        x_ref[n - 1 - i] = x;
        w_ref[n - 1 - i] = w;
        x_ref[i] = -x;
        w_ref[i] = w;
    }
    if n % 2 == 1 {
        x_ref[n / 2] = T::zero();
    }
    let half_len = (b - a) / two;
    let mid = (a + b) / two;
    Ok(Grid {
        a,
        b,
        nodes: x_ref.iter().map(|&x| mid + half_len * x).collect(),
        weights: w_ref.iter().map(|&w| w * half_len).collect(),
    })
}

/// `(P_n(x), P_n'(x))` from the three-term recurrence.
fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).expect("index");
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize(n).expect("index");
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex<T>>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Wrap a row-major buffer of length `n²`.
    pub fn from_row_major(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "matrix buffer has {} entries, expected {}",
                data.len(),
                n * n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul: dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting, `P·A = L·U` (unit lower `L`).
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<Complex<T>>,
    perm: Vec<usize>,
    log_det: Complex<T>,
}

impl<T: Scalar> Lu<T> {
    /// Factorize. Fails with `SingularMatrix` when a pivot falls below 1e-300
    /// in magnitude (or the smallest positive normal number for `f32`).
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        let n = a.n;
        if n == 0 {
            return Err(Error::InvalidArgument("LU of an empty matrix".into()));
        }
        let floor = T::min_positive_value().max(T::from_f64(1e-300).unwrap_or(T::zero()));
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut log_det = Complex::new(T::zero(), T::zero());
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmag >= floor) {
                return Err(Error::SingularMatrix { column: k, pivot: pmag.as_f64(), dim: n });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                log_det = log_det + Complex::new(T::zero(), T::PI());
            }
            let pivot = lu[k * n + k];
            log_det = log_det + pivot.ln();
            let inv = Complex::new(T::one(), T::zero()) / pivot;
            for i in (k + 1)..n {
                let l = lu[i * n + k] * inv;
                lu[i * n + k] = l;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                let (upper, lower) = lu.split_at_mut(i * n);
                let row_k = &upper[k * n + k + 1..k * n + n];
                let row_i = &mut lower[k + 1..n];
                for (x, &u) in row_i.iter_mut().zip(row_k) {
                    *x = *x - l * u;
                }
            }
        }
        Ok(Self { n, lu, perm, log_det })
    }

    /// Sum of the logarithms of the pivots plus `iπ` per row exchange: a
    /// logarithm of `det A` whose imaginary part is not reduced mod 2π.
    pub fn log_det(&self) -> Complex<T> {
        self.log_det
    }

    pub fn det(&self) -> Complex<T> {
        self.log_det.exp()
    }

    pub fn solve(&self, rhs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::InvalidArgument(format!(
                "rhs has length {}, matrix dimension is {n}",
                rhs.len()
            )));
        }
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        Ok(x)
    }
}

/// Factorize `a`, optionally solve `a·x = rhs`, and return the log-determinant.
pub fn lu_solve_det<T: Scalar>(
    a: &ComplexMatrix<T>,
    rhs: Option<&[Complex<T>]>,
) -> Result<(Option<Vec<Complex<T>>>, Complex<T>)> {
    let lu = Lu::new(a)?;
    let sol = match rhs {
        Some(r) => Some(lu.solve(r)?),
        None => None,
    };
    Ok((sol, lu.log_det()))
}

/// Default absolute tolerance of [`find_root`] in double precision.
pub const ROOT_TOL: f64 = 1e-12;

/// Brent's method (inverse quadratic interpolation with a bisection
/// safeguard) on a sign-changing bracket `[lo, hi]`.
pub fn find_root<T: Scalar, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "find_root: non-finite function value at bracket ends ({fa}, {fb})"
        )));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: lo.as_f64(), hi: hi.as_f64(), flo: fa.as_f64(), fhi: fb.as_f64() });
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1 * xm.signum() };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NoConvergence(format!("find_root: non-finite f({b})")));
        }
    }
    Err(Error::NoConvergence("find_root: 200 iterations exceeded".into()))
}

/// Barycentric weights of polynomial interpolation through `nodes`,
/// normalized to unit maximum modulus.
pub fn barycentric_weights<T: Scalar>(nodes: &[T]) -> Vec<T> {
    let n = nodes.len();
    // Products are accumulated as logarithms: for a few hundred nodes the
    // raw products under- or overflow.
    let logs: Vec<(T, bool)> = (0..n)
        .map(|j| {
            let mut log_mag = T::zero();
            let mut negative = false;
            for k in 0..n {
                if k != j {
                    let d = nodes[j] - nodes[k];
                    log_mag = log_mag + d.abs().ln();
                    negative ^= d < T::zero();
                }
            }
            (-log_mag, negative)
        })
        .collect();
    let max = logs.iter().fold(T::neg_infinity(), |m, &(l, _)| m.max(l));
    logs.iter()
        .map(|&(l, neg)| {
            let v = (l - max).exp();
            if neg { -v } else { v }
        })
        .collect()
}

/// Evaluate the interpolating polynomial of `(nodes, values)` at `x`.
pub fn barycentric_eval<T: Scalar>(nodes: &[T], bw: &[T], values: &[Complex<T>], x: T) -> Complex<T> {
    let mut num = Complex::new(T::zero(), T::zero());
    let mut den = T::zero();
    for ((&xj, &wj), &fj) in nodes.iter().zip(bw).zip(values) {
        let d = x - xj;
        if d == T::zero() {
            return fj;
        }
        let t = wj / d;
        num = num + fj * t;
        den = den + t;
    }
    num / den
}

/// Derivative of the interpolating polynomial at the nodes themselves
/// (spectral differentiation matrix applied to `values`).
pub fn barycentric_derivative<T: Scalar>(nodes: &[T], bw: &[T], values: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    let dij = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
                    acc = acc + (values[j] - values[i]) * dij;
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    #[test]
    fn one_point_rule_is_midpoint() {
        let g = gauss_legendre(1, -1.0f64, 1.0).unwrap();
        assert_eq!(g.nodes, vec![0.0]);
        assert!((g.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule_integrates_cubics() {
        let g = gauss_legendre(2, -1.0f64, 1.0).unwrap();
        assert!((g.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-15);
        assert!(g.integrate(|x| x * x * x).abs() < 1e-15);
    }

    #[test]
    fn exponential_on_unit_interval() {
        let g = gauss_legendre(20, 0.0f64, 1.0).unwrap();
        let exact = std::f64::consts::E - 1.0;
        assert!((g.integrate(f64::exp) - exact).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(gauss_legendre(0, 0.0f64, 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(gauss_legendre(4, 1.0f64, 1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn grid_invariants_for_many_sizes() {
        for n in [3usize, 8, 17, 64, 128, 257, 600] {
            let g = gauss_legendre(n, -0.7f64, 2.3).unwrap();
            let s: f64 = g.weights.iter().sum();
            assert!((s - 3.0).abs() / 3.0 < 1e-13, "n={n}: weight sum {s}");
            assert!(g.nodes.windows(2).all(|w| w[0] < w[1]), "n={n}: not increasing");
            assert!(g.nodes.iter().all(|&x| x > -0.7 && x < 2.3));
            assert!(g.weights.iter().all(|&w| w > 0.0));
            // degree 2n-1 monomial, shifted to keep it well conditioned
            let deg = (2 * n - 1).min(41) as i32;
            let exact = (2.3f64 - 0.8).powi(deg + 1) / (deg as f64 + 1.0)
                - (-0.7f64 - 0.8).powi(deg + 1) / (deg as f64 + 1.0);
            let num = g.integrate(|x| (x - 0.8).powi(deg));
            let scale = 1.5f64.powi(deg + 1) / (deg as f64 + 1.0);
            assert!((num - exact).abs() <= 1e-12 * scale, "n={n}");
        }
    }

    #[test]
    fn single_precision_rule() {
        let g = gauss_legendre(12, 0.0f32, 1.0).unwrap();
        let v = g.integrate(|x| x.exp());
        assert!((v - (std::f32::consts::E - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn quadrature_error_shrinks_geometrically() {
        let exact = (1.0f64).atan() * 2.0 * 2.0; // ∫_{-1}^{1} 2/(1+x²)
        let mut prev = f64::INFINITY;
        for n in [4usize, 8, 16] {
            let g = gauss_legendre(n, -1.0f64, 1.0).unwrap();
            let err = (g.integrate(|x| 2.0 / (1.0 + x * x)) - exact).abs();
            assert!(err < prev / 4.0 || err < 1e-15, "n={n}: {err} vs {prev}");
            prev = err;
        }
    }

    #[test]
    fn lu_identity_and_diagonal() {
        let id = ComplexMatrix::<f64>::identity(3);
        let (_, ld) = lu_solve_det(&id, None).unwrap();
        assert!(ld.norm() < 1e-15);

        let d = ComplexMatrix::from_fn(2, |i, j| if i == j { C::new((i + 2) as f64, 0.0) } else { C::new(0.0, 0.0) });
        let (x, ld) = lu_solve_det(&d, Some(&[C::new(2.0, 0.0), C::new(3.0, 0.0)])).unwrap();
        let x = x.unwrap();
        assert!((x[0] - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!((ld - C::new(6.0f64.ln(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lu_detects_singularity() {
        let z = ComplexMatrix::<f64>::zeros(2);
        assert!(matches!(Lu::new(&z), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn determinant_of_explicit_lu_product() {
        // A = L·U with known unit-lower L and upper U; det A = Π U_ii.
        let n = 8;
        let mut s = 0.3f64;
        let mut next = || {
            s = (s * 9301.0 + 49297.0) % 233280.0;
            s / 233280.0 - 0.5
        };
        let l = ComplexMatrix::from_fn(n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => C::new(next(), next()),
            std::cmp::Ordering::Equal => C::new(1.0, 0.0),
            _ => C::new(0.0, 0.0),
        });
        let u = ComplexMatrix::from_fn(n, |i, j| {
            if i <= j { C::new(next() + if i == j { 1.5 } else { 0.0 }, next()) } else { C::new(0.0, 0.0) }
        });
        let a = l.matmul(&u);
        let expected = (0..n).fold(C::new(1.0, 0.0), |acc, i| acc * u[(i, i)]);
        let det = Lu::new(&a).unwrap().det();
        assert!((det - expected).norm() / expected.norm() < 1e-10);
    }

    #[test]
    fn brent_examples() {
        let r = find_root(|x: f64| x - 1.0, 0.0, 2.0, ROOT_TOL).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let r = find_root(|x: f64| (2.0 * x).cosh() - 2.0, 0.0, 2.0, ROOT_TOL).unwrap();
        assert!((r - 0.5 * 2.0f64.acosh()).abs() < 1e-12);
        let r = find_root(|x: f64| x * x * x - 2.0, 1.0, 2.0, ROOT_TOL).unwrap();
        assert!((r - 2.0f64.cbrt()).abs() < 1e-12);
        assert!(matches!(
            find_root(|x: f64| x * x + 1.0, -1.0, 1.0, ROOT_TOL),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn spectral_derivative_of_smooth_function() {
        let g = gauss_legendre(40, -1.0f64, 1.0).unwrap();
        let bw = barycentric_weights(&g.nodes);
        let v: Vec<C> = g.nodes.iter().map(|&x| C::new(x.sin(), (2.0 * x).exp())).collect();
        let d = barycentric_derivative(&g.nodes, &bw, &v);
        for (i, &x) in g.nodes.iter().enumerate() {
            let exact = C::new(x.cos(), 2.0 * (2.0 * x).exp());
            assert!((d[i] - exact).norm() < 1e-10, "x={x}");
        }
        let e = barycentric_eval(&g.nodes, &bw, &v, 1.0);
        assert!((e - C::new(1.0f64.sin(), 2.0f64.exp())).norm() < 1e-12);
    }

    fn well_conditioned(n: usize, seed: &[f64]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(n, |i, j| {
            let k = (i * n + j) % seed.len();
            let v = C::new(seed[k], seed[(k + 7) % seed.len()]) * 0.3;
            if i == j { v + C::new(n as f64, 0.0) } else { v }
        })
    }

    proptest! {
        #[test]
        fn inverse_log_dets_cancel(seed in proptest::collection::vec(-1.0f64..1.0, 32), n in 2usize..7) {
            let a = well_conditioned(n, &seed);
            let lu = Lu::new(&a).unwrap();
            let mut inv = ComplexMatrix::<f64>::zeros(n);
            for j in 0..n {
                let mut e = vec![C::new(0.0, 0.0); n];
                e[j] = C::new(1.0, 0.0);
                let col = lu.solve(&e).unwrap();
                for i in 0..n {
                    inv[(i, j)] = col[i];
                }
            }
            let total = lu.log_det() + Lu::new(&inv).unwrap().log_det();
            // log-dets add up to 0 modulo 2πi
            let wrapped = C::new(total.re, (total.im / (2.0 * std::f64::consts::PI)).fract() * 2.0 * std::f64::consts::PI);
            prop_assert!(wrapped.re.abs() < 1e-8);
            prop_assert!(wrapped.im.abs() < 1e-8 || (wrapped.im.abs() - 2.0 * std::f64::consts::PI).abs() < 1e-8);
        }

        #[test]
        fn solve_residual_is_small(seed in proptest::collection::vec(-1.0f64..1.0, 32), n in 1usize..9) {
            let a = well_conditioned(n, &seed);
            let rhs: Vec<C> = (0..n).map(|i| C::new(seed[i % 32], 1.0)).collect();
            let (x, _) = lu_solve_det(&a, Some(&rhs)).unwrap();
            let ax = a.matvec(&x.unwrap());
            let num: f64 = ax.iter().zip(&rhs).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
            let den: f64 = rhs.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(num / den < 1e-10);
        }
    }
}
