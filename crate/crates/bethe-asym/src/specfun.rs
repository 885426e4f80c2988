//! Complex log-Gamma and the Barnes G function.
//!
//! `log_barnes_g1(z)` returns `log G(1+z)`. Three evaluation regimes:
//!
//! * `|z| ≤ 3/4`: the Taylor series of `log G(1+z)` whose coefficients are
//!   Riemann zeta values (geometric convergence, radius 1);
//! * `|Im z| ≤ 1/2`, `|z| < 10`: the functional equation `G(1+z) = Γ(z)G(z)`
//!   shifts the real part into the disk above;
//! * otherwise: shift up until `|z| ≥ 10` and use the large-argument
//!   expansion, stepping back with the same functional equation.
//!
//! Results are logarithms on a branch that is continuous along each
//! evaluation path; they agree with the principal branch modulo `2πi`, which
//! is all that matters once exponentiated.

// Constants are written out to more digits than f64 holds, as tabulated.
#![allow(clippy::excessive_precision)]

use std::sync::OnceLock;

use num_complex::Complex;

use crate::{Error, Result, Scalar};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
/// ζ'(−1) = 1/12 − log A (A the Glaisher–Kinkelin constant).
const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_929_21;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k+2} for k = 1..=10.
const BERNOULLI_EVEN: [f64; 10] = [
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

const TAYLOR_RADIUS: f64 = 0.75;
const TAYLOR_TERMS: usize = 160;
const ASYMPTOTIC_RADIUS: f64 = 10.0;

fn c<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

fn is_nonpositive_integer<T: Scalar>(z: Complex<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round()
}

/// Principal-branch `log Γ(z)` (Lanczos, g = 7, reflection for `Re z < 1/2`).
pub fn log_gamma<T: Scalar>(z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("log_gamma: non-finite argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(format!("{z}")));
    }
    Ok(log_gamma_unchecked(z))
}

fn log_gamma_unchecked<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let pi = T::PI();
        let s = (z * pi).sin();
        let log_sin = log_sin_pi(z, s);
        return Complex::new(pi.ln(), T::zero()) - log_sin - log_gamma_unchecked(Complex::new(T::one(), T::zero()) - z);
    }
    let zm = z - T::one();
    let mut x = c::<T>(LANCZOS[0], 0.0);
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        x = x + Complex::new(T::lit(coef), T::zero()) / (zm + T::lit(i as f64));
    }
    let t = zm + T::lit(LANCZOS_G + 0.5);
    Complex::new(T::lit(0.5) * (T::TAU()).ln(), T::zero()) + (zm + half) * t.ln() - t + x.ln()
}

/// `log sin(πz)` without overflow for large `|Im z|`.
fn log_sin_pi<T: Scalar>(z: Complex<T>, s: Complex<T>) -> Complex<T> {
    let big = T::lit(30.0);
    let pi = T::PI();
    if z.im.abs() < big {
        return s.ln();
    }
    // sin(πz) ≈ ∓ e^{∓iπz}/(2i) for Im z → ±∞
    let i = Complex::new(T::zero(), T::one());
    if z.im > T::zero() {
        -i * pi * z - (i * T::lit(2.0)).ln() + Complex::new(T::zero(), pi)
    } else {
        i * pi * z - (i * T::lit(2.0)).ln()
    }
}

/// ζ(k) for k = 0..TAYLOR_TERMS+2 (entries 0 and 1 unused), by
/// Euler–Maclaurin summation with N = 12.
fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_{2j}/(2j)! for j = 1..=8
        let b2j = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];
        let n_cut = 12.0f64;
        let mut out = vec![f64::NAN; TAYLOR_TERMS + 3];
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let s = k as f64;
            let mut sum: f64 = (1..12).map(|n| (n as f64).powf(-s)).sum();
            sum += n_cut.powf(1.0 - s) / (s - 1.0) + 0.5 * n_cut.powf(-s);
            let mut rising = s; // s(s+1)…(s+2j−2)
            let mut fact = 2.0; // (2j)!
            for (j, &b) in b2j.iter().enumerate() {
                let j = j + 1;
                let term = b / fact * rising * n_cut.powf(-s - 2.0 * j as f64 + 1.0);
                sum += term;
                if term.abs() < 1e-18 * sum {
                    break;
                }
                rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
                fact *= (2.0 * j as f64 + 1.0) * (2.0 * j as f64 + 2.0);
            }
            *slot = sum;
        }
        out
    })
}

fn barnes_taylor<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let zeta = zeta_table();
    let log_tau = T::TAU().ln();
    let two = T::lit(2.0);
    let mut acc = z * log_tau / two - (z + z * z * T::lit(1.0 + EULER_GAMMA)) / two;
    let mut pow = z * z * z; // z^{k+1}, k = 2
    for (k, &zk) in zeta.iter().enumerate().take(TAYLOR_TERMS + 3).skip(2) {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let term = pow * (sign * T::lit(zk) / T::lit((k + 1) as f64));
        acc = acc + term;
        if term.norm() < T::epsilon() * T::lit(1e-3) * acc.norm().max(T::one()) {
            break;
        }
        pow = pow * z;
    }
    acc
}

fn barnes_asymptotic<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let lz = z.ln();
    let z2 = z * z;
    let mut acc = z2 * lz / T::lit(2.0) - z2 * T::lit(0.75) + z * (T::TAU().ln() / T::lit(2.0))
        - lz / T::lit(12.0)
        + c::<T>(ZETA_PRIME_MINUS_ONE, 0.0);
    let inv2 = Complex::new(T::one(), T::zero()) / z2;
    let mut p = inv2;
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = (k + 1) as f64;
        let term = p * T::lit(b / (4.0 * k * (k + 1.0)));
        acc = acc + term;
        if term.norm() < T::epsilon() * T::lit(1e-3) * acc.norm() {
            break;
        }
        p = p * inv2;
    }
    acc
}

/// `log G(1+z)`.
pub fn log_barnes_g1<T: Scalar>(z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("log_barnes_g1: non-finite argument {z}")));
    }
    if z.im == T::zero() && z.re <= -T::one() && z.re == z.re.round() {
        return Err(Error::BarnesZero(format!("G(1+z) = 0 at z = {z}")));
    }
    let radius = T::lit(TAYLOR_RADIUS);
    let half = T::lit(0.5);
    let far = T::lit(ASYMPTOTIC_RADIUS);
    if z.norm() <= radius {
        return Ok(barnes_taylor(z));
    }
    if z.norm() >= far && z.re > -z.im.abs() {
        return Ok(barnes_asymptotic(z));
    }
    if z.im.abs() <= half && z.norm() < far {
        // Move the real part into [-1/2, 1/2].
        let mut w = z;
        let mut acc = Complex::new(T::zero(), T::zero());
        while w.re > half {
            // log G(1+w) = log Γ(w) + log G(w)
            acc = acc + log_gamma_unchecked(w);
            w = w - T::one();
        }
        while w.re < -half {
            // log G(1+w) = log G(2+w) − log Γ(1+w)
            acc = acc - log_gamma(w + T::one())?;
            w = w + T::one();
        }
        return Ok(acc + barnes_taylor(w));
    }
    // Shift up until the large-argument expansion applies.
    let mut w = z;
    let mut acc = Complex::new(T::zero(), T::zero());
    while w.norm() < far || w.re <= T::zero() {
        // log G(1+w) = log G(2+w) − log Γ(1+w)
        acc = acc - log_gamma(w + T::one())?;
        w = w + T::one();
    }
    Ok(acc + barnes_asymptotic(w))
}

/// `log[G(offset+z)·G(offset−z)]` for `offset ∈ {1, 2}`.
pub fn barnes_pair<T: Scalar>(z: Complex<T>, offset: u32) -> Result<Complex<T>> {
    let base = match offset {
        1 => T::zero(),
        2 => T::one(),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "barnes_pair: offset must be 1 or 2, got {offset}"
            )))
        }
    };
    if offset == 1 && z.im == T::zero() && (z.re.abs() == T::one()) {
        return Err(Error::BarnesZero(format!("G(1+z)G(1−z) vanishes at z = {z}")));
    }
    let one = Complex::new(base, T::zero());
    Ok(log_barnes_g1(one + z)? + log_barnes_g1(one - z)?)
}
