//! Finite-N determinants `det_N[δ + U(θ)]` built from sets `{λ}` and `{z}`
//! versus Fredholm determinants of the corresponding contour kernels, their
//! θ-independence, and the closed forms at ζ = π/2.
//!
//! The data need not satisfy any Bethe equations: the equivalence is a
//! residue computation.

use std::f64::consts::PI;

use rand::Rng;

use crate::fredholm::{det_contour, shift_identity_check, Contour};
use crate::{ComplexMatrix, Error, Lu, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBetheData {
    pub zeta: f64,
    pub kappa: C64,
    pub theta: C64,
    pub lambdas: Vec<f64>,
    pub zs: Vec<C64>,
}

impl FiniteBetheData {
    pub fn new(zeta: f64, kappa: C64, theta: C64, lambdas: Vec<f64>, zs: Vec<C64>) -> Result<Self> {
        let d = Self { zeta, kappa, theta, lambdas, zs };
        d.validate()?;
        Ok(d)
    }

    /// `N` points λ uniform in `(−0.8q, 0.8q)`, each `z` within ±0.1(1+i)
    /// of its λ.
    pub fn random<R: Rng>(rng: &mut R, n: usize, q: f64, zeta: f64, kappa: C64, theta: C64) -> Result<Self> {
        let mut lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.8 * q..0.8 * q)).collect();
        lambdas.sort_by(f64::total_cmp);
        let zs = lambdas
            .iter()
            .map(|&l| C64::new(l + rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)))
            .collect();
        Self::new(zeta, kappa, theta, lambdas, zs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.lambdas.len() != self.zs.len() {
            return Err(Error::InvalidArgument(format!(
                "need equally many λ and z (got {} and {})",
                self.lambdas.len(),
                self.zs.len()
            )));
        }
        let n = self.lambdas.len();
        for a in 0..n {
            for b in 0..a {
                if (self.lambdas[a] - self.lambdas[b]).abs() < 1e-12 || (self.zs[a] - self.zs[b]).norm() < 1e-12 {
                    return Err(Error::InvalidArgument("λ's and z's must be pairwise distinct".into()));
                }
            }
            for z in &self.zs {
                if (z - self.lambdas[a]).norm() < 1e-12 {
                    return Err(Error::InvalidArgument("z coincides with a λ".into()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn with_theta(&self, theta: C64) -> Self {
        Self { theta, ..self.clone() }
    }

    /// `K_κ(x) = coth(x + iζ) − κ coth(x − iζ)`.
    pub fn k_kappa(&self, x: C64) -> C64 {
        let coth = |y: C64| y.cosh() / y.sinh();
        coth(x + I * self.zeta) - self.kappa * coth(x - I * self.zeta)
    }

    /// `V_±(μ) = Π_a sinh(μ − λ_a ± iζ)/sinh(μ − z_a ± iζ)`.
    pub fn v_pm(&self, mu: C64, sign: f64) -> C64 {
        let s = I * (sign * self.zeta);
        self.lambdas.iter().zip(&self.zs).map(|(&l, &z)| (mu - l + s).sinh() / (mu - z + s).sinh()).product()
    }

    /// `1/V₊(θ) − κ/V₋(θ)`, the θ-dependent normalization.
    pub fn normalizer(&self, theta: C64) -> C64 {
        1.0 / self.v_pm(theta, 1.0) - self.kappa / self.v_pm(theta, -1.0)
    }

    /// `U⁽λ⁾_{jk}(θ)`.
    pub fn u_lambda(&self) -> ComplexMatrix {
        let n = self.len();
        let lam: Vec<C64> = self.lambdas.iter().map(|&l| C64::new(l, 0.0)).collect();
        ComplexMatrix::from_fn(n, |j, k| {
            let num: C64 = self.zs.iter().map(|&z| (z - lam[j]).sinh()).product();
            let den: C64 = (0..n).filter(|&a| a != j).map(|a| (lam[a] - lam[j]).sinh()).product();
            let norm = self.normalizer(lam[j]);
            num / den / norm * (self.k_kappa(lam[j] - lam[k]) - self.k_kappa(self.theta - lam[k]))
        })
    }

    /// `U⁽ᶻ⁾_{jk}(θ)`.
    pub fn u_z(&self) -> ComplexMatrix {
        let n = self.len();
        let lam: Vec<C64> = self.lambdas.iter().map(|&l| C64::new(l, 0.0)).collect();
        ComplexMatrix::from_fn(n, |j, k| {
            let zk = self.zs[k];
            let num: C64 = lam.iter().map(|&l| (zk - l).sinh()).product();
            let den: C64 = (0..n).filter(|&a| a != k).map(|a| (zk - self.zs[a]).sinh()).product();
            let norm = self.v_pm(zk, -1.0) - self.kappa * self.v_pm(zk, 1.0);
            num / den / norm * (self.k_kappa(self.zs[j] - zk) - self.k_kappa(self.zs[j] - self.theta))
        })
    }

    /// Contour kernel `Û⁽λ⁾_θ(w, w′)`.
    pub fn uhat_lambda(&self, w: C64, wp: C64) -> C64 {
        let pre: C64 = self.lambdas.iter().zip(&self.zs).map(|(&l, &z)| (w - z).sinh() / (w - l).sinh()).product();
        -pre / self.normalizer(w) * (self.k_kappa(w - wp) - self.k_kappa(self.theta - wp))
    }

    /// Contour kernel `Û⁽ᶻ⁾_θ(w, w′)`.
    pub fn uhat_z(&self, w: C64, wp: C64) -> C64 {
        let pre: C64 = self.lambdas.iter().zip(&self.zs).map(|(&l, &z)| (wp - l).sinh() / (wp - z).sinh()).product();
        let den = self.v_pm(wp, -1.0) - self.kappa * self.v_pm(wp, 1.0);
        pre / den * (self.k_kappa(w - wp) - self.k_kappa(w - self.theta))
    }

    fn det_n(m: &ComplexMatrix) -> Result<C64> {
        let n = m.dim();
        let mut a = m.clone();
        for i in 0..n {
            a[(i, i)] += 1.0;
        }
        Ok(Lu::new(&a)?.det())
    }

    pub fn det_lambda(&self) -> Result<C64> {
        Self::det_n(&self.u_lambda())
    }

    pub fn det_z(&self) -> Result<C64> {
        Self::det_n(&self.u_z())
    }
}

/// Residuals `(λ-family, z-family)` of `det_N[δ + U(θ)] = det[I + Û_θ/2πi]`.
pub fn fredholm_equiv_check(data: &FiniteBetheData, contour: &Contour) -> Result<(f64, f64)> {
    if data.len() > 4 {
        return Err(Error::InvalidArgument(format!("N ≤ 4 expected, got {}", data.len())));
    }
    for &l in &data.lambdas {
        if contour.winding_number(C64::new(l, 0.0)).norm() < 0.5 {
            return Err(Error::ContourAnalyticity(format!("λ = {l} lies outside the contour")));
        }
    }
    for &z in &data.zs {
        if contour.winding_number(z).norm() < 0.5 {
            return Err(Error::ContourAnalyticity(format!("z = {z} lies outside the contour")));
        }
    }
    let rel = |a: C64, b: C64| (a - b).norm() / a.norm();
    let dl = data.det_lambda()?;
    let cl = det_contour(|w, wp| data.uhat_lambda(w, wp), contour)?.det();
    let dz = data.det_z()?;
    let cz = det_contour(|w, wp| data.uhat_z(w, wp), contour)?.det();
    Ok((rel(dl, cl), rel(dz, cz)))
}

/// θ-independence of `det_N[δ + U⁽λ⁾(θ)] / (1/V₊(θ) − κ/V₋(θ))`.
pub fn comb_theta_check(data: &FiniteBetheData, theta1: C64, theta2: C64) -> Result<f64> {
    let side = |t: C64| -> Result<C64> {
        let d = data.with_theta(t);
        Ok(d.det_lambda()? / d.normalizer(t))
    };
    let a = side(theta1)?;
    let b = side(theta2)?;
    Ok((a - b).norm() / a.norm())
}

/// Rank-one shift identity for the λ-family contour kernel with
/// `h(w) = e^{w}` and shift point `w0`.
pub fn shift_identity_finite(data: &FiniteBetheData, contour: &Contour, w0: C64) -> Result<f64> {
    shift_identity_check(|w, wp| data.uhat_lambda(w, wp), |w: C64| w.exp(), w0, &contour.measure())
}

/// Residuals of the ζ = π/2 closed forms
/// `det[δ + U⁽λ⁾] = Π cosh(θ−z)/cosh(θ−λ) · C` and
/// `det[δ + U⁽ᶻ⁾] = Π cosh(θ−λ)/cosh(θ−z) · C` with the Cauchy-type
/// `C = Π_{a>b} cosh(z_a−z_b)cosh(λ_a−λ_b) / Π_{a,b} cosh(z_a−λ_b)`.
pub fn free_fermion_closed_forms(data: &FiniteBetheData) -> Result<(f64, f64)> {
    if (data.zeta - PI / 2.0).abs() > 1e-14 {
        return Err(Error::InvalidArgument(format!("closed forms hold at ζ = π/2, got {}", data.zeta)));
    }
    let n = data.len();
    let lam: Vec<C64> = data.lambdas.iter().map(|&l| C64::new(l, 0.0)).collect();
    let mut cauchy = C64::new(1.0, 0.0);
    for a in 0..n {
        for b in 0..a {
            cauchy *= (data.zs[a] - data.zs[b]).cosh() * (lam[a] - lam[b]).cosh();
        }
        for b in 0..n {
            cauchy /= (data.zs[a] - lam[b]).cosh();
        }
    }
    let ratio: C64 = lam.iter().zip(&data.zs).map(|(&l, &z)| (data.theta - z).cosh() / (data.theta - l).cosh()).product();
    let rl = ratio * cauchy;
    let rz = cauchy / ratio;
    let dl = data.det_lambda()?;
    let dz = data.det_z()?;
    Ok(((dl - rl).norm() / dl.norm(), (dz - rz).norm() / dz.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn contour() -> Contour {
        Contour::ellipse(1.0, 0.25, 256).unwrap()
    }

    #[test]
    fn single_root() {
        let d = FiniteBetheData::new(PI / 3.0, C64::new(0.5, 0.0), C64::new(0.3, 0.05), vec![0.2], vec![C64::new(0.2, 0.1)]).unwrap();
        let (rl, rz) = fredholm_equiv_check(&d, &contour()).unwrap();
        assert!(rl < 1e-9 && rz < 1e-9, "{rl} {rz}");
    }

    #[test]
    fn three_roots_and_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let d = FiniteBetheData::random(&mut rng, 3, 1.0, PI / 3.0, C64::new(0.7, 0.0), C64::new(0.3, 0.05)).unwrap();
        let (rl, rz) = fredholm_equiv_check(&d, &contour()).unwrap();
        assert!(rl < 1e-8 && rz < 1e-8, "{rl} {rz}");
        assert!(comb_theta_check(&d, C64::new(0.3, 0.05), C64::new(-0.5, 0.1)).unwrap() < 1e-8);
        assert!(shift_identity_finite(&d, &contour(), C64::new(0.1, 0.02)).unwrap() < 1e-8);
    }

    #[test]
    fn free_fermion_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3] {
            let d = FiniteBetheData::random(&mut rng, n, 1.0, PI / 2.0, C64::new(0.7, 0.0), C64::new(0.4, 0.1)).unwrap();
            let (a, b) = free_fermion_closed_forms(&d).unwrap();
            assert!(a < 1e-10 && b < 1e-10, "{a} {b}");
        }
        let d = FiniteBetheData::new(PI / 3.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0), vec![0.1], vec![C64::new(0.0, 0.1)]).unwrap();
        assert!(free_fermion_closed_forms(&d).is_err());
    }

    #[test]
    fn invalid_data() {
        assert!(FiniteBetheData::new(1.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0), vec![0.1, 0.1], vec![C64::new(0.0, 0.1), C64::new(0.0, 0.2)]).is_err());
        assert!(FiniteBetheData::new(1.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0), vec![0.1], vec![]).is_err());
        let far = FiniteBetheData::new(PI / 3.0, C64::new(0.5, 0.0), C64::new(0.0, 0.0), vec![0.2], vec![C64::new(3.0, 0.0)]).unwrap();
        assert!(matches!(fredholm_equiv_check(&far, &contour()), Err(Error::ContourAnalyticity(_))));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]
        #[test]
        fn equivalence_random(seed in 0u64..10_000, n in 1usize..=3, kre in 0.2f64..1.5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = FiniteBetheData::random(&mut rng, n, 1.0, PI / 3.0, C64::new(kre, 0.0), C64::new(0.3, 0.05)).unwrap();
            let (rl, rz) = fredholm_equiv_check(&d, &contour()).unwrap();
            proptest::prop_assert!(rl < 1e-7 && rz < 1e-7, "{} {}", rl, rz);
        }
    }
}
