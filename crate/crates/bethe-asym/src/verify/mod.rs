//! Identity checks for the combinatorial and series machinery: cycle
//! expansion of determinants, the Lagrange-series family, finite-N
//! Fredholm equivalences and the free-fermion suite.
//!
//! Every check yields a residual; [`run_suite`] compares each one with its
//! tolerance and reports instead of failing early.

pub mod cycle;
pub mod finite_n;
pub mod free_fermion;
pub mod lagrange;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::fredholm::Contour;
use crate::{ComplexMatrix, Error, Result, C64};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// One verified identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, passed: residual < tolerance }
    }
}

/// Check groups runnable on their own.
pub const GROUPS: [&str; 4] = ["cycle", "lagrange", "fredholm", "free-fermion"];

/// `count` random complex matrices with entries in the unit square, sizes
/// cycling through `2..=6`.
pub fn random_matrices(seed: u64, count: usize) -> Vec<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = 2 + k % 5;
            ComplexMatrix::from_fn(n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect()
}

fn cycle_group(seed: u64) -> Result<Vec<CheckRecord>> {
    let mats = random_matrices(seed, 100);
    let worst = mats
        .par_iter()
        .map(cycle::cycle_expansion_check)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut out = vec![CheckRecord::new("cycle/100 random matrices n=2..6 (worst)", worst, 1e-11)];
    let bad_counts = (1..=cycle::MAX_CYCLE_DIM)
        .filter(|&n| cycle::cycle_types(n).len() as u64 != cycle::partition_count(n))
        .count();
    out.push(CheckRecord::new("cycle/configuration count = p(n), n=1..8", bad_counts as f64, 0.5));
    Ok(out)
}

fn lagrange_group() -> Result<Vec<CheckRecord>> {
    use lagrange::*;
    let mut out = vec![
        CheckRecord::new("lagrange/scalar t=0.2 N=30", lagrange_scalar_check(0.2, 30)?.residual, 1e-10),
        CheckRecord::new("lagrange/scalar t=0.05 N=15", lagrange_scalar_check(0.05, 15)?.residual, 1e-12),
    ];
    let m12 = lagrange_matrix_check(&LagrangeMatrixProblem::cosine_example(vec![0.0, 1.2], 12))?.residual;
    let m24 = lagrange_matrix_check(&LagrangeMatrixProblem::cosine_example(vec![0.0, 1.2], 24))?.residual;
    out.push(CheckRecord::new("lagrange/matrix N=2 truncation 12", m12, 1e-8));
    out.push(CheckRecord::new("lagrange/matrix N=2 doubling gain (24 vs 12)", m24 * 10.0 / m12, 1.0));
    let p = LagrangeContinuousProblem::gaussian_example(CONTINUOUS_TRUNCATION);
    let c48 = lagrange_continuous_check(&p, 48)?.residual;
    let c96 = lagrange_continuous_check(&p.with_truncation(2 * CONTINUOUS_TRUNCATION), 96)?.residual;
    out.push(CheckRecord::new("lagrange/continuous 48 nodes", c48, 1e-6));
    out.push(CheckRecord::new("lagrange/continuous doubling gain (96 vs 48)", c96 * 10.0 / c48, 1.0));
    let grid = crate::numkit::gauss_legendre(5, -1.0, 1.0)?;
    let fast = p.with_truncation(5).series_terms(&grid);
    let slow = p.literal_terms(&grid, 5)?;
    let lit = fast.iter().zip(&slow).map(|(a, b)| (a - b).abs() / b.abs()).fold(0.0, f64::max);
    out.push(CheckRecord::new("lagrange/continuous orders 0..5 vs literal definition", lit, 1e-12));
    out.push(CheckRecord::new(
        "lagrange/multi-series n=2 vs summed form",
        lagrange_multi_check(&LagrangeMultiProblem::gaussian_example(2, 0.1), 48)?,
        1e-8,
    ));
    Ok(out)
}

/// Truncation order of the continuous series at 48 nodes.
pub const CONTINUOUS_TRUNCATION: usize = 8;

fn fredholm_group(seed: u64) -> Result<Vec<CheckRecord>> {
    use finite_n::*;
    let contour = Contour::ellipse(1.0, 0.25, 256)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let single = FiniteBetheData::new(PI / 3.0, C64::new(0.5, 0.0), C64::new(0.3, 0.05), vec![0.2], vec![C64::new(0.2, 0.1)])?;
    let (l1, z1) = fredholm_equiv_check(&single, &contour)?;
    let data = FiniteBetheData::random(&mut rng, 3, 1.0, PI / 3.0, C64::new(0.7, 0.0), C64::new(0.3, 0.05))?;
    let (l3, z3) = fredholm_equiv_check(&data, &contour)?;
    Ok(vec![
        CheckRecord::new("fredholm/N=1 lambda family", l1, 1e-9),
        CheckRecord::new("fredholm/N=1 z family", z1, 1e-9),
        CheckRecord::new("fredholm/N=3 lambda family", l3, 1e-8),
        CheckRecord::new("fredholm/N=3 z family", z3, 1e-8),
        CheckRecord::new("fredholm/theta-independence N=3", comb_theta_check(&data, C64::new(0.3, 0.05), C64::new(-0.5, 0.1))?, 1e-8),
        CheckRecord::new("fredholm/shift identity N=3", shift_identity_finite(&data, &contour, C64::new(0.1, 0.02))?, 1e-8),
    ])
}

/// Runs the selected group (`None` = all) with the given seed.
pub fn run_suite(only: Option<&str>, seed: u64) -> Result<Vec<CheckRecord>> {
    if let Some(g) = only {
        if !GROUPS.contains(&g) {
            return Err(Error::InvalidArgument(format!("unknown check group '{g}' (known: {})", GROUPS.join(", "))));
        }
    }
    let selected: Vec<&str> = GROUPS.iter().copied().filter(|g| only.is_none_or(|o| o == *g)).collect();
    let results: Vec<Result<Vec<CheckRecord>>> = selected
        .par_iter()
        .map(|&g| match g {
            "cycle" => cycle_group(seed),
            "lagrange" => lagrange_group(),
            "fredholm" => fredholm_group(seed),
            _ => {
                let mut v = free_fermion::free_fermion_suite(2.0, 256, seed)?;
                v.extend(free_fermion::free_fermion_suite(0.5, 256, seed)?);
                Ok(v)
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
