//! Determinant as a sum over cycle types:
//! `det A = Σ_{ℓ : Σ s ℓ_s = n} Π_s (1/ℓ_s!) ((−1)^{s+1}/s)^{ℓ_s} [tr Aˢ]^{ℓ_s}`.

use crate::{ComplexMatrix, Error, Lu, Result, C64};

/// Largest dimension for which the constrained sum is enumerated.
pub const MAX_CYCLE_DIM: usize = 8;

/// All multiplicity vectors `ℓ = (ℓ₁, …, ℓ_n)` with `Σ s·ℓ_s = n`, i.e. the
/// integer partitions of `n`.
pub fn cycle_types(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, largest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for s in (1..=largest.min(rest)).rev() {
            cur[s - 1] += 1;
            rec(rest - s, s, cur, out);
            cur[s - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut vec![0; n], &mut out);
    out
}

/// Number of integer partitions of `n` (Euler's pentagonal recurrence).
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i64;
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p[n] as u64
}

/// Cycle-expansion value of `det A` and the number of configurations summed.
pub fn cycle_expansion(a: &ComplexMatrix) -> Result<(C64, usize)> {
    let n = a.dim();
    if n == 0 {
        return Ok((C64::new(1.0, 0.0), 1));
    }
    if n > MAX_CYCLE_DIM {
        return Err(Error::InvalidArgument(format!("cycle expansion enumerated up to n = {MAX_CYCLE_DIM}, got {n}")));
    }
    let mut traces = Vec::with_capacity(n);
    let mut power = a.clone();
    traces.push(power.trace());
    for _ in 1..n {
        power = power.matmul(a);
        traces.push(power.trace());
    }
    let types = cycle_types(n);
    let mut total = C64::new(0.0, 0.0);
    for l in &types {
        let mut term = C64::new(1.0, 0.0);
        for (idx, &mult) in l.iter().enumerate() {
            let s = idx + 1;
            let c = if s % 2 == 1 { 1.0 } else { -1.0 } / s as f64;
            for k in 1..=mult {
                term *= traces[idx] * c / k as f64;
            }
        }
        total += term;
    }
    Ok((total, types.len()))
}

/// `|det A − cycle expansion| / |det A|` with the LU determinant as oracle.
pub fn cycle_expansion_check(a: &ComplexMatrix) -> Result<f64> {
    let (series, _) = cycle_expansion(a)?;
    let det = Lu::new(a)?.det();
    Ok((det - series).norm() / det.norm())
}
