//! Reference implementations written independently of the library code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use receptor_capacity::ProbabilityGrid;

/// `C(n, k) p^k (1 - p)^(n - k)` in exact integer arithmetic on the binary value of `p`.
pub fn exact_binomial_pmf(k: u32, n: u32, p: f64) -> f64 {
    // p = a / 2^e exactly
    let p = BigRational::from_float(p).expect("finite p");
    let a = p.numer().clone();
    let scale = p.denom().clone();
    let e = scale.bits() - 1;
    let mut coeff = BigInt::one();
    for j in 0..k {
        coeff = coeff * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    let numer = coeff * a.pow(k) * (&scale - &a).pow(n - k);
    if numer.is_zero() {
        return 0.0;
    }
    // numer / 2^(e n), keeping the top 64 bits of the numerator
    let shift = numer.bits().saturating_sub(64);
    let top = (numer >> shift).to_f64().expect("fits");
    let exponent = shift as i64 - e as i64 * i64::from(n);
    let half = exponent / 2;
    top * 2f64.powi(half as i32) * 2f64.powi((exponent - half) as i32)
}

/// Binomial pmf row by the multiplicative recurrence, adequate for small `n`.
pub fn recurrence_row(p: f64, n: usize) -> Vec<f64> {
    if p == 0.0 || p == 1.0 {
        let mut row = vec![0.0; n + 1];
        row[if p == 0.0 { 0 } else { n }] = 1.0;
        return row;
    }
    let mut row = Vec::with_capacity(n + 1);
    let mut v = (1.0 - p).powi(n as i32);
    row.push(v);
    for i in 0..n {
        v *= (n - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
        row.push(v);
    }
    row
}

/// Mutual information in bits as the plain double sum over inputs and outputs.
pub fn double_sum_mi(points: &[f64], masses: &[f64], n: usize) -> f64 {
    let rows: Vec<Vec<f64>> = points.iter().map(|&x| recurrence_row(x, n)).collect();
    let mut out = vec![0.0; n + 1];
    for (row, &m) in rows.iter().zip(masses) {
        for (o, &v) in out.iter_mut().zip(row) {
            *o += m * v;
        }
    }
    let mut total = 0.0;
    for (row, &m) in rows.iter().zip(masses) {
        for (i, &v) in row.iter().enumerate() {
            if m > 0.0 && v > 0.0 {
                total += m * v * (v / out[i]).log2();
            }
        }
    }
    total
}

/// Random grid of `2..=max_points` sorted points in `[0, 1]` with random masses.
pub fn random_grid(rng: &mut ChaCha8Rng, max_points: usize) -> ProbabilityGrid {
    let k = rng.gen_range(2..=max_points);
    let mut points: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let raw: Vec<f64> = points.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let masses = raw.iter().map(|m| m / total).collect();
    ProbabilityGrid::new(points, masses, 1.0).expect("valid random grid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two-point input `{a, b}` maximizing the double-sum mutual information by brute
/// force over a `k x k` lattice on `[0, s]` and the mixing weight.
pub fn brute_force_two_point(n: usize, s: f64, k: usize) -> f64 {
    let mut best = 0.0f64;
    for i in 0..k {
        for j in i + 1..k {
            let a = s * i as f64 / (k - 1) as f64;
            let b = s * j as f64 / (k - 1) as f64;
            for w in 1..100 {
                let w = w as f64 / 100.0;
                best = best.max(double_sum_mi(&[a, b], &[w, 1.0 - w], n));
            }
        }
    }
    best
}

/// Textbook Blahut-Arimoto in the linear domain for a fixed number of
/// iterations, returning the final lower bound in bits.
pub fn plain_blahut_arimoto(points: &[f64], n: usize, iterations: usize) -> f64 {
    let rows: Vec<Vec<f64>> = points.iter().map(|&x| recurrence_row(x, n)).collect();
    let mut m = vec![1.0 / points.len() as f64; points.len()];
    let mut lower = 0.0;
    for _ in 0..iterations {
        let mut out = vec![0.0; n + 1];
        for (row, &w) in rows.iter().zip(&m) {
            for (o, &v) in out.iter_mut().zip(row) {
                *o += w * v;
            }
        }
        let d: Vec<f64> = rows
            .iter()
            .map(|row| row.iter().zip(&out).filter(|(&v, _)| v > 0.0).map(|(&v, &o)| v * (v / o).ln()).sum())
            .collect();
        lower = m.iter().zip(&d).map(|(w, d)| w * d).sum::<f64>() / std::f64::consts::LN_2;
        let mut z = 0.0;
        for (w, d) in m.iter_mut().zip(&d) {
            *w *= d.exp();
            z += *w;
        }
        m.iter_mut().for_each(|w| *w /= z);
    }
    lower
}
