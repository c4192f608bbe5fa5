//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    factorial(n as u64) / (factorial(k as u64) * factorial((n - k) as u64))
}

/// `L_n^l(num/den)` as an exact rational, by the explicit factorial sum
/// `sum_j (-1)^j C(n+l, n-j) x^j / j!`. Valid for `n + l >= 0`.
pub fn laguerre_exact(n: i64, l: i64, num: i64, den: i64) -> BigRational {
    let x = BigRational::new(BigInt::from(num), BigInt::from(den));
    let mut sum = BigRational::zero();
    let mut xj = BigRational::one();
    for j in 0..=n {
        let term = BigRational::from_integer(binomial(n + l, n - j)) * xj.clone()
            / BigRational::from_integer(factorial(j as u64));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        xj *= x.clone();
    }
    sum
}

/// `I_{s,s'}(alpha) = sqrt(s'!/s!) e^{-alpha/2} alpha^{(s-s')/2} L_{s'}^{s-s'}(alpha)`
/// with the polynomial evaluated exactly, for `alpha = num/den > 0`.
pub fn laguerre_fn_exact(s: i64, sp: i64, num: i64, den: i64) -> f64 {
    let poly = laguerre_exact(sp, s - sp, num, den).to_f64().expect("finite");
    let alpha = num as f64 / den as f64;
    let ln_fact = |k: i64| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    let ln_pref = 0.5 * (ln_fact(sp) - ln_fact(s)) - alpha / 2.0 + 0.5 * (s - sp) as f64 * alpha.ln();
    poly * ln_pref.exp()
}

/// All eigenvalues of a dense symmetric matrix from nalgebra, ascending.
pub fn nalgebra_eigenvalues(n: usize, entry: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let m = DMatrix::from_fn(n, n, entry);
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Running maximum of `|y|` over a centred window of `width` samples.
pub fn envelope(y: &[f64], width: usize) -> Vec<f64> {
    let h = width / 2;
    (0..y.len())
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h + 1).min(y.len());
            y[lo..hi].iter().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect()
}
