//! Frequency extraction from sampled oscillating signals.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `|sum_j (y_j - mean) e^{-i w t_j}|^2`.
pub fn spectral_power<T: Real>(t: &[T], y: &[T], w: T) -> T {
    let mean = y.iter().copied().sum::<T>() / T::of_usize(y.len());
    let (mut re, mut im) = (T::zero(), T::zero());
    for (&tj, &yj) in t.iter().zip(y) {
        let (s, c) = (w * tj).sin_cos();
        re += (yj - mean) * c;
        im -= (yj - mean) * s;
    }
    re * re + im * im
}

/// Angular frequency of the strongest oscillation in `y(t)`.
///
/// Scans the discrete Fourier frequencies `2 pi k / T` of the record and
/// refines the peak by golden-section search between its neighbours, which
/// removes most of the bin quantization when the record does not span an
/// integer number of periods.
pub fn dominant_frequency<T: Real>(t: &[T], y: &[T]) -> Result<T> {
    if t.len() != y.len() || t.len() < 4 {
        return Err(Error::Dimension(format!(
            "need at least 4 matching samples, got {} times and {} values",
            t.len(),
            y.len()
        )));
    }
    let span = t[t.len() - 1] - t[0];
    if !(span > T::zero()) {
        return Err(Error::Domain("sample times must increase".into()));
    }
    let base = T::lit(2.0) * T::PI() / span;
    let bins = t.len() / 2;
    let (best, _) = (1..=bins)
        .map(|k| (k, spectral_power(t, y, base * T::of_usize(k))))
        .fold((1, T::neg_infinity()), |acc, x| if x.1 > acc.1 { x } else { acc });

    let mut a = base * (T::of_usize(best) - T::one()).max(T::lit(0.5));
    let mut b = base * (T::of_usize(best) + T::one());
    let g = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = spectral_power(t, y, c);
    let mut fd = spectral_power(t, y, d);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = spectral_power(t, y, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = spectral_power(t, y, d);
        }
    }
    Ok((a + b) * T::lit(0.5))
}

/// Frequency estimate from the mean spacing of upward mean crossings.
pub fn crossing_frequency<T: Real>(t: &[T], y: &[T]) -> Option<T> {
    let mean = y.iter().copied().sum::<T>() / T::of_usize(y.len());
    let mut crossings = Vec::new();
    for j in 1..y.len().min(t.len()) {
        let (y0, y1) = (y[j - 1] - mean, y[j] - mean);
        if y0 < T::zero() && y1 >= T::zero() {
            let f = y0 / (y0 - y1);
            crossings.push(t[j - 1] + f * (t[j] - t[j - 1]));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    let periods = T::of_usize(crossings.len() - 1);
    let period = (crossings[crossings.len() - 1] - crossings[0]) / periods;
    Some(T::lit(2.0) * T::PI() / period)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_pure_tone_off_the_bin_grid() {
        let w = 0.0123f64;
        let t: Vec<f64> = (0..800).map(|i| i as f64 * 2.0).collect();
        let y: Vec<f64> = t.iter().map(|&x| (w * x + 0.3).cos()).collect();
        let est = dominant_frequency(&t, &y).unwrap();
        assert!((est / w - 1.0).abs() < 1e-3, "{est}");
        let cross = crossing_frequency(&t, &y).unwrap();
        assert!((cross / w - 1.0).abs() < 1e-3, "{cross}");
    }

    #[test]
    fn rejects_short_records() {
        assert!(dominant_frequency(&[0.0f64, 1.0], &[1.0, 0.0]).is_err());
    }
}
