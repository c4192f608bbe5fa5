mod oracles;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qutrit_core::special::{displaced_fock_amplitude, displaced_fock_coeffs};
use qutrit_core::{laguerre_fn, laguerre_poly};

#[test]
fn low_order_laguerre_values() {
    // L_1^l(x) = 1 + l - x, L_2^0(x) = (x^2 - 4x + 2) / 2
    assert_eq!(laguerre_poly(1, 3, 2.0f64), 2.0);
    assert!((laguerre_poly(2, 0, 3.0f64) - (-0.5)).abs() < 1e-15);
    assert_eq!(laguerre_poly(0, -5, 7.0f64), 1.0);
}

#[test]
fn diagonal_element_at_zero_displacement_is_one() {
    for s in 0..40 {
        assert!((laguerre_fn(s, s, 0.0f64) - 1.0).abs() < 1e-15);
        assert_eq!(laguerre_fn(s + 1, s, 0.0f64), 0.0);
    }
}

#[test]
fn vacuum_column_is_a_coherent_state() {
    // <M|D(beta)|0> = e^{-beta^2/2} beta^M / sqrt(M!)
    let beta = 1.7f64;
    let mut ln_m_fact = 0.0;
    for m in 0..40usize {
        if m > 0 {
            ln_m_fact += (m as f64).ln();
        }
        let exact = (-beta * beta / 2.0 + m as f64 * beta.ln() - 0.5 * ln_m_fact).exp();
        let got = displaced_fock_amplitude(m, 0, beta);
        assert!((got / exact - 1.0).abs() < 1e-12, "M = {m}: {got} vs {exact}");
    }
}

#[test]
fn negative_indices_vanish() {
    assert_eq!(laguerre_fn(-1, 3, 0.5f64), 0.0);
    assert_eq!(laguerre_fn(3, -2, 0.5f64), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_matches_big_rational_sum(n in 0i64..25, l in -5i64..25, num in 0i64..400, den in 1i64..40) {
        prop_assume!(n + l >= 0);
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let got = laguerre_poly(n as usize, l, x);
        prop_assert_eq!(got, oracles::laguerre_exact(n, l, num, den));
    }

    #[test]
    fn index_swap_flips_sign_by_parity(s in 0i64..40, sp in 0i64..40, alpha in 0.0f64..30.0) {
        let a = laguerre_fn(s, sp, alpha);
        let b = laguerre_fn(sp, s, alpha);
        let sign = if (s - sp).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn displaced_columns_are_normalized(n in 0usize..30, beta in -4.0f64..4.0) {
        let c = displaced_fock_coeffs(n, beta, 200).unwrap();
        prop_assert!((c.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn displaced_columns_are_orthogonal(n1 in 0usize..20, n2 in 0usize..20, beta in -3.0f64..3.0) {
        prop_assume!(n1 != n2);
        let a = displaced_fock_coeffs(n1, beta, 160).unwrap();
        let b = displaced_fock_coeffs(n2, beta, 160).unwrap();
        let overlap: f64 = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum();
        prop_assert!(overlap.abs() < 1e-10);
    }

    #[test]
    fn opposite_displacement_is_the_transpose(m in 0usize..30, n in 0usize..30, beta in 0.0f64..4.0) {
        let fwd = displaced_fock_amplitude(m, n, beta);
        let back = displaced_fock_amplitude(n, m, -beta);
        prop_assert!((fwd - back).abs() < 1e-13);
    }

    #[test]
    fn single_precision_tracks_double(s in 0i64..15, sp in 0i64..15, alpha in 0.0f32..6.0) {
        let lo = laguerre_fn(s, sp, alpha) as f64;
        let hi = laguerre_fn(s, sp, alpha as f64);
        prop_assert!((lo - hi).abs() < 1e-4 * hi.abs().max(1e-3));
    }
}
