use num_complex::Complex64;
use powerfree_core::digits::{digit_count, is_palindrome};
use powerfree_core::expsum::{
    brute_reversible, geometric_sum, missing_digit_transform, odd_palindromes_transform,
    palindrome_transform, phi, phi_prime, phi_tilde, reversible_transform,
};
use powerfree_core::{Base, Phase};
use proptest::prelude::*;

fn base(b: u64) -> Base {
    Base::new(b).unwrap()
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * x)
}

// Direct sum with phases reduced as exact integers mod 2^64.
fn naive(members: impl Iterator<Item = u64>, t: Phase) -> Complex64 {
    let bits = t.to_fixed_bits();
    members
        .map(|n| e(bits.wrapping_mul(n) as f64 / 18_446_744_073_709_551_616.0))
        .sum()
}

fn grid(n: u64) -> impl Iterator<Item = Phase> {
    let step = u64::MAX / n;
    (0..n).map(move |i| Phase::from_fixed_bits(i * step + 0x5bd1_0000))
}

#[test]
fn palindrome_strata_match_direct_sums() {
    for b in [2u64, 3, 5, 10] {
        let bb = base(b);
        for l in 0..=3u32 {
            let len = 2 * l + 1;
            let lo = if len == 1 { 0 } else { b.pow(len - 1) };
            let members: Vec<u64> = (lo..b.pow(len))
                .filter(|&n| is_palindrome(n as u128, bb))
                .collect();
            let size = if len == 1 {
                b as f64
            } else {
                (b - 1) as f64 * (b as f64).powi(l as i32)
            };
            assert_eq!(members.len() as f64, size);
            for t in grid(1000) {
                let got = palindrome_transform(bb, len, t);
                let want = naive(members.iter().copied(), t);
                assert!(
                    (got - want).norm() <= 1e-9 * size,
                    "b={b} len={len} t={} got={got} want={want}",
                    t.to_f64()
                );
            }
        }
    }
}

#[test]
fn even_lengths_match_direct_sums() {
    let bb = base(10);
    for len in [2u32, 4] {
        let members: Vec<u64> = (10u64.pow(len - 1)..10u64.pow(len))
            .filter(|&n| is_palindrome(n as u128, bb))
            .collect();
        for t in grid(200) {
            let got = palindrome_transform(bb, len, t);
            assert!((got - naive(members.iter().copied(), t)).norm() < 1e-9 * members.len() as f64);
        }
    }
}

#[test]
fn odd_palindromes_sum_strata() {
    let bb = base(3);
    let members: Vec<u64> = (0..3u64.pow(7))
        .filter(|&n| is_palindrome(n as u128, bb) && digit_count(n as u128, bb) % 2 == 1)
        .collect();
    for t in grid(300) {
        let got = odd_palindromes_transform(bb, 3, t);
        assert!((got - naive(members.iter().copied(), t)).norm() < 1e-9 * members.len() as f64);
    }
}

#[test]
fn missing_digit_strings_match_direct_sums() {
    for (b, k) in [(3u64, 4u32), (5, 3), (10, 2)] {
        for a0 in 0..b {
            let members: Vec<u64> = (0..b.pow(k))
                .filter(|&n| (0..k).all(|j| (n / b.pow(j)) % b != a0))
                .collect();
            let size = ((b - 1) as f64).powi(k as i32);
            assert_eq!(members.len() as f64, size);
            for t in grid(1000) {
                let got = missing_digit_transform(base(b), a0, k, t);
                assert!((got - naive(members.iter().copied(), t)).norm() <= 1e-9 * size);
            }
        }
    }
}

#[test]
fn reversible_matches_direct_sum() {
    let bb = base(3);
    let l = 4;
    let x = 81u64;
    let rev = |n: u64| (0..l).fold((0u64, n), |(r, m), _| (r * 3 + m % 3, m / 3)).0;
    for i in 0..40 {
        for j in 0..25 {
            let a = Phase::ratio(7 * i + 1, 283);
            let bt = Phase::ratio(11 * j + 3, 277);
            let want: Complex64 = (0..x)
                .map(|n| {
                    let ar = (rev(n) as u128 * (7 * i as u128 + 1)) % 283;
                    let bn = (n as u128 * (11 * j as u128 + 3)) % 277;
                    e(ar as f64 / 283.0 - bn as f64 / 277.0)
                })
                .sum::<Complex64>()
                / x as f64;
            let got = reversible_transform(bb, l, a, bt);
            assert!((got - want).norm() < 1e-9, "{got} {want}");
            let brute = brute_reversible(bb, l, a, bt).unwrap();
            assert!((got - brute).norm() < 1e-9);
        }
    }
}

#[test]
fn phi_is_a_product_of_digit_factors() {
    let bb = base(10);
    for t in grid(97) {
        let want: Complex64 = (1..3u32)
            .map(|i| {
                let f = t.scale(10u128.pow(i) + 10u128.pow(6 - i));
                geometric_sum(10, f)
            })
            .product();
        assert!((phi(bb, 3, t) - want).norm() < 1e-9);
    }
}

#[test]
fn phi_prime_matches_a_central_difference() {
    let bb = base(5);
    for i in 1..20 {
        let t = i as f64 / 41.0;
        let h = 1e-7;
        let fd = (phi(bb, 3, t + h) - phi(bb, 3, t - h)) / (2.0 * h);
        let d = phi_prime(bb, 3, t);
        assert!((d - fd).norm() < 1e-4 * (1.0 + d.norm()), "{d} {fd}");
    }
}

proptest! {
    #[test]
    fn palindromes_are_conjugate_symmetric(bits in any::<u64>(), b in 2u64..=12, len in 1u32..=7) {
        let bb = base(b);
        let t = Phase::from_fixed_bits(bits);
        let v = palindrome_transform(bb, len, t);
        let w = palindrome_transform(bb, len, -t);
        prop_assert!((w - v.conj()).norm() < 1e-9 * (1.0 + v.norm()));
    }

    #[test]
    fn phi_tilde_is_bounded_by_its_trivial_bound(bits in any::<u64>(), b in 2u64..=12, l in 1u32..=6) {
        let bb = base(b);
        let v = phi_tilde(bb, l, Phase::from_fixed_bits(bits)).norm();
        let bound = (b as f64).powi(l as i32 - 1) / ((b - 1) as f64 * (b as f64).powi(l as i32));
        prop_assert!(v <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn missing_digit_is_periodic_and_conjugate_symmetric(num in 0i128..10_000, b in 3u64..=10, k in 1u32..=5) {
        let t = Phase::ratio(num, 10_007);
        let a0 = (num as u64) % b;
        let v = missing_digit_transform(base(b), a0, k, t);
        let w = missing_digit_transform(base(b), a0, k, -t);
        prop_assert!((w - v.conj()).norm() < 1e-9 * (1.0 + v.norm()));
        let shifted = missing_digit_transform(base(b), a0, k, Phase::ratio(num + 10_007, 10_007));
        prop_assert!((shifted - v).norm() < 1e-12 * (1.0 + v.norm()));
    }
}

proptest! {
    #[test]
    fn every_transform_has_period_one(k in 0u32..(1 << 20), shift in -3i32..4) {
        let t = k as f64 / (1u64 << 20) as f64;
        let s = t + shift as f64;
        let b = base(7);
        let pairs = [
            (palindrome_transform(b, 5, t), palindrome_transform(b, 5, s)),
            (odd_palindromes_transform(b, 2, t), odd_palindromes_transform(b, 2, s)),
            (missing_digit_transform(b, 3, 4, t), missing_digit_transform(b, 3, 4, s)),
            (phi(b, 3, t), phi(b, 3, s)),
            (reversible_transform(b, 3, 0.25, t), reversible_transform(b, 3, 0.25, s)),
            (reversible_transform(b, 3, t, 0.5), reversible_transform(b, 3, s, 0.5)),
        ];
        for (u, v) in pairs {
            prop_assert!((u - v).norm() < 1e-12);
        }
    }
}
