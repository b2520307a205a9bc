use powerfree_core::digits::enumerate_set;
use powerfree_core::powerfree::{
    count_powerfree_in_set, is_kth_powerfree, predicted_density, zeta, PowerfreeSieve,
};
use powerfree_core::{Base, SetDescriptor};
use proptest::prelude::*;

fn base(b: u64) -> Base {
    Base::new(b).unwrap()
}

fn naive_powerfree(n: u64, k: u32) -> bool {
    (2u64..)
        .take_while(|d| d.pow(k) <= n)
        .all(|d| !n.is_multiple_of(d.pow(k)))
}

#[test]
fn sieve_and_trial_division_agree_with_naive() {
    for k in [2u32, 3, 4] {
        let sieve = PowerfreeSieve::new(100_000, k).unwrap();
        for n in 1..=100_000u64 {
            let want = naive_powerfree(n, k);
            assert_eq!(sieve.is_powerfree(n), want, "sieve n={n} k={k}");
            assert_eq!(is_kth_powerfree(n, k), want, "trial n={n} k={k}");
        }
    }
}

#[test]
fn zeta_values() {
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((zeta(2) - pi2 / 6.0).abs() < 1e-12);
    assert!((zeta(4) - pi2 * pi2 / 90.0).abs() < 1e-12);
    assert!((zeta(3) - 1.202_056_903_159_594_2).abs() < 1e-12);
}

#[test]
fn squarefree_density_of_all_integers() {
    let r = count_powerfree_in_set(&SetDescriptor::all_integers(), 10_000_000, 2).unwrap();
    assert!(r.relative_error < 1e-3, "{r:?}");
    assert!((r.density.value - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
}

#[test]
fn no_even_length_palindrome_survives_coprimality_with_990() {
    // even-length palindromes are multiples of 11
    let s = SetDescriptor::palindromes(base(10), false).coprime_to(990);
    for n in enumerate_set(&s, 100_000_000).unwrap() {
        let len = n.to_string().len();
        assert_eq!(len % 2, 1, "{n}");
    }
}

#[test]
fn set_counts_agree_with_enumeration() {
    let sets = [
        SetDescriptor::palindromes(base(10), true).coprime_to(990),
        SetDescriptor::missing_digit(base(10), 5)
            .unwrap()
            .coprime_to(10),
        SetDescriptor::reversible_pairs(base(3)).coprime_to(6),
    ];
    for s in sets {
        let x = 200_000;
        let r = count_powerfree_in_set(&s, x, 2).unwrap();
        let members: Vec<u64> = enumerate_set(&s, x).unwrap().filter(|&n| n > 0).collect();
        assert_eq!(r.raw_count, members.len() as u64);
        let paired = matches!(s.kind, powerfree_core::SetKind::ReversiblePairs { .. });
        let want = members
            .iter()
            .filter(|&&n| naive_powerfree(n, 2) && (!paired || naive_powerfree(rev3(n), 2)))
            .count() as u64;
        assert_eq!(r.powerfree_count, want, "{s}");
    }
}

fn rev3(mut n: u64) -> u64 {
    let mut r = 0;
    while n > 0 {
        r = r * 3 + n % 3;
        n /= 3;
    }
    r
}

#[test]
fn palindrome_error_shrinks_with_scale() {
    let s = SetDescriptor::palindromes(base(10), true).coprime_to(990);
    let errs: Vec<f64> = [100_000u64, 10_000_000, 1_000_000_000]
        .iter()
        .map(|&x| count_powerfree_in_set(&s, x, 3).unwrap().relative_error)
        .collect();
    assert!(errs[2] < errs[0], "{errs:?}");
}

#[test]
fn prediction_with_local_factors() {
    let p = predicted_density(3, 990, false).unwrap();
    let mut want = 1.0 / zeta(3);
    for q in [2.0f64, 3.0, 5.0, 11.0] {
        want /= 1.0 - q.powi(-3);
    }
    assert!((p.value - want).abs() < 1e-15);
    let pair = predicted_density(2, 24, true).unwrap();
    let single = predicted_density(2, 24, false).unwrap();
    assert!((pair.value - single.value * single.value).abs() < 1e-15);
}

proptest! {
    #[test]
    fn kth_powerfree_implies_next_power_free(n in 1u64..u64::MAX / 2, k in 2u32..6) {
        if is_kth_powerfree(n, k) {
            prop_assert!(is_kth_powerfree(n, k + 1));
        }
    }

    #[test]
    fn trial_division_matches_naive(n in 1u64..10_000_000, k in 2u32..5) {
        prop_assert_eq!(is_kth_powerfree(n, k), naive_powerfree(n, k));
    }

    #[test]
    fn multiplying_by_a_kth_power_breaks_freeness(n in 1u64..1_000_000, p in prop::sample::select(vec![2u64, 3, 5, 7, 1009]), k in 2u32..4) {
        prop_assert!(!is_kth_powerfree(n * p.pow(k), k));
    }

    #[test]
    fn counts_are_monotone_in_x(x in 2u64..50_000, step in 1u64..5_000) {
        let s = SetDescriptor::palindromes(base(10), true);
        let a = count_powerfree_in_set(&s, x, 2).unwrap();
        let b = count_powerfree_in_set(&s, x + step, 2).unwrap();
        prop_assert!(a.powerfree_count <= b.powerfree_count);
        prop_assert!(a.raw_count <= b.raw_count);
    }
}
