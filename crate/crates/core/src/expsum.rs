//! Exponential sums over digit-defined sets.
//!
//! Every transform here factors as a product of digit sums
//! `sum_{n in D} e(n * theta)` evaluated at integer multiples of the input
//! point, so each one costs O(number of digits) evaluations of [`f1`].

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::digits::{enumerate_set, member_count, Base, SetDescriptor};
use crate::error::{Error, Result};
use crate::phase::Phase;

pub type ComplexValue = Complex64;

/// Below this distance to an integer the digit sum is summed term by term.
const SINGULAR_EPS: f64 = 1e-9;
/// Below this `n * ||theta||` the derivative closed form cancels badly.
const DERIVATIVE_EPS: f64 = 1e-2;
const EXPLICIT_SUM_LIMIT: u64 = 1 << 20;

/// Guard for [`brute_transform`].
pub const BRUTE_MEMBER_LIMIT: u128 = 10_000_000;

/// `sum_{n in D} e(n theta)` for `D = {0, .., len-1}` minus a set of excluded
/// digits (each below 64).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitSum {
    len: u64,
    excluded: u64,
}

impl DigitSum {
    pub fn full(len: u64) -> Self {
        DigitSum { len, excluded: 0 }
    }

    pub fn excluding(len: u64, digits: &[u64]) -> Self {
        let mut excluded = 0u64;
        for &d in digits {
            assert!(d < 64 && d < len, "excluded digit {d} unsupported");
            excluded |= 1 << d;
        }
        DigitSum { len, excluded }
    }

    pub fn count(&self) -> u64 {
        self.len - self.excluded.count_ones() as u64
    }

    pub fn eval(&self, theta: Phase) -> Complex64 {
        let mut s = geometric_sum(self.len, theta);
        for d in excluded_digits(self.excluded) {
            s -= theta.scale(d as u128).e();
        }
        s
    }

    /// Value and derivative with respect to `theta`.
    pub fn eval_with_derivative(&self, theta: Phase) -> (Complex64, Complex64) {
        let mut s = geometric_sum(self.len, theta);
        let mut ds = geometric_sum_derivative(self.len, theta);
        for d in excluded_digits(self.excluded) {
            let z = theta.scale(d as u128).e();
            s -= z;
            ds -= Complex64::new(0.0, 2.0 * PI * d as f64) * z;
        }
        (s, ds)
    }
}

fn excluded_digits(mask: u64) -> impl Iterator<Item = u64> {
    (0..64u64).filter(move |d| mask >> d & 1 == 1)
}

/// `sum_{0 <= m < n} e(m theta)`.
pub fn geometric_sum(n: u64, theta: Phase) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    if theta.is_zero() {
        return Complex64::new(n as f64, 0.0);
    }
    let c = theta.centered();
    if c.abs() < SINGULAR_EPS && n <= EXPLICIT_SUM_LIMIT {
        return (0..n)
            .map(|m| Complex64::cis(2.0 * PI * m as f64 * c))
            .sum();
    }
    let cn = theta.scale(n as u128).centered();
    let ratio = (PI * cn).sin() / (PI * c).sin();
    Complex64::cis(PI * (cn - c)) * ratio
}

/// `d/dtheta sum_{0 <= m < n} e(m theta) = 2 pi i sum m e(m theta)`.
pub fn geometric_sum_derivative(n: u64, theta: Phase) -> Complex64 {
    let c = theta.centered();
    if (n as f64 * c.abs() < DERIVATIVE_EPS || theta.is_zero()) && n <= EXPLICIT_SUM_LIMIT {
        let s: Complex64 = (1..n)
            .map(|m| m as f64 * Complex64::cis(2.0 * PI * m as f64 * c))
            .sum();
        return Complex64::new(0.0, 2.0 * PI) * s;
    }
    // e(phi) - 1 = 2 i sin(pi phi) e(phi/2), evaluated without cancellation.
    let cn = theta.scale(n as u128).centered();
    let a = Complex64::new(0.0, 2.0 * (PI * cn).sin()) * Complex64::cis(PI * cn);
    let d = Complex64::new(0.0, 2.0 * (PI * c).sin()) * Complex64::cis(PI * c);
    let z = Complex64::new(1.0, 0.0) + d;
    let zn = Complex64::new(1.0, 0.0) + a;
    let num = zn * d * n as f64 - z * a;
    Complex64::new(0.0, 2.0 * PI) * num / (d * d)
}

/// `f_1(t) = sum_{0 <= n < b} e(n t)`.
pub fn f1(b: Base, t: impl Into<Phase>) -> Complex64 {
    geometric_sum(b.get(), t.into())
}

pub fn f1_derivative(b: Base, t: impl Into<Phase>) -> Complex64 {
    geometric_sum_derivative(b.get(), t.into())
}

/// One factor `g(chain * t + offset)` of a product transform.
#[derive(Clone, Copy, Debug)]
pub struct Factor {
    pub sum: DigitSum,
    pub phase: Phase,
    /// d(phase)/dt as a real number.
    pub chain: f64,
}

/// Product of factors and its t-derivative by the product rule.
pub fn product_with_derivative(factors: &[Factor]) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for f in factors {
        let (g, dg) = f.sum.eval_with_derivative(f.phase);
        dp = dp * g + p * dg * f.chain;
        p *= g;
    }
    (p, dp)
}

pub fn product(factors: &[Factor]) -> Complex64 {
    factors
        .iter()
        .map(|f| f.sum.eval(f.phase))
        .fold(Complex64::new(1.0, 0.0), |acc, g| acc * g)
}

/// Factors of `f_len`, the transform of the palindromes with exactly `len` digits.
pub fn palindrome_factors(b: Base, len: u32, t: Phase) -> Vec<Factor> {
    assert!(len >= 1, "palindrome length must be positive");
    let bb = b.get();
    let full = DigitSum::full(bb);
    let mk = |sum: DigitSum, e1: u32, e2: Option<u32>| {
        let (phase, chain) = match e2 {
            Some(e2) => (
                t.scale_pow_sum(bb, e1, e2),
                (bb as f64).powi(e1 as i32) + (bb as f64).powi(e2 as i32),
            ),
            None => (t.scale_pow(bb, e1), (bb as f64).powi(e1 as i32)),
        };
        Factor { sum, phase, chain }
    };
    if len == 1 {
        return vec![mk(full, 0, None)];
    }
    let l = len / 2;
    let mut out = Vec::with_capacity(l as usize + 1);
    // leading/trailing digit pair, nonzero
    out.push(mk(DigitSum::excluding(bb, &[0]), 0, Some(len - 1)));
    if len % 2 == 1 {
        out.push(mk(full, l, None));
    }
    for i in 1..l {
        out.push(mk(full, i, Some(len - 1 - i)));
    }
    out
}

/// `f_len(t)` via the product formula.
pub fn palindrome_transform(b: Base, len: u32, t: impl Into<Phase>) -> Complex64 {
    product(&palindrome_factors(b, len, t.into()))
}

/// Transform of the odd-length palindromes below `b^(2L+1)`: `sum_{l <= L} f_(2l+1)`.
pub fn odd_palindromes_transform(b: Base, big_l: u32, t: impl Into<Phase>) -> Complex64 {
    let t = t.into();
    (0..=big_l)
        .map(|l| palindrome_transform(b, 2 * l + 1, t))
        .sum()
}

pub fn odd_palindromes_transform_with_derivative(
    b: Base,
    big_l: u32,
    t: Phase,
) -> (Complex64, Complex64) {
    (0..=big_l)
        .map(|l| product_with_derivative(&palindrome_factors(b, 2 * l + 1, t)))
        .fold(
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |(s, ds), (v, dv)| (s + v, ds + dv),
        )
}

/// Factors of `Phi_l(t) = prod_{i=1}^{l-1} f_1((b^i + b^(2l-i)) t)`.
pub fn phi_factors(b: Base, l: u32, t: Phase) -> Vec<Factor> {
    let bb = b.get();
    (1..l.max(1))
        .map(|i| Factor {
            sum: DigitSum::full(bb),
            phase: t.scale_pow_sum(bb, i, 2 * l - i),
            chain: (bb as f64).powi(i as i32) + (bb as f64).powi((2 * l - i) as i32),
        })
        .collect()
}

/// `Phi_l(t)`; `Phi_0 = Phi_1 = 1`.
pub fn phi(b: Base, l: u32, t: impl Into<Phase>) -> Complex64 {
    product(&phi_factors(b, l, t.into()))
}

/// Size of the odd stratum with `2l+1` digits, `(b-1) b^l`.
pub fn odd_stratum_size(b: Base, l: u32) -> f64 {
    (b.get() as f64 - 1.0) * (b.get() as f64).powi(l as i32)
}

/// `Phi_l(t) / ((b-1) b^l)`.
pub fn phi_tilde(b: Base, l: u32, t: impl Into<Phase>) -> Complex64 {
    phi(b, l, t) / odd_stratum_size(b, l)
}

/// `d/dt Phi_l(t)` by the product rule over the `l-1` factors.
pub fn phi_prime(b: Base, l: u32, t: impl Into<Phase>) -> Complex64 {
    product_with_derivative(&phi_factors(b, l, t.into())).1
}

pub fn missing_digit_factors(b: Base, excluded: &[u64], k: u32, t: Phase) -> Vec<Factor> {
    let bb = b.get();
    let sum = DigitSum::excluding(bb, excluded);
    (0..k)
        .map(|j| Factor {
            sum,
            phase: t.scale_pow(bb, j),
            chain: (bb as f64).powi(j as i32),
        })
        .collect()
}

/// Unnormalized sum of `e(n t)` over the k-digit strings avoiding `a0`.
pub fn missing_digit_transform(b: Base, a0: u64, k: u32, t: impl Into<Phase>) -> Complex64 {
    missing_digits_transform(b, &[a0], k, t)
}

pub fn missing_digits_transform(
    b: Base,
    excluded: &[u64],
    k: u32,
    t: impl Into<Phase>,
) -> Complex64 {
    product(&missing_digit_factors(b, excluded, k, t.into()))
}

/// Factors of `x * F_x(alpha, beta)` for `x = b^l`, as a function of `beta`.
pub fn reversible_factors(b: Base, l: u32, alpha: Phase, beta: Phase) -> Vec<Factor> {
    let bb = b.get();
    (0..l)
        .map(|j| Factor {
            sum: DigitSum::full(bb),
            phase: alpha.scale_pow(bb, l - 1 - j) - beta.scale_pow(bb, j),
            chain: -(bb as f64).powi(j as i32),
        })
        .collect()
}

/// `(1/x) sum_{0 <= n < x} e(alpha rev(n) - beta n)` with `x = b^l`, reversal
/// taken in the fixed `l`-digit frame.
pub fn reversible_transform(
    b: Base,
    l: u32,
    alpha: impl Into<Phase>,
    beta: impl Into<Phase>,
) -> Complex64 {
    assert!(l >= 1, "digit count must be positive");
    product(&reversible_factors(b, l, alpha.into(), beta.into())) / (b.get() as f64).powi(l as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TransformPoint {
    Single(f64),
    Pair(f64, f64),
}

/// A transform value together with the count it is normalized by.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformSample {
    pub point: TransformPoint,
    pub value: Complex64,
    pub normalization: f64,
}

impl TransformSample {
    pub fn normalized(&self) -> Complex64 {
        self.value / self.normalization
    }
}

/// Direct summation of `e(n t)` over `enumerate_set(s, x)`.
pub fn brute_transform(s: &SetDescriptor, x: u64, t: impl Into<Phase>) -> Result<TransformSample> {
    let t = t.into();
    let count = member_count(s, x as u128)?;
    if count > BRUTE_MEMBER_LIMIT {
        return Err(Error::Guard {
            what: "member count",
            value: count,
            limit: BRUTE_MEMBER_LIMIT,
        });
    }
    let value: Complex64 = enumerate_set(s, x)?.map(|n| t.scale(n as u128).e()).sum();
    Ok(TransformSample {
        point: TransformPoint::Single(t.to_f64()),
        value,
        normalization: count as f64,
    })
}

/// Direct summation of the reversible sum over `0 <= n < b^l` (oracle).
pub fn brute_reversible(b: Base, l: u32, alpha: Phase, beta: Phase) -> Result<Complex64> {
    let x = b
        .checked_pow(l)
        .filter(|&x| x <= BRUTE_MEMBER_LIMIT)
        .ok_or(Error::Guard {
            what: "b^l",
            value: b.checked_pow(l).unwrap_or(u128::MAX),
            limit: BRUTE_MEMBER_LIMIT,
        })?;
    let s: Complex64 = (0..x)
        .map(|n| {
            let r = crate::digits::reverse_fixed(n, b, l);
            (alpha.scale(r) - beta.scale(n)).e()
        })
        .sum();
    Ok(s / x as f64)
}
