//! One-variable transform families handed to the quadrature and scan routines.

use num_complex::Complex64;
use serde::Serialize;

use crate::digits::Base;
use crate::error::{Error, Result};
use crate::expsum::{
    geometric_sum, geometric_sum_derivative, missing_digit_factors, odd_palindromes_transform,
    odd_palindromes_transform_with_derivative, odd_stratum_size, phi_factors, product,
    product_with_derivative, reversible_factors,
};
use crate::phase::Phase;

/// A periodic function of one real variable, together with the scale `x`
/// at which it oscillates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `f = 1`.
    Constant,
    /// `|sum_{0 <= n < x} e(n t)| / x`.
    Dirichlet { x: u64 },
    /// `Phi_l` (unnormalized).
    Phi { b: Base, l: u32 },
    /// `Phi_l / ((b-1) b^l)`.
    PhiTilde { b: Base, l: u32 },
    /// Odd-length palindromes below `b^(2L+1)`, normalized by their count.
    PalindromeOdd { b: Base, big_l: u32 },
    /// Strings of `k` digits avoiding `a0`, normalized by `(b-1)^k`.
    MissingDigit { b: Base, a0: u64, k: u32 },
    /// `beta -> F_(b^l)(alpha, beta)` for fixed `alpha`.
    Reversible { b: Base, l: u32, alpha: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Dirichlet { x: 0 } => Err(Error::InvalidArgument(
                "Dirichlet length must be positive".into(),
            )),
            Family::MissingDigit { b, a0, .. } if a0 >= b.get() => Err(Error::DigitOutOfRange {
                digit: a0,
                base: b.get(),
            }),
            Family::MissingDigit { k: 0, .. } | Family::Reversible { l: 0, .. } => Err(
                Error::InvalidArgument("digit count must be positive".into()),
            ),
            _ => match self.scale_u128() {
                Some(_) => Ok(()),
                None => Err(Error::InvalidArgument("scale overflows 128 bits".into())),
            },
        }
    }

    fn scale_u128(&self) -> Option<u128> {
        match *self {
            Family::Constant => Some(1),
            Family::Dirichlet { x } => Some(x as u128),
            Family::Phi { b, l } | Family::PhiTilde { b, l } => b.checked_pow(2 * l),
            Family::PalindromeOdd { b, big_l } => b.checked_pow(2 * big_l + 1),
            Family::MissingDigit { b, k, .. } => b.checked_pow(k),
            Family::Reversible { b, l, .. } => b.checked_pow(l),
        }
    }

    /// The scale `x`; the function varies on intervals of length about `1/x`.
    pub fn scale(&self) -> f64 {
        self.scale_u128().map_or(f64::INFINITY, |x| x as f64)
    }

    /// Normalizing count; `eval` already divides by it.
    pub fn normalization(&self) -> f64 {
        match *self {
            Family::Constant | Family::Phi { .. } => 1.0,
            Family::Dirichlet { x } => x as f64,
            Family::PhiTilde { b, l } => odd_stratum_size(b, l),
            Family::PalindromeOdd { b, big_l } => (0..=big_l)
                .map(|l| {
                    if l == 0 {
                        b.get() as f64
                    } else {
                        odd_stratum_size(b, l)
                    }
                })
                .sum(),
            Family::MissingDigit { b, k, .. } => ((b.get() - 1) as f64).powi(k as i32),
            Family::Reversible { b, l, .. } => (b.get() as f64).powi(l as i32),
        }
    }

    /// `sup |f|`.
    pub fn trivial_bound(&self) -> f64 {
        match *self {
            Family::Phi { b, l } => (b.get() as f64).powi(l.max(1) as i32 - 1),
            Family::PhiTilde { b, l } => {
                (b.get() as f64).powi(l.max(1) as i32 - 1) / odd_stratum_size(b, l)
            }
            _ => 1.0,
        }
    }

    pub fn eval(&self, t: Phase) -> Complex64 {
        let v = match *self {
            Family::Constant => Complex64::new(1.0, 0.0),
            Family::Dirichlet { x } => geometric_sum(x, t),
            Family::Phi { b, l } | Family::PhiTilde { b, l } => product(&phi_factors(b, l, t)),
            Family::PalindromeOdd { b, big_l } => odd_palindromes_transform(b, big_l, t),
            Family::MissingDigit { b, a0, k } => product(&missing_digit_factors(b, &[a0], k, t)),
            Family::Reversible { b, l, alpha } => {
                product(&reversible_factors(b, l, Phase::from_f64(alpha), t))
            }
        };
        v / self.normalization()
    }

    /// Value and `d/dt`.
    pub fn eval_with_derivative(&self, t: Phase) -> (Complex64, Complex64) {
        let (v, dv) = match *self {
            Family::Constant => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Family::Dirichlet { x } => (geometric_sum(x, t), geometric_sum_derivative(x, t)),
            Family::Phi { b, l } | Family::PhiTilde { b, l } => {
                product_with_derivative(&phi_factors(b, l, t))
            }
            Family::PalindromeOdd { b, big_l } => {
                odd_palindromes_transform_with_derivative(b, big_l, t)
            }
            Family::MissingDigit { b, a0, k } => {
                product_with_derivative(&missing_digit_factors(b, &[a0], k, t))
            }
            Family::Reversible { b, l, alpha } => {
                product_with_derivative(&reversible_factors(b, l, Phase::from_f64(alpha), t))
            }
        };
        let n = self.normalization();
        (v / n, dv / n)
    }

    pub fn abs(&self, t: Phase) -> f64 {
        self.eval(t).norm()
    }
}
