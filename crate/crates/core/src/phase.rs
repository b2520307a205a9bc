//! Points of the circle group `R/Z` with exact integer scaling.
//!
//! The product formulas multiply the argument by integers as large as
//! `b^(2l)`. Doing that in `f64` throws away every significant bit of the
//! fractional part, so a point is kept either as a 64-bit fixed-point
//! fraction (scaling is a wrapping multiply) or as an exact rational
//! `num/den` (scaling is a modular multiply).

use num_integer::Integer;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// `t = k / 2^64`.
    Fixed(u64),
    /// `t = num / den` with `num < den`.
    Ratio { num: u64, den: u64 },
}

impl Phase {
    pub const ZERO: Phase = Phase::Fixed(0);

    /// Rounds `t mod 1` to the nearest multiple of `2^-64`.
    pub fn from_f64(t: f64) -> Phase {
        assert!(t.is_finite(), "phase must be finite");
        let frac = t - t.floor();
        let scaled = frac * TWO_POW_64;
        // `scaled` may round up to exactly 2^64 when frac is within an ulp of 1.
        if scaled >= TWO_POW_64 {
            Phase::Fixed(0)
        } else {
            Phase::Fixed(scaled as u64)
        }
    }

    /// Exact rational point `a / d` (reduced mod 1). Panics if `d == 0`.
    pub fn ratio(a: i128, d: u64) -> Phase {
        assert!(d > 0, "denominator must be positive");
        let num = a.rem_euclid(d as i128) as u64;
        Phase::Ratio { num, den: d }
    }

    pub fn from_fixed_bits(bits: u64) -> Phase {
        Phase::Fixed(bits)
    }

    /// Fixed-point bits, converting a rational by rounding.
    pub fn to_fixed_bits(self) -> u64 {
        match self {
            Phase::Fixed(k) => k,
            Phase::Ratio { num, den } => {
                let wide = ((num as u128) << 64) + (den as u128 / 2);
                (wide / den as u128) as u64
            }
        }
    }

    /// Representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        match self {
            Phase::Fixed(k) => {
                let v = k as f64 / TWO_POW_64;
                if v >= 1.0 {
                    0.0
                } else {
                    v
                }
            }
            Phase::Ratio { num, den } => num as f64 / den as f64,
        }
    }

    /// Representative in `[-1/2, 1/2)`; accurate to full relative precision near 0.
    pub fn centered(self) -> f64 {
        match self {
            Phase::Fixed(k) => (k as i64) as f64 / TWO_POW_64,
            Phase::Ratio { num, den } => {
                if num as u128 * 2 >= den as u128 {
                    -((den - num) as f64) / den as f64
                } else {
                    num as f64 / den as f64
                }
            }
        }
    }

    /// Distance to the nearest integer.
    pub fn dist_to_int(self) -> f64 {
        self.centered().abs()
    }

    /// `e(t) = exp(2 pi i t)`.
    pub fn e(self) -> Complex64 {
        Complex64::cis(2.0 * PI * self.centered())
    }

    pub fn is_zero(self) -> bool {
        match self {
            Phase::Fixed(k) => k == 0,
            Phase::Ratio { num, .. } => num == 0,
        }
    }

    /// `c * t mod 1`, exact.
    pub fn scale(self, c: u128) -> Phase {
        match self {
            Phase::Fixed(k) => Phase::Fixed(k.wrapping_mul(c as u64)),
            Phase::Ratio { num, den } => {
                let c_mod = (c % den as u128) as u64;
                Phase::Ratio {
                    num: mul_mod(num, c_mod, den),
                    den,
                }
            }
        }
    }

    /// `b^e * t mod 1`, exact for any exponent.
    pub fn scale_pow(self, b: u64, e: u32) -> Phase {
        match self {
            Phase::Fixed(k) => Phase::Fixed(k.wrapping_mul(b.wrapping_pow(e))),
            Phase::Ratio { num, den } => Phase::Ratio {
                num: mul_mod(num, pow_mod(b, e as u64, den), den),
                den,
            },
        }
    }

    /// `(b^e1 + b^e2) * t mod 1`, exact.
    pub fn scale_pow_sum(self, b: u64, e1: u32, e2: u32) -> Phase {
        self.scale_pow(b, e1) + self.scale_pow(b, e2)
    }

    fn combine(self, other: Phase, subtract: bool) -> Phase {
        if let (Phase::Ratio { num: n1, den: d1 }, Phase::Ratio { num: n2, den: d2 }) =
            (self, other)
        {
            let l = (d1 as u128).lcm(&(d2 as u128));
            if l <= u64::MAX as u128 {
                let l = l as u64;
                let a = mul_mod(n1, l / d1, l);
                let b = mul_mod(n2, l / d2, l);
                let num = if subtract {
                    ((a as u128 + l as u128 - b as u128) % l as u128) as u64
                } else {
                    ((a as u128 + b as u128) % l as u128) as u64
                };
                return Phase::Ratio { num, den: l };
            }
        }
        let (a, b) = (self.to_fixed_bits(), other.to_fixed_bits());
        Phase::Fixed(if subtract {
            a.wrapping_sub(b)
        } else {
            a.wrapping_add(b)
        })
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, other: Phase) -> Phase {
        self.combine(other, false)
    }
}

impl Sub for Phase {
    type Output = Phase;

    fn sub(self, other: Phase) -> Phase {
        self.combine(other, true)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::ZERO - self
    }
}

impl From<f64> for Phase {
    fn from(t: f64) -> Self {
        Phase::from_f64(t)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Fixed(_) => write!(f, "{}", self.to_f64()),
            Phase::Ratio { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut acc = base % m;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, acc, m);
        }
        acc = mul_mod(acc, acc, m);
        e >>= 1;
    }
    result
}
