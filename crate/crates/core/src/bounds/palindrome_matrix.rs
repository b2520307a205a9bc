//! The b x b matrix of digit-pair suprema controlling the L1 norm of `Phi_l`.

use num_rational::Ratio;
use serde::Serialize;

use super::matrix::{GMatrix, MatrixKind};
use crate::digits::Base;
use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

/// `G(theta1, theta2) = sup_{beta in [0, 2/b)} min{1, 1/(2b ||(theta1+theta2)/b + beta||)}`.
///
/// Measured in units of `1/b` the interval is `[s, s+2)` with `s = theta1 + theta2`,
/// so the infimum distance to an integer is an integer number of units `d` and
/// `G = 1` when `d = 0`, else `1/(2d)`.
pub fn g_pal(b: Base, theta1: u64, theta2: u64) -> Result<Rational> {
    let bb = b.get();
    if bb < 3 {
        return Err(Error::BaseTooSmall { base: bb, min: 3 });
    }
    for d in [theta1, theta2] {
        if d >= bb {
            return Err(Error::DigitOutOfRange { digit: d, base: bb });
        }
    }
    let s = theta1 + theta2;
    // Nearest multiples of b around the half-open window [s, s + 2).
    let below = (s / bb) * bb;
    let above = below + bb;
    let d = if below == s || above < s + 2 {
        0
    } else {
        // sup side is open, the infimum still reaches above - (s + 2)
        (s - below).min(above - (s + 2))
    };
    Ok(if d == 0 {
        Rational::from_integer(1)
    } else {
        Rational::new(1, 2 * d)
    })
}

/// Exact palindrome matrix `[G(i, j)]`.
#[derive(Clone, Debug, Serialize)]
pub struct PalindromeMatrix {
    pub base: Base,
    #[serde(skip)]
    entries: Vec<Rational>,
}

impl PalindromeMatrix {
    pub fn dim(&self) -> usize {
        self.base.get() as usize
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Constant along every anti-diagonal `i + j = const`.
    pub fn is_hankel(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (1..n).all(|j| i + 1 >= n || self.get(i, j) == self.get(i + 1, j - 1)))
    }

    /// `G(0, theta) = G(0, b - 2 - theta)` for `theta <= b - 2`.
    pub fn has_row_zero_reflection(&self) -> bool {
        let n = self.dim();
        (0..n - 1).all(|t| self.get(0, t) == self.get(0, n - 2 - t))
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().copied().sum()
    }

    pub fn row_zero_sum(&self) -> Rational {
        self.row(0).iter().copied().sum()
    }

    pub fn to_gmatrix(&self) -> GMatrix {
        let n = self.dim();
        let dense: Vec<f64> = self
            .entries
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        GMatrix::dense(n, dense, MatrixKind::Palindrome)
    }
}

pub fn build_pal_matrix(b: Base) -> Result<PalindromeMatrix> {
    let n = b.get();
    let mut entries = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            entries.push(g_pal(b, i, j)?);
        }
    }
    Ok(PalindromeMatrix { base: b, entries })
}

/// Exponent of the L1 bound for the palindrome transform:
/// `(ln b - ln(4 + ln(b/2 - 1))) / (2 ln b)`.
pub fn alpha_palindrome_value(b: Base) -> Result<f64> {
    let bb = b.get();
    if bb < 4 {
        return Err(Error::BaseTooSmall { base: bb, min: 4 });
    }
    let bf = bb as f64;
    Ok((bf.ln() - (4.0 + (bf / 2.0 - 1.0).ln()).ln()) / (2.0 * bf.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> Base {
        Base::new(v).unwrap()
    }

    #[test]
    fn m10_row_zero() {
        let m = build_pal_matrix(b(10)).unwrap();
        let want: Vec<Rational> = [
            (1, 1),
            (1, 2),
            (1, 4),
            (1, 6),
            (1, 8),
            (1, 6),
            (1, 4),
            (1, 2),
            (1, 1),
            (1, 1),
        ]
        .iter()
        .map(|&(n, d)| Rational::new(n, d))
        .collect();
        assert_eq!(m.row(0), &want[..]);
        assert_eq!(g_pal(b(10), 0, 4).unwrap(), Rational::new(1, 8));
    }

    #[test]
    fn full_m10_second_row() {
        let m = build_pal_matrix(b(10)).unwrap();
        let want: Vec<Rational> = [
            (1, 2),
            (1, 4),
            (1, 6),
            (1, 8),
            (1, 6),
            (1, 4),
            (1, 2),
            (1, 1),
            (1, 1),
            (1, 1),
        ]
        .iter()
        .map(|&(n, d)| Rational::new(n, d))
        .collect();
        assert_eq!(m.row(1), &want[..]);
        // last row of the displayed matrix
        let last: Vec<Rational> = [
            (1, 1),
            (1, 1),
            (1, 2),
            (1, 4),
            (1, 6),
            (1, 8),
            (1, 6),
            (1, 4),
            (1, 2),
            (1, 1),
        ]
        .iter()
        .map(|&(n, d)| Rational::new(n, d))
        .collect();
        assert_eq!(m.row(9), &last[..]);
    }

    #[test]
    fn structural_identities() {
        for base in 3..=16 {
            let m = build_pal_matrix(b(base)).unwrap();
            assert!(m.is_symmetric(), "b={base}");
            assert!(m.is_hankel(), "b={base}");
            assert!(m.has_row_zero_reflection(), "b={base}");
            assert_eq!(m.total(), m.row_zero_sum() * base, "b={base}");
        }
    }

    #[test]
    fn row_zero_sum_tail_bound() {
        for base in 4..=36u64 {
            let m = build_pal_matrix(b(base)).unwrap();
            let s = m.row_zero_sum();
            let s = *s.numer() as f64 / *s.denom() as f64;
            assert!(s <= 4.0 + (base as f64 / 2.0 - 1.0).ln(), "b={base}: {s}");
        }
    }

    #[test]
    fn middle_entry() {
        for base in (4..40u64).step_by(2) {
            assert_eq!(
                g_pal(b(base), 0, base / 2 - 1).unwrap(),
                Rational::new(1, base - 2)
            );
        }
    }

    #[test]
    fn rejects_small_base_and_bad_digits() {
        assert!(g_pal(b(2), 0, 0).is_err());
        assert!(g_pal(b(5), 5, 0).is_err());
        assert!(alpha_palindrome_value(b(3)).is_err());
    }

    #[test]
    fn alpha_values() {
        let a = alpha_palindrome_value(b(1100)).unwrap();
        let direct = (1100f64.ln() - (4.0 + 549f64.ln()).ln()) / (2.0 * 1100f64.ln());
        assert_eq!(a, direct);
        assert!((a - 0.333435).abs() < 1e-6, "{a}");
        assert!(a > 1.0 / 3.0);
        let ten = alpha_palindrome_value(b(10)).unwrap();
        let want = (10f64.ln() - (4.0 + 4f64.ln()).ln()) / (2.0 * 10f64.ln());
        assert_eq!(ten, want);
        assert!((ten - 0.1343).abs() < 1e-4);
    }
}
