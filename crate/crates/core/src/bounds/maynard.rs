//! The `b^3 x b^3` transfer matrix governing the L1 norm of the missing-digit
//! transform, and the exponent `alpha = 1 - ln(lambda)/ln(b)` it yields.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use super::matrix::{GMatrix, MatrixKind};
use super::perron::{perron_eigenvalue_with, PowerIterationOptions};
use crate::digits::Base;
use crate::error::{Error, Result};

pub const MAX_MAYNARD_BASE: u64 = 36;

/// Discretization of the supremum over the `u` window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupOptions {
    pub grid: usize,
    pub refine_width: f64,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions {
            grid: 1024,
            refine_width: 1e-12,
        }
    }
}

/// `|sum_{0 <= n < b, n != a0} e(n s)| / (b - 1)`.
///
/// The digit sum is accumulated term by term, so the removable singularity
/// of the sine-ratio form never arises.
fn objective(b: u64, a0: u64, s: f64) -> f64 {
    let step = Complex64::cis(2.0 * PI * s);
    let mut z = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..b {
        if n != a0 {
            acc += z;
        }
        z *= step;
    }
    acc.norm() / (b - 1) as f64
}

/// Supremum of the normalized digit sum over `s = sum_j t_j b^-j + u`,
/// `u in [0, b^-4]`, i.e. over the base-b cell whose first four digits are
/// `t1 t2 t3 t4`.
pub fn g_maynard_with(b: Base, a0: u64, t: [u64; 4], opts: SupOptions) -> Result<f64> {
    let bb = b.get();
    if bb < 3 {
        return Err(Error::BaseTooSmall { base: bb, min: 3 });
    }
    for d in std::iter::once(a0).chain(t) {
        if d >= bb {
            return Err(Error::DigitOutOfRange { digit: d, base: bb });
        }
    }
    if opts.grid < 2 {
        return Err(Error::InvalidArgument(
            "sup grid needs at least 2 points".into(),
        ));
    }
    let bf = bb as f64;
    let theta: f64 = t
        .iter()
        .enumerate()
        .map(|(j, &d)| d as f64 * bf.powi(-(j as i32 + 1)))
        .sum();
    let width = bf.powi(-4);
    let f = |u: f64| objective(bb, a0, theta + u);

    let h = width / (opts.grid - 1) as f64;
    let (mut best_k, mut best) = (0usize, f64::NEG_INFINITY);
    for k in 0..opts.grid {
        let v = f(k as f64 * h);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let lo = best_k.saturating_sub(1) as f64 * h;
    let hi = ((best_k + 1).min(opts.grid - 1)) as f64 * h;
    let (_, v) = golden_max(&f, lo, hi, opts.refine_width);
    Ok(best.max(v))
}

pub fn g_maynard(b: Base, a0: u64, t: [u64; 4]) -> Result<f64> {
    g_maynard_with(b, a0, t, SupOptions::default())
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = (lo, f(lo));
    let fh = f(hi);
    if fh > best.1 {
        best = (hi, fh);
    }
    while hi - lo > width {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
        if x1 >= x2 {
            break;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Row `i = t2 + t3 b + t4 b^2` holds `G(t1..t4)` in column `t1 + t2 b + t3 b^2`.
pub fn build_maynard_matrix_with(b: Base, a0: u64, opts: SupOptions) -> Result<GMatrix> {
    let bb = b.get();
    if !(3..=MAX_MAYNARD_BASE).contains(&bb) {
        return Err(if bb < 3 {
            Error::BaseTooSmall { base: bb, min: 3 }
        } else {
            Error::InvalidArgument(format!("base {bb} above {MAX_MAYNARD_BASE}"))
        });
    }
    if a0 >= bb {
        return Err(Error::DigitOutOfRange {
            digit: a0,
            base: bb,
        });
    }
    let n = (bb * bb * bb) as usize;
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let i64_ = i as u64;
            let (t2, t3, t4) = (i64_ % bb, (i64_ / bb) % bb, i64_ / (bb * bb));
            (0..bb)
                .map(|t1| {
                    let j = (t1 + t2 * bb + t3 * bb * bb) as usize;
                    g_maynard_with(b, a0, [t1, t2, t3, t4], opts).map(|g| (j, g))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(GMatrix::from_rows(n, rows, MatrixKind::Maynard))
}

pub fn build_maynard_matrix(b: Base, a0: u64) -> Result<GMatrix> {
    build_maynard_matrix_with(b, a0, SupOptions::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMethod {
    ClosedForm,
    Eigenvalue,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaResult {
    pub base: u64,
    pub a0: Option<u64>,
    pub lambda: Option<f64>,
    pub alpha: f64,
    pub method: AlphaMethod,
    pub residual: Option<f64>,
}

pub fn alpha_missing_with(
    b: Base,
    a0: u64,
    sup: SupOptions,
    power: PowerIterationOptions,
) -> Result<AlphaResult> {
    let m = build_maynard_matrix_with(b, a0, sup)?;
    let p = perron_eigenvalue_with(&m, power)?;
    Ok(AlphaResult {
        base: b.get(),
        a0: Some(a0),
        lambda: Some(p.lambda),
        alpha: 1.0 - p.lambda.ln() / (b.get() as f64).ln(),
        method: AlphaMethod::Eigenvalue,
        residual: Some(p.residual),
    })
}

pub fn alpha_missing(b: Base, a0: u64) -> Result<AlphaResult> {
    alpha_missing_with(
        b,
        a0,
        SupOptions::default(),
        PowerIterationOptions::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> Base {
        Base::new(v).unwrap()
    }

    #[test]
    fn zero_digits_give_one() {
        for base in 3..=9 {
            for a0 in 0..base {
                let g = g_maynard(b(base), a0, [0; 4]).unwrap();
                assert!((g - 1.0).abs() < 1e-12, "b={base} a0={a0}: {g}");
            }
        }
    }

    #[test]
    fn bounded_by_triangle_inequality() {
        let base = 5;
        for code in 0..625u64 {
            let t = [code % 5, (code / 5) % 5, (code / 25) % 5, code / 125];
            let g = g_maynard(b(base), 2, t).unwrap();
            assert!((0.0..=(base as f64 + 1.0) / (base as f64 - 1.0)).contains(&g));
        }
    }

    #[test]
    fn matches_dense_grid() {
        let base = 3u64;
        let g = g_maynard(b(base), 0, [1, 0, 0, 0]).unwrap();
        let w = (base as f64).powi(-4);
        let n = 1_000_000;
        let dense = (0..=n)
            .map(|k| objective(base, 0, 1.0 / 3.0 + w * k as f64 / n as f64))
            .fold(0.0f64, f64::max);
        assert!(g >= dense - 1e-12);
        assert!((g - dense).abs() < 1e-8, "{g} vs {dense}");
    }

    #[test]
    fn sparsity_pattern() {
        let m = build_maynard_matrix(b(3), 0).unwrap();
        assert_eq!(m.dim(), 27);
        assert_eq!(m.nnz(), 81);
        assert!(m.is_nonnegative());
        for i in 0..27 {
            let row = m.row_entries(i);
            assert_eq!(row.len(), 3);
            for (j, _) in row {
                assert_eq!(i % 9, j / 3);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(build_maynard_matrix(b(3), 3).is_err());
        assert!(build_maynard_matrix(b(37), 0).is_err());
        assert!(g_maynard(b(4), 0, [0, 4, 0, 0]).is_err());
    }

    #[test]
    fn base_three_table_values() {
        let a = alpha_missing(b(3), 0).unwrap();
        assert!((a.alpha - 0.37837).abs() < 1e-4, "{}", a.alpha);
        let a1 = alpha_missing(b(3), 1).unwrap();
        assert!((a1.alpha - 0.36285).abs() < 1e-4, "{}", a1.alpha);
        let a2 = alpha_missing(b(3), 2).unwrap();
        assert!((a.alpha - a2.alpha).abs() < 1e-6);
        let lambda = a.lambda.unwrap();
        assert!((a.alpha - (1.0 - lambda.ln() / 3f64.ln())).abs() < 1e-15);
    }
}
