//! Dominant eigenvalue of a nonnegative matrix by power iteration.

use serde::Serialize;

use super::matrix::GMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerIterationOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Iterate with `A + shift * I`; breaks periodicity without moving eigenvectors.
    pub shift: f64,
}

impl Default for PowerIterationOptions {
    fn default() -> Self {
        PowerIterationOptions {
            tolerance: 1e-12,
            max_iterations: 100_000,
            shift: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerronResult {
    /// Rayleigh-quotient estimate.
    pub lambda: f64,
    /// Collatz-Wielandt bracket `min (Av)_i/v_i <= lambda <= max (Av)_i/v_i`.
    pub lower: f64,
    pub upper: f64,
    /// `||A v - lambda v|| / ||v||` at the final iterate.
    pub residual: f64,
    pub iterations: usize,
}

pub fn perron_eigenvalue(m: &GMatrix) -> Result<PerronResult> {
    perron_eigenvalue_with(m, PowerIterationOptions::default())
}

pub fn perron_eigenvalue_with(m: &GMatrix, opts: PowerIterationOptions) -> Result<PerronResult> {
    if !m.is_nonnegative() {
        return Err(Error::InvalidArgument("matrix has negative entries".into()));
    }
    if m.is_zero() {
        return Err(Error::InvalidArgument("matrix is zero".into()));
    }
    if opts.tolerance.is_nan()
        || opts.tolerance <= 0.0
        || opts.max_iterations == 0
        || opts.shift < 0.0
    {
        return Err(Error::InvalidArgument("bad power iteration options".into()));
    }
    let n = m.dim();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    let mut last = None;
    for it in 1..=opts.max_iterations {
        m.matvec(&v, &mut w);
        let (lower, upper) = collatz_wielandt(&v, &w);
        let dot: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let vv: f64 = v.iter().map(|a| a * a).sum();
        let lambda = dot / vv;
        let residual = v
            .iter()
            .zip(&w)
            .map(|(a, b)| (b - lambda * a).powi(2))
            .sum::<f64>()
            .sqrt()
            / vv.sqrt();
        let result = PerronResult {
            lambda,
            lower,
            upper,
            residual,
            iterations: it,
        };
        if lambda <= 0.0 && upper <= 0.0 {
            // nilpotent direction; the spectral radius along this start is 0
            return Err(Error::NotConverged {
                iterations: it,
                estimate: lambda,
                residual,
            });
        }
        if upper - lower <= opts.tolerance * upper || residual <= opts.tolerance * lambda.abs() {
            return Ok(result);
        }
        last = Some(result);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = *wi + opts.shift * *vi;
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        v.iter_mut().for_each(|a| *a /= norm);
    }
    let r = last.expect("at least one iteration");
    Err(Error::NotConverged {
        iterations: r.iterations,
        estimate: r.lambda,
        residual: r.residual,
    })
}

fn collatz_wielandt(v: &[f64], w: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (a, b) in v.iter().zip(w) {
        if *a > 0.0 {
            let r = b / a;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    (if lo.is_finite() { lo } else { 0.0 }, hi)
}
