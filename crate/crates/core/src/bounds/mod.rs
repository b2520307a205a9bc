//! Quantitative bounds on the transforms: the digit-pair matrices and their
//! exponents, L1 and L-infinity estimates, and numerical checks of the
//! inequalities used by the sieve argument.

pub mod family;
pub mod matrix;
pub mod maynard;
pub mod palindrome_matrix;
pub mod perron;
pub mod quadrature;
pub mod verify;

pub use family::Family;
pub use matrix::{GMatrix, MatrixKind};
pub use maynard::{
    alpha_missing, alpha_missing_with, build_maynard_matrix, build_maynard_matrix_with, g_maynard,
    g_maynard_with, AlphaMethod, AlphaResult, SupOptions,
};
pub use palindrome_matrix::{alpha_palindrome_value, build_pal_matrix, g_pal, PalindromeMatrix};
pub use perron::{perron_eigenvalue, perron_eigenvalue_with, PerronResult, PowerIterationOptions};
pub use quadrature::{l1_norm, l1_norm_with, L1Estimate};
pub use verify::{
    check_decreasing, double_sum, double_sum_with_limit, l1_phi_tilde, large_sieve_check,
    linf_scan, parseval_integral, progression_discrepancy, BoundReport, BoundSample,
    DecreasingFamily, DoubleSum, Hypothesis,
};

use crate::digits::Base;
use crate::error::Result;

/// Closed-form exponent for the palindrome L1 bound, as an [`AlphaResult`].
pub fn alpha_palindrome(b: Base) -> Result<AlphaResult> {
    Ok(AlphaResult {
        base: b.get(),
        a0: None,
        lambda: None,
        alpha: alpha_palindrome_value(b)?,
        method: AlphaMethod::ClosedForm,
        residual: None,
    })
}
