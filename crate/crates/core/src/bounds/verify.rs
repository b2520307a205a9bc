//! Numerical checks of the analytic hypotheses: L-infinity decay at
//! rationals, L1 decay, monotonicity in the scale, the rational double sum,
//! the large-sieve inequality and the type I discrepancy.

use num_complex::Complex64;
use num_integer::{Integer, Roots};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::family::Family;
use super::palindrome_matrix::{alpha_palindrome_value, build_pal_matrix};
use super::quadrature::{default_nodes, l1_norm_with, midpoint_sum};
use crate::digits::{enumerate_set, member_count, Base, SetDescriptor};
use crate::error::{Error, Result};
use crate::expsum::{missing_digit_factors, phi_tilde, reversible_transform};
use crate::phase::Phase;

pub const MAX_LINF_DENOMINATOR: u64 = 10_000;
pub const MAX_DOUBLE_SUM_Q: u64 = 1_000;
pub const MAX_SIEVE_MODULUS: u64 = 1_000_000;
pub const MAX_DISCREPANCY_MEMBERS: u128 = 10_000_000;
pub const DECREASING_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Linf,
    L1,
    Decreasing,
    DoubleSum,
    LargeSieve,
    ProgressionDiscrepancy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSample {
    pub point: Vec<f64>,
    pub observed: f64,
    pub reference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub hypothesis: Hypothesis,
    /// Names of the coordinates in each sample's `point`.
    pub coordinates: Vec<&'static str>,
    pub samples: Vec<BoundSample>,
    pub fitted_constant: Option<f64>,
    /// Largest `observed - reference`.
    pub worst_margin: f64,
    pub violations: usize,
    pub tolerance: f64,
}

impl BoundReport {
    fn new(
        hypothesis: Hypothesis,
        coordinates: Vec<&'static str>,
        samples: Vec<BoundSample>,
        tolerance: f64,
    ) -> Self {
        let worst_margin = samples
            .iter()
            .map(|s| s.observed - s.reference)
            .fold(f64::NEG_INFINITY, f64::max);
        let violations = samples
            .iter()
            .filter(|s| s.observed > s.reference + tolerance)
            .count();
        BoundReport {
            hypothesis,
            coordinates,
            samples,
            fitted_constant: None,
            worst_margin,
            violations,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples `F(a/d)` over reduced fractions with `2 <= d <= d_max` and
/// `gcd(d, m) = 1`, and fits `c` in `F ~ exp(-c log x / log d)`.
///
/// The reference column is `d/x` for the Dirichlet kernel and the trivial
/// bound `sup |F|` otherwise.
pub fn linf_scan(f: &Family, d_max: u64, coprime_m: u64) -> Result<BoundReport> {
    f.validate()?;
    if d_max > MAX_LINF_DENOMINATOR {
        return Err(Error::Guard {
            what: "d_max",
            value: d_max as u128,
            limit: MAX_LINF_DENOMINATOR as u128,
        });
    }
    if coprime_m == 0 {
        return Err(Error::ZeroModulus);
    }
    let x = f.scale();
    let samples: Vec<BoundSample> = (2..=d_max)
        .into_par_iter()
        .filter(|d| d.gcd(&coprime_m) == 1)
        .flat_map_iter(|d| {
            let reference = match f {
                Family::Dirichlet { x } => d as f64 / *x as f64,
                _ => f.trivial_bound(),
            };
            (1..d)
                .filter(move |a| a.gcd(&d) == 1)
                .map(move |a| BoundSample {
                    point: vec![a as f64, d as f64],
                    observed: f.abs(Phase::ratio(a as i128, d)),
                    reference,
                })
        })
        .collect();
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    // least squares through the origin of -ln F against ln x / ln d
    let (mut szy, mut szz) = (0.0, 0.0);
    for s in &samples {
        if s.observed > 0.0 {
            let z = x.ln() / s.point[1].ln();
            let y = -s.observed.ln();
            szy += z * y;
            szz += z * z;
        }
    }
    let mut report = BoundReport::new(Hypothesis::Linf, vec!["a", "d"], samples, 1e-12);
    report.fitted_constant = (szz > 0.0).then(|| szy / szz);
    Ok(report)
}

/// L1 decay of `Phi~_l` for `l` in `ls`.
///
/// Reference: `r^(l-1) / ((b-1) b^l)` with `r = sum_theta G(0, theta)` from
/// the exact palindrome matrix. For `b >= 4` the fitted constant is the
/// largest `x^(alpha_b) * int |Phi~_l|`, which stays below
/// `1/((b-1)(4 + ln(b/2 - 1)))`.
pub fn l1_phi_tilde(b: Base, ls: &[u32], multiplier: u64) -> Result<BoundReport> {
    let pal = build_pal_matrix(b)?;
    let r0 = pal.row_zero_sum();
    let r0 = *r0.numer() as f64 / *r0.denom() as f64;
    let bf = b.get() as f64;
    let alpha = alpha_palindrome_value(b).ok();
    let mut samples = Vec::with_capacity(ls.len());
    let mut worst_ratio: Option<f64> = None;
    for &l in ls {
        let f = Family::PhiTilde { b, l };
        let est = l1_norm_with(&f, false, default_nodes(&f, multiplier), multiplier, false)?;
        let reference = r0.powi(l as i32 - 1) / ((bf - 1.0) * bf.powi(l as i32));
        if let Some(a) = alpha {
            let ratio = est.value * f.scale().powf(a);
            worst_ratio = Some(worst_ratio.map_or(ratio, |w: f64| w.max(ratio)));
        }
        samples.push(BoundSample {
            point: vec![l as f64, f.scale()],
            observed: est.value,
            reference,
        });
    }
    let mut report = BoundReport::new(Hypothesis::L1, vec!["l", "x"], samples, 1e-12);
    report.fitted_constant = worst_ratio;
    Ok(report)
}

/// `int |F_x| * #A(x) / log x`, a quantity bounded below for any set.
pub fn l1_lower_bound_ratio(f: &Family, multiplier: u64) -> Result<f64> {
    let est = l1_norm_with(f, false, default_nodes(f, multiplier), multiplier, false)?;
    Ok(est.value * f.normalization() / f.scale().ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DecreasingFamily {
    PhiTilde { b: Base },
    Missing { b: Base, a0: u64 },
    Reversible { b: Base },
}

/// Largest digit count exercised by [`check_decreasing`].
pub const DECREASING_MAX_L: u32 = 8;

fn random_phase(rng: &mut ChaCha8Rng) -> Phase {
    Phase::from_fixed_bits(rng.random::<u64>())
}

/// For each random point, checks every pair of scales `x = b^k <= y = b^l`
/// with `l <= 8` and records the worst margin of that point.
///
/// * `PhiTilde`: `|Phi~_l(t)| <= |Phi~_(l-1)(b t)|`, `2 <= l <= 8`.
/// * `Missing`: `F_y(t) <= F_x(t)`.
/// * `Reversible`: `|F_y(alpha, beta)| <= |F_x(alpha y / x, beta)|`.
pub fn check_decreasing(fam: DecreasingFamily, samples: usize, seed: u64) -> Result<BoundReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_l = DECREASING_MAX_L;
    let mut out = Vec::with_capacity(samples);
    let coordinates = match fam {
        DecreasingFamily::Reversible { .. } => vec!["alpha", "beta"],
        _ => vec!["t"],
    };
    for _ in 0..samples {
        let (point, observed, reference) = match fam {
            DecreasingFamily::PhiTilde { b } => {
                let t = random_phase(&mut rng);
                let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
                for l in 2..=max_l {
                    let lhs = phi_tilde(b, l, t).norm();
                    let rhs = phi_tilde(b, l - 1, t.scale(b.get() as u128)).norm();
                    if lhs - rhs > worst.0 {
                        worst = (lhs - rhs, lhs, rhs);
                    }
                }
                (vec![t.to_f64()], worst.1, worst.2)
            }
            DecreasingFamily::Missing { b, a0 } => {
                if a0 >= b.get() {
                    return Err(Error::DigitOutOfRange {
                        digit: a0,
                        base: b.get(),
                    });
                }
                let t = random_phase(&mut rng);
                let norm = (b.get() - 1) as f64;
                // prefix products give F_(b^k)(t) for every k at once
                let mut f = Vec::with_capacity(max_l as usize);
                let mut p = Complex64::new(1.0, 0.0);
                for fac in missing_digit_factors(b, &[a0], max_l, t) {
                    p *= fac.sum.eval(fac.phase) / norm;
                    f.push(p.norm());
                }
                let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
                for l in 0..f.len() {
                    for k in 0..=l {
                        if f[l] - f[k] > worst.0 {
                            worst = (f[l] - f[k], f[l], f[k]);
                        }
                    }
                }
                (vec![t.to_f64()], worst.1, worst.2)
            }
            DecreasingFamily::Reversible { b } => {
                let alpha = random_phase(&mut rng);
                let beta = random_phase(&mut rng);
                let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
                for l in 1..=max_l {
                    let lhs = reversible_transform(b, l, alpha, beta).norm();
                    for k in 1..=l {
                        let rhs = reversible_transform(b, k, alpha.scale_pow(b.get(), l - k), beta)
                            .norm();
                        if lhs - rhs > worst.0 {
                            worst = (lhs - rhs, lhs, rhs);
                        }
                    }
                }
                (vec![alpha.to_f64(), beta.to_f64()], worst.1, worst.2)
            }
        };
        out.push(BoundSample {
            point,
            observed,
            reference,
        });
    }
    Ok(BoundReport::new(
        Hypothesis::Decreasing,
        coordinates,
        out,
        DECREASING_TOLERANCE,
    ))
}

/// Per-`q` contributions `q^-k sum_{0<a<q^k} F(a/q^k)` for
/// `q <= x^(1/k)`, `gcd(q, m) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleSum {
    pub x: f64,
    pub k: u32,
    pub q_max: u64,
    /// `(q, contribution)` in increasing `q`.
    pub terms: Vec<(u64, f64)>,
    pub total: f64,
}

impl DoubleSum {
    /// `(S1, S2)`: terms with `q <= (ln x)^(B/k)` and the rest.
    pub fn split(&self, big_b: f64) -> (f64, f64) {
        let threshold = self.x.ln().powf(big_b / self.k as f64);
        let (mut s1, mut s2) = (0.0, 0.0);
        for &(q, v) in &self.terms {
            if (q as f64) <= threshold {
                s1 += v;
            } else {
                s2 += v;
            }
        }
        (s1, s2)
    }
}

pub fn double_sum(f: &Family, k: u32, coprime_m: u64) -> Result<DoubleSum> {
    double_sum_with_limit(f, k, coprime_m, MAX_DOUBLE_SUM_Q)
}

pub fn double_sum_with_limit(
    f: &Family,
    k: u32,
    coprime_m: u64,
    q_limit: u64,
) -> Result<DoubleSum> {
    f.validate()?;
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if coprime_m == 0 {
        return Err(Error::ZeroModulus);
    }
    let x = f.scale();
    let xi = x as u128;
    let q_max = xi.nth_root(k);
    if q_max > q_limit as u128 {
        return Err(Error::Guard {
            what: "x^(1/k)",
            value: q_max,
            limit: q_limit as u128,
        });
    }
    let q_max = q_max as u64;
    let terms: Vec<(u64, f64)> = (1..=q_max)
        .filter(|q| q.gcd(&coprime_m) == 1)
        .map(|q| {
            let qk = q.pow(k);
            let inner = inner_rational_sum(f, qk);
            (q, inner / qk as f64)
        })
        .collect();
    let total = terms.iter().map(|t| t.1).sum();
    Ok(DoubleSum {
        x,
        k,
        q_max,
        terms,
        total,
    })
}

/// `sum_{0<a<n} |F(a/n)|`, chunked in a fixed order.
fn inner_rational_sum(f: &Family, n: u64) -> f64 {
    const CHUNK: u64 = 1 << 12;
    if n <= 1 {
        return 0.0;
    }
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * CHUNK).max(1);
            let hi = ((c + 1) * CHUNK).min(n);
            (lo..hi).map(|a| f.abs(Phase::ratio(a as i128, n))).sum()
        })
        .collect();
    partial.iter().sum()
}

/// `sum_{0<a<q^k} |f(a/q^k)| <= q^k ||f||_1 + ||f'||_1`, norms by the
/// midpoint rule with four times the default node count.
pub fn large_sieve_check(f: &Family, q: u64, k: u32, multiplier: u64) -> Result<BoundReport> {
    f.validate()?;
    let qk = q
        .checked_pow(k)
        .filter(|&v| v <= MAX_SIEVE_MODULUS)
        .ok_or(Error::Guard {
            what: "q^k",
            value: (q as u128).saturating_pow(k),
            limit: MAX_SIEVE_MODULUS as u128,
        })?;
    if q < 1 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let m = 4 * multiplier;
    let nodes = default_nodes(f, m);
    let l1 = l1_norm_with(f, false, nodes, m, false)?.value;
    let dl1 = l1_norm_with(f, true, nodes, m, false)?.value;
    let lhs = inner_rational_sum(f, qk);
    let rhs = qk as f64 * l1 + dl1;
    let tol = 1e-9 * rhs.abs().max(1.0);
    Ok(BoundReport::new(
        Hypothesis::LargeSieve,
        vec!["q", "k"],
        vec![BoundSample {
            point: vec![q as f64, k as f64],
            observed: lhs,
            reference: rhs,
        }],
        tol,
    ))
}

/// `|#{n in A(x) : d | n} - #A(x)/d| <= (#A(x)/d) sum_{0<a<d} F_x(a/d)`.
pub fn progression_discrepancy(s: &SetDescriptor, x: u64, d: u64) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::ZeroModulus);
    }
    let count = member_count(s, x as u128)?;
    if count > MAX_DISCREPANCY_MEMBERS {
        return Err(Error::Guard {
            what: "member count",
            value: count,
            limit: MAX_DISCREPANCY_MEMBERS,
        });
    }
    let mut residues = vec![0u64; d as usize];
    for n in enumerate_set(s, x)? {
        residues[(n % d) as usize] += 1;
    }
    let total = count as f64;
    let lhs = (residues[0] as f64 - total / d as f64).abs();
    // S(a/d) = sum_r cnt[r] e(r a / d)
    let fourier: f64 = (1..d)
        .map(|a| {
            let s: Complex64 = residues
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(r, &c)| c as f64 * Phase::ratio(r as i128 * a as i128, d).e())
                .sum();
            s.norm() / total
        })
        .sum();
    let rhs = total / d as f64 * fourier;
    Ok(BoundReport::new(
        Hypothesis::ProgressionDiscrepancy,
        vec!["d"],
        vec![BoundSample {
            point: vec![d as f64],
            observed: lhs,
            reference: rhs,
        }],
        1e-6 * total,
    ))
}

/// Midpoint estimate of `int_0^1 |S_x(t)|^2` for an unnormalized family,
/// to compare with the member count.
pub fn parseval_integral(f: &Family, nodes: u64) -> f64 {
    let n = f.normalization();
    midpoint_sum(nodes, |t| (f.eval(t) * n).norm_sqr())
}
