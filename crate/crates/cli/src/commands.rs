use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex64;

use powerfree_core::bounds::{
    self, alpha_missing_with, check_decreasing, double_sum_with_limit, large_sieve_check,
    linf_scan, progression_discrepancy, verify, BoundReport, DecreasingFamily, Family,
};
use powerfree_core::digits::{enumerate_set, member_count, palindromes_of_length};
use powerfree_core::expsum::{
    brute_reversible, brute_transform, geometric_sum, missing_digit_transform,
    odd_palindromes_transform, palindrome_transform, reversible_transform,
};
use powerfree_core::powerfree::count_powerfree_in_set;
use powerfree_core::{Base, Error, Phase, SetDescriptor};

use crate::config::RunConfig;
use crate::output::{Cell, Table};

pub const EXIT_OK: i32 = 0;
/// An inequality failed, a cross-check mismatched or an iteration did not converge.
pub const EXIT_VIOLATION: i32 = 1;
/// Bad input or a guard was hit.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub exit: i32,
}

/// Accepts `123`, `1e9` and `3^13`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Some((b, e)) = s.split_once('^') {
        let b: u64 = b.parse().map_err(|e| format!("{e}"))?;
        let e: u32 = e.parse().map_err(|e| format!("{e}"))?;
        return b
            .checked_pow(e)
            .ok_or_else(|| "power overflows u64".to_string());
    }
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let (m, e) = s
        .split_once(['e', 'E'])
        .ok_or_else(|| format!("not an integer: {s}"))?;
    let m: u64 = m.parse().map_err(|e| format!("{e}"))?;
    let e: u32 = e.parse().map_err(|e| format!("{e}"))?;
    10u64
        .checked_pow(e)
        .and_then(|p| p.checked_mul(m))
        .ok_or_else(|| "value overflows u64".to_string())
}

fn base(b: Option<u64>) -> Result<Base> {
    Ok(Base::new(b.ok_or_else(|| anyhow!("--base is required"))?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetChoice {
    All,
    Palindromes,
    Missing,
    Reversible,
}

#[derive(Args, Clone, Debug)]
pub struct SetArgs {
    #[arg(long, value_enum)]
    pub set: Option<SetChoice>,
    #[arg(long)]
    pub base: Option<u64>,
    /// Odd-length palindromes only.
    #[arg(long)]
    pub odd: bool,
    /// Excluded digit (repeatable).
    #[arg(long = "digit")]
    pub digits: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    pub coprime: u64,
}

impl Default for SetArgs {
    fn default() -> Self {
        SetArgs {
            set: None,
            base: None,
            odd: false,
            digits: Vec::new(),
            coprime: 1,
        }
    }
}

impl SetArgs {
    pub fn descriptor(&self) -> Result<SetDescriptor> {
        let set = self.set.ok_or_else(|| anyhow!("--set is required"))?;
        let d = match set {
            SetChoice::All => SetDescriptor::all_integers(),
            SetChoice::Palindromes => SetDescriptor::palindromes(base(self.base)?, self.odd),
            SetChoice::Missing => {
                if self.digits.is_empty() {
                    bail!("--digit is required for missing-digit sets");
                }
                SetDescriptor::missing_digits(base(self.base)?, &self.digits)?
            }
            SetChoice::Reversible => SetDescriptor::reversible_pairs(base(self.base)?),
        };
        Ok(d.coprime_to(self.coprime))
    }
}

pub fn cmd_alpha_table(cfg: &RunConfig, b_min: u64, b_max: u64) -> Result<Outcome> {
    if !(3 <= b_min && b_min <= b_max && b_max <= bounds::maynard::MAX_MAYNARD_BASE) {
        bail!("need 3 <= b_min <= b_max <= 36");
    }
    let mut t = Table::new(
        "alpha-table",
        vec!["base", "digit", "lambda", "alpha", "residual"],
    );
    let mut exit = EXIT_OK;
    for b in b_min..=b_max {
        let base = Base::new(b)?;
        for a0 in 0..b {
            match alpha_missing_with(base, a0, cfg.sup_options(), cfg.power_options()) {
                Ok(r) => t.push(vec![
                    b.into(),
                    a0.into(),
                    r.lambda.into(),
                    r.alpha.into(),
                    r.residual.into(),
                ]),
                Err(Error::NotConverged {
                    estimate, residual, ..
                }) => {
                    exit = EXIT_VIOLATION;
                    let alpha = 1.0 - estimate.ln() / (b as f64).ln();
                    t.push(vec![
                        b.into(),
                        a0.into(),
                        estimate.into(),
                        alpha.into(),
                        residual.into(),
                    ]);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(Outcome { table: t, exit })
}

pub fn cmd_count(cfg: &RunConfig, set: &SetArgs, x: u64, k: u32) -> Result<Outcome> {
    let s = set.descriptor()?;
    let unfiltered = SetDescriptor {
        coprime_to: 1,
        ..s.clone()
    };
    let bound = member_count(&unfiltered, x as u128)?;
    if bound > cfg.max_members as u128 {
        return Err(Error::Guard {
            what: "member count",
            value: bound,
            limit: cfg.max_members as u128,
        }
        .into());
    }
    let r = count_powerfree_in_set(&s, x, k)?;
    let mut t = Table::new(
        "count",
        vec![
            "set",
            "x",
            "k",
            "raw_count",
            "powerfree_count",
            "local_modulus",
            "paired",
            "density",
            "predicted",
            "relative_error",
            "method",
        ],
    );
    t.push(vec![
        s.to_string().into(),
        r.x.into(),
        r.k.into(),
        r.raw_count.into(),
        r.powerfree_count.into(),
        r.density.local_modulus.into(),
        r.density.paired.into(),
        r.density.value.into(),
        r.predicted.into(),
        r.relative_error.into(),
        format!("{:?}", r.method).to_lowercase().into(),
    ]);
    Ok(Outcome {
        table: t,
        exit: EXIT_OK,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HypothesisChoice {
    Linf,
    L1,
    Decreasing,
    DoubleSum,
    LargeSieve,
    Discrepancy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    Constant,
    Dirichlet,
    Phi,
    PhiTilde,
    Palindrome,
    Missing,
    Reversible,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub hypothesis: HypothesisChoice,
    #[arg(long, value_enum)]
    pub family: Option<FamilyChoice>,
    #[command(flatten)]
    pub set: SetArgs,
    /// Digit count parameter: `l` for phi and reversible, `L` for palindromes,
    /// `k` digits for missing-digit strings.
    #[arg(long)]
    pub l: Option<u32>,
    /// Scale for the Dirichlet kernel, or the range bound for discrepancy.
    #[arg(long, value_parser = parse_count)]
    pub x: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Power `k` of the double sum and the large sieve.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 100)]
    pub d_max: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    /// Exponents `e` of the scales `x = b^e` (double sum) or digit counts (L1).
    #[arg(long, value_delimiter = ',')]
    pub scales: Vec<u32>,
}

impl VerifyArgs {
    fn family(&self) -> Result<Family> {
        let fam = self.family.ok_or_else(|| anyhow!("--family is required"))?;
        let l = || self.l.ok_or_else(|| anyhow!("--l is required"));
        let f = match fam {
            FamilyChoice::Constant => Family::Constant,
            FamilyChoice::Dirichlet => Family::Dirichlet {
                x: self.x.ok_or_else(|| anyhow!("--x is required"))?,
            },
            FamilyChoice::Phi => Family::Phi {
                b: base(self.set.base)?,
                l: l()?,
            },
            FamilyChoice::PhiTilde => Family::PhiTilde {
                b: base(self.set.base)?,
                l: l()?,
            },
            FamilyChoice::Palindrome => Family::PalindromeOdd {
                b: base(self.set.base)?,
                big_l: l()?,
            },
            FamilyChoice::Missing => Family::MissingDigit {
                b: base(self.set.base)?,
                a0: self.a0()?,
                k: l()?,
            },
            FamilyChoice::Reversible => Family::Reversible {
                b: base(self.set.base)?,
                l: l()?,
                alpha: self.alpha.unwrap_or(0.0),
            },
        };
        f.validate()?;
        Ok(f)
    }

    fn a0(&self) -> Result<u64> {
        self.set
            .digits
            .first()
            .copied()
            .ok_or_else(|| anyhow!("--digit is required"))
    }
}

fn report_table(command: &'static str, r: &BoundReport) -> Table {
    let c0 = r.coordinates.first().copied().unwrap_or("p0");
    let c1 = r.coordinates.get(1).copied().unwrap_or("p1");
    let mut t = Table::new(
        command,
        vec![
            "row",
            c0,
            c1,
            "observed",
            "reference",
            "margin",
            "violations",
            "fitted_constant",
        ],
    );
    for s in &r.samples {
        t.push(vec![
            "sample".into(),
            s.point.first().copied().into(),
            s.point.get(1).copied().into(),
            s.observed.into(),
            s.reference.into(),
            (s.observed - s.reference).into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    t.push(vec![
        "summary".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        r.worst_margin.into(),
        r.violations.into(),
        r.fitted_constant.into(),
    ]);
    t
}

fn report_outcome(r: BoundReport) -> Outcome {
    Outcome {
        exit: if r.passed() { EXIT_OK } else { EXIT_VIOLATION },
        table: report_table("verify", &r),
    }
}

pub fn cmd_verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome> {
    match a.hypothesis {
        HypothesisChoice::Linf => Ok(report_outcome(linf_scan(
            &a.family()?,
            a.d_max,
            a.set.coprime,
        )?)),
        HypothesisChoice::L1 => verify_l1(cfg, a),
        HypothesisChoice::Decreasing => {
            let b = base(a.set.base)?;
            let fam = match a.family {
                Some(FamilyChoice::PhiTilde) => DecreasingFamily::PhiTilde { b },
                Some(FamilyChoice::Missing) => DecreasingFamily::Missing { b, a0: a.a0()? },
                Some(FamilyChoice::Reversible) => DecreasingFamily::Reversible { b },
                _ => bail!("decreasing needs --family phi-tilde, missing or reversible"),
            };
            Ok(report_outcome(check_decreasing(fam, a.samples, cfg.seed)?))
        }
        HypothesisChoice::DoubleSum => verify_double_sum(cfg, a),
        HypothesisChoice::LargeSieve => {
            let f = a.family()?;
            let q = a.q.ok_or_else(|| anyhow!("--q is required"))?;
            let qk = (q as u128).saturating_pow(a.k);
            if qk > cfg.max_qk as u128 {
                return Err(Error::Guard {
                    what: "q^k",
                    value: qk,
                    limit: cfg.max_qk as u128,
                }
                .into());
            }
            Ok(report_outcome(large_sieve_check(
                &f,
                q,
                a.k,
                cfg.quad_multiplier,
            )?))
        }
        HypothesisChoice::Discrepancy => {
            let s = a.set.descriptor()?;
            let x = a.x.ok_or_else(|| anyhow!("--x is required"))?;
            let d = a.d.ok_or_else(|| anyhow!("--d is required"))?;
            Ok(report_outcome(progression_discrepancy(&s, x, d)?))
        }
    }
}

fn verify_l1(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome> {
    if a.family == Some(FamilyChoice::PhiTilde) {
        let b = base(a.set.base)?;
        let ls: Vec<u32> = if a.scales.is_empty() {
            vec![a.l.ok_or_else(|| anyhow!("--l or --scales is required"))?]
        } else {
            a.scales.clone()
        };
        return Ok(report_outcome(verify::l1_phi_tilde(
            b,
            &ls,
            cfg.quad_multiplier,
        )?));
    }
    let f = a.family()?;
    let nodes = bounds::quadrature::default_nodes(&f, cfg.quad_multiplier);
    let v = bounds::l1_norm_with(&f, false, nodes, cfg.quad_multiplier, true)?;
    let dv = bounds::l1_norm_with(&f, true, nodes, cfg.quad_multiplier, false)?;
    let mut t = Table::new(
        "verify",
        vec![
            "x",
            "nodes",
            "l1",
            "refinement_delta",
            "l1_derivative",
            "lower_bound_ratio",
        ],
    );
    t.push(vec![
        f.scale().into(),
        nodes.into(),
        v.value.into(),
        v.refinement_delta.into(),
        dv.value.into(),
        (v.value * f.normalization() / f.scale().ln()).into(),
    ]);
    Ok(Outcome {
        table: t,
        exit: EXIT_OK,
    })
}

/// Double sum of the missing-digit (or Dirichlet) transform at `x = b^e` for
/// each requested exponent; the values must strictly decrease.
fn verify_double_sum(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome> {
    let b = base(a.set.base)?;
    let scales = if a.scales.is_empty() {
        vec![4, 6, 8]
    } else {
        a.scales.clone()
    };
    let q_limit = verify::MAX_DOUBLE_SUM_Q.min((cfg.max_qk as f64).powf(1.0 / a.k as f64) as u64);
    let mut t = Table::new(
        "verify",
        vec!["exponent", "x", "q_max", "value", "s1", "s2", "status"],
    );
    let mut exit = EXIT_OK;
    let mut prev: Option<f64> = None;
    for &e in &scales {
        let f = match a.family {
            Some(FamilyChoice::Missing) | None => Family::MissingDigit {
                b,
                a0: a.a0()?,
                k: e,
            },
            Some(FamilyChoice::Dirichlet) => Family::Dirichlet {
                x: b.checked_pow(e)
                    .and_then(|v| u64::try_from(v).ok())
                    .context("scale overflows")?,
            },
            Some(other) => bail!("double-sum does not support {other:?}"),
        };
        match double_sum_with_limit(&f, a.k, a.set.coprime, q_limit) {
            Ok(ds) => {
                let (s1, s2) = ds.split(cfg.split_b);
                let decreasing = prev.is_none_or(|p| ds.total < p);
                if !decreasing && exit == EXIT_OK {
                    exit = EXIT_VIOLATION;
                }
                prev = Some(ds.total);
                t.push(vec![
                    e.into(),
                    ds.x.into(),
                    ds.q_max.into(),
                    ds.total.into(),
                    s1.into(),
                    s2.into(),
                    (if decreasing { "ok" } else { "not decreasing" }).into(),
                ]);
            }
            Err(err @ Error::Guard { .. }) => {
                exit = EXIT_ERROR;
                t.push(vec![
                    e.into(),
                    f.scale().into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    err.to_string().into(),
                ]);
            }
            Err(err) => return Err(err.into()),
        }
    }
    Ok(Outcome { table: t, exit })
}

#[derive(Args, Clone, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Range bound; members are taken from `[0, x)`.
    #[arg(long, value_parser = parse_count)]
    pub x: Option<u64>,
    /// Exact digit length (palindromes) or digit count (missing digits, reversible).
    #[arg(long)]
    pub length: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Also sum directly and fail on a mismatch above 1e-9 of the trivial bound.
    #[arg(long)]
    pub cross_check: bool,
}

struct Evaluated {
    x: u64,
    value: Complex64,
    normalization: f64,
    method: &'static str,
    brute: Option<Complex64>,
}

fn is_power_of(b: u64, x: u64) -> Option<u32> {
    let mut p = 1u64;
    for e in 0..64 {
        if p == x {
            return Some(e);
        }
        p = p.checked_mul(b)?;
    }
    None
}

fn eval_point(a: &EvalArgs) -> Result<Evaluated> {
    let s = a.set.descriptor()?;
    let cross = a.cross_check;
    let set = a.set.set.expect("descriptor checked --set");
    if set == SetChoice::Reversible {
        let b = base(a.set.base)?;
        let l = a.length.ok_or_else(|| anyhow!("--length is required"))?;
        let (al, be) = (
            a.alpha.ok_or_else(|| anyhow!("--alpha is required"))?,
            a.beta.ok_or_else(|| anyhow!("--beta is required"))?,
        );
        let x = b
            .checked_pow(l)
            .and_then(|v| u64::try_from(v).ok())
            .context("b^l overflows")?;
        let value = reversible_transform(b, l, al, be) * x as f64;
        let brute = if cross {
            Some(brute_reversible(b, l, Phase::from_f64(al), Phase::from_f64(be))? * x as f64)
        } else {
            None
        };
        return Ok(Evaluated {
            x,
            value,
            normalization: x as f64,
            method: "product",
            brute,
        });
    }
    let t = Phase::from_f64(a.t.ok_or_else(|| anyhow!("--t is required"))?);
    let brute_over = |x: u64, keep: &dyn Fn(u64) -> bool| -> Result<Complex64> {
        let count = member_count(&s, x as u128)?;
        if count > powerfree_core::expsum::BRUTE_MEMBER_LIMIT {
            return Err(Error::Guard {
                what: "member count",
                value: count,
                limit: powerfree_core::expsum::BRUTE_MEMBER_LIMIT,
            }
            .into());
        }
        Ok(enumerate_set(&s, x)?
            .filter(|&n| keep(n))
            .map(|n| t.scale(n as u128).e())
            .sum())
    };
    let unfiltered = a.set.coprime == 1;
    match set {
        SetChoice::Palindromes if a.length.is_some() && unfiltered => {
            let b = base(a.set.base)?;
            let len = a.length.expect("checked");
            let x = b
                .checked_pow(len)
                .and_then(|v| u64::try_from(v).ok())
                .context("b^length overflows")?;
            let low = if len == 1 { 0 } else { x / b.get() };
            let brute = if cross {
                Some(brute_over(x, &|n| n >= low)?)
            } else {
                None
            };
            return Ok(Evaluated {
                x,
                value: palindrome_transform(b, len, t),
                normalization: palindromes_of_length(len, b) as f64,
                method: "product",
                brute,
            });
        }
        // with 0 excluded the digit strings miss the shorter members
        SetChoice::Missing if unfiltered && a.set.digits.len() == 1 && a.set.digits[0] != 0 => {
            let b = base(a.set.base)?;
            let k = match (a.length, a.x) {
                (Some(k), _) => Some(k),
                (None, Some(x)) => is_power_of(b.get(), x),
                _ => bail!("--length or --x is required"),
            };
            if let Some(k) = k {
                let x = b
                    .checked_pow(k)
                    .and_then(|v| u64::try_from(v).ok())
                    .context("b^k overflows")?;
                let brute = if cross {
                    Some(brute_over(x, &|_| true)?)
                } else {
                    None
                };
                return Ok(Evaluated {
                    x,
                    value: missing_digit_transform(b, a.set.digits[0], k, t),
                    normalization: ((b.get() - 1) as f64).powi(k as i32),
                    method: "product",
                    brute,
                });
            }
        }
        SetChoice::Palindromes if a.set.odd && unfiltered => {
            let b = base(a.set.base)?;
            let x = a.x.ok_or_else(|| anyhow!("--x or --length is required"))?;
            if let Some(e) = is_power_of(b.get(), x).filter(|e| e % 2 == 1) {
                let brute = if cross {
                    Some(brute_over(x, &|_| true)?)
                } else {
                    None
                };
                return Ok(Evaluated {
                    x,
                    value: odd_palindromes_transform(b, e / 2, t),
                    normalization: member_count(&s, x as u128)? as f64,
                    method: "product",
                    brute,
                });
            }
        }
        SetChoice::All if unfiltered => {
            let x = a.x.ok_or_else(|| anyhow!("--x is required"))?;
            let brute = if cross {
                Some(brute_over(x, &|_| true)?)
            } else {
                None
            };
            return Ok(Evaluated {
                x,
                value: geometric_sum(x, t),
                normalization: x as f64,
                method: "product",
                brute,
            });
        }
        _ => {}
    }
    let x = a.x.ok_or_else(|| anyhow!("--x is required"))?;
    let sample = brute_transform(&s, x, t)?;
    Ok(Evaluated {
        x,
        value: sample.value,
        normalization: sample.normalization,
        method: "brute",
        brute: cross.then_some(sample.value),
    })
}

pub fn cmd_eval(_cfg: &RunConfig, a: &EvalArgs) -> Result<Outcome> {
    let s = a.set.descriptor()?;
    let ev = eval_point(a)?;
    let mut t = Table::new(
        "eval",
        vec![
            "set",
            "x",
            "t",
            "alpha",
            "beta",
            "re",
            "im",
            "abs",
            "normalization",
            "normalized_abs",
            "method",
            "brute_re",
            "brute_im",
            "abs_diff",
        ],
    );
    let diff = ev.brute.map(|b| (b - ev.value).norm());
    let mismatch = diff.is_some_and(|d| d > 1e-9 * ev.normalization.max(1.0));
    t.push(vec![
        s.to_string().into(),
        ev.x.into(),
        a.t.into(),
        a.alpha.into(),
        a.beta.into(),
        ev.value.re.into(),
        ev.value.im.into(),
        ev.value.norm().into(),
        ev.normalization.into(),
        (ev.value.norm() / ev.normalization).into(),
        ev.method.into(),
        ev.brute.map(|b| b.re).into(),
        ev.brute.map(|b| b.im).into(),
        diff.into(),
    ]);
    Ok(Outcome {
        table: t,
        exit: if mismatch { EXIT_VIOLATION } else { EXIT_OK },
    })
}
