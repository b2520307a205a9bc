//! k-th powerfree testing and counting over digit sets, with the densities
//! the sieve argument predicts.

use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::digits::{digit_count, enumerate_set, member_count, reverse, SetDescriptor, SetKind};
use crate::error::{Error, Result};

pub const MAX_SIEVE: u64 = 1 << 31;
pub const MAX_COUNT_MEMBERS: u128 = 100_000_000;
const ZETA_TERMS: u64 = 10_000_000;

/// Bit flags over `[1, x]`: set iff no `p^k` divides `n`.
#[derive(Clone, Debug)]
pub struct PowerfreeSieve {
    limit: u64,
    k: u32,
    bits: Vec<u64>,
}

impl PowerfreeSieve {
    pub fn new(x: u64, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument("k must be at least 2".into()));
        }
        if x == 0 {
            return Err(Error::InvalidArgument(
                "sieve limit must be positive".into(),
            ));
        }
        if x > MAX_SIEVE {
            return Err(Error::Guard {
                what: "sieve limit",
                value: x as u128,
                limit: MAX_SIEVE as u128,
            });
        }
        let words = (x as usize + 1).div_ceil(64);
        let mut bits = vec![u64::MAX; words];
        bits[0] &= !1; // 0 is not in range
        for p in small_primes(x.nth_root(k)) {
            let pk = p.pow(k);
            let mut m = pk;
            while m <= x {
                bits[(m / 64) as usize] &= !(1 << (m % 64));
                m += pk;
            }
        }
        Ok(PowerfreeSieve { limit: x, k, bits })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Panics if `n` is outside `[1, limit]`.
    pub fn is_powerfree(&self, n: u64) -> bool {
        assert!(n >= 1 && n <= self.limit, "{n} outside sieve range");
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn count_up_to(&self, n: u64) -> u64 {
        (1..=n.min(self.limit))
            .filter(|&m| self.is_powerfree(m))
            .count() as u64
    }
}

pub fn squarefree_sieve(x: u64) -> Result<PowerfreeSieve> {
    PowerfreeSieve::new(x, 2)
}

fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// No prime `p` with `p^k | n`.
///
/// Factors up to `n^(1/(k+1))` are divided out; what remains has at most `k`
/// prime factors, so it fails only if it is a perfect `k`-th power above 1.
pub fn is_kth_powerfree(n: u64, k: u32) -> bool {
    assert!(n >= 1, "n must be positive");
    assert!(k >= 2, "k must be at least 2");
    let mut r = n;
    let bound = n.nth_root(k + 1);
    let mut d = 2u64;
    while d <= bound {
        if r.is_multiple_of(d) {
            let mut e = 0;
            while r.is_multiple_of(d) {
                r /= d;
                e += 1;
            }
            if e >= k {
                return false;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if r == 1 {
        return true;
    }
    let root = r.nth_root(k);
    !(root > 1 && root.pow(k) == r)
}

/// `zeta(k)` by summing `10^7` terms smallest first, plus an Euler-Maclaurin tail.
pub fn zeta(k: u32) -> f64 {
    assert!(k >= 2, "zeta needs k >= 2");
    let s: f64 = (1..=ZETA_TERMS)
        .rev()
        .map(|n| (n as f64).powi(-(k as i32)))
        .sum();
    let n = ZETA_TERMS as f64;
    let kf = k as f64;
    let tail = n.powf(1.0 - kf) / (kf - 1.0) - 0.5 * n.powf(-kf) + kf / 12.0 * n.powf(-kf - 1.0);
    s + tail
}

fn distinct_primes(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityPrediction {
    pub k: u32,
    pub local_modulus: u64,
    pub paired: bool,
    pub value: f64,
}

/// `zeta(k)^-1 prod_{p | m} (1 - p^-k)^-1`, squared when `paired`.
pub fn predicted_density(k: u32, m: u64, paired: bool) -> Result<DensityPrediction> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut v = 1.0 / zeta(k);
    for p in distinct_primes(m) {
        v /= 1.0 - (p as f64).powi(-(k as i32));
    }
    Ok(DensityPrediction {
        k,
        local_modulus: m,
        paired,
        value: if paired { v * v } else { v },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Sieve,
    TrialDivision,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub descriptor: SetDescriptor,
    pub x: u64,
    pub k: u32,
    /// Members in `[1, x)`; 0 is never counted.
    pub raw_count: u64,
    pub powerfree_count: u64,
    pub density: DensityPrediction,
    pub predicted: f64,
    pub relative_error: f64,
    pub method: CountMethod,
}

/// Local modulus of the density for each family: `b^3 - b` for palindromes
/// and reversible pairs, `b` for missing digits.
pub fn local_modulus(s: &SetDescriptor) -> u64 {
    match &s.kind {
        SetKind::AllIntegers => 1,
        SetKind::Palindromes { base, .. } | SetKind::ReversiblePairs { base } => {
            let b = base.get();
            b * b * b - b
        }
        SetKind::MissingDigit { base, .. } => base.get(),
    }
}

/// Counts members of `s` in `[1, x)` that are `k`-th powerfree (for reversible
/// pairs: `n` and its reverse both are), and compares with the prediction.
pub fn count_powerfree_in_set(s: &SetDescriptor, x: u64, k: u32) -> Result<CountReport> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let unfiltered = SetDescriptor {
        kind: s.kind.clone(),
        coprime_to: 1,
    };
    let bound = member_count(&unfiltered, x as u128)?;
    if bound > MAX_COUNT_MEMBERS {
        return Err(Error::Guard {
            what: "member count",
            value: bound,
            limit: MAX_COUNT_MEMBERS,
        });
    }
    let paired_base = match &s.kind {
        SetKind::ReversiblePairs { base } => Some(*base),
        _ => None,
    };
    // reverses of members below x stay below b^(digits of x - 1)
    let top = match paired_base {
        Some(b) if x > 1 => b
            .checked_pow(digit_count((x - 1) as u128, b))
            .map_or(u64::MAX, |v| v.min(u64::MAX as u128) as u64),
        _ => x,
    };
    // a sieve only pays off when the set is not much sparser than the range
    let sieve = if top <= MAX_SIEVE && bound.saturating_mul(64) >= top as u128 {
        Some(PowerfreeSieve::new(top.max(1), k)?)
    } else {
        None
    };
    let test = |n: u64| match &sieve {
        Some(sv) => sv.is_powerfree(n),
        None => is_kth_powerfree(n, k),
    };
    let check = |n: u64| match paired_base {
        Some(b) => test(n) && test(reverse(n as u128, b) as u64),
        None => test(n),
    };

    const BATCH: usize = 1 << 16;
    let mut raw = 0u64;
    let mut hits = 0u64;
    let mut buf = Vec::with_capacity(BATCH);
    let mut flush = |buf: &mut Vec<u64>| {
        raw += buf.len() as u64;
        hits += buf.par_iter().filter(|&&n| check(n)).count() as u64;
        buf.clear();
    };
    for n in enumerate_set(s, x)?.filter(|&n| n > 0) {
        buf.push(n);
        if buf.len() == BATCH {
            flush(&mut buf);
        }
    }
    flush(&mut buf);

    let density = predicted_density(k, local_modulus(s), paired_base.is_some())?;
    let predicted = raw as f64 * density.value;
    let relative_error = if predicted > 0.0 {
        (hits as f64 - predicted).abs() / predicted
    } else {
        f64::NAN
    };
    Ok(CountReport {
        descriptor: s.clone(),
        x,
        k,
        raw_count: raw,
        powerfree_count: hits,
        density,
        predicted,
        relative_error,
        method: if sieve.is_some() {
            CountMethod::Sieve
        } else {
            CountMethod::TrialDivision
        },
    })
}
