//! Base-b digit manipulation and streaming enumeration of digit-defined sets.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A radix `b >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Base(u64);

impl Base {
    pub fn new(b: u64) -> Result<Base> {
        if b < 2 {
            return Err(Error::BaseTooSmall { base: b, min: 2 });
        }
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `b^e`, or `None` on overflow.
    pub fn checked_pow(self, e: u32) -> Option<u128> {
        (self.0 as u128).checked_pow(e)
    }
}

impl TryFrom<u64> for Base {
    type Error = Error;
    fn try_from(b: u64) -> Result<Base> {
        Base::new(b)
    }
}

impl From<Base> for u64 {
    fn from(b: Base) -> u64 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical digit expansion, least-significant digit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVector {
    digits: Vec<u64>,
    base: Base,
}

impl DigitVector {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> u128 {
        from_digits(&self.digits, self.base)
    }
}

pub fn to_digits(n: u128, b: Base) -> DigitVector {
    let base = b.get() as u128;
    let mut digits = Vec::new();
    let mut m = n;
    loop {
        digits.push((m % base) as u64);
        m /= base;
        if m == 0 {
            break;
        }
    }
    DigitVector { digits, base: b }
}

/// Horner evaluation of a least-significant-first digit slice. Overflow panics.
pub fn from_digits(digits: &[u64], b: Base) -> u128 {
    digits.iter().rev().fold(0u128, |acc, &d| {
        acc.checked_mul(b.get() as u128)
            .and_then(|v| v.checked_add(d as u128))
            .expect("digit expansion overflows u128")
    })
}

/// Number of base-b digits of `n` (1 for `n = 0`).
pub fn digit_count(n: u128, b: Base) -> u32 {
    let base = b.get() as u128;
    let mut m = n / base;
    let mut len = 1;
    while m > 0 {
        m /= base;
        len += 1;
    }
    len
}

/// Digit reversal of the canonical expansion; trailing zeros of `n` are lost.
pub fn reverse(n: u128, b: Base) -> u128 {
    let base = b.get() as u128;
    let mut m = n;
    let mut r = 0u128;
    while m > 0 {
        r = r * base + m % base;
        m /= base;
    }
    r
}

/// Reversal inside a fixed frame of `len` digits (leading zeros take part).
pub fn reverse_fixed(n: u128, b: Base, len: u32) -> u128 {
    let base = b.get() as u128;
    let mut m = n;
    let mut r = 0u128;
    for _ in 0..len {
        r = r * base + m % base;
        m /= base;
    }
    r
}

pub fn is_palindrome(n: u128, b: Base) -> bool {
    let d = to_digits(n, b);
    let v = d.digits();
    v.iter().eq(v.iter().rev())
}

/// Which digit-defined family a [`SetDescriptor`] describes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SetKind {
    AllIntegers,
    Palindromes { base: Base, odd_length_only: bool },
    MissingDigit { base: Base, excluded: Vec<u64> },
    ReversiblePairs { base: Base },
}

/// A digit-defined set together with its coprimality filter `gcd(n, m) = 1`.
///
/// For [`SetKind::ReversiblePairs`] both `n` and `reverse(n)` must pass the filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDescriptor {
    pub kind: SetKind,
    pub coprime_to: u64,
}

impl SetDescriptor {
    pub fn all_integers() -> Self {
        SetDescriptor {
            kind: SetKind::AllIntegers,
            coprime_to: 1,
        }
    }

    pub fn palindromes(base: Base, odd_length_only: bool) -> Self {
        SetDescriptor {
            kind: SetKind::Palindromes {
                base,
                odd_length_only,
            },
            coprime_to: 1,
        }
    }

    pub fn missing_digits(base: Base, excluded: &[u64]) -> Result<Self> {
        let mut ex = excluded.to_vec();
        ex.sort_unstable();
        ex.dedup();
        if let Some(&d) = ex.iter().find(|&&d| d >= base.get()) {
            return Err(Error::DigitOutOfRange {
                digit: d,
                base: base.get(),
            });
        }
        if ex.len() as u64 >= base.get() {
            return Err(Error::EmptyDigitSet(base.get()));
        }
        Ok(SetDescriptor {
            kind: SetKind::MissingDigit { base, excluded: ex },
            coprime_to: 1,
        })
    }

    pub fn missing_digit(base: Base, a0: u64) -> Result<Self> {
        Self::missing_digits(base, &[a0])
    }

    pub fn reversible_pairs(base: Base) -> Self {
        SetDescriptor {
            kind: SetKind::ReversiblePairs { base },
            coprime_to: 1,
        }
    }

    pub fn coprime_to(mut self, m: u64) -> Self {
        self.coprime_to = m;
        self
    }

    pub fn base(&self) -> Option<Base> {
        match &self.kind {
            SetKind::AllIntegers => None,
            SetKind::Palindromes { base, .. }
            | SetKind::MissingDigit { base, .. }
            | SetKind::ReversiblePairs { base } => Some(*base),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coprime_to == 0 {
            return Err(Error::ZeroModulus);
        }
        if let SetKind::MissingDigit { base, excluded } = &self.kind {
            if excluded.len() as u64 >= base.get() {
                return Err(Error::EmptyDigitSet(base.get()));
            }
            if let Some(&d) = excluded.iter().find(|&&d| d >= base.get()) {
                return Err(Error::DigitOutOfRange {
                    digit: d,
                    base: base.get(),
                });
            }
        }
        Ok(())
    }

    /// Membership test by definition (used as the brute-force oracle).
    pub fn contains(&self, n: u64) -> bool {
        let raw = match &self.kind {
            SetKind::AllIntegers | SetKind::ReversiblePairs { .. } => true,
            SetKind::Palindromes {
                base,
                odd_length_only,
            } => {
                is_palindrome(n as u128, *base)
                    && (!odd_length_only || digit_count(n as u128, *base) % 2 == 1)
            }
            SetKind::MissingDigit { base, excluded } => to_digits(n as u128, *base)
                .digits()
                .iter()
                .all(|d| !excluded.contains(d)),
        };
        raw && self.passes_filter(n)
    }

    fn passes_filter(&self, n: u64) -> bool {
        let m = self.coprime_to;
        if m == 1 {
            return true;
        }
        if n.gcd(&m) != 1 {
            return false;
        }
        match &self.kind {
            SetKind::ReversiblePairs { base } => (reverse(n as u128, *base) as u64).gcd(&m) == 1,
            _ => true,
        }
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SetKind::AllIntegers => write!(f, "all")?,
            SetKind::Palindromes {
                base,
                odd_length_only,
            } => write!(
                f,
                "palindromes(b={base}{})",
                if *odd_length_only { ",odd" } else { "" }
            )?,
            SetKind::MissingDigit { base, excluded } => {
                let ex: Vec<String> = excluded.iter().map(|d| d.to_string()).collect();
                write!(f, "missing(b={base},excluded={})", ex.join("+"))?
            }
            SetKind::ReversiblePairs { base } => write!(f, "reversible(b={base})")?,
        }
        if self.coprime_to != 1 {
            write!(f, ",coprime={}", self.coprime_to)?;
        }
        Ok(())
    }
}

/// Ascending stream of the members of `s` in `[0, x)`.
pub fn enumerate_set(s: &SetDescriptor, x: u64) -> Result<SetIter> {
    s.validate()?;
    if x == 0 {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    let inner = match &s.kind {
        SetKind::AllIntegers | SetKind::ReversiblePairs { .. } => Inner::Range(0..x),
        SetKind::Palindromes {
            base,
            odd_length_only,
        } => Inner::Palindromes(PalindromeGen::new(*base, *odd_length_only, x)),
        SetKind::MissingDigit { base, excluded } => {
            let allowed: Vec<u64> = (0..base.get()).filter(|d| !excluded.contains(d)).collect();
            Inner::Restricted(RestrictedGen::new(*base, allowed, x))
        }
    };
    Ok(SetIter {
        desc: s.clone(),
        inner,
    })
}

pub struct SetIter {
    desc: SetDescriptor,
    inner: Inner,
}

enum Inner {
    Range(std::ops::Range<u64>),
    Palindromes(PalindromeGen),
    Restricted(RestrictedGen),
}

impl Iterator for SetIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let n = match &mut self.inner {
                Inner::Range(r) => r.next(),
                Inner::Palindromes(g) => g.next(),
                Inner::Restricted(g) => g.next(),
            }?;
            if self.desc.passes_filter(n) {
                return Some(n);
            }
        }
    }
}

/// Palindromes by length, each length generated from its free half with an
/// odometer over the digits nearest the centre.
struct PalindromeGen {
    base: u64,
    odd_only: bool,
    limit: u64,
    len: u32,
    /// Free digits, index 0 = most significant.
    half: Vec<u64>,
    /// Weight of each free digit inside the full palindrome.
    weights: Vec<u128>,
    value: u128,
    done: bool,
}

impl PalindromeGen {
    fn new(base: Base, odd_only: bool, limit: u64) -> Self {
        let mut g = PalindromeGen {
            base: base.get(),
            odd_only,
            limit,
            len: 0,
            half: Vec::new(),
            weights: Vec::new(),
            value: 0,
            done: false,
        };
        g.start_length(1);
        g
    }

    fn start_length(&mut self, len: u32) {
        let b = self.base as u128;
        let h = len.div_ceil(2) as usize;
        let Some(top) = b.checked_pow(len - 1) else {
            self.done = true;
            return;
        };
        if top >= self.limit as u128 && len > 1 {
            self.done = true;
            return;
        }
        self.len = len;
        self.weights = (0..h)
            .map(|i| {
                let hi = len as usize - 1 - i;
                let w_hi = b.pow(hi as u32);
                if hi == i {
                    w_hi
                } else {
                    w_hi + b.pow(i as u32)
                }
            })
            .collect();
        self.half = vec![0; h];
        if len > 1 {
            self.half[0] = 1;
        }
        self.value = self
            .half
            .iter()
            .zip(&self.weights)
            .map(|(&d, &w)| d as u128 * w)
            .sum();
    }

    fn advance_length(&mut self) {
        let step = if self.odd_only { 2 } else { 1 };
        self.start_length(self.len + step);
    }

    /// Odometer step; returns false when this length is exhausted.
    fn increment(&mut self) -> bool {
        let b = self.base;
        for i in (0..self.half.len()).rev() {
            let lowest = if i == 0 && self.len > 1 { 1 } else { 0 };
            if self.half[i] + 1 < b {
                self.half[i] += 1;
                self.value += self.weights[i];
                return true;
            }
            self.value -= (self.half[i] - lowest) as u128 * self.weights[i];
            self.half[i] = lowest;
        }
        false
    }
}

impl Iterator for PalindromeGen {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let current = self.value;
        if current >= self.limit as u128 {
            self.done = true;
            return None;
        }
        if !self.increment() {
            self.advance_length();
        }
        Some(current as u64)
    }
}

/// Integers whose digits all lie in `allowed`, ascending.
struct RestrictedGen {
    base: u128,
    allowed: Vec<u64>,
    limit: u64,
    /// Indices into `allowed`, most significant first.
    idx: Vec<usize>,
    value: u128,
    done: bool,
}

impl RestrictedGen {
    fn new(base: Base, allowed: Vec<u64>, limit: u64) -> Self {
        let mut g = RestrictedGen {
            base: base.get() as u128,
            allowed,
            limit,
            idx: Vec::new(),
            value: 0,
            done: false,
        };
        g.start_length(1);
        g
    }

    fn first_index(&self, pos: usize) -> Option<usize> {
        if pos == 0 && self.idx.len() > 1 {
            self.allowed.iter().position(|&d| d != 0)
        } else {
            Some(0)
        }
    }

    fn start_length(&mut self, len: usize) {
        self.idx = vec![0; len];
        let Some(first) = self.first_index(0) else {
            self.done = true;
            return;
        };
        self.idx[0] = first;
        self.value = 0;
        for &i in &self.idx {
            match self.value.checked_mul(self.base) {
                Some(v) => self.value = v + self.allowed[i] as u128,
                None => {
                    self.done = true;
                    return;
                }
            }
        }
        if len > 1 && self.value >= self.limit as u128 {
            self.done = true;
        }
    }

    fn increment(&mut self) -> bool {
        let len = self.idx.len();
        let mut weight = 1u128;
        for pos in (0..len).rev() {
            let cur = self.idx[pos];
            if cur + 1 < self.allowed.len() {
                self.idx[pos] = cur + 1;
                self.value += (self.allowed[cur + 1] - self.allowed[cur]) as u128 * weight;
                return true;
            }
            let first = self.first_index(pos).unwrap_or(0);
            self.value -= (self.allowed[cur] - self.allowed[first]) as u128 * weight;
            self.idx[pos] = first;
            weight *= self.base;
        }
        false
    }
}

impl Iterator for RestrictedGen {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let current = self.value;
        if current >= self.limit as u128 {
            self.done = true;
            return None;
        }
        if !self.increment() {
            let len = self.idx.len() + 1;
            self.start_length(len);
        }
        Some(current as u64)
    }
}

/// Number of members of `s` in `[0, x)`.
///
/// Unfiltered families are counted by closed-form digit counting, which works
/// for any `x` representable in 128 bits. Filtered families are enumerated.
pub fn member_count(s: &SetDescriptor, x: u128) -> Result<u128> {
    s.validate()?;
    if x == 0 {
        return Ok(0);
    }
    if s.coprime_to == 1 {
        let limit = x - 1;
        return Ok(match &s.kind {
            SetKind::AllIntegers | SetKind::ReversiblePairs { .. } => x,
            SetKind::Palindromes {
                base,
                odd_length_only,
            } => palindromes_up_to(limit, *base, *odd_length_only),
            SetKind::MissingDigit { base, excluded } => restricted_up_to(limit, *base, excluded),
        });
    }
    let x64 = u64::try_from(x).map_err(|_| Error::Guard {
        what: "x for filtered enumeration",
        value: x,
        limit: u64::MAX as u128,
    })?;
    Ok(enumerate_set(s, x64)?.count() as u128)
}

/// Number of palindromes with exactly `len` digits (0 counted among the 1-digit ones).
pub fn palindromes_of_length(len: u32, b: Base) -> u128 {
    let b = b.get() as u128;
    if len == 1 {
        b
    } else {
        (b - 1) * b.pow(len.div_ceil(2) - 1)
    }
}

fn palindromes_up_to(limit: u128, b: Base, odd_only: bool) -> u128 {
    let len = digit_count(limit, b);
    let allowed_len = |l: u32| !odd_only || l % 2 == 1;
    let mut total: u128 = (1..len)
        .filter(|&l| allowed_len(l))
        .map(|l| palindromes_of_length(l, b))
        .sum();
    if allowed_len(len) {
        let digits = to_digits(limit, b);
        let h = len.div_ceil(2) as usize;
        let msd_first: Vec<u64> = digits.digits().iter().rev().copied().collect();
        let prefix = msd_first[..h]
            .iter()
            .fold(0u128, |acc, &d| acc * b.get() as u128 + d as u128);
        let lowest = if len == 1 {
            0
        } else {
            (b.get() as u128).pow(h as u32 - 1)
        };
        let mut full = msd_first[..h].to_vec();
        full.extend(msd_first[..len as usize - h].iter().rev());
        let pal = full
            .iter()
            .fold(0u128, |acc, &d| acc * b.get() as u128 + d as u128);
        total += prefix - lowest + u128::from(pal <= limit);
    }
    total
}

fn restricted_up_to(limit: u128, b: Base, excluded: &[u64]) -> u128 {
    let allowed: Vec<u64> = (0..b.get()).filter(|d| !excluded.contains(d)).collect();
    let a = allowed.len() as u128;
    let nonzero = allowed.iter().filter(|&&d| d != 0).count() as u128;
    let len = digit_count(limit, b);
    let mut total = a; // every allowed single digit, including 0
    if len == 1 {
        return allowed.iter().filter(|&&d| d as u128 <= limit).count() as u128;
    }
    for l in 2..len {
        total += nonzero * a.pow(l - 1);
    }
    let digits: Vec<u64> = to_digits(limit, b).digits().iter().rev().copied().collect();
    for (pos, &d) in digits.iter().enumerate() {
        let rest = a.pow(len - 1 - pos as u32);
        let smaller = allowed
            .iter()
            .filter(|&&c| c < d && !(pos == 0 && c == 0))
            .count() as u128;
        total += smaller * rest;
        if !allowed.contains(&d) {
            return total;
        }
    }
    total + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> Base {
        Base::new(v).unwrap()
    }

    #[test]
    fn to_digits_examples() {
        assert_eq!(to_digits(13, b(2)).digits(), &[1, 0, 1, 1]);
        assert_eq!(to_digits(0, b(7)).digits(), &[0]);
        assert_eq!(to_digits(121, b(10)).digits(), &[1, 2, 1]);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(13, b(2)), 11);
        assert_eq!(reverse(121, b(10)), 121);
        assert_eq!(reverse(10, b(10)), 1);
        assert_eq!(reverse_fixed(10, b(10), 4), 100);
    }

    #[test]
    fn palindrome_examples() {
        assert!(is_palindrome(121, b(10)));
        assert!(!is_palindrome(10, b(10)));
        for base in 2..20 {
            for n in 0..base {
                assert!(is_palindrome(n as u128, b(base)));
            }
        }
    }

    #[test]
    fn base_rejects_one() {
        assert!(Base::new(1).is_err());
        assert!(Base::new(0).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let p: Vec<u64> = enumerate_set(&SetDescriptor::palindromes(b(2), false), 16)
            .unwrap()
            .collect();
        assert_eq!(p, vec![0, 1, 3, 5, 7, 9, 15]);
        let m = SetDescriptor::missing_digit(b(10), 0).unwrap();
        assert_eq!(enumerate_set(&m, 100).unwrap().count(), 90);
        let odd = SetDescriptor::palindromes(b(10), true);
        assert_eq!(enumerate_set(&odd, 100_000).unwrap().count(), 1000);
    }

    #[test]
    fn rejects_full_exclusion() {
        assert!(matches!(
            SetDescriptor::missing_digits(b(3), &[0, 1, 2]),
            Err(Error::EmptyDigitSet(3))
        ));
        let bad = SetDescriptor {
            kind: SetKind::MissingDigit {
                base: b(2),
                excluded: vec![0, 1],
            },
            coprime_to: 1,
        };
        assert!(enumerate_set(&bad, 10).is_err());
    }

    #[test]
    fn member_count_examples() {
        for base in [2u64, 3, 7, 10] {
            for l in 1..5u32 {
                // odd-length stratum with 2l+1 digits has (b-1) b^l members
                assert_eq!(
                    palindromes_of_length(2 * l + 1, b(base)),
                    (base as u128 - 1) * (base as u128).pow(l)
                );
            }
        }
        assert_eq!(
            member_count(&SetDescriptor::all_integers(), 12345).unwrap(),
            12345
        );
        let m = SetDescriptor::missing_digit(b(10), 0).unwrap();
        assert_eq!(member_count(&m, 100).unwrap(), 90);
    }

    #[test]
    fn odd_palindrome_count_identity() {
        // x = b^(2L+1): b one-digit members plus (b-1) b^l for each l = 1..L
        for base in [2u64, 3, 5, 10, 16] {
            for big_l in 0..6u32 {
                let x = (base as u128).pow(2 * big_l + 1);
                let expected: u128 = base as u128
                    + (1..=big_l)
                        .map(|l| (base as u128 - 1) * (base as u128).pow(l))
                        .sum::<u128>();
                let s = SetDescriptor::palindromes(b(base), true);
                assert_eq!(member_count(&s, x).unwrap(), expected);
            }
        }
        // formula-only regime near 10^38
        let s = SetDescriptor::palindromes(b(10), true);
        let x = 10u128.pow(37);
        let expected: u128 = 10 + (1..=18).map(|l| 9 * 10u128.pow(l)).sum::<u128>();
        assert_eq!(member_count(&s, x).unwrap(), expected);
    }

    #[test]
    fn restricted_enumeration_with_zero_excluded_skips_zero() {
        let m = SetDescriptor::missing_digit(b(3), 0).unwrap();
        let v: Vec<u64> = enumerate_set(&m, 27).unwrap().collect();
        assert_eq!(v, vec![1, 2, 4, 5, 7, 8, 13, 14, 16, 17, 22, 23, 25, 26]);
    }

    #[test]
    fn reversible_filter_checks_both() {
        let s = SetDescriptor::reversible_pairs(b(10)).coprime_to(2);
        let v: Vec<u64> = enumerate_set(&s, 40).unwrap().collect();
        // 21 is odd but reverses to 12
        assert!(!v.contains(&21));
        assert!(v.contains(&31) && v.contains(&13));
    }
}
