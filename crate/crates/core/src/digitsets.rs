//! Structured integer sets built from base-`b` digits 0 and 1.
//!
//! Elements are `u128`; every construction checks for overflow instead of
//! wrapping. Streams are lazy and ascending, and each enumeration is checked
//! against the configured cardinality cap before it starts.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Peekable;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};

/// Radix `b >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Base(u64);

impl Base {
    pub fn new(b: u64) -> Result<Base> {
        if b < 2 {
            return Err(Error::domain(format!("base must be >= 2, got {b}")));
        }
        Ok(Base(b))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_u128(self) -> u128 {
        self.0 as u128
    }

    /// `b^e`, failing on `u128` overflow.
    pub fn pow(self, e: u32) -> Result<u128> {
        self.as_u128()
            .checked_pow(e)
            .ok_or_else(|| Error::overflow(format!("{}^{e} exceeds u128", self.0)))
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Base-`b` digits, least significant first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVector {
    base: Base,
    digits: Vec<u64>,
}

impl DigitVector {
    pub fn from_value(base: Base, mut n: u128) -> DigitVector {
        let b = base.as_u128();
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % b) as u64);
            n /= b;
        }
        DigitVector { base, digits }
    }

    /// Accepts any digit list, trimming trailing zeros; rejects digits `>= b`.
    pub fn from_digits(base: Base, mut digits: Vec<u64>) -> Result<DigitVector> {
        if let Some(d) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(Error::domain(format!("digit {d} out of range for base {base}")));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitVector { base, digits })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    pub fn value(&self) -> Result<u128> {
        let b = self.base.as_u128();
        self.digits.iter().rev().try_fold(0u128, |acc, &d| {
            acc.checked_mul(b)
                .and_then(|x| x.checked_add(d as u128))
                .ok_or_else(|| Error::overflow("digit vector value exceeds u128"))
        })
    }
}

/// True iff every base-`b` digit of `n` is 0 or 1.
pub fn contains_db(b: Base, n: u128) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("membership in D_b is defined for n >= 1"));
    }
    Ok(is_01(b, n))
}

fn is_01(b: Base, mut n: u128) -> bool {
    let b = b.as_u128();
    while n > 0 {
        if n % b > 1 {
            return false;
        }
        n /= b;
    }
    true
}

/// `b_i`, the `i`-th smallest element of `D_b` (1-based): the binary digits of
/// `i` read as base-`b` digits.
pub fn unrank_db(b: Base, i: u128) -> Result<u128> {
    if i == 0 {
        return Err(Error::domain("D_b is indexed from 1"));
    }
    from_bits(b, i)
}

/// Binary digits of `bits` reinterpreted in base `b`; `from_bits(b, 0) = 0`.
pub(crate) fn from_bits(b: Base, bits: u128) -> Result<u128> {
    let mut value = 0u128;
    let mut place = 1u128;
    let mut rest = bits;
    while rest > 0 {
        if rest & 1 == 1 {
            value = value
                .checked_add(place)
                .ok_or_else(|| Error::overflow("D_b element exceeds u128"))?;
        }
        rest >>= 1;
        if rest > 0 {
            place = place
                .checked_mul(b.as_u128())
                .ok_or_else(|| Error::overflow("D_b element exceeds u128"))?;
        }
    }
    Ok(value)
}

/// Inverse of [`unrank_db`].
pub fn rank_db(b: Base, n: u128) -> Result<u128> {
    if !contains_db(b, n)? {
        return Err(Error::domain(format!("{n} is not in D_{b}")));
    }
    let bb = b.as_u128();
    let (mut rest, mut i, mut bit) = (n, 0u128, 0u32);
    while rest > 0 {
        if rest % bb == 1 {
            if bit >= 128 {
                return Err(Error::overflow("rank exceeds u128"));
            }
            i |= 1u128 << bit;
        }
        rest /= bb;
        bit += 1;
    }
    Ok(i)
}

/// `#(D_b ∩ [1, n])`.
pub fn count_db_upto(b: Base, n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let digits = DigitVector::from_value(b, n);
    // Largest 0/1-digit number <= n: copy digits from the top until the
    // first digit > 1, which becomes 1 followed by all ones.
    let mut bits = 0u128;
    let len = digits.digits().len();
    for pos in (0..len).rev() {
        let d = digits.digits()[pos];
        if d > 1 {
            bits |= (1u128 << (pos + 1)) - 1;
            break;
        }
        if d == 1 {
            bits |= 1u128 << pos;
        }
    }
    bits
}

/// `t(b, N)`: the largest `t` with `1 + b + ... + b^t <= N`.
///
/// Computed as `floor(log_b(N(b-1)+1)) - 1` by integer logarithm and checked
/// against the geometric sum directly.
pub fn t_of(b: Base, n: u128) -> Result<u64> {
    t_of_big(b, &BigUint::from(n))
}

/// [`t_of`] for arbitrarily large `N`.
pub fn t_of_big(b: Base, n: &BigUint) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::domain("t(b, N) requires N >= 1"));
    }
    let bb = BigUint::from(b.get());
    // Integer log: largest e with b^e <= N(b-1)+1.
    let target = n * (&bb - 1u32) + 1u32;
    let mut e = 0u64;
    let mut p = BigUint::one();
    while &p * &bb <= target {
        p *= &bb;
        e += 1;
    }
    let by_log = e - 1;

    let mut sum = BigUint::one();
    let mut power = BigUint::one();
    let mut t = 0u64;
    loop {
        power *= &bb;
        let next = &sum + &power;
        if &next > n {
            break;
        }
        sum = next;
        t += 1;
    }
    if t != by_log {
        return Err(Error::invariant(format!(
            "t(b={b}, N={n}): logarithm formula gives {by_log}, geometric sum gives {t}"
        )));
    }
    Ok(t)
}

/// Which set an enumeration or search ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetKind {
    /// Positive integers with base-`b` digits in {0, 1}.
    Db,
    /// `D_b(r)`: 0/1 digits at positions `0..=r`, including 0.
    DbR { r: u32 },
    /// `D_b` together with every `b^d - b^c`, `d > c`.
    DbStar,
    /// `D_b(r)` together with `b^d - b^c`, `0 <= c < d <= r`.
    DbStarR { r: u32 },
    /// Repunits `1 + b + ... + b^d` for `d <= t(b, N)`.
    P { n: u128 },
    /// Sums of exactly `t` powers `b^u`, `0 <= u <= e_max`.
    Zbt { t: u32, e_max: u32 },
    /// Values with `k` base-`b` digits and digit sum in `1..=t`.
    Abkt { k: u32, t: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetSpec {
    pub base: Base,
    #[serde(flatten)]
    pub kind: SetKind,
}

impl SetSpec {
    pub fn new(base: Base, kind: SetKind) -> Result<SetSpec> {
        match &kind {
            SetKind::Zbt { t, .. } if *t == 0 => return Err(Error::domain("Z_{b,t} needs t >= 1")),
            SetKind::Abkt { k, t } if *k == 0 || *t == 0 => {
                return Err(Error::domain("A(b,k,t) needs k, t >= 1"))
            }
            SetKind::P { n } if *n == 0 => return Err(Error::domain("P_{N,b} needs N >= 1")),
            _ => {}
        }
        Ok(SetSpec { base, kind })
    }

    pub fn db(base: Base) -> SetSpec {
        SetSpec { base, kind: SetKind::Db }
    }

    /// True iff the set is infinite and therefore needs an upper bound.
    pub fn is_infinite(&self) -> bool {
        matches!(self.kind, SetKind::Db | SetKind::DbStar)
    }

    /// Membership test, independent of the enumeration code paths.
    pub fn contains(&self, n: u128) -> Result<bool> {
        let b = self.base;
        Ok(match &self.kind {
            SetKind::Db => n >= 1 && is_01(b, n),
            SetKind::DbR { r } => is_01(b, n) && n < b.pow(r + 1).unwrap_or(u128::MAX),
            SetKind::DbStar => n >= 1 && (is_01(b, n) || power_difference(b, n).is_some()),
            SetKind::DbStarR { r } => {
                (is_01(b, n) && n < b.pow(r + 1).unwrap_or(u128::MAX))
                    || matches!(power_difference(b, n), Some((d, _)) if d <= *r)
            }
            SetKind::P { n: cap } => {
                let t = t_of(b, *cap)?;
                (0..=t).any(|d| repunit(b, d as u32).ok() == Some(n))
            }
            SetKind::Zbt { t, e_max } => {
                is_power_sum(b, n, *t as u64, *e_max)
            }
            SetKind::Abkt { k, t } => {
                let kk = b.pow(*k).unwrap_or(u128::MAX);
                let ds = DigitVector::from_value(b, n).digit_sum();
                n > 0 && n < kk && ds <= *t
            }
        })
    }
}

/// `(d, c)` with `n = b^d - b^c`, `d > c >= 0`, when such a pair exists.
pub fn power_difference(b: Base, n: u128) -> Option<(u32, u32)> {
    if n == 0 {
        return None;
    }
    let bb = b.as_u128();
    let (mut m, mut c) = (n, 0u32);
    while m % bb == 0 {
        m /= bb;
        c += 1;
    }
    // m must be b^e - 1 with e >= 1.
    let target = m.checked_add(1)?;
    let (mut p, mut e) = (1u128, 0u32);
    while p < target {
        p = p.checked_mul(bb)?;
        e += 1;
    }
    (p == target && e >= 1).then_some((c + e, c))
}

/// `1 + b + ... + b^d`.
pub fn repunit(b: Base, d: u32) -> Result<u128> {
    let mut s = 0u128;
    for j in 0..=d {
        s = s
            .checked_add(b.pow(j)?)
            .ok_or_else(|| Error::overflow("repunit exceeds u128"))?;
    }
    Ok(s)
}

/// True iff `n` is a sum of exactly `t` powers `b^u` with `u <= e_max`.
///
/// The fewest such powers is `s = sum_{u < e_max} digit_u + floor(n / b^e_max)`.
/// Splitting one `b^u` (u >= 1) into `b` copies of `b^(u-1)` adds `b - 1`,
/// and splitting can continue down to `n` copies of `b^0`. So `n` qualifies
/// iff `s <= t <= n` and `t ≡ s (mod b-1)`.
fn is_power_sum(b: Base, n: u128, t: u64, e_max: u32) -> bool {
    if n == 0 {
        return false;
    }
    let bb = b.as_u128();
    let (mut rest, mut s) = (n, 0u128);
    for _ in 0..e_max {
        if rest == 0 {
            break;
        }
        s += rest % bb;
        rest /= bb;
    }
    s += rest;
    let t = t as u128;
    t >= s && t <= n && (t - s) % (bb - 1) == 0
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

fn check_cap(what: &str, count: u128, limits: &Limits) -> Result<()> {
    if count > limits.enumeration_cap as u128 {
        return Err(Error::limit(what, count, limits.enumeration_cap));
    }
    Ok(())
}

/// Ascending merge of two ascending streams with duplicates removed.
struct MergeDedup<A: Iterator<Item = u128>, B: Iterator<Item = u128>> {
    a: Peekable<A>,
    b: Peekable<B>,
    last: Option<u128>,
}

impl<A: Iterator<Item = u128>, B: Iterator<Item = u128>> Iterator for MergeDedup<A, B> {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        loop {
            let next = match (self.a.peek(), self.b.peek()) {
                (Some(&x), Some(&y)) if x <= y => self.a.next(),
                (Some(_), Some(_)) => self.b.next(),
                (Some(_), None) => self.a.next(),
                (None, Some(_)) => self.b.next(),
                (None, None) => return None,
            }?;
            if self.last != Some(next) {
                self.last = Some(next);
                return Some(next);
            }
        }
    }
}

fn merge<A, B>(a: A, b: B) -> MergeDedup<A::IntoIter, B::IntoIter>
where
    A: IntoIterator<Item = u128>,
    B: IntoIterator<Item = u128>,
{
    MergeDedup {
        a: a.into_iter().peekable(),
        b: b.into_iter().peekable(),
        last: None,
    }
}

/// Ascending `b^d - b^c` for `0 <= c < d <= d_max`, keeping values `<= bound`.
fn power_differences(b: Base, d_max: u32, bound: u128) -> Vec<u128> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        let Ok(bd) = b.pow(d) else { break };
        for c in 0..d {
            let v = bd - b.pow(c).expect("b^c <= b^d");
            if v <= bound {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Largest `d` with `b^d <= x` (0 when `x < b`).
fn ilog(b: Base, x: u128) -> u32 {
    let mut d = 0;
    let mut p = b.as_u128();
    while p <= x {
        d += 1;
        match p.checked_mul(b.as_u128()) {
            Some(np) => p = np,
            None => break,
        }
    }
    d
}

pub type SetStream = Box<dyn Iterator<Item = u128> + Send>;

/// Ascending stream of the set's elements, each exactly once, restricted to
/// `[0, bound]` when a bound is given. Infinite sets require a bound.
pub fn enum_set(spec: &SetSpec, bound: Option<u128>, limits: &Limits) -> Result<SetStream> {
    let b = spec.base;
    let cap_bound = bound.unwrap_or(u128::MAX);
    let stream: SetStream = match &spec.kind {
        SetKind::Db => {
            let n = bound.ok_or_else(|| Error::domain("D_b is infinite; give an upper bound"))?;
            let count = count_db_upto(b, n);
            check_cap("D_b enumeration", count, limits)?;
            Box::new((1..=count).map(move |i| from_bits(b, i).expect("below bound")))
        }
        SetKind::DbR { r } => {
            let count = 1u128
                .checked_shl(r + 1)
                .filter(|_| *r < 127)
                .ok_or_else(|| Error::limit("D_b(r) enumeration", format!("2^{}", r + 1), limits.enumeration_cap))?;
            check_cap("D_b(r) enumeration", count, limits)?;
            b.pow(*r)?;
            Box::new((0..count).map(move |i| from_bits(b, i).expect("checked")).take_while(move |&x| x <= cap_bound))
        }
        SetKind::DbStar => {
            let n = bound.ok_or_else(|| Error::domain("D_b* is infinite; give an upper bound"))?;
            let count = count_db_upto(b, n);
            check_cap("D_b* enumeration", count, limits)?;
            let diffs = power_differences(b, ilog(b, n) + 1, n);
            Box::new(merge(
                (1..=count).map(move |i| from_bits(b, i).expect("below bound")),
                diffs,
            ))
        }
        SetKind::DbStarR { r } => {
            let count = 1u128
                .checked_shl(r + 1)
                .filter(|_| *r < 127)
                .ok_or_else(|| Error::limit("D_b*(r) enumeration", format!("2^{}", r + 1), limits.enumeration_cap))?;
            check_cap("D_b*(r) enumeration", count, limits)?;
            b.pow(*r)?;
            let diffs = power_differences(b, *r, u128::MAX);
            Box::new(
                merge((0..count).map(move |i| from_bits(b, i).expect("checked")), diffs)
                    .take_while(move |&x| x <= cap_bound),
            )
        }
        SetKind::P { n } => {
            let t = t_of(b, *n)?;
            let elems = (0..=t as u32).map(|d| repunit(b, d)).collect::<Result<Vec<_>>>()?;
            Box::new(elems.into_iter().take_while(move |&x| x <= cap_bound))
        }
        SetKind::Zbt { t, e_max } => {
            let multisets = binomial(*e_max as u64 + *t as u64, *t as u64);
            check_cap("Z_{b,t} enumeration", multisets, limits)?;
            let powers = (0..=*e_max).map(|u| b.pow(u)).collect::<Result<Vec<_>>>()?;
            let mut out = BTreeSet::new();
            power_sums(&powers, *t as usize, 0, 0, &mut out)?;
            Box::new(out.into_iter().take_while(move |&x| x <= cap_bound))
        }
        SetKind::Abkt { k, t } => {
            let set = enum_abkt(b, *k, *t, limits)?;
            Box::new(set.elements.into_iter().take_while(move |&x| x <= cap_bound))
        }
    };
    Ok(stream)
}

/// Non-decreasing exponent choices so each multiset is visited once.
fn power_sums(
    powers: &[u128],
    remaining: usize,
    from: usize,
    acc: u128,
    out: &mut BTreeSet<u128>,
) -> Result<()> {
    if remaining == 0 {
        out.insert(acc);
        return Ok(());
    }
    for (i, &p) in powers.iter().enumerate().skip(from) {
        let next = acc
            .checked_add(p)
            .ok_or_else(|| Error::overflow("Z_{b,t} element exceeds u128"))?;
        power_sums(powers, remaining - 1, i, next, out)?;
    }
    Ok(())
}

/// `A(b, k, t)` and its maximum `h(b, k, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbktSet {
    pub elements: BTreeSet<u128>,
    /// Maximum of `elements`, taken directly.
    pub h: u128,
    /// The case formula for `h`, when it applies (`t < (b-1) k`, or exact
    /// divisibility at the boundary).
    pub h_formula: Option<u128>,
}

/// Every `sum a_j b^j` with digits `a_j <= b-1` and `0 < sum a_j <= t`,
/// together with `h(b,k,t)` by direct maximum and by the case formula; a
/// disagreement between the two is an invariant violation.
pub fn enum_abkt(b: Base, k: u32, t: u64, limits: &Limits) -> Result<AbktSet> {
    if k == 0 || t == 0 {
        return Err(Error::domain("A(b,k,t) needs k, t >= 1"));
    }
    b.pow(k)?;
    let count = count_digit_vectors(b, k, t);
    check_cap("A(b,k,t) enumeration", count, limits)?;

    let mut elements = BTreeSet::new();
    let mut digits = vec![0u64; k as usize];
    abkt_rec(b, &mut digits, 0, t, &mut elements)?;
    elements.remove(&0);
    let h = *elements.iter().next_back().expect("t >= 1 gives the element 1");
    let h_formula = h_case_formula(b, k, t)?;
    if let Some(f) = h_formula {
        if f != h {
            return Err(Error::invariant(format!(
                "h(b={b}, k={k}, t={t}): direct maximum {h}, case formula {f}"
            )));
        }
    }
    Ok(AbktSet {
        elements,
        h,
        h_formula,
    })
}

fn count_digit_vectors(b: Base, k: u32, t: u64) -> u128 {
    // ways[s] = number of digit prefixes with digit sum s (s <= t).
    let t = t.min((b.get() - 1) * k as u64) as usize;
    let mut ways = vec![0u128; t + 1];
    ways[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; t + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for d in 0..b.get() as usize {
                if s + d > t {
                    break;
                }
                next[s + d] = next[s + d].saturating_add(w);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &w| a.saturating_add(w))
}

fn abkt_rec(
    b: Base,
    digits: &mut [u64],
    pos: usize,
    budget: u64,
    out: &mut BTreeSet<u128>,
) -> Result<()> {
    if pos == digits.len() {
        let v = digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * b.as_u128() + d as u128);
        out.insert(v);
        return Ok(());
    }
    for d in 0..=budget.min(b.get() - 1) {
        digits[pos] = d;
        abkt_rec(b, digits, pos + 1, budget - d, out)?;
    }
    digits[pos] = 0;
    Ok(())
}

/// Closed form for `h(b,k,t) = max A(b,k,t)`: fill the top digits with
/// `b - 1` while the budget lasts, then put the remainder one place lower.
///
/// * `t < b - 1`: `h = t b^(k-1)`.
/// * `t >= b - 1`, `q = floor(t/(b-1))`:
///   `h = sum_{d<q} (b-1) b^(k-1-d) + (t - (b-1) q) b^(k-1-q)`.
///
/// Returns `None` when the formula's exponents leave the range, i.e. when
/// `q > k`, or `q = k` with a non-zero remainder.
pub fn h_case_formula(b: Base, k: u32, t: u64) -> Result<Option<u128>> {
    let bm1 = b.get() - 1;
    if t < bm1 {
        return Ok(Some((t as u128) * b.pow(k - 1)?));
    }
    let q = t / bm1;
    let rem = t - bm1 * q;
    if q > k as u64 || (q == k as u64 && rem > 0) {
        return Ok(None);
    }
    let q = q as u32;
    let mut h = 0u128;
    for d in 0..q {
        h += (bm1 as u128) * b.pow(k - 1 - d)?;
    }
    if rem > 0 {
        h += (rem as u128) * b.pow(k - 1 - q)?;
    }
    Ok(Some(h))
}

/// `b_N` as a big integer, for indices whose element exceeds `u128`.
pub fn unrank_db_big(b: Base, i: &BigUint) -> BigUint {
    let bb = BigUint::from(b.get());
    let mut value = BigUint::zero();
    let mut place = BigUint::one();
    for bit in 0..i.bits() {
        if i.bit(bit) {
            value += &place;
        }
        place *= &bb;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(b: u64) -> Base {
        Base::new(b).unwrap()
    }

    fn collect(spec: SetSpec, bound: Option<u128>) -> Vec<u128> {
        enum_set(&spec, bound, &Limits::default()).unwrap().collect()
    }

    #[test]
    fn membership_examples() {
        assert!(contains_db(base(3), 10).unwrap());
        assert!(!contains_db(base(3), 5).unwrap());
        assert!(contains_db(base(2), 1_000_003).unwrap());
        assert!(matches!(contains_db(base(3), 0), Err(Error::Domain(_))));
        assert!(Base::new(1).is_err());
    }

    #[test]
    fn unrank_rank_examples() {
        assert_eq!(unrank_db(base(7), 1).unwrap(), 1);
        assert_eq!(unrank_db(base(3), 5).unwrap(), 10);
        assert_eq!(unrank_db(base(2), 5).unwrap(), 5);
        assert_eq!(rank_db(base(3), 10).unwrap(), 5);
        assert_eq!(rank_db(base(9), 1).unwrap(), 1);
        assert_eq!(rank_db(base(2), 7).unwrap(), 7);
        assert!(matches!(unrank_db(base(3), 0), Err(Error::Domain(_))));
        assert!(matches!(rank_db(base(3), 5), Err(Error::Domain(_))));
    }

    #[test]
    fn unrank_matches_filtering() {
        for b in 2..=6 {
            let bb = base(b);
            let filtered: Vec<u128> = (1..3000u128).filter(|&n| is_01(bb, n)).collect();
            for (i, &n) in filtered.iter().enumerate() {
                assert_eq!(unrank_db(bb, i as u128 + 1).unwrap(), n);
            }
            for n in 1..3000u128 {
                assert_eq!(
                    count_db_upto(bb, n),
                    filtered.iter().filter(|&&x| x <= n).count() as u128
                );
            }
        }
    }

    #[test]
    fn t_of_examples() {
        assert_eq!(t_of(base(2), 7).unwrap(), 2);
        assert_eq!(t_of(base(3), 4).unwrap(), 1);
        assert_eq!(t_of(base(5), 1).unwrap(), 0);
        assert_eq!(t_of(base(2), 6).unwrap(), 1);
        assert!(t_of(base(2), 0).is_err());
        let big = BigUint::one() << 200usize;
        assert_eq!(t_of_big(base(2), &big).unwrap(), 199);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(collect(SetSpec::new(base(2), SetKind::DbR { r: 1 }).unwrap(), None), vec![0, 1, 2, 3]);
        assert_eq!(
            collect(SetSpec::new(base(3), SetKind::DbStarR { r: 1 }).unwrap(), None),
            vec![0, 1, 2, 3, 4]
        );
        assert_eq!(
            collect(SetSpec::new(base(3), SetKind::Zbt { t: 1, e_max: 2 }).unwrap(), None),
            vec![1, 3, 9]
        );
        assert_eq!(
            collect(SetSpec::db(base(3)), Some(13)),
            vec![1, 3, 4, 9, 10, 12, 13]
        );
        assert_eq!(
            collect(SetSpec::new(base(3), SetKind::DbStar).unwrap(), Some(13)),
            vec![1, 2, 3, 4, 6, 8, 9, 10, 12, 13]
        );
        assert_eq!(
            collect(SetSpec::new(base(2), SetKind::P { n: 7 }).unwrap(), None),
            vec![1, 3, 7]
        );
    }

    #[test]
    fn infinite_sets_need_bounds() {
        let r = enum_set(&SetSpec::db(base(3)), None, &Limits::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn cardinality_cap_is_enforced() {
        let limits = Limits {
            enumeration_cap: 100,
            ..Limits::default()
        };
        let r = enum_set(&SetSpec::db(base(2)), Some(1000), &limits);
        assert!(matches!(r, Err(Error::ResourceLimit { .. })));
        let r = enum_set(&SetSpec::new(base(2), SetKind::DbR { r: 10 }).unwrap(), None, &limits);
        assert!(matches!(r, Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn abkt_examples() {
        let l = Limits::default();
        let a = enum_abkt(base(3), 2, 2, &l).unwrap();
        assert_eq!(a.elements.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4, 6]);
        assert_eq!(a.h, 6);
        let a = enum_abkt(base(2), 1, 1, &l).unwrap();
        assert_eq!(a.elements.into_iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(a.h, 1);
        let a = enum_abkt(base(3), 2, 1, &l).unwrap();
        assert_eq!(a.elements.into_iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(a.h, 3);
        assert_eq!(a.h_formula, Some(3));
    }

    #[test]
    fn power_difference_detection() {
        assert_eq!(power_difference(base(3), 8), Some((2, 0)));
        assert_eq!(power_difference(base(3), 24), Some((3, 1)));
        assert_eq!(power_difference(base(3), 5), None);
        assert_eq!(power_difference(base(2), 6), Some((3, 1)));
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let l = Limits::default();
        let specs = [
            SetSpec::new(base(3), SetKind::DbR { r: 3 }).unwrap(),
            SetSpec::new(base(3), SetKind::DbStarR { r: 3 }).unwrap(),
            SetSpec::new(base(4), SetKind::DbStar).unwrap(),
            SetSpec::new(base(3), SetKind::P { n: 200 }).unwrap(),
            SetSpec::new(base(3), SetKind::Abkt { k: 3, t: 3 }).unwrap(),
            SetSpec::new(base(2), SetKind::Zbt { t: 3, e_max: 4 }).unwrap(),
            SetSpec::new(base(3), SetKind::Zbt { t: 4, e_max: 3 }).unwrap(),
        ];
        for spec in specs {
            let elems: BTreeSet<u128> = enum_set(&spec, Some(300), &l).unwrap().collect();
            for n in 0..=300u128 {
                assert_eq!(spec.contains(n).unwrap(), elems.contains(&n), "{spec:?} at {n}");
            }
        }
    }
}
