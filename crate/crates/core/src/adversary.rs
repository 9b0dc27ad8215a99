//! The lower-bound construction `gamma_N = 1/(b^k - 1)` and the residue
//! toolkit behind it.
//!
//! With `T = ceil(log2(N+1))` every `b_n`, `n <= N`, has at most `T` one
//! digits, so it is a sum of at most `T` powers of `b`. Modulo `b^k - 1` the
//! powers fold to `b^{u mod k}`, and carrying `b` units at a place into one
//! unit at the next place keeps the residue while lowering the digit sum.
//! For `k > T/(b-1)` the folded value stays strictly between 0 and
//! `b^k - 1`, so `||gamma_N b_n|| >= 1/(b^k - 1)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Limits;
use crate::digitsets::{enum_set, Base, SetKind, SetSpec};
use crate::error::{Error, Result};
use crate::exact::{round_up, Rational, RealValue};

const SHARD: u128 = 1 << 14;

#[derive(Clone, Debug, Serialize)]
pub struct AdversaryCertificate {
    pub b: Base,
    #[serde(rename = "N")]
    pub n: u128,
    #[serde(rename = "T")]
    pub t: u32,
    pub k: u32,
    #[serde(rename = "gamma_N")]
    pub gamma_n: Rational,
    pub min_distance: Rational,
    /// Index `n` of the first `b_n` attaining the minimum.
    pub min_witness_index: u128,
    /// `1/(b^k - 1)`, the bound the construction guarantees directly.
    pub sharper_bound: Rational,
    /// `b^-4 N^{-log2(b)/(b-1)}`, rounded upward.
    pub lower_bound: RealValue,
    pub passed: bool,
}

/// `ceil(log2(N + 1))`.
fn bit_length(n: u128) -> u32 {
    128 - n.leading_zeros()
}

/// `b^k - 1`, or an overflow error.
fn modulus(b: Base, k: u32) -> Result<u128> {
    Ok(b.pow(k)? - 1)
}

/// `b^-4 N^{-log2(b)/(b-1)}` in floating point, rounded upward.
pub fn construction_lower_bound(b: Base, n: u128) -> f64 {
    let bf = b.get() as f64;
    let e = round_up(bf.log2() / (bf - 1.0), 4.0);
    let v = (-e * (n as f64).ln()).exp() / bf.powi(4);
    round_up(v, 64.0 + 8.0 * e * (n as f64).ln().abs())
}

pub fn adversarial_gamma(b: Base, n: u128, limits: &Limits) -> Result<AdversaryCertificate> {
    if n < 1 {
        return Err(Error::domain("N must be at least 1"));
    }
    if n > limits.enumeration_cap as u128 {
        return Err(Error::limit("adversary certificate over D_b", n, limits.enumeration_cap));
    }
    let t = bit_length(n);
    let bm1 = (b.get() - 1) as u32;
    let k = t.div_ceil(bm1) + 1;
    let m = modulus(b, k)?;
    // place[i] = b^(i mod k) mod M; b^i for i >= k folds since b^k = 1 mod M
    let bu = b.as_u128();
    let mut place = Vec::with_capacity(t as usize);
    let mut p = 1u128;
    for i in 0..t {
        if i % k == 0 {
            p = 1;
        }
        place.push(p);
        p *= bu;
    }
    let residue = |idx: u128| -> u128 {
        let mut r = 0u128;
        let mut rest = idx;
        let mut i = 0;
        while rest > 0 {
            if rest & 1 == 1 {
                r += place[i];
            }
            rest >>= 1;
            i += 1;
        }
        r % m
    };
    let shards = n.div_ceil(SHARD);
    let (num, witness) = (0..shards)
        .into_par_iter()
        .map(|s| {
            let lo = s * SHARD + 1;
            let hi = ((s + 1) * SHARD).min(n);
            let mut best = (u128::MAX, 0u128);
            for idx in lo..=hi {
                let r = residue(idx);
                let d = r.min(m - r);
                if d < best.0 {
                    best = (d, idx);
                }
            }
            best
        })
        .min()
        .expect("N >= 1");
    let min_distance = Rational::new(num, m);
    let sharper_bound = Rational::new(1u128, m);
    let bound = construction_lower_bound(b, n);
    let bound_q = Rational::from_f64(bound).ok_or_else(|| Error::invariant("non-finite bound"))?;
    if min_distance < sharper_bound {
        return Err(Error::invariant(format!(
            "b={b}, N={n}: b_{witness} is a multiple of {m}"
        )));
    }
    let passed = min_distance >= bound_q;
    Ok(AdversaryCertificate {
        b,
        n,
        t,
        k,
        gamma_n: sharper_bound.clone(),
        min_distance,
        min_witness_index: witness,
        sharper_bound,
        lower_bound: RealValue::exact(bound_q),
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub v: Vec<u64>,
    /// Number of single carry steps, `(sum u - sum v)/(b - 1)`.
    pub steps: u128,
}

/// Carries `b` units at place `d` into one unit at place `(d+1) mod k`,
/// always at the smallest `d` with `u_d >= b`, until every digit is below
/// `b`. The residue mod `b^k - 1` is unchanged and the digit sum never
/// reaches zero.
pub fn residue_reduce(b: Base, u: &[u64]) -> Result<Reduction> {
    let k = u.len();
    if k == 0 || u.iter().all(|&x| x == 0) {
        return Err(Error::domain("digit vector must have a positive sum"));
    }
    let bb = b.get();
    let mut v = u.to_vec();
    let mut steps = 0u128;
    while let Some(d) = v.iter().position(|&x| x >= bb) {
        // repeated steps at d until it drops below b
        let q = v[d] / bb;
        v[d] -= q * bb;
        let next = (d + 1) % k;
        v[next] = v[next]
            .checked_add(q)
            .ok_or_else(|| Error::overflow("digit count exceeds u64"))?;
        steps += q as u128;
    }
    Ok(Reduction { v, steps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReduceToA {
    #[serde(serialize_with = "as_decimal")]
    pub w: BigUint,
    pub c_w: u128,
    pub digits: Vec<u64>,
    /// `c_w = b^k - 1`, i.e. `w` is a multiple of `b^k - 1`.
    pub multiple: bool,
}

/// Folds `w = sum_d b^{u_d}` to `c_w` in `A(b, k, t)` with `w = c_w` mod
/// `b^k - 1`; both facts are checked exactly.
pub fn reduce_to_a(b: Base, k: u32, exponents: &[u32]) -> Result<ReduceToA> {
    if exponents.is_empty() {
        return Err(Error::domain("need at least one exponent"));
    }
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let m = modulus(b, k)?;
    let bb = BigUint::from(b.get());
    let mut w = BigUint::zero();
    let mut counts = vec![0u64; k as usize];
    for &u in exponents {
        w += bb.pow(u);
        counts[(u % k) as usize] += 1;
    }
    let red = residue_reduce(b, &counts)?;
    let bu = b.as_u128();
    let c_w = red.v.iter().rev().fold(0u128, |acc, &d| acc * bu + d as u128);
    let t = exponents.len() as u64;
    let sum: u64 = red.v.iter().sum();
    if !(1..=t).contains(&sum) || red.v.iter().any(|&d| d >= b.get()) {
        return Err(Error::invariant(format!(
            "c_w = {c_w} has digits {:?}, not in A(b={b}, k={k}, t={t})",
            red.v
        )));
    }
    let mb = BigUint::from(m);
    if &w % &mb != BigUint::from(c_w) % &mb {
        return Err(Error::invariant(format!("{w} and {c_w} differ mod {m}")));
    }
    Ok(ReduceToA {
        w,
        c_w,
        digits: red.v,
        multiple: c_w == m,
    })
}

fn as_decimal<S: serde::Serializer>(w: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoMultiples {
    pub holds: bool,
    pub counterexample: Option<u128>,
    /// `k > t/(b-1)`, under which no multiple may exist.
    pub guaranteed: bool,
    pub checked: u64,
}

/// Whether no sum of exactly `t` powers `b^u`, `u <= e_max`, is divisible
/// by `b^k - 1`. Finding one when `k (b-1) > t` is an invariant violation.
pub fn no_multiples_check(
    b: Base,
    k: u32,
    t: u32,
    e_max: u32,
    limits: &Limits,
) -> Result<NoMultiples> {
    if k == 0 || t == 0 {
        return Err(Error::domain("k and t must be at least 1"));
    }
    let m = modulus(b, k)?;
    let guaranteed = (k as u64) * (b.get() - 1) > t as u64;
    let spec = SetSpec::new(b, SetKind::Zbt { t, e_max })?;
    let mut checked = 0u64;
    for w in enum_set(&spec, None, limits)? {
        checked += 1;
        if w % m == 0 {
            if guaranteed {
                return Err(Error::invariant(format!(
                    "{w} is a multiple of {m} = {b}^{k} - 1 with t = {t}"
                )));
            }
            return Ok(NoMultiples {
                holds: false,
                counterexample: Some(w),
                guaranteed,
                checked,
            });
        }
    }
    Ok(NoMultiples {
        holds: true,
        counterexample: None,
        guaranteed,
        checked,
    })
}

/// `||b_n / M||` numerator for a single index, via the full value.
pub fn direct_distance_num(b: Base, idx: u128, m: u128) -> Result<u128> {
    let v = crate::digitsets::unrank_db_big(b, &BigUint::from(idx));
    let r = (v % BigUint::from(m)).to_u128().expect("below modulus");
    Ok(r.min(m - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> Base {
        Base::new(n).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn certificate_examples() {
        let lim = Limits::default();
        let c = adversarial_gamma(b(3), 7, &lim).unwrap();
        assert_eq!((c.t, c.k, c.gamma_n.clone()), (3, 3, q("1/26")));
        assert_eq!((c.min_distance.clone(), c.min_witness_index), (q("1/26"), 1));
        assert!((c.lower_bound.to_f64() - 7f64.powf(-3f64.log2() / 2.0) / 81.0).abs() < 1e-12);
        assert!(c.passed);

        let c = adversarial_gamma(b(2), 7, &lim).unwrap();
        assert_eq!((c.t, c.k, c.min_distance.clone()), (3, 4, q("1/15")));
        assert!(c.passed);

        let c = adversarial_gamma(b(2), 1, &lim).unwrap();
        assert_eq!((c.t, c.k, c.min_distance.clone()), (1, 2, q("1/3")));
        assert!(c.passed);
    }

    #[test]
    fn certificate_matches_direct_residues() {
        let lim = Limits::default();
        for (bb, n) in [(2u64, 1000u128), (3, 500), (7, 300), (10, 200)] {
            let c = adversarial_gamma(b(bb), n, &lim).unwrap();
            let m = modulus(b(bb), c.k).unwrap();
            let best = (1..=n)
                .map(|i| (direct_distance_num(b(bb), i, m).unwrap(), i))
                .min()
                .unwrap();
            assert_eq!(c.min_distance, Rational::new(best.0, m));
            assert_eq!(c.min_witness_index, best.1);
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(residue_reduce(b(3), &[3, 0]).unwrap().v, vec![0, 1]);
        let r = residue_reduce(b(2), &[2, 1]).unwrap();
        assert_eq!((r.v, r.steps), (vec![1, 0], 2));
        assert_eq!(residue_reduce(b(3), &[1, 1]).unwrap().v, vec![1, 1]);
        assert!(residue_reduce(b(3), &[0, 0]).is_err());
    }

    #[test]
    fn fold_examples() {
        let r = reduce_to_a(b(3), 2, &[0, 2]).unwrap();
        assert_eq!((r.w.clone(), r.c_w, r.multiple), (BigUint::from(10u32), 2, false));
        let r = reduce_to_a(b(2), 3, &[0, 1, 2]).unwrap();
        assert_eq!((r.c_w, r.multiple), (7, true));
        let r = reduce_to_a(b(3), 2, &[5]).unwrap();
        assert_eq!((r.w, r.c_w), (BigUint::from(243u32), 3));
    }

    #[test]
    fn multiples_examples() {
        let lim = Limits::default();
        let r = no_multiples_check(b(3), 2, 2, 4, &lim).unwrap();
        assert!(r.holds && r.guaranteed);
        let r = no_multiples_check(b(2), 3, 3, 3, &lim).unwrap();
        assert_eq!((r.holds, r.counterexample, r.guaranteed), (false, Some(7), false));
        let r = no_multiples_check(b(2), 2, 1, 5, &lim).unwrap();
        assert!(r.holds);
    }
}
