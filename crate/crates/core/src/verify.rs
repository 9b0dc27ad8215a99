//! The acceptance suite: eleven self-checking experiments over seeded random
//! families. Each returns a [`CriterionOutcome`]; a failed check carries the
//! first offending instance in `detail`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversary::{adversarial_gamma, no_multiples_check, reduce_to_a, residue_reduce};
use crate::approx::{oracle_min, pigeonhole_witness, residue_min};
use crate::config::Limits;
use crate::constants::{compute_constants, explicit_bound_with};
use crate::diffsets::{db_difference_cap, m_plus_db, positive_differences, Variant};
use crate::digitsets::{contains_db, enum_abkt, enum_set, h_case_formula, t_of, Base, SetSpec};
use crate::discrepancy::erdos_turan_many;
use crate::error::{Error, Result};
use crate::exact::{cos_bound_margin, lt_three_sqrt, named_constant, Rational, RealValue};
use crate::expsum::{classify_g, decay_check, eval_expsum, hypothesis_check, small_shift_count};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Problem sizes: `Full` matches the published acceptance sizes, `Quick`
/// shrinks every family for smoke runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Full,
    Quick,
}

impl Scale {
    fn pick(self, full: u64, quick: u64) -> u64 {
        match self {
            Scale::Full => full,
            Scale::Quick => quick,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub detail: String,
}

pub const NAMES: [&str; 11] = [
    "pigeonhole guarantee",
    "adversarial certificate",
    "product identity and quadratic bound",
    "G_b class step",
    "small shifts and decay bound",
    "Erdos-Turan inequality",
    "difference-set cap",
    "residue reduction suite",
    "cosine inequality",
    "oracle equivalence",
    "explicit bound is vacuous at desk scale",
];

fn base(b: u64) -> Base {
    Base::new(b).expect("b >= 2")
}

fn rng(seed: u64, id: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_rational(r: &mut ChaCha8Rng, max_den: u64) -> Rational {
    let q = r.gen_range(1..=max_den);
    let p = r.gen_range(0..q);
    Rational::new(p, q)
}

fn fail(detail: String) -> Error {
    Error::invariant(detail)
}

/// Runs criterion `id` (1..=11).
pub fn run_criterion(id: u32, scale: Scale, seed: u64, limits: &Limits) -> CriterionOutcome {
    let res = match id {
        1 => pigeonhole(scale, seed),
        2 => certificate(scale, limits),
        3 => product_identity(scale, seed, limits),
        4 => g_classes(scale, seed),
        5 => decay(scale, seed, limits),
        6 => erdos_turan(scale, seed),
        7 => difference_cap(scale, limits),
        8 => residues(scale, limits),
        9 => cosine(scale, seed),
        10 => oracle_equivalence(scale, seed, limits),
        11 => vacuous(),
        _ => Err(Error::domain(format!("no criterion {id}"))),
    };
    let name = NAMES.get(id as usize - 1).copied().unwrap_or("unknown");
    match res {
        Ok((checked, detail)) => CriterionOutcome {
            id,
            name,
            passed: true,
            checked,
            detail,
        },
        Err(e) => CriterionOutcome {
            id,
            name,
            passed: false,
            checked: 0,
            detail: e.to_string(),
        },
    }
}

pub fn run_all(scale: Scale, seed: u64, limits: &Limits) -> Vec<CriterionOutcome> {
    (1..=11).map(|i| run_criterion(i, scale, seed, limits)).collect()
}

type Outcome = Result<(u64, String)>;

fn pigeonhole(scale: Scale, seed: u64) -> Outcome {
    let mut r = rng(seed, 1);
    let gammas = scale.pick(200, 20);
    let ns: &[u128] = &[1_000, 10_000, 100_000, 1_000_000];
    let mut checked = 0;
    for _ in 0..gammas {
        let g = random_rational(&mut r, 1_000_000);
        let gv = RealValue::exact(g.clone());
        for b in [2, 3, 5, 10] {
            for &n in ns {
                let res = pigeonhole_witness(&gv, base(b), n)?;
                let w = res.witness;
                let t = t_of(base(b), n)?;
                let dist = g.mul_int(&BigInt::from(w)).dist_to_nearest_int();
                let ok = w >= 1
                    && w <= n
                    && contains_db(base(b), w)?
                    && dist <= Rational::new(1, t as u128 + 1);
                if !ok {
                    return Err(fail(format!(
                        "gamma={g}, b={b}, N={n}: witness {w} with distance {dist}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok((checked, format!("{gammas} gammas x 4 bases x 4 limits")))
}

fn certificate(scale: Scale, limits: &Limits) -> Outcome {
    let ns: &[u128] = match scale {
        Scale::Full => &[1, 2, 7, 100, 1 << 10, 1 << 14],
        Scale::Quick => &[1, 2, 7, 100],
    };
    let mut checked = 0;
    let mut worst: Option<(f64, u64, u128)> = None;
    for b in 2..=10 {
        for &n in ns {
            let c = adversarial_gamma(base(b), n, limits)?;
            if !c.passed || c.min_distance < *c.lower_bound.mid() {
                return Err(fail(format!(
                    "b={b}, N={n}: min distance {} below {}",
                    c.min_distance, c.lower_bound
                )));
            }
            // cross-check against the plain minimum over D_b up to b_N
            if n <= 1 << 10 {
                let top = crate::digitsets::unrank_db(base(b), n)?;
                let o = oracle_min(&RealValue::exact(c.gamma_n.clone()), &SetSpec::db(base(b)), top, limits)?;
                if o.distance.as_exact() != Some(&c.min_distance) {
                    return Err(fail(format!(
                        "b={b}, N={n}: certificate minimum {} but oracle {}",
                        c.min_distance, o.distance
                    )));
                }
            }
            let ratio = c.min_distance.to_f64() / c.lower_bound.to_f64();
            if worst.map_or(true, |w| ratio < w.0) {
                worst = Some((ratio, b, n));
            }
            checked += 1;
        }
    }
    let (ratio, b, n) = worst.expect("nonempty grid");
    Ok((checked, format!("tightest ratio {ratio:.3} at b={b}, N={n}")))
}

fn product_identity(scale: Scale, seed: u64, limits: &Limits) -> Outcome {
    let mut r = rng(seed, 3);
    let count = scale.pick(1000, 60);
    let max_r = scale.pick(18, 12) as u32;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let b = r.gen_range(2..=10);
        let rr = r.gen_range(0..=max_r);
        let k = r.gen_range(1..=100i64);
        let g = random_rational(&mut r, 1_000_000);
        let rep = eval_expsum(base(b), rr, k, &RealValue::exact(g.clone()), false, limits)?;
        let (mag, prod) = (rep.magnitude_f64(), rep.product_f64());
        let gap = (mag - prod).abs();
        let scale_ = mag.max(prod).max(1.0);
        worst = worst.max(gap / scale_);
        if gap > 1e-9 * scale_ {
            return Err(fail(format!(
                "b={b}, r={rr}, k={k}, gamma={g}: |sum| = {mag}, product = {prod}"
            )));
        }
        if mag > rep.bound_f64() + 1e-9 {
            return Err(fail(format!(
                "b={b}, r={rr}, k={k}, gamma={g}: |sum| = {mag} above {}",
                rep.bound_f64()
            )));
        }
    }
    Ok((count, format!("max relative gap {worst:.2e}")))
}

fn g_classes(scale: Scale, seed: u64) -> Outcome {
    let mut r = rng(seed, 4);
    let target = scale.pick(100_000, 5_000);
    let mut found = 0u64;
    let mut tried = 0u64;
    while found < target {
        tried += 1;
        if tried > 100 * target {
            return Err(fail(format!("generator found only {found} inputs with t >= 2")));
        }
        let b = [2u64, 3, 5][r.gen_range(0..3)];
        let q = r.gen_range(1..=1_000_000_000i64);
        let y = Rational::new(r.gen_range(-3 * q..=3 * q), q);
        let Some(t) = classify_g(base(b), &RealValue::exact(y.clone()))?.t else {
            continue;
        };
        if t < 2 {
            continue;
        }
        let by = y.mul_int(&BigInt::from(b));
        let next = classify_g(base(b), &RealValue::exact(by))?.t;
        if next != Some(t - 1) {
            return Err(fail(format!("b={b}, y={y}: class {t}, b y has class {next:?}")));
        }
        found += 1;
    }
    Ok((found, format!("{tried} draws")))
}

fn decay(scale: Scale, seed: u64, limits: &Limits) -> Outcome {
    let mut r = rng(seed, 5);
    let need = scale.pick(100, 10);
    let max_r = scale.pick(20, 12) as u32;
    let attempts = 200 * need;
    let mut found = 0u64;
    let mut max_r_seen = 0;
    for _ in 0..attempts {
        if found >= need {
            break;
        }
        let b = [2u64, 3, 5][r.gen_range(0..3)];
        let bb = base(b);
        let rr = r.gen_range(0..=max_r);
        let m = r.gen_range(1..=3u32);
        let k = r.gen_range(1..=64i64);
        let den = if r.gen_bool(0.5) {
            bb.pow(rr + 2)? + 1
        } else {
            bb.pow(rr + 2)? - 1
        };
        let a = r.gen_range(1..den);
        let g = RealValue::exact(Rational::new(a, den));
        let beta = bb.pow(m).map(|p| Rational::new(1, 2 * p))?;
        if !hypothesis_check(bb, rr, &beta, &g, limits)?.holds {
            continue;
        }
        let s = small_shift_count(bb, rr, k, &g, &beta, limits)?;
        if !lt_three_sqrt(s.g, k as u64) {
            return Err(fail(format!("b={b}, r={rr}, k={k}, gamma={g}: g = {}", s.g)));
        }
        let rep = decay_check(bb, rr, k, m, &g, limits)?;
        let bound = rep.decay_bound.as_ref().expect("set by decay_check").to_f64();
        let v = rep.v_set.as_ref().expect("set by decay_check").len() as f64;
        if rep.magnitude_f64() > bound + 1e-9 || v < rr as f64 - 3.0 * (k as f64).sqrt() + 1.0 {
            return Err(fail(format!(
                "b={b}, r={rr}, k={k}, m={m}, gamma={g}: |sum| = {}, bound {bound}, #V = {v}",
                rep.magnitude_f64()
            )));
        }
        max_r_seen = max_r_seen.max(rr);
        found += 1;
    }
    if found < need {
        return Err(fail(format!(
            "generator produced {found} hypothesis-satisfying instances, needed {need}"
        )));
    }
    Ok((found, format!("largest r among satisfying instances: {max_r_seen}")))
}

fn erdos_turan(scale: Scale, seed: u64) -> Outcome {
    let mut r = rng(seed, 6);
    let count = scale.pick(100, 10);
    let max_t = scale.pick(2000, 300);
    let consts = ["sqrt2", "pi", "e"];
    let mut min_slack = f64::INFINITY;
    for i in 0..count {
        let t = r.gen_range(1..=max_t);
        let gamma = if i % 2 == 0 {
            RealValue::exact(random_rational(&mut r, 100_000))
        } else {
            let c = named_constant(consts[r.gen_range(0..3)], 128)?;
            RealValue::Approx(c).mul_rational(&random_rational(&mut r, 1000))
        };
        let points: Vec<RealValue> = (1..=t).map(|n| gamma.mul_int(&BigInt::from(n))).collect();
        for rep in erdos_turan_many(&points, &[1, 5, 50])? {
            let slack = rep.slack.as_ref().expect("set by the check").to_f64();
            min_slack = min_slack.min(slack);
        }
    }
    Ok((3 * count, format!("smallest slack {min_slack:.4}")))
}

fn difference_cap(scale: Scale, limits: &Limits) -> Outcome {
    let max_n = scale.pick(150, 40) as u128;
    let mut checked = 0;
    for b in [3, 4, 5] {
        for n in 1..=max_n {
            let m1 = m_plus_db(base(b), n, Variant::M1, limits)?;
            let m2 = m_plus_db(base(b), n, Variant::M2, limits)?;
            let cap = db_difference_cap(base(b), n);
            if m1.value as u64 > cap || m2.value > m1.value {
                return Err(fail(format!(
                    "b={b}, N={n}: M1+ = {}, M2+ = {}, cap {cap}",
                    m1.value, m2.value
                )));
            }
            for rep in [&m1, &m2] {
                let j: BTreeSet<i64> = rep.witness.iter().copied().collect();
                for d in positive_differences(&j) {
                    if d as u128 > n || !contains_db(base(b), d as u128)? {
                        return Err(fail(format!("b={b}, N={n}: witness {:?} has difference {d}", rep.witness)));
                    }
                }
            }
            checked += 1;
        }
    }
    let m = m_plus_db(base(3), 13, Variant::M1, limits)?;
    if m.value != 4 {
        return Err(fail(format!("b=3, N=13: M1+ = {}, expected 4", m.value)));
    }
    Ok((checked, format!("b=3, N=13: M1+ = 4 with witness {:?}", m.witness)))
}

/// Multisets of size `t` from `0..=e_max`, ascending.
fn multisets(t: u32, e_max: u32) -> Vec<Vec<u32>> {
    fn rec(t: u32, from: u32, e_max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == t as usize {
            out.push(cur.clone());
            return;
        }
        for u in from..=e_max {
            cur.push(u);
            rec(t, u, e_max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, 0, e_max, &mut Vec::new(), &mut out);
    out
}

/// Digit vectors of length `k` with entry sum in `1..=max_sum`.
fn vectors(k: usize, max_sum: u64) -> Vec<Vec<u64>> {
    fn rec(k: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            if cur.iter().any(|&x| x > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(k, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, max_sum, &mut Vec::new(), &mut out);
    out
}

fn residues(scale: Scale, limits: &Limits) -> Outcome {
    let max_e = scale.pick(6, 4) as u32;
    let max_sum = scale.pick(12, 8);
    let mut checked = 0u64;
    for b in [2u64, 3, 5] {
        let bb = base(b);
        // carry procedure on every small digit vector
        for k in 1..=4usize {
            let m = BigUint::from(bb.pow(k as u32)? - 1);
            let value = |v: &[u64]| -> BigUint {
                v.iter()
                    .rev()
                    .fold(BigUint::from(0u32), |acc, &d| acc * b + d)
            };
            for u in vectors(k, max_sum) {
                let red = residue_reduce(bb, &u)?;
                let (su, sv): (u64, u64) = (u.iter().sum(), red.v.iter().sum());
                let ok = red.v.iter().all(|&d| d < b)
                    && value(&u) % &m == value(&red.v) % &m
                    && sv > 0
                    && sv <= su;
                if !ok {
                    return Err(fail(format!("b={b}, u={u:?} reduced to {:?}", red.v)));
                }
                checked += 1;
            }
        }
        for t in 1..=4u32 {
            for e_max in 0..=max_e {
                for k in 1..=6u32 {
                    let m = bb.pow(k)? - 1;
                    for ex in multisets(t, e_max) {
                        let red = reduce_to_a(bb, k, &ex)?;
                        let w: BigUint = ex.iter().map(|&u| BigUint::from(b).pow(u)).sum();
                        let digit_sum: u64 = red.digits.iter().sum();
                        if w % m != BigUint::from(red.c_w % m) || digit_sum > t as u64 || red.c_w >= bb.pow(k)? {
                            return Err(fail(format!("b={b}, k={k}, exponents {ex:?}: c_w = {}", red.c_w)));
                        }
                        checked += 1;
                    }
                    if (k as u64) * (b - 1) > t as u64 {
                        let nm = no_multiples_check(bb, k, t, e_max, limits)?;
                        if !nm.holds {
                            return Err(fail(format!("b={b}, k={k}, t={t}: multiple {:?}", nm.counterexample)));
                        }
                        let a = enum_abkt(bb, k, t as u64, limits)?;
                        let top = bb.pow(k)? - 2;
                        let inside = a.elements.iter().all(|&x| (1..=top).contains(&x));
                        let formula = h_case_formula(bb, k, t as u64)?;
                        if !inside || formula != Some(a.h) {
                            return Err(fail(format!(
                                "b={b}, k={k}, t={t}: h = {}, formula {formula:?}, inside = {inside}",
                                a.h
                            )));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok((checked, "carry, fold, no-multiple and h checks".into()))
}

fn cosine(scale: Scale, seed: u64) -> Outcome {
    let grid = scale.pick(400_000, 20_000) as i64;
    let randoms = scale.pick(10_000, 1_000);
    let mut r = rng(seed, 9);
    let mut worst = f64::INFINITY;
    let mut check = |x: Rational| -> Result<()> {
        let m = cos_bound_margin(&RealValue::exact(x.clone()))?;
        let lo = m.lo().to_f64();
        worst = worst.min(lo);
        if lo < -1e-12 {
            return Err(fail(format!("margin {m} at x = {x}")));
        }
        Ok(())
    };
    for i in 0..=grid {
        check(Rational::new(-2 * grid + 4 * i, grid))?;
    }
    for _ in 0..randoms {
        let q = r.gen_range(1..=1_000_000i64);
        check(Rational::new(r.gen_range(-2 * q..=2 * q), q))?;
    }
    Ok((grid as u64 + 1 + randoms, format!("smallest margin lower end {worst:.3e}")))
}

fn oracle_equivalence(scale: Scale, seed: u64, limits: &Limits) -> Outcome {
    let mut r = rng(seed, 10);
    let gammas = scale.pick(50, 8);
    let mut checked = 0;
    for _ in 0..gammas {
        let g = random_rational(&mut r, 1_000_000);
        let gv = RealValue::exact(g.clone());
        for b in 2..=5 {
            let n = r.gen_range(1..=10_000u128);
            let o = oracle_min(&gv, &SetSpec::db(base(b)), n, limits)?;
            let fast = residue_min(&g, base(b), n, limits)?;
            // plain sequential scan, ties to the smallest element
            let mut best: Option<(Rational, u128)> = None;
            for x in enum_set(&SetSpec::db(base(b)), Some(n), limits)? {
                let d = g.mul_int(&BigInt::from(x)).dist_to_nearest_int();
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, x));
                }
            }
            let (bd, bx) = best.expect("1 is in D_b");
            let same = o.witness == bx
                && fast.witness == bx
                && o.distance.as_exact() == Some(&bd)
                && fast.distance.as_exact() == Some(&bd);
            if !same {
                return Err(fail(format!(
                    "gamma={g}, b={b}, N={n}: oracle ({}, {}), residue ({}, {}), scan ({bx}, {bd})",
                    o.witness, o.distance, fast.witness, fast.distance
                )));
            }
            checked += 1;
        }
    }
    Ok((checked, "oracle, residue path and plain scan agree".into()))
}

fn vacuous() -> Outcome {
    // t(b, N) and hence the bound are monotone in N, so vacuity at the
    // largest u128 covers every enumerable N.
    let top = BigUint::from(u128::MAX);
    let mut details = Vec::new();
    for b in 2..=10 {
        let consts = compute_constants(base(b))?;
        let e = explicit_bound_with(&consts, &top)?;
        if !e.vacuous {
            return Err(fail(format!("b={b}: explicit bound is informative at N = 2^128 - 1")));
        }
        if b == 2 || b == 10 {
            details.push(format!("J_{b} = {:.1}", consts.j_b.to_f64()));
        }
    }
    Ok((9, format!("vacuous for b in 2..=10 up to N = 2^128 - 1 ({})", details.join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let lim = Limits::default();
        for id in [1, 2, 4, 7, 8, 9, 10, 11] {
            let o = run_criterion(id, Scale::Quick, DEFAULT_SEED, &lim);
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(2, 2).len(), 6);
        assert_eq!(vectors(2, 2).len(), 5);
    }
}
