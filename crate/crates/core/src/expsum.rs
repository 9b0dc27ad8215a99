//! Digit-restricted exponential sums `sum_{j in D_b(r)} e(k j gamma)`.
//!
//! The sum factors as `prod_{d=0}^{r} (1 + e(k b^d gamma))`, so its modulus
//! is `2^{r+1} prod |cos(pi k b^d gamma)|`. The report carries the direct
//! sum, the factored magnitude and the quadratic upper bound
//! `2^{r+1} prod (1 - pi ||k b^d gamma||^2)` side by side.
//!
//! Terms are evaluated from the reduced phase `frac(k j gamma)`. For exact
//! `gamma = p/q` with `q < 2^64` the phase is an integer residue mod `q`;
//! otherwise it is accumulated in floating point from the reduced shifts.
//! Every float quantity carries an a-priori error radius.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Limits;
use crate::digitsets::{enum_set, Base, SetKind, SetSpec};
use crate::error::{Error, Result};
use crate::exact::{lt_three_sqrt, round_down, round_up, ModularGamma, Rational, RealValue};

const EPS: f64 = f64::EPSILON;
const LOW_BITS: u32 = 12;

#[derive(Clone, Debug, Serialize)]
pub struct Complex {
    pub re: RealValue,
    pub im: RealValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumReport {
    pub b: Base,
    pub r: u32,
    pub k: i64,
    pub gamma: RealValue,
    pub exclude_zero: bool,
    pub value: Complex,
    pub magnitude: RealValue,
    /// `2^{r+1} prod |cos(pi k b^d gamma)|`, the modulus of the full sum.
    pub product_magnitude: RealValue,
    /// Upper bound for the full sum, rounded upward.
    pub quadratic_bound: RealValue,
    pub decay_bound: Option<RealValue>,
    pub hypothesis_beta: Option<Rational>,
    #[serde(rename = "V_set")]
    pub v_set: Option<Vec<u32>>,
    /// `| |value| - product_magnitude |`; only meaningful for the full sum.
    pub identity_gap: f64,
    pub identity_holds: Option<bool>,
    pub bound_holds: bool,
}

impl ExpSumReport {
    pub fn magnitude_f64(&self) -> f64 {
        self.magnitude.to_f64()
    }

    pub fn product_f64(&self) -> f64 {
        self.product_magnitude.to_f64()
    }

    pub fn bound_f64(&self) -> f64 {
        self.quadratic_bound.to_f64()
    }
}

/// Per-shift data: `theta_d = frac(k b^d gamma)` and its distance to the
/// nearest integer, both as floats with an absolute error radius.
struct Shift {
    dist: f64,
    dist_err: f64,
}

enum Phases {
    /// Phase of `b^d` is `w[d] / q`.
    Modular { q: u128, w: Vec<u128> },
    /// Phase of `b^d` is `theta[d]`, each in `[0, 1)`.
    Float { theta: Vec<f64> },
}

fn check_r(r: u32, limits: &Limits) -> Result<()> {
    if r > limits.max_expsum_r {
        return Err(Error::limit("exponential sum length r", r, limits.max_expsum_r));
    }
    Ok(())
}

fn big_pow(b: Base, d: u32) -> BigInt {
    num_traits::pow(BigInt::from(b.get()), d as usize)
}

/// `k b^d gamma` for every `d <= r`.
fn shifted(b: Base, r: u32, k: i64, gamma: &RealValue) -> Vec<RealValue> {
    (0..=r)
        .map(|d| gamma.mul_int(&(big_pow(b, d) * BigInt::from(k))))
        .collect()
}

fn shift_data(shifts: &[RealValue]) -> Vec<Shift> {
    shifts
        .iter()
        .map(|x| {
            let dist = x.mid().dist_to_nearest_int();
            let rad = x.radius();
            let dist_err = if rad.is_zero() {
                0.0
            } else {
                round_up(rad.to_f64_up(), 1.0)
            };
            Shift {
                dist: dist.to_f64(),
                dist_err: dist_err + EPS,
            }
        })
        .collect()
}

fn phases(b: Base, r: u32, k: i64, gamma: &RealValue, shifts: &[RealValue]) -> Phases {
    if let Some(mg) = gamma.as_exact().and_then(ModularGamma::new) {
        let q = mg.denom();
        let kq = BigInt::from(k).mod_floor_u128(q);
        let bq = b.as_u128() % q;
        let mut pow = 1 % q;
        let mut w = Vec::with_capacity(r as usize + 1);
        for _ in 0..=r {
            // (k b^d mod q) * p mod q
            w.push(mg.residue(kq * pow % q));
            pow = pow * bq % q;
        }
        return Phases::Modular { q, w };
    }
    let theta = shifts.iter().map(|x| x.mid().frac().to_f64()).collect();
    Phases::Float { theta }
}

trait ModFloorU128 {
    fn mod_floor_u128(&self, q: u128) -> u128;
}

impl ModFloorU128 for BigInt {
    fn mod_floor_u128(&self, q: u128) -> u128 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(q)).to_u128().expect("residue below q")
    }
}

/// `e(phi)` for `phi` given in `[0, 1)`; the argument is first moved to
/// `[-1/2, 1/2]` so the angle stays below `pi`.
fn unit(phi: f64) -> (f64, f64) {
    let phi = if phi > 0.5 { phi - 1.0 } else { phi };
    let (s, c) = (TAU * phi).sin_cos();
    (c, s)
}

fn pairwise(v: &[(f64, f64)]) -> (f64, f64) {
    if v.len() <= 8 {
        return v.iter().fold((0.0, 0.0), |a, t| (a.0 + t.0, a.1 + t.1));
    }
    let (l, r) = v.split_at(v.len() / 2);
    let a = pairwise(l);
    let c = pairwise(r);
    (a.0 + c.0, a.1 + c.1)
}

/// Sum of `e(phase(j))` over `j` in `0..2^{r+1}` (bit index of `D_b(r)`),
/// optionally skipping `j = 0`. Chunk order and tree shape are fixed, so the
/// result does not depend on the thread count.
fn direct_sum(ph: &Phases, r: u32, exclude_zero: bool) -> (f64, f64) {
    let bits = r + 1;
    let low = bits.min(LOW_BITS);
    let chunks: u64 = 1 << (bits - low);
    let lsize = 1usize << low;
    let per_chunk = |c: u64| -> (f64, f64) {
        let skip = usize::from(exclude_zero && c == 0);
        let terms: Vec<(f64, f64)> = match ph {
            Phases::Modular { q, w } => {
                let q = *q;
                let mut high = 0u128;
                for (i, wd) in w[low as usize..].iter().enumerate() {
                    if c >> i & 1 == 1 {
                        high = (high + wd) % q;
                    }
                }
                let mut table = vec![0u128; lsize];
                for j in 1..lsize {
                    let d = j.trailing_zeros() as usize;
                    table[j] = (table[j & (j - 1)] + w[d]) % q;
                }
                let qf = q as f64;
                table[skip..]
                    .iter()
                    .map(|&t| unit(((high + t) % q) as f64 / qf))
                    .collect()
            }
            Phases::Float { theta } => {
                let mut high = 0.0f64;
                for (i, t) in theta[low as usize..].iter().enumerate() {
                    if c >> i & 1 == 1 {
                        high = (high + t).fract();
                    }
                }
                let mut table = vec![0.0f64; lsize];
                for j in 1..lsize {
                    let d = j.trailing_zeros() as usize;
                    table[j] = (table[j & (j - 1)] + theta[d]).fract();
                }
                table[skip..]
                    .iter()
                    .map(|&t| unit((high + t).fract()))
                    .collect()
            }
        };
        pairwise(&terms)
    };
    let partial: Vec<(f64, f64)> = (0..chunks).into_par_iter().map(per_chunk).collect();
    pairwise(&partial)
}

/// Per-term error in each coordinate, capped at 2.
fn term_error(ph: &Phases, r: u32, k: i64, b: Base, gamma: &RealValue) -> f64 {
    let phase_err = match ph {
        Phases::Modular { .. } => 4.0 * EPS,
        Phases::Float { .. } => {
            let n = (r + 2) as f64;
            n * n * EPS
        }
    };
    let rad = gamma.radius();
    let ball = if rad.is_zero() {
        0.0
    } else {
        // |k| * max j, with max j = sum_{d<=r} b^d
        let jmax: BigInt = (0..=r).map(|d| big_pow(b, d)).sum();
        let spread = rad.mul_int(&(jmax * BigInt::from(k).abs()));
        spread.to_f64_up()
    };
    let e = TAU * (phase_err + ball) * (1.0 + 4.0 * EPS) + 2.0 * EPS;
    e.min(2.0)
}

fn factored(shifts: &[Shift], r: u32) -> Result<(RealValue, RealValue)> {
    let scale = 2f64.powi(r as i32 + 1);
    let mut prod = 1.0f64;
    let mut err = 0.0f64;
    let mut bound = 1.0f64;
    for s in shifts {
        prod *= (PI * s.dist).cos().abs().min(1.0);
        err += (PI * s.dist_err + 2.0 * EPS).min(1.0);
        let lo = round_down(s.dist, 1.0) - s.dist_err;
        let lo = lo.max(0.0);
        let sq = round_down(PI * lo * lo, 4.0);
        if sq > 0.0 {
            bound = round_up(bound * round_up(1.0 - sq, 1.0), 1.0);
        }
    }
    err += (r as f64 + 2.0) * EPS;
    let product = RealValue::from_f64(prod * scale, round_up(err * scale, 2.0))?;
    let bound = RealValue::from_f64(bound * scale, 0.0)?;
    Ok((product, bound))
}

/// Direct evaluation of `sum_{j in D_b(r)} e(k j gamma)` with its factored
/// magnitude and quadratic upper bound.
pub fn eval_expsum(
    b: Base,
    r: u32,
    k: i64,
    gamma: &RealValue,
    exclude_zero: bool,
    limits: &Limits,
) -> Result<ExpSumReport> {
    check_r(r, limits)?;
    let shifts = shifted(b, r, k, gamma);
    let ph = phases(b, r, k, gamma, &shifts);
    let (re, im) = direct_sum(&ph, r, exclude_zero);

    let n = 2f64.powi(r as i32 + 1);
    let log_n = (r + 2) as f64;
    let rad = n * (term_error(&ph, r, k, b, gamma) + (log_n + 8.0) * EPS);
    let rad = round_up(rad, 4.0);
    let mag = re.hypot(im);
    let mag_rad = round_up(2.0 * rad + 2.0 * EPS * mag, 2.0);

    let data = shift_data(&shifts);
    let (product_magnitude, quadratic_bound) = factored(&data, r)?;

    let magnitude = RealValue::from_f64(mag, mag_rad)?;
    let prod = product_magnitude.to_f64();
    let prod_rad = product_magnitude.radius().to_f64_up();
    let identity_gap = (mag - prod).abs();
    let identity_holds = (!exclude_zero)
        .then(|| identity_gap <= mag_rad + prod_rad + 1e-9 * mag.max(prod).max(1.0));
    let full_mag = if exclude_zero {
        (re + 1.0).hypot(im)
    } else {
        mag
    };
    let bound_holds = full_mag <= quadratic_bound.to_f64() + 1e-9;

    Ok(ExpSumReport {
        b,
        r,
        k,
        gamma: gamma.clone(),
        exclude_zero,
        value: Complex {
            re: RealValue::from_f64(re, rad)?,
            im: RealValue::from_f64(im, rad)?,
        },
        magnitude,
        product_magnitude,
        quadratic_bound,
        decay_bound: None,
        hypothesis_beta: None,
        v_set: None,
        identity_gap,
        identity_holds,
        bound_holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GClass {
    pub t: Option<u32>,
}

/// Smallest `t >= 1` with `2 b^t dist > 1`, for `0 < dist <= 1/2`.
fn class_of(b: Base, dist: &Rational) -> Option<u32> {
    if dist.is_zero() {
        return None;
    }
    let two_num = dist.numer() * 2;
    let bb = BigInt::from(b.get());
    let mut pow = bb.clone();
    let mut t = 1;
    while &two_num * &pow <= *dist.denom() {
        pow *= &bb;
        t += 1;
    }
    Some(t)
}

/// The class `t` with `1/(2b^t) < ||y|| <= 1/(2b^{t-1})`, none for integers.
pub fn classify_g(b: Base, y: &RealValue) -> Result<GClass> {
    match y {
        RealValue::Exact(v) => Ok(GClass {
            t: class_of(b, &v.dist_to_nearest_int()),
        }),
        RealValue::Approx(ball) => {
            let (lo, hi) = (ball.lo(), ball.hi());
            let undecided = || Error::indeterminate(format!("G_b class of {y}"));
            if &hi - &lo >= Rational::half() {
                return Err(undecided());
            }
            let (dl, dh) = (lo.dist_to_nearest_int(), hi.dist_to_nearest_int());
            let mut min = dl.clone().min(dh.clone());
            let mut max = dl.max(dh);
            if lo.ceil() <= hi.floor() {
                min = Rational::zero();
            }
            let half = Rational::half();
            if (&lo - &half).ceil() <= (&hi - &half).floor() {
                max = half;
            }
            let (a, c) = (class_of(b, &min), class_of(b, &max));
            if a != c {
                return Err(undecided());
            }
            Ok(GClass { t: a })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub holds: bool,
    /// Least nonzero `x` in `D_b*(r)` with `||gamma x|| <= beta`.
    pub counterexample: Option<u128>,
    pub checked: u64,
}

/// Whether `||gamma x|| > beta` for every nonzero `x` in `D_b*(r)`.
pub fn hypothesis_check(
    b: Base,
    r: u32,
    beta: &Rational,
    gamma: &RealValue,
    limits: &Limits,
) -> Result<Hypothesis> {
    if !(beta > &Rational::zero()) {
        return Err(Error::domain("beta must be positive"));
    }
    let spec = SetSpec::new(b, SetKind::DbStarR { r })?;
    let modular = gamma.as_exact().and_then(ModularGamma::new);
    let fast = modular.and_then(|mg| {
        let bn = beta.numer().to_u128()?;
        let bd = beta.denom().to_u128()?;
        Some((mg, bd, bn.checked_mul(mg.denom())?))
    });
    let mut checked = 0u64;
    for x in enum_set(&spec, None, limits)?.filter(|&x| x != 0) {
        checked += 1;
        let small = match fast {
            Some((mg, bd, rhs)) => match mg.dist_num(x).checked_mul(bd) {
                Some(lhs) => lhs <= rhs,
                None => mg.dist(x) <= *beta,
            },
            None => {
                let d = gamma.mul_int(&BigInt::from(x)).dist_to_nearest_int()?;
                d.cmp_rational(beta)? != Ordering::Greater
            }
        };
        if small {
            return Ok(Hypothesis {
                holds: false,
                counterexample: Some(x),
                checked,
            });
        }
    }
    Ok(Hypothesis {
        holds: true,
        counterexample: None,
        checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallShifts {
    pub g: u64,
    pub d_list: Vec<u32>,
    pub hypothesis: Hypothesis,
}

/// Shifts `d <= r` with `||k b^d gamma|| <= beta`.
fn small_shifts(b: Base, r: u32, k: i64, gamma: &RealValue, beta: &Rational) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (d, x) in shifted(b, r, k, gamma).iter().enumerate() {
        let dist = x.dist_to_nearest_int()?;
        if dist.cmp_rational(beta)? != Ordering::Greater {
            out.push(d as u32);
        }
    }
    Ok(out)
}

/// Counts the shifts `k b^d gamma` within `beta` of an integer. When the
/// hypothesis holds there are fewer than `3 sqrt(k)` of them.
pub fn small_shift_count(
    b: Base,
    r: u32,
    k: i64,
    gamma: &RealValue,
    beta: &Rational,
    limits: &Limits,
) -> Result<SmallShifts> {
    if k < 1 {
        return Err(Error::domain("k must be at least 1"));
    }
    let d_list = small_shifts(b, r, k, gamma, beta)?;
    let hypothesis = hypothesis_check(b, r, beta, gamma, limits)?;
    let g = d_list.len() as u64;
    if hypothesis.holds && !lt_three_sqrt(g, k as u64) {
        return Err(Error::invariant(format!(
            "b={b}, r={r}, k={k}, gamma={gamma}, beta={beta}: {g} small shifts {d_list:?}, \
             not below 3 sqrt(k)"
        )));
    }
    Ok(SmallShifts {
        g,
        d_list,
        hypothesis,
    })
}

/// `2^{r+3} (1 - pi/(4b^2))^{(r - 3 sqrt(k) + 1)/m}`, rounded upward.
pub fn decay_bound_value(b: Base, r: u32, k: i64, m: u32) -> f64 {
    let bf = b.get() as f64;
    let base = round_up(1.0 - round_down(PI / (4.0 * bf * bf), 4.0), 2.0).min(1.0);
    let three_sqrt_k = round_up(3.0 * (k as f64).sqrt(), 4.0);
    let e = round_down((r as f64 + 1.0 - three_sqrt_k) / m as f64, 4.0);
    let scale = 2f64.powi(r as i32 + 3);
    round_up(scale * base.powf(e), 64.0 + 4.0 * e.abs())
}

/// Evaluates the `j != 0` sum under the hypothesis `||gamma x|| > 1/(2b^m)`
/// on nonzero `x` in `D_b*(r)`, checking it against the geometric decay bound
/// and checking the size of `V = {d : ||k b^d gamma|| > 1/(2b^m)}`.
pub fn decay_check(
    b: Base,
    r: u32,
    k: i64,
    m: u32,
    gamma: &RealValue,
    limits: &Limits,
) -> Result<ExpSumReport> {
    if m < 1 || k < 1 {
        return Err(Error::domain("m and k must be at least 1"));
    }
    check_r(r, limits)?;
    let beta = Rational::from(big_pow(b, m) * 2).recip();
    let hyp = hypothesis_check(b, r, &beta, gamma, limits)?;
    if let Some(x) = hyp.counterexample {
        return Err(Error::HypothesisViolation {
            counterexample: x.to_string(),
            detail: format!("||gamma x|| <= {beta} for gamma = {gamma}, b = {b}, r = {r}"),
        });
    }
    let mut report = eval_expsum(b, r, k, gamma, true, limits)?;
    let small = small_shifts(b, r, k, gamma, &beta)?;
    let v_set: Vec<u32> = (0..=r).filter(|d| !small.contains(d)).collect();
    let missing = small.len() as u64;
    if !lt_three_sqrt(missing, k as u64) {
        return Err(Error::invariant(format!(
            "b={b}, r={r}, k={k}, m={m}, gamma={gamma}: #V = {} below r - 3 sqrt(k) + 1",
            v_set.len()
        )));
    }
    let bound = decay_bound_value(b, r, k, m);
    let mag = report.magnitude_f64();
    if mag > bound + 1e-9 {
        return Err(Error::invariant(format!(
            "b={b}, r={r}, k={k}, m={m}, gamma={gamma}: |sum| = {mag} exceeds {bound}"
        )));
    }
    report.decay_bound = Some(RealValue::from_f64(bound, 0.0)?);
    report.hypothesis_beta = Some(beta);
    report.v_set = Some(v_set);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RealValue {
        RealValue::exact(s.parse().unwrap())
    }

    fn b(n: u64) -> Base {
        Base::new(n).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn sum_examples() {
        let rep = eval_expsum(b(2), 0, 1, &q("1/2"), false, &lim()).unwrap();
        assert!(rep.magnitude_f64() < 1e-12);
        for (bb, r, k) in [(2, 3, 1), (3, 2, 5), (10, 4, -2)] {
            let rep = eval_expsum(b(bb), r, k, &q("0"), false, &lim()).unwrap();
            let n = 2f64.powi(r as i32 + 1);
            assert!((rep.magnitude_f64() - n).abs() < 1e-9);
            assert_eq!(rep.bound_f64(), n);
        }
        let rep = eval_expsum(b(2), 1, 1, &q("1/4"), false, &lim()).unwrap();
        assert!(rep.magnitude_f64() < 1e-12);
        assert!(rep.product_f64() < 1e-12);
    }

    #[test]
    fn identity_and_bound_over_paths() {
        let pi = RealValue::Approx(crate::exact::named_constant("pi", 128).unwrap());
        let huge = RealValue::exact(Rational::new(
            BigInt::from(7) * num_traits::pow(BigInt::from(10), 30) + 1,
            num_traits::pow(BigInt::from(10), 31),
        ));
        for g in [q("3/7"), q("22/101"), pi, huge] {
            for (bb, r, k) in [(2, 10, 1), (3, 7, 4), (5, 14, 13)] {
                let rep = eval_expsum(b(bb), r, k, &g, false, &lim()).unwrap();
                assert_eq!(rep.identity_holds, Some(true), "{g} {bb} {r} {k}");
                assert!(rep.bound_holds);
            }
        }
    }

    #[test]
    fn zero_exclusion_shifts_by_one() {
        let g = q("5/13");
        let all = eval_expsum(b(3), 6, 2, &g, false, &lim()).unwrap();
        let rest = eval_expsum(b(3), 6, 2, &g, true, &lim()).unwrap();
        assert!((all.value.re.to_f64() - 1.0 - rest.value.re.to_f64()).abs() < 1e-9);
        assert!((all.value.im.to_f64() - rest.value.im.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn term_cap() {
        let e = eval_expsum(b(2), 27, 1, &q("1/3"), false, &lim()).unwrap_err();
        assert!(matches!(e, Error::ResourceLimit { .. }));
    }

    #[test]
    fn g_classes() {
        assert_eq!(classify_g(b(2), &q("1/2")).unwrap().t, Some(1));
        assert_eq!(classify_g(b(2), &q("1/5")).unwrap().t, Some(2));
        assert_eq!(classify_g(b(3), &q("3")).unwrap().t, None);
        assert_eq!(classify_g(b(2), &q("1/4")).unwrap().t, Some(2));
        assert_eq!(classify_g(b(2), &q("-7/8")).unwrap().t, Some(3));
        let near = RealValue::from_f64(0.25, 1e-6).unwrap();
        assert!(matches!(classify_g(b(2), &near), Err(Error::Indeterminate(_))));
        let inside = RealValue::from_f64(0.2, 1e-6).unwrap();
        assert_eq!(classify_g(b(2), &inside).unwrap().t, Some(2));
    }

    #[test]
    fn hypothesis_examples() {
        let beta: Rational = "1/10".parse().unwrap();
        let h = hypothesis_check(b(2), 1, &beta, &q("1/3"), &lim()).unwrap();
        assert_eq!((h.holds, h.counterexample), (false, Some(3)));
        let h = hypothesis_check(b(2), 1, &beta, &q("1/5"), &lim()).unwrap();
        assert!(h.holds);
        let h = hypothesis_check(b(2), 3, &beta, &q("1/2"), &lim()).unwrap();
        assert_eq!(h.counterexample, Some(2));
        // 2 is not in D_b* for b > 2; b itself is the least multiple of 2 there
        let h = hypothesis_check(b(4), 3, &beta, &q("1/2"), &lim()).unwrap();
        assert_eq!(h.counterexample, Some(4));
    }

    #[test]
    fn small_shift_examples() {
        let beta: Rational = "1/10".parse().unwrap();
        let s = small_shift_count(b(2), 1, 1, &q("1/5"), &beta, &lim()).unwrap();
        assert_eq!(s.g, 0);
        let s = small_shift_count(b(3), 4, 2, &q("0"), &beta, &lim()).unwrap();
        assert_eq!((s.g, s.hypothesis.holds), (5, false));
        let s = small_shift_count(b(3), 2, 1, &q("1/27"), &beta, &lim()).unwrap();
        assert_eq!(s.d_list, vec![0]);
    }

    #[test]
    fn decay_examples() {
        let rep = decay_check(b(2), 1, 1, 2, &q("2/5"), &lim()).unwrap();
        let bound = rep.decay_bound.as_ref().unwrap().to_f64();
        assert!((bound - 16.0 * (1.0 - PI / 16.0f64).powf(-0.5)).abs() < 1e-9);
        assert!(rep.magnitude_f64() <= bound);
        assert_eq!(rep.v_set.as_deref(), Some(&[0, 1][..]));

        let e = decay_check(b(2), 1, 1, 2, &q("1/3"), &lim()).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation { ref counterexample, .. } if counterexample == "3"));

        let rep = decay_check(b(2), 0, 1, 1, &q("1/3"), &lim()).unwrap();
        assert!((rep.magnitude_f64() - 1.0).abs() < 1e-12);
        let bound = rep.decay_bound.unwrap().to_f64();
        assert!((bound - 8.0 * (1.0 - PI / 16.0f64).powi(-2)).abs() < 1e-9);
    }
}
