//! Exact discrepancy of a finite sequence modulo one, and the Erdos-Turan
//! upper bound `T/(G+1) + C sum_{k<=G} |sum_n e(k x_n)| / k`.
//!
//! The supremum over intervals reduces to a finite family. The excess
//! `count - T len` is largest on a closed interval whose endpoints are data
//! values; the deficit `T len - count` is largest on an open interval whose
//! endpoints lie in `{0} ∪ values ∪ {1}`. One sweep over the sorted
//! distinct values with prefix counts finds both maxima.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{round_up, Rational, RealValue};

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub left: Rational,
    pub right: Rational,
    pub left_closed: bool,
    pub right_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.left) {
            Ordering::Greater => true,
            Ordering::Equal => self.left_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.right) {
            Ordering::Less => true,
            Ordering::Equal => self.right_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn len(&self) -> Rational {
        &self.right - &self.left
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "L_value")]
    pub l_value: RealValue,
    pub witness_interval: Interval,
    #[serde(rename = "G")]
    pub g: Option<u64>,
    pub et_rhs: Option<RealValue>,
    pub slack: Option<RealValue>,
}

/// Fractional parts in ascending order with multiplicities, plus the largest
/// radius among approximate inputs.
fn sorted_values(points: &[RealValue]) -> Result<(Vec<(Rational, u64)>, Rational)> {
    let mut fr = Vec::with_capacity(points.len());
    let mut rad = Rational::zero();
    for p in points {
        let f = p.frac()?;
        rad = rad.max(f.radius());
        fr.push(f);
    }
    fr.sort_by(|a, b| a.mid().cmp(b.mid()));
    let mut out: Vec<(Rational, u64)> = Vec::new();
    let mut last: Option<&RealValue> = None;
    for f in &fr {
        match last {
            Some(prev) if prev == f => out.last_mut().expect("nonempty").1 += 1,
            Some(prev) => {
                if prev.hi() >= f.lo() {
                    return Err(Error::indeterminate(format!(
                        "cannot order {prev} and {f} modulo one"
                    )));
                }
                out.push((f.mid().clone(), 1));
            }
            None => out.push((f.mid().clone(), 1)),
        }
        last = Some(f);
    }
    Ok((out, rad))
}

/// `(L, witness)` for sorted distinct values in `[0, 1)` with counts.
fn sweep(vals: &[(Rational, u64)]) -> (Rational, Interval) {
    let total: u64 = vals.iter().map(|v| v.1).sum();
    let tr = Rational::from(total as i64);

    // Excess on [v_i, v_j]: (P_j - T v_j) - (P_{i-1} - T v_i).
    // Ties prefer the smallest i, then the largest j.
    let mut best_left: Option<(Rational, usize)> = None;
    let mut excess: Option<(Rational, usize, usize)> = None;
    let mut prefix = 0u64;
    for (j, (v, c)) in vals.iter().enumerate() {
        let left_key = &tr * v - Rational::from(prefix as i64);
        if best_left.as_ref().map_or(true, |(k, _)| left_key > *k) {
            best_left = Some((left_key, j));
        }
        prefix += c;
        let (lk, i) = best_left.clone().expect("set above");
        let val = Rational::from(prefix as i64) - &tr * v + lk;
        let better = match &excess {
            None => true,
            Some((e, ei, _)) => val > *e || (val == *e && i <= *ei),
        };
        if better {
            excess = Some((val, i, j));
        }
    }
    let (ex_val, ei, ej) = excess.expect("nonempty");

    // Deficit on (a, c): (T c - #{x < c}) - (T a - #{x <= a}), a < c, with
    // a in {0} and the values, c in the values and {1}.
    let zero_count = if vals[0].0.is_zero() { vals[0].1 } else { 0 };
    let mut left = (-Rational::from(zero_count as i64), Rational::zero());
    let mut deficit: Option<(Rational, Rational, Rational)> = None;
    let mut below = 0u64;
    let rights = vals
        .iter()
        .map(|(v, c)| (v.clone(), *c))
        .chain(std::iter::once((Rational::one(), 0)));
    for (c, cnt) in rights {
        if c > left.1 {
            let val = &tr * &c - Rational::from(below as i64) - &left.0;
            if deficit.as_ref().map_or(true, |(d, _, _)| val > *d) {
                deficit = Some((val, left.1.clone(), c.clone()));
            }
        }
        below += cnt;
        let key = &tr * &c - Rational::from(below as i64);
        if key < left.0 {
            left = (key, c);
        }
    }
    let (de_val, da, dc) = deficit.expect("the interval (max, 1) or (0, 1) exists");

    if ex_val >= de_val {
        let w = Interval {
            left: vals[ei].0.clone(),
            right: vals[ej].0.clone(),
            left_closed: true,
            right_closed: true,
        };
        (ex_val, w)
    } else {
        // [0, c) and (0, c) agree when 0 is not a data value
        let left_closed = da.is_zero() && zero_count == 0;
        let w = Interval {
            left: da,
            right: dc,
            left_closed,
            right_closed: false,
        };
        (de_val, w)
    }
}

/// `sup_I |#{n : {x_n} in I} - T len(I)|` over intervals `I` in `[0, 1)`.
pub fn discrepancy_l(points: &[RealValue]) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::domain("discrepancy needs at least one point"));
    }
    let (vals, rad) = sorted_values(points)?;
    let (l, witness) = sweep(&vals);
    let t = points.len() as u64;
    let l_value = if rad.is_zero() {
        RealValue::exact(l)
    } else {
        let spread = rad.mul_int(&BigInt::from(2 * t));
        RealValue::Approx(crate::exact::Ball::new(l, spread))
    };
    Ok(DiscrepancyReport {
        t,
        l_value,
        witness_interval: witness,
        g: None,
        et_rhs: None,
        slack: None,
    })
}

/// `C = 2 + 2/pi`.
pub fn et_constant() -> f64 {
    2.0 + 2.0 / PI
}

/// `frac(x)` as a 128-bit fixed-point fraction (truncated) and the float
/// radius of `x`.
fn fixed_phase(x: &RealValue) -> (u128, f64) {
    let f = x.mid().frac();
    let scaled = f.mul_int(&(BigInt::from(1u8) << 128)).floor();
    let fixed = scaled.to_u128().expect("frac below one");
    let r = x.radius();
    let rad = if r.is_zero() { 0.0 } else { r.to_f64_up() };
    (fixed, rad)
}

/// `|sum_n e(k x_n)|` with an absolute error radius. `k x_n mod 1` is taken
/// from the fixed-point phase by wrapping multiplication.
fn weyl_sum(phases: &[(u128, f64)], k: u64) -> (f64, f64) {
    let two128 = 2f64.powi(128);
    let kf = k as f64;
    let mut spread = 0.0f64;
    let terms: Vec<(f64, f64)> = phases
        .iter()
        .map(|&(fixed, rad)| {
            spread = spread.max(rad);
            let phi = (fixed.wrapping_mul(k as u128) as f64) / two128;
            let phi = if phi > 0.5 { phi - 1.0 } else { phi };
            let (s, c) = (TAU * phi).sin_cos();
            (c, s)
        })
        .collect();
    let n = phases.len() as f64;
    let (re, im) = pairwise(&terms);
    // truncation of the phase, the input radius, float conversion
    let phase_err = kf * (2f64.powi(-127) + spread) * (1.0 + 4.0 * EPS) + 2.0 * EPS;
    let term_err = (TAU * phase_err + 2.0 * EPS).min(2.0);
    let rad = 2.0 * n * (term_err + (n.log2() + 8.0) * EPS);
    (re.hypot(im), round_up(rad, 4.0))
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

/// Discrepancy together with the Erdos-Turan right-hand side for `G`;
/// fails if the inequality does not hold.
pub fn erdos_turan_check(points: &[RealValue], g: u64) -> Result<DiscrepancyReport> {
    let base = discrepancy_l(points)?;
    erdos_turan_with(points, &base, g)
}

/// [`erdos_turan_check`] for several cutoffs, computing `L` once.
pub fn erdos_turan_many(points: &[RealValue], gs: &[u64]) -> Result<Vec<DiscrepancyReport>> {
    let base = discrepancy_l(points)?;
    gs.iter().map(|&g| erdos_turan_with(points, &base, g)).collect()
}

fn erdos_turan_with(points: &[RealValue], base: &DiscrepancyReport, g: u64) -> Result<DiscrepancyReport> {
    if g < 1 {
        return Err(Error::domain("G must be at least 1"));
    }
    let mut report = base.clone();
    let t = report.t as f64;
    let phases: Vec<(u128, f64)> = points.iter().map(fixed_phase).collect();
    let sums: Vec<(f64, f64)> = (1..=g)
        .into_par_iter()
        .map(|k| weyl_sum(&phases, k))
        .collect();
    let mut acc = 0.0f64;
    let mut acc_err = 0.0f64;
    for (k, (m, e)) in sums.iter().enumerate() {
        let kf = (k + 1) as f64;
        acc += m / kf;
        acc_err += e / kf;
    }
    let c = et_constant();
    let rhs = t / (g as f64 + 1.0) + c * acc;
    let err = c * acc_err + (g as f64 + 8.0) * EPS * rhs.abs();
    let rhs_rad = round_up(err, 4.0);
    let rhs_hi = round_up(rhs + rhs_rad, 1.0);

    // The comparison is against the upward-rounded RHS, so equality cases
    // such as equidistributed rationals are accepted.
    let hi_q = Rational::from_f64(rhs_hi).ok_or_else(|| Error::invariant("non-finite RHS"))?;
    if report.l_value.lo() > hi_q {
        return Err(Error::invariant(format!(
            "Erdos-Turan fails for T={}, G={g}: L = {} > RHS = {rhs}",
            report.t, report.l_value
        )));
    }
    if report.l_value.hi() > hi_q {
        return Err(Error::indeterminate(format!(
            "L = {} against RHS = {rhs} +- {rhs_rad}",
            report.l_value
        )));
    }
    let et_rhs = RealValue::from_f64(rhs, rhs_rad)?;
    let slack_mid = Rational::from_f64(rhs).expect("finite") - report.l_value.mid();
    let slack_rad = Rational::from_f64(rhs_rad).expect("finite") + report.l_value.radius();
    report.g = Some(g);
    report.et_rhs = Some(et_rhs);
    report.slack = Some(RealValue::Approx(crate::exact::Ball::new(slack_mid, slack_rad)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[&str]) -> Vec<RealValue> {
        xs.iter()
            .map(|s| RealValue::exact(s.parse().unwrap()))
            .collect()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn single_point() {
        let r = discrepancy_l(&pts(&["1/2"])).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("1")));
        let w = r.witness_interval;
        assert_eq!((w.left, w.right), (q("1/2"), q("1/2")));
        assert!(w.left_closed && w.right_closed);
    }

    #[test]
    fn grids() {
        let r = discrepancy_l(&pts(&["0", "1/4", "1/2", "3/4"])).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("1")));
        let r = discrepancy_l(&pts(&["0", "1/2"])).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("1")));
        let w = r.witness_interval;
        assert_eq!((w.left, w.right), (q("0"), q("1/2")));
    }

    #[test]
    fn deficit_witness() {
        let r = discrepancy_l(&pts(&["1/5", "19/10", "1/10"])).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("21/10")));
        let w = r.witness_interval;
        assert_eq!((w.left, w.right), (q("1/5"), q("9/10")));
        assert!(!w.left_closed && !w.right_closed);
        let r = discrepancy_l(&pts(&["1/2"])).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("1")));
    }

    #[test]
    fn erdos_turan_examples() {
        let r = erdos_turan_check(&pts(&["1/2"]), 1).unwrap();
        let rhs = r.et_rhs.unwrap().to_f64();
        assert!((rhs - (0.5 + et_constant())).abs() < 1e-12);

        let sevenths: Vec<RealValue> = (1..=7).map(|n| RealValue::exact(Rational::new(n, 7))).collect();
        let r = erdos_turan_check(&sevenths, 6).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("1")));
        assert!((r.et_rhs.unwrap().to_f64() - 1.0).abs() < 1e-9);

        let zeros = pts(&["0"; 10]);
        let r = erdos_turan_check(&zeros, 3).unwrap();
        assert_eq!(r.l_value, RealValue::exact(q("10")));
        let expect = 2.5 + et_constant() * (10.0 + 5.0 + 10.0 / 3.0);
        assert!((r.et_rhs.unwrap().to_f64() - expect).abs() < 1e-9);
    }

    #[test]
    fn approximate_points() {
        let p = vec![
            RealValue::from_f64(0.1, 1e-12).unwrap(),
            RealValue::from_f64(0.6, 1e-12).unwrap(),
        ];
        let r = discrepancy_l(&p).unwrap();
        assert!((r.l_value.to_f64() - 1.0).abs() < 1e-9);
        let close = vec![
            RealValue::from_f64(0.1, 1e-3).unwrap(),
            RealValue::from_f64(0.1005, 1e-3).unwrap(),
        ];
        assert!(matches!(discrepancy_l(&close), Err(Error::Indeterminate(_))));
    }
}
