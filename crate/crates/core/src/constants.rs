//! Explicit values of the effective constants behind the `(log N)^-2` bound.
//!
//! `U = 4b^2/(4b^2 - pi)` and `C = 2 + 2/pi` are rational enclosures built
//! from a certified enclosure of pi. `H_b` is the supremum over `m >= 1` of
//! `3 sqrt(8) + (2 m^2 log_U(256 C b) - 1) / b^{m/2}`, found by a finite scan
//! with a decay certificate; `J_b = 2 H_b`.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::digitsets::{t_of_big, Base};
use crate::error::Result;
use crate::exact::{named_constant, round_down, round_up, Ball, Rational, RealValue};

const CONST_BITS: u32 = 128;

#[derive(Clone, Debug, Serialize)]
pub struct ConstantSet {
    pub b: Base,
    #[serde(rename = "U")]
    pub u: RealValue,
    #[serde(rename = "C")]
    pub c: RealValue,
    /// `log_U(256 C b)`.
    pub log_u_term: RealValue,
    #[serde(rename = "H_b")]
    pub h_b: RealValue,
    #[serde(rename = "J_b")]
    pub j_b: RealValue,
    /// Last `m` scanned; the ratio is non-increasing from here on.
    pub m_max_used: u32,
    /// `m` attaining the maximum.
    pub m_argmax: u32,
}

/// Float enclosure `[lo, hi]` of a rational ball.
fn f64_bounds(x: &RealValue) -> (f64, f64) {
    (x.lo().to_f64_down(), x.hi().to_f64_up())
}

fn ball(lo: f64, hi: f64) -> RealValue {
    let lo = Rational::from_f64(lo).expect("finite");
    let hi = Rational::from_f64(hi).expect("finite");
    RealValue::Approx(Ball::from_bounds(lo, hi))
}

/// Upper bound for `ratio(m) = (2 m^2 L - 1) / b^{m/2}` given an upper bound
/// `l` for `L`.
fn ratio_up(b: f64, m: u32, l: f64) -> f64 {
    let m2 = (m as f64) * (m as f64);
    let num = round_up(2.0 * m2 * l - 1.0, 4.0);
    let den = round_down(b.powf(m as f64 / 2.0), 4.0);
    round_up(num / den, 2.0)
}

fn ratio_down(b: f64, m: u32, l: f64) -> f64 {
    let m2 = (m as f64) * (m as f64);
    let num = round_down(2.0 * m2 * l - 1.0, 4.0);
    let den = round_up(b.powf(m as f64 / 2.0), 4.0);
    round_down(num / den, 2.0)
}

pub fn compute_constants(b: Base) -> Result<ConstantSet> {
    let pi = RealValue::Approx(named_constant("pi", CONST_BITS)?);
    let four_b2 = Rational::from(4 * (b.get() as i64).pow(2));
    // U is increasing in pi, C decreasing.
    let u_lo = &four_b2 / (&four_b2 - pi.lo());
    let u_hi = &four_b2 / (&four_b2 - pi.hi());
    let u = RealValue::Approx(Ball::from_bounds(u_lo, u_hi));
    let two = Rational::from(2i64);
    let c_lo = &two + &two / pi.hi();
    let c_hi = &two + &two / pi.lo();
    let c = RealValue::Approx(Ball::from_bounds(c_lo, c_hi));

    // L = ln(256 C b) / ln U with ln U = -ln(1 - pi/(4b^2)).
    let bf = b.get() as f64;
    let (c_flo, c_fhi) = f64_bounds(&c);
    let (pi_lo, pi_hi) = f64_bounds(&pi);
    let x_lo = round_down(pi_lo / (4.0 * bf * bf), 2.0);
    let x_hi = round_up(pi_hi / (4.0 * bf * bf), 2.0);
    let ln_u_lo = round_down(-(-x_lo).ln_1p(), 4.0);
    let ln_u_hi = round_up(-(-x_hi).ln_1p(), 4.0);
    let num_lo = round_down((256.0 * c_flo * bf).ln(), 4.0);
    let num_hi = round_up((256.0 * c_fhi * bf).ln(), 4.0);
    let l_lo = round_down(num_lo / ln_u_hi, 2.0);
    let l_hi = round_up(num_hi / ln_u_lo, 2.0);

    // ratio(m+1)/ratio(m) <= (1 + 1/m)^2 (1 + 1/(2 m^2 L - 1)) / sqrt(b), and
    // the right side decreases in m, so once it drops below 1 (and the next
    // step actually decreases) the running maximum is final.
    let sqrt_b_lo = round_down(bf.sqrt(), 2.0);
    let mut best_hi = f64::NEG_INFINITY;
    let mut best_lo = f64::NEG_INFINITY;
    let mut argmax = 1;
    let mut m = 1u32;
    loop {
        let hi = ratio_up(bf, m, l_hi);
        if hi > best_hi {
            best_hi = hi;
            best_lo = ratio_down(bf, m, l_lo);
            argmax = m;
        }
        let mf = m as f64;
        let a = round_down(2.0 * mf * mf * l_lo - 1.0, 4.0);
        let cert = round_up((1.0 + 1.0 / mf).powi(2) * (1.0 + 1.0 / a), 8.0);
        if a > 0.0 && cert < sqrt_b_lo && ratio_up(bf, m + 1, l_hi) < ratio_down(bf, m, l_lo) {
            break;
        }
        m += 1;
    }
    let three_sqrt8 = 3.0 * 8f64.sqrt();
    let h_lo = round_down(round_down(three_sqrt8, 2.0) + best_lo, 2.0);
    let h_hi = round_up(round_up(three_sqrt8, 2.0) + best_hi, 2.0);
    Ok(ConstantSet {
        b,
        u,
        c,
        log_u_term: ball(l_lo, l_hi),
        h_b: ball(h_lo, h_hi),
        j_b: ball(2.0 * h_lo, 2.0 * h_hi),
        m_max_used: m,
        m_argmax: argmax,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExplicitBound {
    pub b: Base,
    #[serde(rename = "N")]
    pub n: String,
    pub t: u64,
    /// `floor(2 log_b(t / J_b))`, evaluated with the upper end of `J_b`;
    /// absent when `t = 0`.
    pub m_n: Option<i64>,
    /// `b J_b^2 / (2 t^2)`, an upper bound for `min ||gamma n||` over `D_b*`.
    pub dstar_bound: Option<Rational>,
    /// `(b - 1)` times the `D_b*` bound, for `D_b`.
    pub db_bound: Option<Rational>,
    pub vacuous: bool,
}

/// Largest integer `m` with `b^m J^2 <= t^2`.
fn m_n_of(b: Base, t: u64, j: &Rational) -> i64 {
    let bq = Rational::from(b.get() as i64);
    let t2 = Rational::from((t as i64).pow(2));
    let j2 = j * j;
    let mut m: i64 = 0;
    let mut p = j2.clone();
    if p <= t2 {
        while &p * &bq <= t2 {
            p = &p * &bq;
            m += 1;
        }
    } else {
        while p > t2 {
            p = &p / &bq;
            m -= 1;
        }
    }
    m
}

/// The explicit bound `b J_b^2 / (2 t(b,N)^2)` with `m_N`, flagged vacuous
/// when `m_N < 1` or the `D_b` bound is at least 1/2.
pub fn explicit_bound(b: Base, n: &BigUint) -> Result<ExplicitBound> {
    let consts = compute_constants(b)?;
    explicit_bound_with(&consts, n)
}

pub fn explicit_bound_with(consts: &ConstantSet, n: &BigUint) -> Result<ExplicitBound> {
    let b = consts.b;
    if *n < BigUint::from(1u32) {
        return Err(crate::error::Error::domain("N must be at least 1"));
    }
    let t = t_of_big(b, n)?;
    let j_hi = consts.j_b.hi();
    if t == 0 {
        return Ok(ExplicitBound {
            b,
            n: n.to_string(),
            t,
            m_n: None,
            dstar_bound: None,
            db_bound: None,
            vacuous: true,
        });
    }
    let m_n = m_n_of(b, t, &j_hi);
    let bq = Rational::from(b.get() as i64);
    let t2 = Rational::from(BigInt::from(t).pow(2) * 2);
    let dstar = &bq * &j_hi * &j_hi / t2;
    let db = dstar.mul_int(&BigInt::from(b.get() - 1));
    let vacuous = m_n < 1 || db >= Rational::half();
    Ok(ExplicitBound {
        b,
        n: n.to_string(),
        t,
        m_n: Some(m_n),
        dstar_bound: Some(dstar),
        db_bound: Some(db),
        vacuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn b(n: u64) -> Base {
        Base::new(n).unwrap()
    }

    #[test]
    fn u_and_c() {
        let k = compute_constants(b(2)).unwrap();
        let u = k.u.to_f64();
        assert!((u - 16.0 / (16.0 - PI)).abs() < 1e-12);
        assert!((k.c.to_f64() - 2.636_619_772).abs() < 1e-9);
        assert!(k.u.lo() > Rational::one());
        for bb in 2..=16 {
            let k = compute_constants(b(bb)).unwrap();
            assert!(k.u.lo() > Rational::one());
            assert!(k.h_b.lo().to_f64() >= 3.0 * 8f64.sqrt());
            assert_eq!(k.j_b.hi().to_f64(), 2.0 * k.h_b.hi().to_f64());
        }
    }

    #[test]
    fn h_b_is_scan_maximum() {
        for bb in [2u64, 3, 10] {
            let k = compute_constants(b(bb)).unwrap();
            let l = k.log_u_term.to_f64();
            let f = |m: u32| {
                let m = m as f64;
                3.0 * 8f64.sqrt() + (2.0 * m * m * l - 1.0) / (bb as f64).powf(m / 2.0)
            };
            let direct = (1..400).map(f).fold(f64::NEG_INFINITY, f64::max);
            let h = k.h_b.to_f64();
            assert!((h - direct).abs() <= 1e-9 * h, "b={bb}: {h} vs {direct}");
        }
    }

    #[test]
    fn bound_examples() {
        let one = BigUint::from(1u32);
        assert!(explicit_bound(b(3), &one).unwrap().vacuous);
        let n = BigUint::from(1u32) << 200;
        let r = explicit_bound(b(2), &n).unwrap();
        assert_eq!(r.t, 199);
        assert!(r.vacuous);
        let n = BigUint::from(1u32) << 2000;
        let r = explicit_bound(b(2), &n).unwrap();
        assert_eq!(r.t, 1999);
        assert!(!r.vacuous);
        assert!(r.m_n.unwrap() >= 1);
    }
}
