//! Exact arithmetic kernel.
//!
//! [`Rational`] is the universal number type: every distance to the nearest
//! integer, every fractional part and every explicit bound that can be exact
//! is carried as a reduced big fraction. Values that cannot be exact (named
//! irrationals, transcendental evaluations) are carried as a [`Ball`]: a
//! rational midpoint with a rational error radius. Comparisons on balls that
//! cannot be decided outside the radius return [`Error::Indeterminate`]
//! rather than guessing.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default significand width for approximate values.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Reduced fraction `numerator / denominator` with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n / d`, reducing to lowest terms. Panics when `d == 0`.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        let d = d.into();
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(n.into(), d))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.numer()).div_floor(self.denom()))
    }

    /// `{x} = x - floor(x)`, always in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let r = self.numer().mod_floor(self.denom());
        Rational::new(r, self.denom().clone())
    }

    /// `||x||`, the distance to the nearest integer, in `[0, 1/2]`.
    pub fn dist_to_nearest_int(&self) -> Self {
        let q = self.denom();
        let r = self.numer().mod_floor(q);
        let other = q - &r;
        Rational::new(r.min(other), q.clone())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Rational(&self.0 * BigRational::from_integer(n.clone()))
    }

    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    /// Nearest `f64` (round-to-nearest as implemented by `num-rational`).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest `f64` not exceeding the value.
    pub fn to_f64_down(&self) -> f64 {
        let f = self.to_f64();
        match Rational::from_f64(f) {
            Some(back) if back > *self => f.next_down(),
            _ => f,
        }
    }

    /// Smallest `f64` not below the value.
    pub fn to_f64_up(&self) -> f64 {
        let f = self.to_f64();
        match Rational::from_f64(f) {
            Some(back) if back < *self => f.next_up(),
            _ => f,
        }
    }

    /// Exact rational value of a finite float.
    pub fn from_f64(f: f64) -> Option<Self> {
        BigRational::from_f64(f).map(Rational)
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Rounds to a dyadic rational with `bits` significant bits, returning
    /// the rounded value and an upper bound on the rounding error.
    pub fn round_to_bits(&self, bits: u32) -> (Rational, Rational) {
        if self.is_zero() {
            return (Rational::zero(), Rational::zero());
        }
        let a = self.abs();
        // 2^(e-1) <= |x| < 2^e, estimated from bit lengths and corrected.
        let mut e = a.numer().bits() as i64 - a.denom().bits() as i64;
        while pow2(e - 1) > a {
            e -= 1;
        }
        while pow2(e) <= a {
            e += 1;
        }
        let shift = bits as i64 - e;
        let scaled = self * &pow2(shift);
        let rounded = Rational::from_integer(round_half_even(&scaled));
        let value = &rounded * &pow2(-shift);
        let err = (&value - self).abs();
        (value, err)
    }
}

fn round_half_even(x: &Rational) -> BigInt {
    let fl = x.floor();
    let rem = x - &Rational::from_integer(fl.clone());
    match rem.cmp(&Rational::half()) {
        Ordering::Less => fl,
        Ordering::Greater => fl + 1,
        Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << (e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(1, p)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, integers and decimal literals (`-0.125`, `1.5e-3`).
    /// Decimal literals are converted to the exact rational they denote.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Rational::new(p, q));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (neg, body) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let scale = exponent - frac_part.len() as i64;
        if scale.unsigned_abs() > 100_000 {
            return Err(Error::Parse(format!("exponent out of range in {s:?}")));
        }
        let ten = BigInt::from(10u32);
        let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
        Ok(if scale >= 0 {
            Rational::from_integer(n * p)
        } else {
            Rational::new(n, p)
        })
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u128> for Rational {
    fn from(n: u128) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Closed interval `[mid - rad, mid + rad]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: Rational,
    rad: Rational,
}

impl Ball {
    pub fn new(mid: Rational, rad: Rational) -> Self {
        assert!(!rad.is_negative(), "negative error radius");
        Ball { mid, rad }
    }

    /// Ball around a float value; `rad` must already account for the
    /// float's own error.
    pub fn from_f64(mid: f64, rad: f64) -> Result<Self> {
        let m = Rational::from_f64(mid)
            .ok_or_else(|| Error::indeterminate(format!("non-finite value {mid}")))?;
        let r = Rational::from_f64(rad.abs())
            .ok_or_else(|| Error::indeterminate(format!("non-finite radius {rad}")))?;
        Ok(Ball::new(m, r))
    }

    /// Interval `[lo, hi]`.
    pub fn from_bounds(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        let mid = (&lo + &hi) * Rational::half();
        let rad = (&hi - &lo) * Rational::half();
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Rational {
        &self.mid
    }

    pub fn rad(&self) -> &Rational {
        &self.rad
    }

    pub fn lo(&self) -> Rational {
        &self.mid - &self.rad
    }

    pub fn hi(&self) -> Rational {
        &self.mid + &self.rad
    }

    /// Rounds the midpoint to `bits` significant bits, widening the radius
    /// by the rounding error.
    pub fn rounded(&self, bits: u32) -> Ball {
        let (mid, err) = self.mid.round_to_bits(bits);
        Ball {
            mid,
            rad: &self.rad + &err,
        }
    }
}

/// A real number: exact rational, or an enclosure with an error radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealValue {
    Exact(Rational),
    Approx(Ball),
}

impl From<Rational> for RealValue {
    fn from(r: Rational) -> Self {
        RealValue::Exact(r)
    }
}

impl From<Ball> for RealValue {
    fn from(b: Ball) -> Self {
        RealValue::Approx(b)
    }
}

impl RealValue {
    pub fn exact(r: Rational) -> Self {
        RealValue::Exact(r)
    }

    pub fn zero() -> Self {
        RealValue::Exact(Rational::zero())
    }

    /// Float value with a non-negative error radius.
    pub fn from_f64(mid: f64, rad: f64) -> Result<Self> {
        Ok(RealValue::Approx(Ball::from_f64(mid, rad)?))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            RealValue::Exact(r) => Some(r),
            RealValue::Approx(_) => None,
        }
    }

    pub fn mid(&self) -> &Rational {
        match self {
            RealValue::Exact(r) => r,
            RealValue::Approx(b) => b.mid(),
        }
    }

    pub fn radius(&self) -> Rational {
        match self {
            RealValue::Exact(_) => Rational::zero(),
            RealValue::Approx(b) => b.rad().clone(),
        }
    }

    pub fn lo(&self) -> Rational {
        match self {
            RealValue::Exact(r) => r.clone(),
            RealValue::Approx(b) => b.lo(),
        }
    }

    pub fn hi(&self) -> Rational {
        match self {
            RealValue::Exact(r) => r.clone(),
            RealValue::Approx(b) => b.hi(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn mul_int(&self, n: &BigInt) -> RealValue {
        match self {
            RealValue::Exact(r) => RealValue::Exact(r.mul_int(n)),
            RealValue::Approx(b) => RealValue::Approx(Ball::new(
                b.mid().mul_int(n),
                b.rad().mul_int(&n.abs()),
            )),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> RealValue {
        match self {
            RealValue::Exact(r) => RealValue::Exact(r * q),
            RealValue::Approx(b) => RealValue::Approx(Ball::new(b.mid() * q, b.rad() * &q.abs())),
        }
    }

    pub fn add_rational(&self, q: &Rational) -> RealValue {
        match self {
            RealValue::Exact(r) => RealValue::Exact(r + q),
            RealValue::Approx(b) => RealValue::Approx(Ball::new(b.mid() + q, b.rad().clone())),
        }
    }

    /// `||x||`. Approximate inputs whose enclosure straddles a half-integer
    /// (where the nearest integer changes) are indeterminate.
    pub fn dist_to_nearest_int(&self) -> Result<RealValue> {
        match self {
            RealValue::Exact(r) => Ok(RealValue::Exact(r.dist_to_nearest_int())),
            RealValue::Approx(b) => {
                if b.rad().is_zero() {
                    return Ok(RealValue::Approx(Ball::new(
                        b.mid().dist_to_nearest_int(),
                        Rational::zero(),
                    )));
                }
                let (lo, hi) = (b.lo(), b.hi());
                let half = Rational::half();
                // Half-integers h with lo < h < hi.
                let first_half = (&lo - &half).floor() + 1;
                let h = Rational::from_integer(first_half) + &half;
                if h < hi {
                    return Err(Error::indeterminate(format!(
                        "enclosure [{lo}, {hi}] straddles the half-integer {h}"
                    )));
                }
                let n = Rational::from_integer((b.mid() + &half).floor());
                let dlo = (&lo - &n).abs();
                let dhi = (&hi - &n).abs();
                let (min, max) = if lo <= n && n <= hi {
                    (Rational::zero(), dlo.max(dhi))
                } else {
                    (dlo.clone().min(dhi.clone()), dlo.max(dhi))
                };
                Ok(RealValue::Approx(Ball::from_bounds(min, max)))
            }
        }
    }

    /// `{x}`. Approximate inputs whose enclosure crosses an integer are
    /// indeterminate.
    pub fn frac(&self) -> Result<RealValue> {
        match self {
            RealValue::Exact(r) => Ok(RealValue::Exact(r.frac())),
            RealValue::Approx(b) => {
                let (lo, hi) = (b.lo(), b.hi());
                let n = lo.floor();
                if Rational::from_integer(&n + 1) <= hi {
                    return Err(Error::indeterminate(format!(
                        "enclosure [{lo}, {hi}] crosses the integer {}",
                        &n + 1
                    )));
                }
                let shift = -Rational::from_integer(n);
                Ok(RealValue::Approx(Ball::new(
                    b.mid() + &shift,
                    b.rad().clone(),
                )))
            }
        }
    }

    /// Certified comparison with an exact rational.
    pub fn cmp_rational(&self, q: &Rational) -> Result<Ordering> {
        match self {
            RealValue::Exact(r) => Ok(r.cmp(q)),
            RealValue::Approx(b) => {
                if b.hi() < *q {
                    Ok(Ordering::Less)
                } else if b.lo() > *q {
                    Ok(Ordering::Greater)
                } else if b.rad().is_zero() {
                    Ok(Ordering::Equal)
                } else {
                    Err(Error::indeterminate(format!(
                        "[{}, {}] contains {q}",
                        b.lo(),
                        b.hi()
                    )))
                }
            }
        }
    }

    /// Certified comparison of two values. Overlapping enclosures are
    /// indeterminate unless both are the same exact point.
    pub fn try_cmp(&self, other: &RealValue) -> Result<Ordering> {
        if let (RealValue::Exact(a), RealValue::Exact(b)) = (self, other) {
            return Ok(a.cmp(b));
        }
        let (alo, ahi, blo, bhi) = (self.lo(), self.hi(), other.lo(), other.hi());
        if ahi < blo {
            Ok(Ordering::Less)
        } else if alo > bhi {
            Ok(Ordering::Greater)
        } else if alo == ahi && blo == bhi && alo == blo {
            Ok(Ordering::Equal)
        } else {
            Err(Error::indeterminate(format!(
                "[{alo}, {ahi}] and [{blo}, {bhi}] overlap"
            )))
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(r) => write!(f, "{r}"),
            RealValue::Approx(b) => write!(f, "{:e}±{:e}", b.mid().to_f64(), b.rad().to_f64_up()),
        }
    }
}

impl Serialize for RealValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            RealValue::Exact(r) => serializer.collect_str(r),
            RealValue::Approx(b) => {
                let mut s = serializer.serialize_struct("Approx", 2)?;
                s.serialize_field("approx", &b.mid().to_f64())?;
                s.serialize_field("radius", &b.rad().to_f64_up())?;
                s.end()
            }
        }
    }
}

/// `||x||` as a free function over [`RealValue`].
pub fn dist_to_nearest_int(x: &RealValue) -> Result<RealValue> {
    x.dist_to_nearest_int()
}

/// `{x}` as a free function over [`RealValue`].
pub fn frac(x: &RealValue) -> Result<RealValue> {
    x.frac()
}

/// `(1 - pi ||x||^2) - |cos(pi x)|`, which is never negative.
///
/// Evaluated in floating point through `|cos(pi x)| = cos(pi ||x||)`, so the
/// argument never exceeds `pi/2`. The result carries an error radius that
/// covers the float evaluation and the input's own radius.
pub fn cos_bound_margin(x: &RealValue) -> Result<RealValue> {
    let d = x.dist_to_nearest_int()?;
    let df = d.mid().to_f64();
    let pi = std::f64::consts::PI;
    let margin = 1.0 - pi * df * df - (pi * df).cos();
    // |d/dd (1 - pi d^2 - cos(pi d))| <= pi on [0, 1/2].
    let input_err = d.radius().to_f64_up() + df.abs() * f64::EPSILON;
    let rad = 8.0 * f64::EPSILON + pi * input_err;
    RealValue::from_f64(margin, rad)
}

/// Enclosure of `sqrt2`, `pi` or `e` with `bits` significant bits.
pub fn named_constant(name: &str, bits: u32) -> Result<Ball> {
    let w = bits as usize + 32;
    let scale = BigInt::one() << w;
    let (value, err_units) = match name {
        "sqrt2" => {
            let s = (BigUint::from(2u32) << (2 * w)).sqrt();
            (BigInt::from_biguint(Sign::Plus, s), BigInt::one())
        }
        "pi" => {
            // pi = 16 atan(1/5) - 4 atan(1/239)
            let (a, ea) = atan_inv_fixed(5, w);
            let (b, eb) = atan_inv_fixed(239, w);
            (a * 16 - b * 4, ea * 16 + eb * 4)
        }
        "e" => {
            let mut sum = BigInt::zero();
            let mut term = scale.clone();
            let mut n = 0u32;
            while !term.is_zero() {
                sum += &term;
                n += 1;
                term /= n;
            }
            // One unit of truncation per term plus the geometric tail.
            (sum, BigInt::from(n + 2))
        }
        _ => return Err(Error::Parse(format!("unknown named constant {name:?}"))),
    };
    let mid = Rational::new(value, scale.clone());
    let rad = Rational::new(err_units, scale);
    Ok(Ball::new(mid, rad).rounded(bits))
}

/// `atan(1/x) * 2^w` by the alternating series, with an error bound in units
/// of `2^-w`.
fn atan_inv_fixed(x: u32, w: usize) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << w) / x; // 2^w / x^(2n+1)
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * n + 1);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        n += 1;
    }
    (sum, BigInt::from(2 * n + 2))
}

/// Parses a real parameter: `p/q` and decimal literals are exact; `sqrt2`,
/// `pi`, `e` become enclosures at `bits` bits.
pub fn parse_real(s: &str, bits: u32) -> Result<RealValue> {
    let t = s.trim();
    match t {
        "sqrt2" | "pi" | "e" => Ok(RealValue::Approx(named_constant(t, bits)?)),
        _ => Ok(RealValue::Exact(t.parse()?)),
    }
}

/// `g < 3 sqrt(k)`, decided in integers as `g^2 < 9k`.
pub fn lt_three_sqrt(g: u64, k: u64) -> bool {
    (g as u128) * (g as u128) < 9 * (k as u128)
}

/// Moves a float computed with relative error at most `rel_ulps * EPSILON`
/// to a value that is not below the true result.
pub fn round_up(x: f64, rel_ulps: f64) -> f64 {
    (x + x.abs() * rel_ulps * f64::EPSILON).next_up()
}

/// Counterpart of [`round_up`]: a value not above the true result.
pub fn round_down(x: f64, rel_ulps: f64) -> f64 {
    (x - x.abs() * rel_ulps * f64::EPSILON).next_down()
}

/// `gamma = p/q` with `q < 2^64`, so `||gamma n||` reduces to integer
/// residues: `||gamma n|| = min(r, q - r) / q` with `r = p n mod q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularGamma {
    p: u128,
    q: u128,
}

impl ModularGamma {
    /// `None` when the denominator does not fit in 64 bits.
    pub fn new(gamma: &Rational) -> Option<ModularGamma> {
        let q = gamma.denom().to_u64()? as u128;
        let p = gamma.numer().mod_floor(gamma.denom()).to_u128()?;
        Some(ModularGamma { p, q })
    }

    pub fn denom(&self) -> u128 {
        self.q
    }

    /// `p n mod q`.
    pub fn residue(&self, n: u128) -> u128 {
        ((n % self.q) * self.p) % self.q
    }

    /// Numerator of `||gamma n||` over the fixed denominator `q`.
    pub fn dist_num(&self, n: u128) -> u128 {
        let r = self.residue(n);
        r.min(self.q - r)
    }

    pub fn dist(&self, n: u128) -> Rational {
        Rational::new(self.dist_num(n), self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(q("1/2").dist_to_nearest_int(), q("1/2"));
        assert_eq!(q("-3/10").dist_to_nearest_int(), q("3/10"));
        assert_eq!(q("13/26").dist_to_nearest_int(), q("1/2"));
        assert_eq!(q("7").dist_to_nearest_int(), Rational::zero());
    }

    #[test]
    fn frac_examples() {
        assert_eq!(q("7/5").frac(), q("2/5"));
        assert_eq!(q("-1/4").frac(), q("3/4"));
        assert_eq!(q("3").frac(), Rational::zero());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("0.125"), q("1/8"));
        assert_eq!(q("-2.5"), q("-5/2"));
        assert_eq!(q("1.5e-3"), q("3/2000"));
        assert_eq!(q("12e2"), q("1200"));
        assert_eq!(q("6/-4"), q("-3/2"));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
        assert_eq!(q("3").to_string(), "3/1");
    }

    #[test]
    fn cos_margin_examples() {
        let m0 = cos_bound_margin(&RealValue::zero()).unwrap();
        assert!(m0.to_f64().abs() < 1e-15);
        let pi = std::f64::consts::PI;
        let m_half = cos_bound_margin(&q("1/2").into()).unwrap();
        assert!((m_half.to_f64() - (1.0 - pi / 4.0)).abs() < 1e-15);
        // 1 - pi/16 - cos(pi/4), evaluated separately with sqrt(2)/2.
        let m_quarter = cos_bound_margin(&q("1/4").into()).unwrap();
        let expected = 1.0 - pi / 16.0 - std::f64::consts::FRAC_1_SQRT_2;
        assert!((m_quarter.to_f64() - expected).abs() < 1e-15);
        assert!((m_quarter.to_f64() - 0.0966).abs() < 1e-4);
    }

    #[test]
    fn ball_distance_and_frac() {
        let b = RealValue::Approx(Ball::new(q("3/10"), q("1/100")));
        let d = b.dist_to_nearest_int().unwrap();
        assert_eq!(d.lo(), q("29/100"));
        assert_eq!(d.hi(), q("31/100"));
        let near_half = RealValue::Approx(Ball::new(q("1/2"), q("1/100")));
        assert!(matches!(
            near_half.dist_to_nearest_int(),
            Err(Error::Indeterminate(_))
        ));
        let near_int = RealValue::Approx(Ball::new(q("1"), q("1/100")));
        let d = near_int.dist_to_nearest_int().unwrap();
        assert_eq!(d.lo(), Rational::zero());
        assert_eq!(d.hi(), q("1/100"));
        assert!(matches!(near_int.frac(), Err(Error::Indeterminate(_))));
        let f = RealValue::Approx(Ball::new(q("-3/4"), q("1/100")))
            .frac()
            .unwrap();
        assert_eq!(f.mid(), &q("1/4"));
    }

    #[test]
    fn certified_comparisons() {
        let b = RealValue::Approx(Ball::new(q("1/3"), q("1/1000")));
        assert_eq!(b.cmp_rational(&q("1/2")).unwrap(), Ordering::Less);
        assert!(b.cmp_rational(&q("1/3")).is_err());
        let e = RealValue::Exact(q("1/3"));
        assert_eq!(e.cmp_rational(&q("1/3")).unwrap(), Ordering::Equal);
        assert!(b.try_cmp(&e).is_err());
        assert_eq!(
            e.try_cmp(&RealValue::Exact(q("1/2"))).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn named_constants_enclose_true_values() {
        for bits in [64, 128, 200] {
            let pi = named_constant("pi", bits).unwrap();
            assert!(pi.lo() < q("3.14159265358979323846264338327950288420"));
            assert!(pi.hi() > q("3.14159265358979323846264338327950288419"));
            let e = named_constant("e", bits).unwrap();
            assert!(e.lo() < q("2.71828182845904523536028747135266249776"));
            assert!(e.hi() > q("2.71828182845904523536028747135266249775"));
            let s = named_constant("sqrt2", bits).unwrap();
            assert!(s.lo() * s.lo() <= q("2") && s.hi() * s.hi() >= q("2"));
            assert!(s.rad() <= &pow2(-(bits as i64) + 1));
        }
        assert!(named_constant("tau", 64).is_err());
    }

    #[test]
    fn rounding_to_bits() {
        let (v, err) = q("1/3").round_to_bits(10);
        assert!(err <= pow2(-11));
        assert!(v.denom() <= &BigInt::from(1u32 << 11));
        let (v, err) = q("5").round_to_bits(10);
        assert_eq!(v, q("5"));
        assert!(err.is_zero());
    }

    #[test]
    fn directed_float_conversion() {
        let x = q("1/3");
        assert!(Rational::from_f64(x.to_f64_down()).unwrap() <= x);
        assert!(Rational::from_f64(x.to_f64_up()).unwrap() >= x);
    }
}
