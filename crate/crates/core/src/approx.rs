//! Witness-producing approximation of `min ||gamma n||` over structured sets.
//!
//! Three routes produce witnesses:
//!
//! * [`oracle_min`] enumerates the set and takes the exact minimum. It is the
//!   reference every other route is checked against.
//! * [`residue_min`] is the fast path for `D_b` and rational `gamma = p/q`:
//!   distances become integer residues `p n mod q` over a shared denominator.
//! * [`pigeonhole_witness`] builds a witness from the repunits
//!   `1, 1+b, 1+b+b^2, ...` without searching, certifying
//!   `||gamma w|| <= 1/(t(b,N)+1)`.
//!
//! [`transfer_witness`] turns a witness from `D_b*` for `gamma/(b-1)` into a
//! witness from `D_b` for `gamma`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Limits;
use crate::digitsets::{
    contains_db, count_db_upto, enum_set, from_bits, power_difference, t_of, Base, SetKind,
    SetSpec,
};
use crate::error::{Error, Result};
use crate::exact::{ModularGamma, Rational, RealValue};

/// Whether a result was computed from an exact or an enclosed `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Approximate,
}

impl Mode {
    fn of(gamma: &RealValue) -> Mode {
        if gamma.is_exact() {
            Mode::Exact
        } else {
            Mode::Approximate
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxResult {
    pub witness: u128,
    /// `||gamma * witness||`.
    pub distance: RealValue,
    pub set: SetSpec,
    /// Upper end of the searched range `[1, N]`.
    pub limit: u128,
    /// Bound the witness certifies, when the route provides one.
    pub guarantee: Option<Rational>,
    pub mode: Mode,
}

impl ApproxResult {
    /// Recomputes the distance from the inputs and checks every field
    /// invariant.
    pub fn verify(&self, gamma: &RealValue) -> Result<()> {
        if self.witness < 1 || self.witness > self.limit || !self.set.contains(self.witness)? {
            return Err(Error::invariant(format!(
                "witness {} outside the set or [1, {}]",
                self.witness, self.limit
            )));
        }
        let d = gamma
            .mul_int(&BigInt::from(self.witness))
            .dist_to_nearest_int()?;
        if d != self.distance {
            return Err(Error::invariant(format!(
                "recorded distance {} differs from recomputed {d}",
                self.distance
            )));
        }
        if let Some(g) = &self.guarantee {
            if d.cmp_rational(g)? == Ordering::Greater {
                return Err(Error::invariant(format!(
                    "distance {d} exceeds guarantee {g} at witness {}",
                    self.witness
                )));
            }
        }
        Ok(())
    }
}

fn distance_of(gamma: &RealValue, n: u128) -> Result<RealValue> {
    gamma.mul_int(&BigInt::from(n)).dist_to_nearest_int()
}

/// Exact minimiser of `||gamma n||` over the set restricted to `[1, N]`,
/// found by full enumeration. Ties go to the smallest witness.
///
/// For approximate `gamma` the minimiser must be certified: its enclosure has
/// to lie strictly below every other candidate's, otherwise the result is
/// [`Error::Indeterminate`].
pub fn oracle_min(
    gamma: &RealValue,
    spec: &SetSpec,
    n: u128,
    limits: &Limits,
) -> Result<ApproxResult> {
    if n < 1 {
        return Err(Error::domain("search range [1, N] needs N >= 1"));
    }
    let best = match gamma {
        RealValue::Exact(g) if spec.kind == SetKind::Db => oracle_db_exact(g, spec.base, n, limits)?,
        RealValue::Exact(_) => {
            let mut best: Option<(RealValue, u128)> = None;
            for x in enum_set(spec, Some(n), limits)?.filter(|&x| x >= 1) {
                let d = distance_of(gamma, x)?;
                let better = match &best {
                    None => true,
                    Some((bd, _)) => d.try_cmp(bd)? == Ordering::Less,
                };
                if better {
                    best = Some((d, x));
                }
            }
            best
        }
        RealValue::Approx(_) => certified_argmin(
            gamma,
            enum_set(spec, Some(n), limits)?.filter(|&x| x >= 1),
        )?,
    };
    let (distance, witness) =
        best.ok_or_else(|| Error::domain(format!("the set has no elements in [1, {n}]")))?;
    Ok(ApproxResult {
        witness,
        distance,
        set: spec.clone(),
        limit: n,
        guarantee: None,
        mode: Mode::of(gamma),
    })
}

const SHARD: u128 = 1 << 14;

/// Exact-mode minimum over `D_b ∩ [1, N]`, sharded over rank ranges. The
/// merge is a min on `(distance, witness)`, so the result does not depend on
/// scheduling.
fn oracle_db_exact(
    gamma: &Rational,
    b: Base,
    n: u128,
    limits: &Limits,
) -> Result<Option<(RealValue, u128)>> {
    let count = count_db_upto(b, n);
    if count > limits.enumeration_cap as u128 {
        return Err(Error::limit("D_b enumeration", count, limits.enumeration_cap));
    }
    let shards = count.div_ceil(SHARD);
    let best = (0..shards as u64)
        .into_par_iter()
        .map(|s| {
            let lo = s as u128 * SHARD + 1;
            let hi = ((s as u128 + 1) * SHARD).min(count);
            (lo..=hi)
                .map(|i| {
                    let x = from_bits(b, i).expect("below N");
                    (gamma.mul_int(&BigInt::from(x)).dist_to_nearest_int(), x)
                })
                .min()
        })
        .filter_map(|m| m)
        .min();
    Ok(best.map(|(d, x)| (RealValue::Exact(d), x)))
}

/// Certified argmin over enclosures: the candidate with the least upper end
/// wins if every other candidate's lower end lies strictly above it.
fn certified_argmin(
    gamma: &RealValue,
    xs: impl Iterator<Item = u128>,
) -> Result<Option<(RealValue, u128)>> {
    let mut best: Option<(RealValue, u128)> = None;
    // Two smallest lower ends seen, with their witnesses.
    let mut low: [Option<(Rational, u128)>; 2] = [None, None];
    for x in xs {
        let d = distance_of(gamma, x)?;
        let (lo, hi) = (d.lo(), d.hi());
        if best.as_ref().map_or(true, |(bd, _)| hi < bd.hi()) {
            best = Some((d, x));
        }
        match &low {
            [Some((l0, _)), _] if lo >= *l0 => {
                if low[1].as_ref().map_or(true, |(l1, _)| lo < *l1) {
                    low[1] = Some((lo, x));
                }
            }
            _ => {
                low[1] = low[0].take();
                low[0] = Some((lo, x));
            }
        }
    }
    let Some((bd, bw)) = best else { return Ok(None) };
    let rival = low.iter().flatten().find(|(_, w)| *w != bw);
    if let Some((rlo, rw)) = rival {
        if *rlo <= bd.hi() {
            return Err(Error::indeterminate(format!(
                "cannot separate witness {bw} (distance {bd}) from {rw}"
            )));
        }
    }
    Ok(Some((bd, bw)))
}

/// Fast exact minimum over `D_b ∩ [1, N]` for rational `gamma` with a 64-bit
/// denominator. All distances share the denominator `q`, so the search runs
/// on integer residues. Must agree with [`oracle_min`] exactly.
pub fn residue_min(gamma: &Rational, b: Base, n: u128, limits: &Limits) -> Result<ApproxResult> {
    if n < 1 {
        return Err(Error::domain("search range [1, N] needs N >= 1"));
    }
    let mg = ModularGamma::new(gamma)
        .ok_or_else(|| Error::domain("residue search needs a denominator below 2^64"))?;
    let count = count_db_upto(b, n);
    if count > limits.enumeration_cap as u128 {
        return Err(Error::limit("D_b enumeration", count, limits.enumeration_cap));
    }
    let shards = count.div_ceil(SHARD);
    let (num, witness) = (0..shards as u64)
        .into_par_iter()
        .map(|s| {
            let lo = s as u128 * SHARD + 1;
            let hi = ((s as u128 + 1) * SHARD).min(count);
            let mut best = (u128::MAX, 0u128);
            for i in lo..=hi {
                let x = from_bits(b, i).expect("below N");
                let d = mg.dist_num(x);
                if d < best.0 {
                    best = (d, x);
                    if d == 0 {
                        break;
                    }
                }
            }
            best
        })
        .min()
        .ok_or_else(|| Error::domain("D_b ∩ [1, N] is empty"))?;
    Ok(ApproxResult {
        witness,
        distance: RealValue::Exact(Rational::new(num, mg.denom())),
        set: SetSpec::db(b),
        limit: n,
        guarantee: None,
        mode: Mode::Exact,
    })
}

/// Constructive witness in `D_b ∩ [1, N]` with `||gamma w|| <= 1/(t(b,N)+1)`.
///
/// Scans the repunits `P_{N,b}` for a direct witness first. Otherwise all
/// fractional parts `{u gamma}` lie in `(1/(t+1), t/(t+1))`, so two of the
/// `t + 1` repunits share a half-open bin `[h/(t+1), (h+1)/(t+1))`; the
/// lexicographically first such pair `(u, v)` gives the witness `v - u`.
pub fn pigeonhole_witness(gamma: &RealValue, b: Base, n: u128) -> Result<ApproxResult> {
    let t = t_of(b, n)?;
    let bins = t as u128 + 1;
    let guarantee = Rational::new(1, bins);
    let spec = SetSpec::new(b, SetKind::P { n })?;
    let p: Vec<u128> = enum_set(&spec, None, &Limits::default())?.collect();

    let finish = |w: u128, distance: RealValue| -> Result<ApproxResult> {
        if w < 1 || w > n || !contains_db(b, w)? {
            return Err(Error::invariant(format!(
                "pigeonhole witness {w} is not in D_{b} ∩ [1, {n}]"
            )));
        }
        if distance.cmp_rational(&guarantee)? == Ordering::Greater {
            return Err(Error::invariant(format!(
                "pigeonhole witness {w} has distance {distance} above 1/{bins}"
            )));
        }
        Ok(ApproxResult {
            witness: w,
            distance,
            set: SetSpec::db(b),
            limit: n,
            guarantee: Some(guarantee.clone()),
            mode: Mode::of(gamma),
        })
    };

    for &u in &p {
        let d = distance_of(gamma, u)?;
        if d.cmp_rational(&guarantee)? != Ordering::Greater {
            return finish(u, d);
        }
    }

    let bin_of = |u: u128| -> Result<BigInt> {
        let f = gamma.mul_int(&BigInt::from(u)).frac()?;
        let scaled = f.mul_int(&BigInt::from(bins));
        let (lo, hi) = (scaled.lo().floor(), scaled.hi().floor());
        if lo != hi {
            return Err(Error::indeterminate(format!(
                "{{{u} gamma}} straddles a bin boundary"
            )));
        }
        Ok(lo.min(BigInt::from(t)))
    };
    let labels = p.iter().map(|&u| bin_of(u)).collect::<Result<Vec<_>>>()?;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if labels[i] == labels[j] {
                let w = p[j] - p[i];
                return finish(w, distance_of(gamma, w)?);
            }
        }
    }
    Err(Error::invariant(format!(
        "no direct witness and no bin collision among {} repunits",
        p.len()
    )))
}

/// How a `D_b*` witness was carried over to `D_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferBranch {
    /// `y` already lies in `D_b`; the bound scales by `b - 1`.
    InDb,
    /// `y = b^d - b^c`; `y/(b-1)` lies in `D_b` with the same bound.
    PowerDifference { d: u32, c: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub n: u128,
    pub distance_bound: RealValue,
    pub branch: TransferBranch,
}

/// Carries `||gamma* y|| <= f` with `gamma* = gamma/(b-1)` and
/// `y ∈ D_b* ∩ [1, N]` over to some `n ∈ D_b ∩ [1, N]` with
/// `||gamma n|| <= distance_bound`.
pub fn transfer_witness(b: Base, y: u128, distance_star: &RealValue, n: u128) -> Result<Transfer> {
    if y < 1 || y > n {
        return Err(Error::domain(format!("{y} is outside [1, {n}]")));
    }
    let bm1 = b.as_u128() - 1;
    if contains_db(b, y)? {
        return Ok(Transfer {
            n: y,
            distance_bound: distance_star.mul_int(&BigInt::from(bm1)),
            branch: TransferBranch::InDb,
        });
    }
    let (d, c) = power_difference(b, y)
        .ok_or_else(|| Error::domain(format!("{y} is not in D_{b}*")))?;
    if y % bm1 != 0 {
        return Err(Error::invariant(format!("{y} = {b}^{d} - {b}^{c} is not divisible by {bm1}")));
    }
    let m = y / bm1;
    if !contains_db(b, m)? || m > n {
        return Err(Error::invariant(format!(
            "({b}^{d} - {b}^{c})/{bm1} = {m} is not in D_{b} ∩ [1, {n}]"
        )));
    }
    Ok(Transfer {
        n: m,
        distance_bound: distance_star.clone(),
        branch: TransferBranch::PowerDifference { d, c },
    })
}

/// Minimises over `D_b*` for `gamma/(b-1)` and transfers the witness back,
/// returning the `D_b` witness with its recomputed distance and the bound.
pub fn transfer_search(
    gamma: &RealValue,
    b: Base,
    n: u128,
    limits: &Limits,
) -> Result<(ApproxResult, Transfer)> {
    let scale = Rational::new(1, b.as_u128() - 1);
    let gamma_star = gamma.mul_rational(&scale);
    let spec = SetSpec::new(b, SetKind::DbStar)?;
    let star = oracle_min(&gamma_star, &spec, n, limits)?;
    let tr = transfer_witness(b, star.witness, &star.distance, n)?;
    let d = distance_of(gamma, tr.n)?;
    if d.try_cmp(&tr.distance_bound)? == Ordering::Greater {
        return Err(Error::invariant(format!(
            "transferred witness {} has distance {d} above {}",
            tr.n, tr.distance_bound
        )));
    }
    let result = ApproxResult {
        witness: tr.n,
        distance: d,
        set: SetSpec::db(b),
        limit: n,
        guarantee: tr.distance_bound.as_exact().cloned(),
        mode: Mode::of(gamma),
    };
    Ok((result, tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Ball;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn base(b: u64) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let l = Limits::default();
        let r = oracle_min(&RealValue::zero(), &SetSpec::db(base(3)), 100, &l).unwrap();
        assert_eq!((r.witness, r.distance.clone()), (1, RealValue::zero()));
        // First seven elements of D_3 end at 13.
        let r = oracle_min(&q("1/26").into(), &SetSpec::db(base(3)), 13, &l).unwrap();
        assert_eq!(r.witness, 1);
        assert_eq!(r.distance, q("1/26").into());
        let r = oracle_min(&q("1/2").into(), &SetSpec::db(base(2)), 7, &l).unwrap();
        assert_eq!((r.witness, r.distance.clone()), (2, RealValue::zero()));
        r.verify(&q("1/2").into()).unwrap();
    }

    #[test]
    fn pigeonhole_examples() {
        let r = pigeonhole_witness(&q("1/5").into(), base(2), 7).unwrap();
        assert_eq!(r.witness, 1);
        assert_eq!(r.distance, q("1/5").into());
        assert_eq!(r.guarantee, Some(q("1/3")));
        let r = pigeonhole_witness(&q("1/2").into(), base(2), 7).unwrap();
        assert_eq!(r.witness, 2);
        assert_eq!(r.distance, RealValue::zero());
        for b in 2..=7 {
            let r = pigeonhole_witness(&RealValue::zero(), base(b), 1000).unwrap();
            assert_eq!((r.witness, r.distance), (1, RealValue::zero()));
        }
    }

    #[test]
    fn pigeonhole_with_enclosed_gamma() {
        let pi = RealValue::Approx(crate::exact::named_constant("pi", 128).unwrap());
        let r = pigeonhole_witness(&pi, base(3), 1_000_000).unwrap();
        r.verify(&pi).unwrap();
        let wide = RealValue::Approx(Ball::new(q("1/3"), q("1/10")));
        assert!(matches!(
            pigeonhole_witness(&wide, base(2), 100),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn transfer_examples() {
        let d = RealValue::from(q("1/100"));
        let t = transfer_witness(base(3), 4, &d, 100).unwrap();
        assert_eq!((t.n, t.branch), (4, TransferBranch::InDb));
        assert_eq!(t.distance_bound, q("2/100").into());
        let t = transfer_witness(base(3), 8, &d, 100).unwrap();
        assert_eq!(t.n, 4);
        assert_eq!(t.branch, TransferBranch::PowerDifference { d: 2, c: 0 });
        let t = transfer_witness(base(3), 24, &d, 100).unwrap();
        assert_eq!(t.n, 12);
        assert!(matches!(
            transfer_witness(base(3), 5, &d, 100),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn approximate_oracle_certifies_or_refuses() {
        let l = Limits::default();
        let sqrt2 = RealValue::Approx(crate::exact::named_constant("sqrt2", 128).unwrap());
        let r = oracle_min(&sqrt2, &SetSpec::db(base(3)), 10_000, &l).unwrap();
        assert_eq!(r.mode, Mode::Approximate);
        r.verify(&sqrt2).unwrap();
        // Witnesses 1 and 2 have the same distance 1/4 up to the radius.
        let blur = RealValue::Approx(Ball::new(q("1/4"), q("1/1000")));
        assert!(matches!(
            oracle_min(&blur, &SetSpec::db(base(2)), 3, &l),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn residue_path_matches_oracle_on_small_cases() {
        let l = Limits::default();
        for (g, b, n) in [("3/7", 3, 500u128), ("355/113", 2, 1000), ("1/26", 3, 13), ("0", 5, 10)] {
            let g = q(g);
            let fast = residue_min(&g, base(b), n, &l).unwrap();
            let slow = oracle_min(&g.clone().into(), &SetSpec::db(base(b)), n, &l).unwrap();
            assert_eq!(fast, slow);
        }
    }
}
