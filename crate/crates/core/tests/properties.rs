//! Randomised invariants.

use num_bigint::BigUint;
use proptest::prelude::*;

use radix_approx::adversary::{reduce_to_a, residue_reduce};
use radix_approx::digitsets::{contains_db, rank_db, unrank_db, Base};
use radix_approx::discrepancy::discrepancy_l;
use radix_approx::expsum::classify_g;
use radix_approx::{Rational, RealValue};

fn base() -> impl Strategy<Value = Base> {
    (2u64..=12).prop_map(|b| Base::new(b).unwrap())
}

fn exact(p: i64, q: i64) -> RealValue {
    RealValue::exact(Rational::new(p, q))
}

proptest! {
    #[test]
    fn discrepancy_ignores_order_and_integer_shifts(
        nums in prop::collection::vec(-500i64..500, 1..25),
        den in 1i64..60,
        shifts in prop::collection::vec(-5i64..5, 25),
        seed in any::<u64>(),
    ) {
        let pts: Vec<RealValue> = nums.iter().map(|&p| exact(p, den)).collect();
        let base = discrepancy_l(&pts).unwrap();
        let mut moved: Vec<RealValue> = nums
            .iter()
            .zip(&shifts)
            .map(|(&p, &s)| exact(p + s * den, den))
            .collect();
        let n = moved.len();
        moved.rotate_left((seed as usize) % n);
        moved.reverse();
        let other = discrepancy_l(&moved).unwrap();
        prop_assert_eq!(&base.l_value, &other.l_value);
        // 1 <= L <= T
        let l = base.l_value.as_exact().unwrap().clone();
        prop_assert!(l >= Rational::one());
        prop_assert!(l <= Rational::from(n as i64));
    }

    #[test]
    fn class_steps_by_one_under_division_by_b(b in base(), p in 1i64..1_000_000, q in 1_000_001i64..4_000_000) {
        // ||y|| small enough that dividing by b stays in (0, 1/2]
        let y = Rational::new(p, q).dist_to_nearest_int();
        prop_assume!(!y.is_zero());
        let t = classify_g(b, &RealValue::exact(y.clone())).unwrap().t.unwrap();
        let smaller = &y / &Rational::from(b.get() as i64);
        let t2 = classify_g(b, &RealValue::exact(smaller)).unwrap().t.unwrap();
        prop_assert_eq!(t2, t + 1);
    }

    #[test]
    fn residue_reduce_preserves_residue(b in base(), u in prop::collection::vec(0u64..10_000, 1..7)) {
        prop_assume!(u.iter().any(|&x| x > 0));
        let red = residue_reduce(b, &u).unwrap();
        let bb = BigUint::from(b.get());
        let m = bb.pow(u.len() as u32) - 1u32;
        let val = |v: &[u64]| -> BigUint {
            v.iter().rev().fold(BigUint::from(0u32), |acc, &d| acc * &bb + d)
        };
        prop_assert_eq!(val(&u) % &m, val(&red.v) % &m);
        prop_assert!(red.v.iter().all(|&d| d < b.get()));
        let (su, sv) = (u.iter().sum::<u64>() as u128, red.v.iter().sum::<u64>() as u128);
        prop_assert!(sv >= 1);
        prop_assert_eq!(su - sv, red.steps * (b.get() as u128 - 1));
    }

    #[test]
    fn reduce_to_a_stays_in_range(b in 2u64..=6, k in 1u32..6, exps in prop::collection::vec(0u32..40, 1..12)) {
        let b = Base::new(b).unwrap();
        let r = reduce_to_a(b, k, &exps).unwrap();
        let sum: u64 = r.digits.iter().sum();
        prop_assert!(sum >= 1 && sum <= exps.len() as u64);
        let m = (b.get() as u128).pow(k) - 1;
        prop_assert_eq!(&r.w % BigUint::from(m), BigUint::from(r.c_w % m));
    }

    #[test]
    fn rank_inverts_unrank(b in base(), i in 1u128..1_000_000) {
        let n = unrank_db(b, i).unwrap();
        prop_assert!(contains_db(b, n).unwrap());
        prop_assert_eq!(rank_db(b, n).unwrap(), i);
    }

    #[test]
    fn rational_text_round_trip(p in any::<i64>(), q in 1i64..i64::MAX) {
        let r = Rational::new(p, q);
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(r, back);
    }
}
