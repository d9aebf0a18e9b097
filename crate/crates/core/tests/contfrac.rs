use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use ratball_core::hjcf::*;

fn coprime_pairs(max: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=max).flat_map(|p| (1..p).filter(move |&q| p.gcd(&q) == 1).map(move |q| (p, q)))
}

fn frac(p: u64, q: u64) -> PositiveRational {
    PositiveRational::new(p, q).unwrap()
}

#[test]
fn round_trip_exhaustive() {
    for (p, q) in coprime_pairs(200) {
        let x = frac(p, q);
        let s = expand_neg_cf(&x).unwrap();
        assert_eq!(eval_neg_cf(&s), x, "{}/{}", p, q);
        assert!(s.as_slice().iter().all(|a| *a >= 2u32.into()));
    }
}

#[test]
fn dual_is_involution_and_complements() {
    for (p, q) in coprime_pairs(200) {
        let s = expand_neg_cf(&frac(p, q)).unwrap();
        let d = dual_point_rule(&s);
        assert_eq!(eval_neg_cf(&d), frac(p, p - q), "{}/{}", p, q);
        assert_eq!(dual_point_rule(&d), s);
    }
}

#[test]
fn reversal_gives_star_inverse() {
    for (p, q) in coprime_pairs(200) {
        let s = expand_neg_cf(&frac(p, q)).unwrap();
        let qs = star_inverse_i64(q as i64, p as i64).unwrap() as u64;
        assert_eq!(eval_neg_cf(&s.reversed()), frac(p, qs), "{}/{}", p, q);
    }
}

#[test]
fn star_inverse_table() {
    assert_eq!(star_inverse_i64(2, 7), Ok(4));
    assert_eq!(star_inverse_i64(-1, 5), Ok(4));
    assert_eq!(star_inverse_i64(1, 2), Ok(1));
    assert!(star_inverse_i64(2, 4).is_err());
    let m = num_traits::pow(BigInt::from(10), 30);
    let big = star_inverse(&BigInt::from(3), &m).unwrap();
    assert_eq!((big * 3u32) % &m, BigInt::from(1));
}

#[test]
fn text_round_trip() {
    for (p, q) in coprime_pairs(40) {
        let x = frac(p, q);
        assert_eq!(x.to_string().parse::<PositiveRational>().unwrap(), x);
        let s = expand_neg_cf(&x).unwrap();
        assert_eq!(s.to_string().parse::<CoeffSeq>().unwrap(), s);
    }
}

proptest! {
    #[test]
    fn any_sequence_round_trips(v in prop::collection::vec(2u64..12, 1..12)) {
        let s = CoeffSeq::from_u64s(&v).unwrap();
        let x = eval_neg_cf(&s);
        prop_assert_eq!(expand_neg_cf(&x).unwrap(), s.clone());
        prop_assert_eq!(dual_point_rule(&dual_point_rule(&s)), s.clone());
        // p is invariant under reversal; numerator equals the continuant
        let r = eval_neg_cf(&s.reversed());
        prop_assert_eq!(r.numer(), x.numer());
    }

    #[test]
    fn large_fractions(p in 3u64..100_000, q in 1u64..100_000) {
        prop_assume!(q < p && p.gcd(&q) == 1);
        let x = frac(p, q);
        let s = expand_neg_cf(&x).unwrap();
        prop_assert_eq!(eval_neg_cf(&s), x);
        prop_assert_eq!(eval_neg_cf(&dual_point_rule(&s)), frac(p, p - q));
    }
}
