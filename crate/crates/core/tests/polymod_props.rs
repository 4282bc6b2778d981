mod common;

use common::long_divide;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use qwilson_core::{reduce, RawPoly, ResiduePoly};

const PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn element(p: u64) -> impl Strategy<Value = ResiduePoly> {
    prop::collection::vec(-100i64..=100, (p - 1) as usize)
        .prop_map(move |c| ResiduePoly::from_i64s(p, &c).unwrap())
}

fn three_elements() -> impl Strategy<Value = (ResiduePoly, ResiduePoly, ResiduePoly)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (element(p), element(p), element(p)))
}

fn dense(raw: &RawPoly) -> Vec<BigInt> {
    let len = raw.terms.keys().max().map_or(0, |&e| e as usize + 1);
    let mut v = vec![BigInt::zero(); len];
    for (&e, c) in &raw.terms {
        v[e as usize] += c;
    }
    v
}

fn raw_poly() -> impl Strategy<Value = RawPoly> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13]).prop_flat_map(|p| {
        prop::collection::vec((0u64..60, -1000i64..=1000), 0..25)
            .prop_map(move |terms| RawPoly::from_terms(p, terms))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in three_elements()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &ResiduePoly::one(a.prime()), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn reduce_matches_long_division(raw in raw_poly()) {
        let p = raw.prime as usize;
        let f = dense(&raw);
        let (quot, rem) = long_divide(&f, p);
        let canonical = reduce(&raw).unwrap();
        prop_assert_eq!(canonical.coeffs(), rem.as_slice());

        // f == quot * [p]_q + rem exactly over Z
        let mut rebuilt = vec![BigInt::zero(); f.len().max(p - 1)];
        for (i, q) in quot.iter().enumerate() {
            for k in 0..p {
                rebuilt[i + k] += q;
            }
        }
        for (i, r) in rem.iter().enumerate() {
            rebuilt[i] += r;
        }
        let mut expected = f.clone();
        expected.resize(rebuilt.len(), BigInt::zero());
        prop_assert_eq!(rebuilt, expected);
    }

    #[test]
    fn reduce_is_idempotent(a in prop::sample::select(PRIMES.to_vec()).prop_flat_map(element)) {
        let raw = RawPoly::from_terms(
            a.prime() as u64,
            a.coeffs().iter().enumerate().map(|(i, c)| (i as u64, c.clone())),
        );
        prop_assert_eq!(reduce(&raw).unwrap(), a);
    }

    #[test]
    fn monomials_fold_and_multiply(p in prop::sample::select(PRIMES.to_vec()), e in 0u64..10_000, f in 0u64..10_000) {
        let prime = p as u32;
        prop_assert_eq!(ResiduePoly::monomial(prime, e), ResiduePoly::monomial(prime, e % p));
        prop_assert_eq!(
            &ResiduePoly::monomial(prime, e) * &ResiduePoly::monomial(prime, f),
            ResiduePoly::monomial(prime, e + f)
        );
    }

    #[test]
    fn eval_at_one_is_a_ring_map((a, b, _c) in three_elements()) {
        let p = a.prime() as u64;
        prop_assert_eq!((&a * &b).eval_at_one_mod_p(), a.eval_at_one_mod_p() * b.eval_at_one_mod_p() % p);
        prop_assert_eq!((&a + &b).eval_at_one_mod_p(), (a.eval_at_one_mod_p() + b.eval_at_one_mod_p()) % p);
    }
}

#[test]
fn modulus_vanishes() {
    for p in qwilson_core::arith::primes_in(3, 400) {
        let modulus = RawPoly::from_terms(p, (0..p).map(|e| (e, 1)));
        assert!(reduce(&modulus).unwrap().is_zero(), "p={p}");
    }
}
