//! Invariants of the q-integer, quadratic and cyclotomic layers.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use qwilson_core::arith::primes_in;
use qwilson_core::cyclotomic::{
    automorphism, class_number_real_exact, gauss_sum, pi_r, root_product,
};
use qwilson_core::qnumber::{q_integer, q_integer_identity_check, wilson_product};
use qwilson_core::quadratic::{
    class_number_imag, fundamental_unit, legendre, residue_sets, unit_power, PellUnit,
};
use qwilson_core::ResiduePoly;

fn primes_mod4(class: u64, max: u64) -> Vec<u64> {
    primes_in(5, max).into_iter().filter(|p| p % 4 == class).collect()
}

/// Smallest `(x, y)` with `x, y > 0`, `x ≡ y (mod 2)` and `x^2 - p y^2 = ±4`,
/// found by scanning `y`.
fn brute_force_unit(p: u64) -> (u64, u64, i8) {
    for y in 1u64.. {
        for (target, norm) in [(-4i128, -1i8), (4, 1)] {
            let x2 = p as i128 * (y * y) as i128 + target;
            if x2 <= 0 {
                continue;
            }
            let x = (x2 as f64).sqrt().round() as i128;
            for cand in [x - 1, x, x + 1] {
                if cand > 0 && cand * cand == x2 && (cand as u64 % 2) == (y % 2) {
                    return (cand as u64, y, norm);
                }
            }
        }
    }
    unreachable!()
}

#[test]
fn q_integer_degenerates_to_n_at_one() {
    for p in [5u64, 7, 11, 31] {
        for n in 1..3 * p {
            for m in [0, 1, 2, p - 1, p, 16 * n] {
                let v = q_integer(p, n, m).unwrap();
                assert_eq!(v.eval_at_one_mod_p(), n % p, "p={p} n={n} m={m}");
                assert_eq!(v, q_integer(p, n, m % p).unwrap());
            }
        }
    }
}

#[test]
fn q_integer_identity_holds_everywhere() {
    for p in primes_in(3, 61) {
        for j in 1..p {
            assert!(q_integer_identity_check(p, j).unwrap(), "p={p} j={j}");
        }
    }
}

#[test]
fn wilson_product_reduces_to_wilson() {
    for p in primes_in(5, 131) {
        assert_eq!(wilson_product(p).unwrap().eval_at_one_mod_p(), p - 1, "p={p}");
    }
}

#[test]
fn fundamental_unit_matches_brute_force() {
    // y stays small for these p, so a direct search is cheap
    for p in [5u64, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101, 109, 113, 137, 149, 157, 173] {
        let unit = fundamental_unit(p).unwrap();
        let (x, y, norm) = brute_force_unit(p);
        assert_eq!(
            (unit.x.to_u64().unwrap(), unit.y.to_u64().unwrap(), unit.norm),
            (x, y, norm),
            "p={p}"
        );
    }
}

#[test]
fn fundamental_units_have_norm_minus_one() {
    for p in primes_mod4(1, 499) {
        let u = fundamental_unit(p).unwrap();
        let n = &u.x * &u.x - BigInt::from(p) * &u.y * &u.y;
        assert_eq!(n, BigInt::from(-4), "p={p}");
        assert!(u.satisfies_norm_equation());
    }
}

#[test]
fn imaginary_class_number_mod_4_relation() {
    for p in primes_mod4(3, 499) {
        let h = class_number_imag(p).unwrap() as i64;
        let sets = residue_sets(p).unwrap();
        let rhs = -1 - 2 * sets.lower_non_residue_count() as i64;
        assert_eq!(h.rem_euclid(4), rhs.rem_euclid(4), "p={p}");
    }
}

#[test]
fn residue_sets_partition() {
    for p in primes_in(3, 200) {
        let s = residue_sets(p).unwrap();
        assert_eq!(s.residues.len(), s.non_residues.len());
        let mut all: Vec<u32> = s.residues.iter().chain(&s.non_residues).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (1..p as u32).collect::<Vec<_>>());
    }
}

#[test]
fn residue_root_product_is_residue_invariant() {
    for p in primes_mod4(1, 113) {
        let sets = residue_sets(p).unwrap();
        let u = root_product(p, &sets.residues).unwrap();
        for &s in &sets.residues {
            assert_eq!(automorphism(&u, s as i64).unwrap(), u, "p={p} s={s}");
        }
    }
}

#[test]
fn gauss_sum_squares_to_p() {
    for p in primes_mod4(1, 499) {
        let g = gauss_sum(p).unwrap();
        assert_eq!(&g * &g, ResiduePoly::constant(p as u32, p), "p={p}");
    }
}

#[test]
fn real_class_numbers_are_odd() {
    for p in primes_mod4(1, 499) {
        let h = class_number_real_exact(p).unwrap();
        assert_eq!(h % 2, 1, "p={p} h={h}");
    }
}

fn pell(p: u64) -> PellUnit {
    fundamental_unit(p).unwrap()
}

proptest! {
    #[test]
    fn legendre_is_multiplicative(
        p in prop::sample::select(primes_in(3, 500)),
        a in -10_000i64..10_000,
        b in -10_000i64..10_000,
    ) {
        prop_assert_eq!(legendre(a * b, p), legendre(a, p) * legendre(b, p));
    }

    #[test]
    fn unit_powers_compose(p in prop::sample::select(primes_mod4(1, 300)), j in 1u64..12, k in 1u64..12) {
        let u = pell(p);
        let lhs = unit_power(&u, j + k).unwrap();
        let rhs = unit_power(&u, j).unwrap().compose(&unit_power(&u, k).unwrap()).unwrap();
        prop_assert!(lhs.satisfies_norm_equation());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_integer_depends_on_m_mod_p(
        p in prop::sample::select(vec![5u64, 7, 11, 13, 97]),
        n in 1u64..500,
        m in 0u64..5_000,
        k in 0u64..20,
    ) {
        prop_assert_eq!(q_integer(p, n, m).unwrap(), q_integer(p, n, m + k * p).unwrap());
    }

    #[test]
    fn pi_r_norm_is_p(p in prop::sample::select(primes_in(5, 200)), r in -1000i64..1000) {
        prop_assume!(r.rem_euclid(p as i64) != 0);
        let pr = pi_r(p, r).unwrap();
        prop_assert_eq!(&pr * &automorphism(&pr, -1).unwrap(), ResiduePoly::constant(p as u32, p));
    }

    #[test]
    fn automorphisms_are_ring_maps(
        coeffs in prop::collection::vec(-50i64..=50, 2 * 16),
        s in 1i64..17,
    ) {
        let a = ResiduePoly::from_i64s(17, &coeffs[..16]).unwrap();
        let b = ResiduePoly::from_i64s(17, &coeffs[16..]).unwrap();
        let sa = automorphism(&a, s).unwrap();
        let sb = automorphism(&b, s).unwrap();
        prop_assert_eq!(automorphism(&(&a * &b), s).unwrap(), &sa * &sb);
        prop_assert_eq!(automorphism(&(&a + &b), s).unwrap(), &sa + &sb);
    }
}
