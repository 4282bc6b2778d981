//! Elements of `Z[zeta_p]`, realized as [`ResiduePoly`] with `zeta` the class
//! of `q`: products of `1 - zeta^k`, the quadratic Gauss sum, Galois
//! automorphisms, and the exact determination of the real class number.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::check_odd_prime;
use crate::error::{Error, Result};
use crate::polymod::ResiduePoly;
use crate::quadratic::{self, fundamental_unit, legendre, residue_sets, ResidueSets};

/// Same canonical representation as [`ResiduePoly`]; read `q` as `zeta_p`.
pub type CyclotomicElement = ResiduePoly;

/// `a * (1 - zeta^k)` as a shift-and-subtract on the cyclic lift.
fn mul_one_minus_root(a: &CyclotomicElement, k: u64) -> CyclotomicElement {
    let p = a.prime() as usize;
    let k = (k % p as u64) as usize;
    let src = a.to_cyclic();
    let mut out = src.clone();
    for (i, c) in src.iter().enumerate() {
        if !c.is_zero() {
            out[(i + k) % p] -= c;
        }
    }
    ResiduePoly::from_cyclic(a.prime(), out)
}

/// `prod_{k in S} (1 - zeta^k)`.
pub fn root_product(p: u64, exponents: &[u32]) -> Result<CyclotomicElement> {
    let prime = check_odd_prime(p)?;
    let mut acc = ResiduePoly::one(prime);
    for &k in exponents {
        if k == 0 || k >= prime {
            return Err(Error::ExponentOutOfRange {
                exponent: k as u64,
                max: p - 1,
            });
        }
        acc = mul_one_minus_root(&acc, k as u64);
    }
    Ok(acc)
}

/// `Pi_r = prod_{j=1}^{(p-1)/2} (1 - zeta^(r j))`.
pub fn pi_r(p: u64, r: i64) -> Result<CyclotomicElement> {
    let prime = check_odd_prime(p)?;
    let r = r.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::NotCoprime { p: prime, value: r as i64 });
    }
    let mut acc = ResiduePoly::one(prime);
    for j in 1..=(p - 1) / 2 {
        acc = mul_one_minus_root(&acc, (r * j) % p);
    }
    Ok(acc)
}

/// `sum_{j=1}^{p-1} (j/p) zeta^j`, which is `sqrt(p)` for `p ≡ 1 (mod 4)`.
pub fn gauss_sum(p: u64) -> Result<CyclotomicElement> {
    let prime = check_odd_prime(p)?;
    if prime % 4 != 1 {
        return Err(Error::WrongResidueClass { p: prime, expected: 1 });
    }
    let cyclic = (0..p)
        .map(|j| BigInt::from(legendre(j as i64, p)))
        .collect();
    Ok(ResiduePoly::from_cyclic(prime, cyclic))
}

/// `sigma_s: zeta -> zeta^s`.
pub fn automorphism(a: &CyclotomicElement, s: i64) -> Result<CyclotomicElement> {
    let p = a.prime() as u64;
    let s = s.rem_euclid(p as i64) as u64;
    if s == 0 {
        return Err(Error::NotCoprime {
            p: a.prime(),
            value: s as i64,
        });
    }
    let mut out = vec![BigInt::zero(); p as usize];
    for (i, c) in a.coeffs().iter().enumerate() {
        out[((i as u64 * s) % p) as usize] = c.clone();
    }
    Ok(ResiduePoly::from_cyclic(a.prime(), out))
}

/// The two sides of a named identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sides {
    Ring(CyclotomicElement, CyclotomicElement),
    Integer(BigInt, BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub holds: bool,
    pub sides: Sides,
}

impl IdentityOutcome {
    fn ring(name: &'static str, lhs: CyclotomicElement, rhs: CyclotomicElement) -> Self {
        IdentityOutcome {
            name,
            holds: lhs == rhs,
            sides: Sides::Ring(lhs, rhs),
        }
    }

    /// Compares two integers modulo `m`.
    fn congruence(name: &'static str, lhs: BigInt, rhs: BigInt, m: u64) -> Self {
        let m = BigInt::from(m);
        let (lhs, rhs) = (lhs.mod_floor(&m), rhs.mod_floor(&m));
        IdentityOutcome {
            name,
            holds: lhs == rhs,
            sides: Sides::Integer(lhs, rhs),
        }
    }
}

impl fmt::Display for IdentityOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds { "holds" } else { "FAILS" };
        write!(f, "{}: {status}", self.name)
    }
}

fn signed_monomial(p: u32, sign: i64, e: i64) -> CyclotomicElement {
    ResiduePoly::monomial_signed(p, e).scalar_mul(&BigInt::from(sign))
}

/// Every exact identity used to establish the congruences for `p`.
///
/// For `p ≡ 3 (mod 4)`, `h_minus_p` is `h(-p)`; it is ignored otherwise.
pub fn proof_identity_suite(p: u64, h_minus_p: Option<u64>) -> Result<Vec<IdentityOutcome>> {
    let prime = check_odd_prime(p)?;
    if prime < 5 {
        return Err(Error::PrimeTooSmall { p: prime, min: 5 });
    }
    let sets = residue_sets(p)?;
    let u = root_product(p, &sets.residues)?;
    let v = root_product(p, &sets.non_residues)?;
    let mut out = vec![IdentityOutcome::ring(
        "uv-equals-p",
        &u * &v,
        ResiduePoly::constant(prime, p),
    )];
    if prime % 4 == 3 {
        let h = match h_minus_p {
            Some(h) => h,
            None => quadratic::class_number_imag(p)?,
        };
        out.extend(identities_3_mod_4(p, &sets, &u, &v, h)?);
    } else {
        out.extend(identities_1_mod_4(p, &sets, &u)?);
    }
    Ok(out)
}

fn identities_3_mod_4(
    p: u64,
    sets: &ResidueSets,
    u: &CyclotomicElement,
    v: &CyclotomicElement,
    h_minus_p: u64,
) -> Result<Vec<IdentityOutcome>> {
    let prime = sets.prime;
    let mut out = Vec::new();
    out.push(IdentityOutcome::ring("u-equals-minus-v", u.clone(), -v));

    let residue_sum: u64 = sets.residues.iter().map(|&k| k as u64).sum();
    out.push(IdentityOutcome::congruence(
        "sum-residues-zero",
        residue_sum.into(),
        BigInt::zero(),
        p,
    ));

    let upper = sets.upper_residues();
    let upper_sum: u64 = upper.iter().map(|&k| 16 * k as u64).sum();
    out.push(IdentityOutcome::congruence(
        "sum-upper-residues-16k-one",
        upper_sum.into(),
        BigInt::one(),
        p,
    ));

    out.push(IdentityOutcome::congruence(
        "h-minus-p-mod-4",
        h_minus_p.into(),
        BigInt::from(-1 - 2 * sets.lower_non_residue_count() as i64),
        4,
    ));

    // W = W_+ W_- with W_- read as a product over M' ∩ Q.
    let (mut w_plus, mut w_minus) = (ResiduePoly::one(prime), ResiduePoly::one(prime));
    for &j in &sets.lower_half {
        if sets.is_residue(j) {
            w_plus = mul_one_minus_root(&w_plus, 16 * j as u64);
        } else {
            w_minus = mul_one_minus_root(&w_minus, 16 * j as u64);
        }
    }
    let w = &w_plus * &w_minus;
    let twist = upper.iter().fold(ResiduePoly::one(prime), |acc, &k| {
        &acc * &signed_monomial(prime, -1, -16 * k as i64)
    });
    out.push(IdentityOutcome::ring(
        "w-minus-product-reading",
        &w_plus * &w_minus,
        u * &twist,
    ));

    let sign = if h_minus_p.div_ceil(2).is_multiple_of(2) { 1 } else { -1 };
    out.push(IdentityOutcome::ring(
        "u-over-w",
        u.clone(),
        &w * &signed_monomial(prime, sign, 1),
    ));
    Ok(out)
}

fn identities_1_mod_4(
    p: u64,
    sets: &ResidueSets,
    u: &CyclotomicElement,
) -> Result<Vec<IdentityOutcome>> {
    let prime = sets.prime;
    let sqrt_p = gauss_sum(p)?;
    let mut out = Vec::new();

    out.push(IdentityOutcome::ring(
        "gauss-sum-squared",
        &sqrt_p * &sqrt_p,
        ResiduePoly::constant(prime, p),
    ));
    out.push(IdentityOutcome::ring(
        "gauss-sum-sigma4",
        automorphism(&sqrt_p, 4)?,
        sqrt_p.clone(),
    ));
    let non_residue_sum = sets
        .non_residues
        .iter()
        .fold(ResiduePoly::zero(prime), |acc, &j| &acc + &ResiduePoly::monomial(prime, j as u64));
    out.push(IdentityOutcome::ring(
        "gauss-sum-nonresidue-form",
        sqrt_p.clone(),
        &ResiduePoly::constant(prime, -1) - &non_residue_sum.scalar_mul(&BigInt::from(2)),
    ));

    // s = a residue other than 1 (p ≥ 5 guarantees 4 is one)
    out.push(IdentityOutcome::ring(
        "u-residue-automorphism-invariant",
        automorphism(u, 4)?,
        u.clone(),
    ));

    let pi4 = pi_r(p, 4)?;
    let pi16 = pi_r(p, 16)?;
    out.push(IdentityOutcome::ring(
        "pi-r-norm",
        &pi4 * &automorphism(&pi4, -1)?,
        ResiduePoly::constant(prime, p),
    ));
    out.push(IdentityOutcome::ring(
        "pi16-equals-sigma4-pi4",
        pi16.clone(),
        automorphism(&pi4, 4)?,
    ));
    let phase = ((p as u128 * p as u128 - 1) / 4 % p as u128) as u64;
    out.push(IdentityOutcome::ring(
        "pi4-phase",
        pi4,
        &ResiduePoly::monomial(prime, phase) * &sqrt_p,
    ));
    out.push(IdentityOutcome::ring(
        "pi16-phase",
        pi16,
        &ResiduePoly::monomial_signed(prime, -1) * &sqrt_p,
    ));
    Ok(out)
}

/// `h(p)` for `p ≡ 1 (mod 4)`: the least `h ≥ 1` with
/// `2V = d p + c sqrt(p)` where `V = prod_{k in N}(1 - zeta^k)` and
/// `eps^h = (c + d sqrt(p))/2`.
///
/// On the non-residue coordinates the right side is `-2c`, so once `c`
/// exceeds the largest coefficient of `2V` no larger `h` can match.
pub fn class_number_real_exact(p: u64) -> Result<u64> {
    let prime = check_odd_prime(p)?;
    if prime % 4 != 1 {
        return Err(Error::WrongResidueClass { p: prime, expected: 1 });
    }
    let sets = residue_sets(p)?;
    let two_v = root_product(p, &sets.non_residues)?.scalar_mul(&BigInt::from(2));
    let bound = two_v.max_abs_coeff();
    let sqrt_p = gauss_sum(p)?;
    let eps = fundamental_unit(p)?;
    let mut power = eps.clone();
    loop {
        let rhs = &ResiduePoly::constant(prime, &power.y * BigInt::from(p)) + &sqrt_p.scalar_mul(&power.x);
        if rhs == two_v {
            return Ok(power.power);
        }
        if power.x > bound {
            return Err(Error::ClassNumberSearchExhausted {
                p: prime,
                bound: bound.to_string(),
            });
        }
        power = power.compose(&eps)?;
    }
}

/// Result of the floating-point class number estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericClassNumber {
    pub h: u64,
    /// Distance of `ln(V/sqrt p)/ln(eps)` from `h`.
    pub residue: f64,
    /// Working precision in bits.
    pub bits: usize,
}

const NUMERIC_TOLERANCE: f64 = 1e-6;
const NUMERIC_ATTEMPTS: usize = 3;

/// `h(p) ≈ ln(V / sqrt p) / ln(eps)` with `V = prod_{k in N} 2 sin(pi k / p)`
/// evaluated in multiprecision floating point.
///
/// Starts at `64 + 4p` bits and doubles the precision when the quotient is
/// not within `1e-6` of an integer.
pub fn class_number_real_numeric(p: u64) -> Result<NumericClassNumber> {
    let prime = check_odd_prime(p)?;
    if prime % 4 != 1 {
        return Err(Error::WrongResidueClass { p: prime, expected: 1 });
    }
    let sets = residue_sets(p)?;
    let eps = fundamental_unit(p)?;
    let mut bits = 64 + 4 * p as usize;
    let mut last = None;
    for _ in 0..NUMERIC_ATTEMPTS {
        let est = numeric_estimate(&sets, &eps, bits);
        if est.residue <= NUMERIC_TOLERANCE {
            return Ok(est);
        }
        last = Some(est);
        bits *= 2;
    }
    let est = last.expect("at least one attempt");
    Err(Error::ImpreciseNumeric {
        p: prime,
        residue: est.residue,
        bits: est.bits,
    })
}

fn numeric_estimate(sets: &ResidueSets, eps: &quadratic::PellUnit, bits: usize) -> NumericClassNumber {
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().expect("astro-float constants");
    let p = sets.prime as u64;
    let big = |n: u64| BigFloat::from_u64(n, bits);
    let parse = |n: &BigInt, cc: &mut Consts| BigFloat::parse(&n.to_string(), Radix::Dec, bits, rm, cc);

    let pi = cc.pi(bits, rm);
    let pi_over_p = pi.div(&big(p), bits, rm);
    let two = big(2);
    let mut v = big(1);
    for &k in &sets.non_residues {
        let s = pi_over_p.mul(&big(k as u64), bits, rm).sin(bits, rm, &mut cc);
        v = v.mul(&two.mul(&s, bits, rm), bits, rm);
    }
    let sqrt_p = big(p).sqrt(bits, rm);
    let eps_value = parse(&eps.x, &mut cc)
        .add(&parse(&eps.y, &mut cc).mul(&sqrt_p, bits, rm), bits, rm)
        .div(&two, bits, rm);
    let ratio = v
        .div(&sqrt_p, bits, rm)
        .ln(bits, rm, &mut cc)
        .div(&eps_value.ln(bits, rm, &mut cc), bits, rm);

    let half = BigFloat::from_f64(0.5, bits);
    let mut h = 0u64;
    while big(h).add(&half, bits, rm) < ratio {
        h += 1;
    }
    let diff = ratio.sub(&big(h), bits, rm).abs();
    NumericClassNumber {
        h,
        residue: to_f64(&diff),
        bits,
    }
}

fn to_f64(x: &BigFloat) -> f64 {
    // astro-float has no direct conversion; go through its decimal rendering.
    x.to_string().parse().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_product_examples() {
        assert_eq!(root_product(7, &[]).unwrap(), ResiduePoly::one(7));
        for p in [3u64, 5, 7, 11, 13, 31] {
            let all: Vec<u32> = (1..p as u32).collect();
            assert_eq!(root_product(p, &all).unwrap(), ResiduePoly::constant(p as u32, p));
        }
        let u = root_product(7, &[1, 2, 4]).unwrap();
        let v = root_product(7, &[3, 5, 6]).unwrap();
        assert_eq!(u, -&v);
        assert!(matches!(root_product(7, &[0]), Err(Error::ExponentOutOfRange { .. })));
    }

    #[test]
    fn pi_r_examples() {
        let z = |e| ResiduePoly::monomial(5, e);
        let one = ResiduePoly::one(5);
        assert_eq!(pi_r(5, 1).unwrap(), &(&one - &z(1)) * &(&one - &z(2)));
        for r in [1, 2, 3, 4, 16, -16] {
            let pr = pi_r(13, r).unwrap();
            assert_eq!(&pr * &automorphism(&pr, -1).unwrap(), ResiduePoly::constant(13, 13));
        }
        assert_eq!(pi_r(13, 16).unwrap(), automorphism(&pi_r(13, 4).unwrap(), 4).unwrap());
        assert!(matches!(pi_r(13, 26), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn gauss_sum_examples() {
        for p in [5u64, 13, 17, 29] {
            let g = gauss_sum(p).unwrap();
            let prime = p as u32;
            assert_eq!(&g * &g, ResiduePoly::constant(prime, p));
            assert_eq!(automorphism(&g, 4).unwrap(), g);
        }
        assert!(gauss_sum(7).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let a = ResiduePoly::from_i64s(11, &[1, -2, 0, 5, 0, 0, 7, 0, 0, 3]).unwrap();
        let b = ResiduePoly::from_i64s(11, &[0, 4, 4, 0, -1, 0, 0, 2, 0, 0]).unwrap();
        assert_eq!(automorphism(&a, 1).unwrap(), a);
        for s in 1..11 {
            for t in 1..11 {
                let lhs = automorphism(&automorphism(&a, t).unwrap(), s).unwrap();
                assert_eq!(lhs, automorphism(&a, s * t % 11).unwrap());
            }
            let sa = automorphism(&a, s).unwrap();
            let sb = automorphism(&b, s).unwrap();
            assert_eq!(automorphism(&(&a * &b), s).unwrap(), &sa * &sb);
        }
        assert!(automorphism(&a, 22).is_err());
    }

    #[test]
    fn identity_suite_examples() {
        for p in [7u64, 11, 13, 17, 19, 23] {
            for o in proof_identity_suite(p, None).unwrap() {
                assert!(o.holds, "p={p}: {o}");
            }
        }
        let names: Vec<_> = proof_identity_suite(13, None).unwrap().iter().map(|o| o.name).collect();
        assert!(names.contains(&"pi16-phase"));
        let s = proof_identity_suite(11, None).unwrap();
        let sum = s.iter().find(|o| o.name == "sum-residues-zero").unwrap();
        assert_eq!(sum.sides, Sides::Integer(BigInt::zero(), BigInt::zero()));
    }

    #[test]
    fn wrong_class_number_breaks_u_over_w() {
        // h(-7) = 1; feeding 3 flips the sign of zeta
        let s = proof_identity_suite(7, Some(3)).unwrap();
        let o = s.iter().find(|o| o.name == "u-over-w").unwrap();
        assert!(!o.holds);
    }

    #[test]
    fn class_number_real_examples() {
        assert_eq!(class_number_real_exact(5), Ok(1));
        assert_eq!(class_number_real_exact(13), Ok(1));
        assert_eq!(class_number_real_exact(61), Ok(1));
        assert!(class_number_real_exact(7).is_err());
        assert_eq!(class_number_real_numeric(5).unwrap().h, 1);
        assert_eq!(class_number_real_numeric(13).unwrap().h, 1);
    }
}
