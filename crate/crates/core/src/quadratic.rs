//! Quadratic-field data attached to a prime `p`: Legendre symbols, the
//! residue/non-residue partition of `[1, p-1]`, the class number of
//! `Q(sqrt(-p))`, the fundamental unit of `Q(sqrt(p))` and its powers.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_prime, pow_mod, rem_floor};
use crate::error::{Error, Result};
use crate::serde_bigint;

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = rem_floor(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSets {
    pub prime: u32,
    /// Quadratic residues in `[1, p-1]`, ascending.
    pub residues: Vec<u32>,
    /// Non-residues in `[1, p-1]`, ascending.
    pub non_residues: Vec<u32>,
    /// `{1, ..., (p-1)/2}`
    pub lower_half: Vec<u32>,
    /// `{(p+1)/2, ..., p-1}`
    pub upper_half: Vec<u32>,
}

impl ResidueSets {
    pub fn is_residue(&self, k: u32) -> bool {
        self.residues.binary_search(&k).is_ok()
    }

    /// `|M ∩ N|`: non-residues in the lower half.
    pub fn lower_non_residue_count(&self) -> usize {
        self.lower_half.iter().filter(|&&k| !self.is_residue(k)).count()
    }

    /// `M' ∩ Q`: residues in the upper half.
    pub fn upper_residues(&self) -> Vec<u32> {
        self.upper_half
            .iter()
            .copied()
            .filter(|&k| self.is_residue(k))
            .collect()
    }
}

pub fn residue_sets(p: u64) -> Result<ResidueSets> {
    let prime = check_odd_prime(p)?;
    let (residues, non_residues) = (1..prime).partition(|&k| legendre(k as i64, p) == 1);
    let half = (prime - 1) / 2;
    Ok(ResidueSets {
        prime,
        residues,
        non_residues,
        lower_half: (1..=half).collect(),
        upper_half: (half + 1..prime).collect(),
    })
}

fn check_mod4(p: u64, class: u32) -> Result<u32> {
    let prime = check_odd_prime(p)?;
    if prime % 4 != class {
        return Err(Error::WrongResidueClass { p: prime, expected: class });
    }
    Ok(prime)
}

/// `h(-p) = (2 - (2/p))^{-1} * sum_{k=1}^{(p-1)/2} (k/p)` for `p ≡ 3 (mod 4)`, `p > 3`.
pub fn class_number_imag(p: u64) -> Result<u64> {
    let prime = check_mod4(p, 3)?;
    if prime <= 3 {
        return Err(Error::PrimeTooSmall { p: prime, min: 7 });
    }
    let denominator = 2 - legendre(2, p) as i64;
    let sum: i64 = (1..=(p - 1) / 2).map(|k| legendre(k as i64, p) as i64).sum();
    if sum <= 0 || sum % denominator != 0 {
        return Err(Error::NonIntegralClassNumber {
            p: prime,
            sum,
            denominator,
        });
    }
    Ok((sum / denominator) as u64)
}

/// Number of reduced positive definite forms `ax^2 + bxy + cy^2` with
/// discriminant `-p`, i.e. `h(-p)` for `p ≡ 3 (mod 4)`, `p > 3`.
///
/// Independent of the character-sum formula; used as its cross-check.
pub fn class_number_imag_forms(p: u64) -> Result<u64> {
    let prime = check_mod4(p, 3)?;
    if prime <= 3 {
        return Err(Error::PrimeTooSmall { p: prime, min: 7 });
    }
    let disc = p as i64;
    let mut count = 0;
    // reduced: |b| <= a <= c, with b >= 0 when |b| = a or a = c; a <= sqrt(p/3)
    let mut a = 1i64;
    while 3 * a * a <= disc {
        for b in -a + 1..=a {
            let num = b * b + disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    Ok(count)
}

/// `eps^k = (x + y sqrt(p)) / 2` for the fundamental unit `eps` of `Q(sqrt(p))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellUnit {
    pub prime: u32,
    #[serde(with = "serde_bigint")]
    pub x: BigInt,
    #[serde(with = "serde_bigint")]
    pub y: BigInt,
    /// `+1` or `-1`; satisfies `x^2 - p y^2 = 4 norm`.
    pub norm: i8,
    pub power: u64,
}

impl PellUnit {
    pub fn satisfies_norm_equation(&self) -> bool {
        let lhs = &self.x * &self.x - BigInt::from(self.prime) * &self.y * &self.y;
        lhs == BigInt::from(4 * self.norm as i64) && self.x.is_even() == self.y.is_even()
    }

    /// Product of two half-integer units in the same field.
    pub fn compose(&self, other: &PellUnit) -> Result<PellUnit> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        let p = BigInt::from(self.prime);
        let two = BigInt::from(2);
        let x_num = &self.x * &other.x + &p * &self.y * &other.y;
        let y_num = &self.x * &other.y + &other.x * &self.y;
        // Both numerators are even because x ≡ y (mod 2) in each factor.
        debug_assert!(x_num.is_even() && y_num.is_even());
        Ok(PellUnit {
            prime: self.prime,
            x: x_num / &two,
            y: y_num / &two,
            norm: self.norm * other.norm,
            power: self.power + other.power,
        })
    }
}

/// Fundamental unit of `Q(sqrt(p))` for `p ≡ 1 (mod 4)`.
///
/// Walks the continued fraction of `omega = (1 + sqrt(p))/2`; the first
/// convergent `h/k` with `N(h - k omega) = ±1` yields
/// `eps = h - k omega' = ((2h - k) + k sqrt(p))/2`.
pub fn fundamental_unit(p: u64) -> Result<PellUnit> {
    let prime = check_mod4(p, 1)?;
    let d = p as i64;
    let s = p.sqrt() as i64;
    let quarter = BigInt::from((1 - d) / 4);

    // omega = (P + sqrt d)/Q
    let (mut pp, mut qq) = (1i64, 2i64);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    loop {
        let a = Integer::div_floor(&(pp + s), &qq);
        let h_next = &h * a + &h_prev;
        let k_next = &k * a + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);

        let norm = &h * &h - &h * &k + &k * &k * &quarter;
        if norm.abs().is_one() {
            let x = BigInt::from(2) * &h - &k;
            let unit = PellUnit {
                prime,
                x,
                y: k,
                norm: if norm.is_positive() { 1 } else { -1 },
                power: 1,
            };
            debug_assert!(unit.satisfies_norm_equation());
            return Ok(unit);
        }

        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
    }
}

/// `u^k` by binary powering in exact half-integer arithmetic.
pub fn unit_power(u: &PellUnit, k: u64) -> Result<PellUnit> {
    if k == 0 {
        return Err(Error::ExponentOutOfRange {
            exponent: 0,
            max: u64::MAX,
        });
    }
    let mut result: Option<PellUnit> = None;
    let mut base = u.clone();
    let mut e = k;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.compose(&base)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.compose(&base)?;
    }
    Ok(result.expect("k >= 1"))
}

/// Integer coefficients of the `p ≡ 1 (mod 4)` congruences.
///
/// With `eps^(2h) = (x + y sqrt p)/2` and `eps^h = (c + d sqrt p)/2`:
/// `A = (x + y)/2`, `B = y`, `C = (c + d)/2`, `D = d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCoefficients {
    #[serde(rename = "A", with = "serde_bigint")]
    pub a: BigInt,
    #[serde(rename = "B", with = "serde_bigint")]
    pub b: BigInt,
    #[serde(rename = "C", with = "serde_bigint")]
    pub c: BigInt,
    #[serde(rename = "D", with = "serde_bigint")]
    pub d: BigInt,
    /// `eps^h`, carrying `(c, d)`.
    pub unit_h: PellUnit,
}

pub fn theorem_coefficients(p: u64, h: u64) -> Result<TheoremCoefficients> {
    check_mod4(p, 1)?;
    theorem_coefficients_for_unit(&fundamental_unit(p)?, h)
}

pub fn theorem_coefficients_for_unit(eps: &PellUnit, h: u64) -> Result<TheoremCoefficients> {
    if h == 0 || h.is_multiple_of(2) {
        return Err(Error::ClassNumberParity { h });
    }
    let unit_h = unit_power(eps, h)?;
    if unit_h.norm != -1 {
        return Err(Error::PositiveNorm { p: eps.prime });
    }
    let unit_2h = unit_h.compose(&unit_h)?;
    let two = BigInt::from(2);
    let halve = |n: BigInt| -> BigInt {
        debug_assert!(n.is_even());
        n / &two
    };
    Ok(TheoremCoefficients {
        a: halve(&unit_2h.x + &unit_2h.y),
        b: unit_2h.y.clone(),
        c: halve(&unit_h.x + &unit_h.y),
        d: unit_h.y.clone(),
        unit_h,
    })
}
