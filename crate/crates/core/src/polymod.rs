//! Exact arithmetic in `Z[q]/([p]_q)`, where `[p]_q = 1 + q + ... + q^(p-1)`.
//!
//! Every element has a unique representative in the basis `{1, q, ..., q^(p-2)}`,
//! so ring equality is equality of coefficient vectors. Reduction folds
//! exponents modulo `p` (using `q^p = 1`) and then eliminates the single
//! `q^(p-1)` coefficient via `q^(p-1) = -(1 + q + ... + q^(p-2))`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::check_odd_prime;
use crate::error::{Error, Result};

/// Canonical element of `Z[q]/([p]_q)`.
///
/// `coeffs[i]` is the coefficient of `q^i`; the vector always has length `p - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResiduePoly {
    prime: u32,
    coeffs: Vec<BigInt>,
}

/// Unreduced polynomial with arbitrary nonnegative exponents; input to [`reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawPoly {
    pub prime: u64,
    pub terms: BTreeMap<u64, BigInt>,
}

impl RawPoly {
    pub fn new(prime: u64) -> Self {
        RawPoly {
            prime,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I, C>(prime: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigInt>,
    {
        let mut raw = RawPoly::new(prime);
        for (e, c) in terms {
            raw.add_term(e, c);
        }
        raw
    }

    pub fn add_term(&mut self, exponent: u64, coeff: impl Into<BigInt>) {
        *self.terms.entry(exponent).or_insert_with(BigInt::zero) += coeff.into();
    }
}

/// Reduces a raw polynomial to its canonical representative.
pub fn reduce(raw: &RawPoly) -> Result<ResiduePoly> {
    let p = check_odd_prime(raw.prime)?;
    let mut cyclic = vec![BigInt::zero(); p as usize];
    for (&e, c) in &raw.terms {
        cyclic[(e % p as u64) as usize] += c;
    }
    Ok(ResiduePoly::from_cyclic(p, cyclic))
}

impl ResiduePoly {
    pub fn zero(p: u32) -> Self {
        ResiduePoly {
            prime: p,
            coeffs: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: impl Into<BigInt>) -> Self {
        let mut r = Self::zero(p);
        r.coeffs[0] = c.into();
        r
    }

    /// Canonical form of `q^e`.
    pub fn monomial(p: u32, e: u64) -> Self {
        let e = (e % p as u64) as usize;
        let mut r = Self::zero(p);
        if e == p as usize - 1 {
            r.coeffs.iter_mut().for_each(|c| *c = -BigInt::one());
        } else {
            r.coeffs[e] = BigInt::one();
        }
        r
    }

    /// `q^e` for a signed exponent, e.g. `q^(-1) = q^(p-1)`.
    pub fn monomial_signed(p: u32, e: i64) -> Self {
        Self::monomial(p, e.rem_euclid(p as i64) as u64)
    }

    /// Validated constructor from the coefficients of `1, q, ..., q^(p-2)`.
    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        let prime = check_odd_prime(p)?;
        if coeffs.len() != prime as usize - 1 {
            return Err(Error::BadLength {
                len: coeffs.len(),
                expected: prime as usize - 1,
            });
        }
        Ok(ResiduePoly { prime, coeffs })
    }

    /// Like [`from_coeffs`](Self::from_coeffs) for small integer coefficients.
    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(p, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Canonicalizes a vector indexed by exponents `0..p` (a residue of `Z[q]/(q^p - 1)`).
    pub(crate) fn from_cyclic(p: u32, mut cyclic: Vec<BigInt>) -> Self {
        debug_assert_eq!(cyclic.len(), p as usize);
        let top = cyclic.pop().expect("p >= 3");
        if !top.is_zero() {
            for c in &mut cyclic {
                *c -= &top;
            }
        }
        ResiduePoly {
            prime: p,
            coeffs: cyclic,
        }
    }

    /// Lifts to a length-`p` cyclic vector with a zero `q^(p-1)` slot.
    pub(crate) fn to_cyclic(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ResiduePoly {
            prime: self.prime,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ResiduePoly {
            prime: self.prime,
            coeffs,
        })
    }

    /// Schoolbook product with exponent folding, followed by canonicalization.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let p = self.prime as usize;
        // Iterate the sparser operand in the inner loop; theorem products are
        // dense accumulators times sparse q-integer factors.
        let (dense, sparse) = if nonzero_count(&self.coeffs) >= nonzero_count(&other.coeffs) {
            (self, other)
        } else {
            (other, self)
        };
        let sparse_terms: Vec<(usize, &BigInt)> = sparse
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in dense.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &sparse_terms {
                let k = if i + j >= p { i + j - p } else { i + j };
                mul_acc(&mut acc[k], a, b);
            }
        }
        Ok(Self::from_cyclic(self.prime, acc))
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        ResiduePoly {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Value at `q = 1`, reduced into `[0, p)`.
    ///
    /// Well defined on residue classes since `[p]_1 = p`.
    pub fn eval_at_one_mod_p(&self) -> u64 {
        let sum: BigInt = self.coeffs.iter().sum();
        sum.mod_floor(&BigInt::from(self.prime))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// The exponent `e` when `self == ±q^e`, together with the sign.
    pub fn as_signed_monomial(&self) -> Option<(i8, u32)> {
        let p = self.prime;
        for sign in [1i8, -1] {
            for e in 0..p {
                if *self == Self::monomial(p, e as u64).scalar_mul(&BigInt::from(sign)) {
                    return Some((sign, e));
                }
            }
        }
        None
    }
}

fn nonzero_count(v: &[BigInt]) -> usize {
    v.iter().filter(|c| !c.is_zero()).count()
}

#[inline]
fn mul_acc(acc: &mut BigInt, a: &BigInt, b: &BigInt) {
    if b.is_one() {
        *acc += a;
    } else if b.is_negative() && b.magnitude().is_one() {
        *acc -= a;
    } else {
        *acc += a * b;
    }
}

impl fmt::Debug for ResiduePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResiduePoly(p={}, {})", self.prime, self)
    }
}

/// Renders as e.g. `2 + q^2 + q^3` or `-2q - q^3`.
impl fmt::Display for ResiduePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

// Operator forms panic on mismatched primes; use the `try_*` methods when the
// operands may come from different rings.

impl Add for &ResiduePoly {
    type Output = ResiduePoly;
    fn add(self, rhs: &ResiduePoly) -> ResiduePoly {
        self.try_add(rhs).expect("ring mismatch in add")
    }
}

impl Sub for &ResiduePoly {
    type Output = ResiduePoly;
    fn sub(self, rhs: &ResiduePoly) -> ResiduePoly {
        self.try_sub(rhs).expect("ring mismatch in sub")
    }
}

impl Mul for &ResiduePoly {
    type Output = ResiduePoly;
    fn mul(self, rhs: &ResiduePoly) -> ResiduePoly {
        self.try_mul(rhs).expect("ring mismatch in mul")
    }
}

impl Neg for &ResiduePoly {
    type Output = ResiduePoly;
    fn neg(self) -> ResiduePoly {
        ResiduePoly {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
