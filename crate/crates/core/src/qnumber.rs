//! q-integers `[n]_{q^m} = 1 + q^m + ... + q^((n-1)m)` and the factorial-type
//! products built from them.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::check_odd_prime;
use crate::error::{Error, Result};
use crate::polymod::ResiduePoly;

/// How a product of q-integer factors is accumulated.
///
/// Both strategies produce identical canonical values; `Schoolbook` goes
/// through the generic ring multiplication, `SlidingWindow` multiplies by
/// each factor with a running window sum along the orbit of `q^m`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductStrategy {
    #[default]
    Schoolbook,
    SlidingWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductFamily {
    /// `prod_{j=1}^{p-1} [j]_{q^(t j)}`
    FullWilson,
    /// `prod_{j=1}^{(p-1)/2} [j]_{q^(t j)}`
    HalfProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QProductSpec {
    pub prime: u32,
    pub family: ProductFamily,
    pub exponent_multiplier: u64,
}

impl QProductSpec {
    pub fn new(prime: u64, family: ProductFamily, exponent_multiplier: u64) -> Result<Self> {
        let prime = check_product_prime(prime)?;
        if exponent_multiplier == 0 {
            return Err(Error::ExponentOutOfRange {
                exponent: 0,
                max: u64::MAX,
            });
        }
        Ok(QProductSpec {
            prime,
            family,
            exponent_multiplier,
        })
    }

    pub fn factor_count(&self) -> u64 {
        match self.family {
            ProductFamily::FullWilson => self.prime as u64 - 1,
            ProductFamily::HalfProduct => (self.prime as u64 - 1) / 2,
        }
    }

    pub fn evaluate(&self, strategy: ProductStrategy) -> ResiduePoly {
        let p = self.prime;
        let t = self.exponent_multiplier % p as u64;
        let mut acc = ResiduePoly::one(p);
        for j in 1..=self.factor_count() {
            let m = (t * j) % p as u64;
            acc = match strategy {
                ProductStrategy::Schoolbook => {
                    &acc * &q_integer_unchecked(p, j, m)
                }
                ProductStrategy::SlidingWindow => mul_by_q_integer(&acc, j, m),
            };
        }
        acc
    }
}

fn check_product_prime(p: u64) -> Result<u32> {
    let p = check_odd_prime(p)?;
    if p < 5 {
        return Err(Error::PrimeTooSmall { p, min: 5 });
    }
    Ok(p)
}

/// Canonical form of `[n]_{q^m}`.
pub fn q_integer(p: u64, n: u64, m: u64) -> Result<ResiduePoly> {
    let p = check_odd_prime(p)?;
    if n == 0 {
        return Err(Error::EmptyQInteger);
    }
    Ok(q_integer_unchecked(p, n, m))
}

fn q_integer_unchecked(p: u32, n: u64, m: u64) -> ResiduePoly {
    let pu = p as u64;
    let m = m % pu;
    // Exponents i*m mod p cycle with period p (or 1 when m = 0).
    let period = if m == 0 { 1 } else { pu };
    let (full, rest) = (n / period, n % period);
    let mut cyclic = vec![BigInt::zero(); p as usize];
    if full > 0 {
        for i in 0..period {
            cyclic[((i * m) % pu) as usize] += full;
        }
    }
    for i in 0..rest {
        cyclic[((i * m) % pu) as usize] += 1u32;
    }
    ResiduePoly::from_cyclic(p, cyclic)
}

/// `a * [n]_{q^m}` in O(p) big-integer additions.
///
/// Along the orbit `k -> k*m mod p` the factor acts as a length-`n` window
/// sum, so each output coefficient is the previous one plus one entry minus
/// another.
fn mul_by_q_integer(a: &ResiduePoly, n: u64, m: u64) -> ResiduePoly {
    let p = a.prime();
    let pu = p as usize;
    let m = (m % p as u64) as usize;
    if m == 0 {
        return a.scalar_mul(&BigInt::from(n));
    }
    if n as usize > pu {
        return a * &q_integer_unchecked(p, n, m as u64);
    }
    let n = n as usize;
    let cyclic = a.to_cyclic();
    let orbit: Vec<usize> = (0..pu).map(|k| (k * m) % pu).collect();
    let at = |k: usize| &cyclic[orbit[k % pu]];

    let mut window = BigInt::zero();
    for i in 0..n {
        window += at(pu - i);
    }
    let mut out = vec![BigInt::zero(); pu];
    out[orbit[0]] = window.clone();
    for k in 1..pu {
        window += at(k);
        window -= at(k + pu - n);
        out[orbit[k]] = window.clone();
    }
    ResiduePoly::from_cyclic(p, out)
}

/// `prod_{j=1}^{p-1} [j]_{q^j}` reduced after every factor.
pub fn wilson_product(p: u64) -> Result<ResiduePoly> {
    wilson_product_with(p, ProductStrategy::Schoolbook)
}

pub fn wilson_product_with(p: u64, strategy: ProductStrategy) -> Result<ResiduePoly> {
    Ok(QProductSpec::new(p, ProductFamily::FullWilson, 1)?.evaluate(strategy))
}

/// `prod_{j=1}^{(p-1)/2} [j]_{q^(t j)}`.
pub fn half_product(p: u64, t: u64) -> Result<ResiduePoly> {
    half_product_with(p, t, ProductStrategy::Schoolbook)
}

pub fn half_product_with(p: u64, t: u64, strategy: ProductStrategy) -> Result<ResiduePoly> {
    Ok(QProductSpec::new(p, ProductFamily::HalfProduct, t)?.evaluate(strategy))
}

/// Checks `(1 - q^j) [j]_{q^j} == 1 - q^(j^2)` in the residue ring.
pub fn q_integer_identity_check(p: u64, j: u64) -> Result<bool> {
    let prime = check_odd_prime(p)?;
    if j == 0 || j >= p {
        return Err(Error::ExponentOutOfRange {
            exponent: j,
            max: p - 1,
        });
    }
    let one = ResiduePoly::one(prime);
    let lhs = &(&one - &ResiduePoly::monomial(prime, j)) * &q_integer_unchecked(prime, j, j);
    let rhs = &one - &ResiduePoly::monomial(prime, (j * j) % p);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymod::{reduce, RawPoly};

    fn raw(p: u64, exps: &[u64]) -> ResiduePoly {
        reduce(&RawPoly::from_terms(p, exps.iter().map(|&e| (e, 1)))).unwrap()
    }

    #[test]
    fn q_integer_examples() {
        for m in [0, 1, 5, 100] {
            assert_eq!(q_integer(11, 1, m).unwrap(), ResiduePoly::one(11));
        }
        assert_eq!(q_integer(7, 3, 48).unwrap(), raw(7, &[0, 6, 5]));
        assert!(q_integer(5, 5, 1).unwrap().is_zero());
        assert_eq!(q_integer(7, 0, 3), Err(Error::EmptyQInteger));
        assert_eq!(q_integer(7, 4, 0).unwrap(), ResiduePoly::constant(7, 4));
        // more terms than the period wraps around the orbit
        assert_eq!(q_integer(5, 12, 2).unwrap(), q_integer(5, 2, 2).unwrap());
    }

    #[test]
    fn wilson_product_examples() {
        let expected = ResiduePoly::from_i64s(5, &[2, 0, 1, 1]).unwrap();
        assert_eq!(wilson_product(5).unwrap(), expected);
        assert_eq!(wilson_product(7).unwrap(), ResiduePoly::constant(7, -1));
        assert_eq!(wilson_product(11).unwrap(), ResiduePoly::constant(11, -1));
        assert_eq!(wilson_product(3), Err(Error::PrimeTooSmall { p: 3, min: 5 }));
        assert_eq!(wilson_product(9), Err(Error::NotOddPrime(9)));
    }

    #[test]
    fn half_product_examples() {
        assert_eq!(half_product(7, 16).unwrap(), -&ResiduePoly::monomial(7, 1));
        assert_eq!(half_product(5, 16).unwrap(), raw(5, &[0, 2]));
        assert_eq!(half_product(5, 1).unwrap(), raw(5, &[0, 2]));
    }

    #[test]
    fn identity_check_examples() {
        assert!(q_integer_identity_check(5, 1).unwrap());
        assert!(q_integer_identity_check(7, 3).unwrap());
        assert!(q_integer_identity_check(11, 10).unwrap());
        assert!(q_integer_identity_check(11, 0).is_err());
        assert!(q_integer_identity_check(11, 11).is_err());
    }

    #[test]
    fn strategies_agree() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 97, 101] {
            assert_eq!(
                wilson_product_with(p, ProductStrategy::Schoolbook).unwrap(),
                wilson_product_with(p, ProductStrategy::SlidingWindow).unwrap(),
                "wilson p={p}"
            );
            for t in [1, 3, 16] {
                assert_eq!(
                    half_product_with(p, t, ProductStrategy::Schoolbook).unwrap(),
                    half_product_with(p, t, ProductStrategy::SlidingWindow).unwrap(),
                    "half p={p} t={t}"
                );
            }
        }
    }

    #[test]
    fn window_multiplication_matches_generic() {
        let a = ResiduePoly::from_i64s(7, &[3, -1, 0, 4, 0, 2]).unwrap();
        for n in 1..=9 {
            for m in 0..14 {
                let expected = &a * &q_integer(7, n, m).unwrap();
                assert_eq!(mul_by_q_integer(&a, n, m), expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn product_spec_validation() {
        assert!(QProductSpec::new(7, ProductFamily::HalfProduct, 0).is_err());
        let s = QProductSpec::new(13, ProductFamily::HalfProduct, 16).unwrap();
        assert_eq!(s.factor_count(), 6);
    }
}
