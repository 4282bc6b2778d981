//! Small word-sized number theory helpers.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Validates that `n` is an odd prime that fits the ring dimension type.
pub fn check_odd_prime(n: u64) -> Result<u32> {
    if n > 2 && n <= u32::MAX as u64 && is_prime(n) {
        Ok(n as u32)
    } else {
        Err(Error::NotOddPrime(n))
    }
}

/// Primes in `[min, max]`, ascending.
pub fn primes_in(min: u64, max: u64) -> Vec<u64> {
    (min..=max).filter(|&n| is_prime(n)).collect()
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces a signed integer into `[0, m)`.
pub fn rem_floor(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn factorial_mod(n: u64, p: u64) -> u64 {
    (1..=n).fold(1u64 % p, |acc, k| ((acc as u128 * (k % p) as u128) % p as u128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_in(0, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_odd_prime(2).is_err());
        assert!(check_odd_prime(9).is_err());
        assert_eq!(check_odd_prime(499), Ok(499));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(pow_mod(3, 6, 7), 1);
        assert_eq!(inv_mod_prime(2, 5), 3);
        assert_eq!(rem_floor(-1, 7), 6);
        assert_eq!(factorial_mod(6, 13), 720 % 13);
        assert_eq!(factorial_mod(0, 5), 1);
    }
}
