use num_bigint::BigInt;
use num_traits::Zero;

/// Classical long division by the monic `1 + q + ... + q^(p-1)` over Z.
/// Returns (quotient, remainder) with `deg remainder < p - 1`.
pub fn long_divide(dividend: &[BigInt], p: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut rem = dividend.to_vec();
    let divisor_deg = p - 1;
    if rem.len() < p - 1 {
        rem.resize(p - 1, BigInt::zero());
        return (vec![], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - divisor_deg];
    for top in (divisor_deg..rem.len()).rev() {
        let c = rem[top].clone();
        if c.is_zero() {
            continue;
        }
        let shift = top - divisor_deg;
        quot[shift] += &c;
        for i in 0..p {
            rem[shift + i] -= &c;
        }
    }
    rem.truncate(p - 1);
    (quot, rem)
}
