//! Truncated integer convolution. Both strategies return identical vectors.

use rug::integer::Order;
use rug::{Assign, Integer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulStrategy {
    Schoolbook,
    /// Pack each operand into one big integer, multiply once, unpack.
    Kronecker,
    /// Kronecker above a size threshold, schoolbook below.
    Auto,
}

const KRONECKER_THRESHOLD: usize = 24;

/// First `len` coefficients of the product of `a` and `b`.
pub fn convolve(a: &[Integer], b: &[Integer], len: usize, strategy: MulStrategy) -> Vec<Integer> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    match strategy {
        MulStrategy::Schoolbook => schoolbook(a, b, len),
        MulStrategy::Kronecker => kronecker(a, b, len),
        MulStrategy::Auto => {
            if a.len().min(b.len()) >= KRONECKER_THRESHOLD {
                kronecker(a, b, len)
            } else {
                schoolbook(a, b, len)
            }
        }
    }
}

fn schoolbook(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    let mut tmp = Integer::new();
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len.saturating_sub(i)) {
            tmp.assign(ai * bj);
            out[i + j] += &tmp;
        }
    }
    out
}

fn max_bits(v: &[Integer]) -> usize {
    v.iter().map(|x| x.significant_bits() as usize).max().unwrap_or(0)
}

/// Signed packing `sum v_i 2^{bits*i}` with `bits` a multiple of 64.
fn pack(v: &[Integer], limbs_per_slot: usize) -> Integer {
    let total = v.len() * limbs_per_slot;
    let mut pos = vec![0u64; total];
    let mut neg = vec![0u64; total];
    let mut any_neg = false;
    for (i, x) in v.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        let digits = x.as_abs().to_digits::<u64>(Order::Lsf);
        let dst = if *x < 0 {
            any_neg = true;
            &mut neg
        } else {
            &mut pos
        };
        let off = i * limbs_per_slot;
        dst[off..off + digits.len()].copy_from_slice(&digits);
    }
    let mut r = Integer::from_digits(&pos, Order::Lsf);
    if any_neg {
        r -= Integer::from_digits(&neg, Order::Lsf);
    }
    r
}

fn kronecker(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() || len == 0 {
        return vec![Integer::new(); len];
    }
    let terms = a.len().min(b.len()).max(1);
    let guard = usize::BITS as usize - terms.leading_zeros() as usize;
    let need = max_bits(a) + max_bits(b) + guard + 2;
    let limbs = need.div_ceil(64);
    let bits = limbs * 64;

    let mut z = pack(a, limbs) * pack(b, limbs);
    // Bias every kept slot by 2^{bits-1} so each slot reads as a nonnegative digit block.
    let mut bias = vec![0u64; len * limbs];
    for k in 0..len {
        bias[k * limbs + limbs - 1] = 1u64 << 63;
    }
    z += Integer::from_digits(&bias, Order::Lsf);
    z.keep_bits_mut((len * bits) as u32);

    let mut digits = z.to_digits::<u64>(Order::Lsf);
    digits.resize(len * limbs, 0);
    let half = Integer::from(1) << (bits as u32 - 1);
    digits
        .chunks(limbs)
        .map(|slot| Integer::from_digits(slot, Order::Lsf) - &half)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn strategies_agree_on_signed_input() {
        let a = ints(&[3, -7, 0, 12, -1, 5]);
        let b = ints(&[-2, 4, 9, -11]);
        for len in 0..10 {
            assert_eq!(
                convolve(&a, &b, len, MulStrategy::Schoolbook),
                convolve(&a, &b, len, MulStrategy::Kronecker)
            );
        }
    }

    #[test]
    fn kronecker_with_big_entries() {
        let big: Integer = Integer::from(1) << 300u32;
        let a: Vec<Integer> = vec![big.clone(), Integer::from(-&big), Integer::from(1)];
        let b: Vec<Integer> = vec![Integer::from(-&big), Integer::from(-5), big];
        assert_eq!(
            convolve(&a, &b, 3, MulStrategy::Schoolbook),
            convolve(&a, &b, 3, MulStrategy::Kronecker)
        );
    }
}
