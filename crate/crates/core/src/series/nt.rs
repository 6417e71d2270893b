//! Elementary arithmetic functions: Bernoulli numbers and divisor sums.

use rug::ops::Pow;
use rug::{Integer, Rational};

/// Bernoulli number `B_k` with the `B_1 = -1/2` convention.
pub fn bernoulli(k: u32) -> Rational {
    bernoulli_table(k).pop().unwrap()
}

/// `B_0..=B_k`, from the recurrence `sum_{j<=m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(k: u32) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    b.push(Rational::from(1));
    for m in 1..=k {
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            let binom = Integer::from(Integer::binomial_u(m + 1, j as u32));
            acc += Rational::from(binom) * bj;
        }
        b.push(-acc / Rational::from(m + 1));
    }
    b
}

/// `sigma_r(n) = sum_{d | n} d^r`.
pub fn sigma(n: u64, r: u32) -> Integer {
    assert!(n > 0, "sigma is defined for n >= 1");
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(r);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(r);
            }
        }
        d += 1;
    }
    s
}

pub fn divisor_count(n: u64) -> u64 {
    assert!(n > 0, "divisor_count is defined for n >= 1");
    let mut c = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            c += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    c
}

/// `sigma_r(n)` for `0 <= n < len` by a divisor sieve (entry 0 is 0).
pub fn sigma_table(len: usize, r: u32) -> Vec<Integer> {
    sieve(len, |d| Some(Integer::from(d).pow(r)))
}

/// Sum of the odd divisors of n, for `0 <= n < len`.
pub fn sigma_odd_table(len: usize) -> Vec<Integer> {
    sieve(len, |d| (d % 2 == 1).then(|| Integer::from(d)))
}

fn sieve(len: usize, weight: impl Fn(u64) -> Option<Integer>) -> Vec<Integer> {
    let mut t = vec![Integer::new(); len];
    for d in 1..len {
        if let Some(w) = weight(d as u64) {
            let mut m = d;
            while m < len {
                t[m] += &w;
                m += d;
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn sigma_zero_is_divisor_count() {
        for n in 1..200u64 {
            assert_eq!(sigma(n, 0), divisor_count(n));
        }
    }

    #[test]
    fn tables_match_direct() {
        let t3 = sigma_table(60, 3);
        let odd = sigma_odd_table(60);
        for n in 1..60u64 {
            assert_eq!(t3[n as usize], sigma(n, 3));
            let direct: u64 = (1..=n).filter(|d| n % d == 0 && d % 2 == 1).sum();
            assert_eq!(odd[n as usize], direct);
        }
        assert_eq!(divisor_count(12), 6);
        assert_eq!(sigma(6, 1), 12);
    }
}
