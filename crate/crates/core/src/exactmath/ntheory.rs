//! Elementary number theory on machine integers.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Kronecker symbol (a/n), extending the Jacobi symbol to even and negative n.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= v;
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a/n) with n odd and positive.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Inverse of a modulo n.
pub fn inv_mod(a: i64, n: i64) -> Result<i64> {
    if n <= 0 {
        return Err(Error::InvalidParameter(format!("modulus {n} must be positive")));
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    if e.gcd != 1 {
        return Err(Error::InvalidParameter(format!("{a} is not a unit mod {n}")));
    }
    Ok(e.x.rem_euclid(n as i128) as i64)
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Returns (p, k) when n = p^k with k >= 1.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&x| kronecker(x as i64, p as i64) == -1).expect("odd prime has a non-residue")
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_by_euler(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn spot_values() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(2, 3), -1);
        assert_eq!(inv_mod(2, 3), Ok(2));
        assert!(inv_mod(2, 4).is_err());
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(least_nonresidue(7), 3);
        assert_eq!(euler_phi(216), 72);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn legendre_matches_brute_force() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            for a in -30..30 {
                assert_eq!(kronecker(a, p), legendre_by_euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn two_over_odd() {
        for a in (-31i64..32).step_by(2) {
            let expect = match a.rem_euclid(8) {
                1 | 7 => 1,
                _ => -1,
            };
            assert_eq!(kronecker(2, a), expect, "(2/{a})");
        }
    }

    #[test]
    fn kronecker_is_multiplicative_in_the_top() {
        for n in 1..40i64 {
            for a in -20..20i64 {
                for b in -20..20i64 {
                    assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
                }
            }
        }
    }
}
