//! Small integer helpers shared by the level (mod p) and coefficient (mod q) arithmetic.

/// Deterministic primality test by trial division; the moduli and levels used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Primes in `[lo, hi)`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&n| is_prime(n)).collect()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `m`; `a` must be nonzero mod `m`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    debug_assert!(a % m != 0);
    pow_mod(a, m - 2, m)
}

/// Reduce an integer into `[0, m)`.
#[inline]
pub fn reduce_i64(x: i64, m: u32) -> u32 {
    x.rem_euclid(m as i64) as u32
}

/// Symmetric lift of a residue into `[-m/2, m/2]`.
#[inline]
pub fn symmetric_lift(r: u32, m: u32) -> i64 {
    let r = (r % m) as i64;
    if 2 * r > m as i64 {
        r - m as i64
    } else {
        r
    }
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Squarefree part of a nonzero integer, keeping its sign (e.g. -8 -> -2, 12 -> 3).
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "squarefree part of zero");
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut out = 1u64;
    let mut d = 2u64;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    out *= m;
    sign * out as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_sqrt() {
        assert_eq!(primes_in(2, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        for q in [12379u64, 31991, 13001] {
            assert!(is_prime(q));
        }
        assert!(!is_prime(1));
        assert!(!is_prime(12381));
        assert_eq!(isqrt(12379), 111);
        assert_eq!(isqrt(121), 11);
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(-8), -2);
        assert_eq!(squarefree_part(-4), -1);
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(-2 * 9 * 49), -2);
        assert_eq!(squarefree_part(1), 1);
    }

    #[test]
    fn lifts() {
        assert_eq!(symmetric_lift(12378, 12379), -1);
        assert_eq!(symmetric_lift(3, 7), 3);
        assert_eq!(symmetric_lift(4, 7), -3);
        assert_eq!(reduce_i64(-1, 7), 6);
        assert_eq!(inv_mod(2, 5), 3);
    }
}
