use super::LinAlgError;
use crate::arith::{is_prime, pow_mod, reduce_i64, symmetric_lift};

/// The prime field F_q. Elements are plain `u32` residues in `[0, q)`.
///
/// `q` is kept below 2^31 so that a product plus a residue fits in a `u64`
/// with room for lazy accumulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    q: u32,
}

impl Fq {
    pub fn new(q: u64) -> Result<Self, LinAlgError> {
        if q < 3 || q >= (1 << 31) || !is_prime(q) {
            return Err(LinAlgError::BadModulus(q));
        }
        Ok(Fq { q: q as u32 })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, a: u32, e: u64) -> u32 {
        pow_mod(a as u64, e, self.q as u64) as u32
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.q != 0, "inverse of zero in F_{}", self.q);
        self.pow(a, self.q as u64 - 2)
    }

    #[inline]
    pub fn from_i64(self, x: i64) -> u32 {
        reduce_i64(x, self.q)
    }

    /// Representative in `[-q/2, q/2]`.
    #[inline]
    pub fn lift(self, a: u32) -> i64 {
        symmetric_lift(a, self.q)
    }

    pub fn is_square(self, a: u32) -> bool {
        a == 0 || self.pow(a, (self.q as u64 - 1) / 2) == 1
    }

    /// Square root by Tonelli-Shanks, returning the smaller of the two roots in `[0, q)`.
    pub fn sqrt(self, a: u32) -> Result<u32, LinAlgError> {
        let q = self.q as u64;
        let a = a % self.q;
        if a == 0 {
            return Ok(0);
        }
        if !self.is_square(a) {
            return Err(LinAlgError::NonResidue { a, q: self.q });
        }
        let r = if q % 4 == 3 {
            self.pow(a, (q + 1) / 4)
        } else {
            // q - 1 = s * 2^e with s odd
            let mut s = q - 1;
            let mut e = 0u32;
            while s % 2 == 0 {
                s /= 2;
                e += 1;
            }
            let mut z = 2u32;
            while self.is_square(z) {
                z += 1;
            }
            let mut m = e;
            let mut c = self.pow(z, s);
            let mut t = self.pow(a, s);
            let mut r = self.pow(a, (s + 1) / 2);
            while t != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let b = self.pow(c, 1u64 << (m - i - 1));
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        debug_assert_eq!(self.mul(r, r), a);
        Ok(r.min(self.q - r))
    }

    /// `dst += c * src` elementwise.
    pub fn axpy(self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        let q = self.q as u64;
        let c = c as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = ((*d as u64 + c * s as u64) % q) as u32;
        }
    }

    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        let q = self.q as u64;
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc = (acc + x as u64 * y as u64) % q;
        }
        acc as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_examples() {
        let f7 = Fq::new(7).unwrap();
        assert_eq!(f7.sqrt(0).unwrap(), 0);
        assert_eq!(f7.sqrt(2).unwrap(), 3);
        assert!(matches!(f7.sqrt(3), Err(LinAlgError::NonResidue { .. })));
        let f = Fq::new(12379).unwrap();
        assert_eq!(f.sqrt(4).unwrap(), 2);
    }

    #[test]
    fn sqrt_mod7_exhaustive_oracle() {
        // brute force: the smaller root of every residue mod 7
        let f7 = Fq::new(7).unwrap();
        for a in 0..7u32 {
            let roots: Vec<u32> = (0..7).filter(|r| r * r % 7 == a).collect();
            match roots.first() {
                Some(&r) => assert_eq!(f7.sqrt(a).unwrap(), r),
                None => assert!(f7.sqrt(a).is_err()),
            }
        }
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(Fq::new(2).is_err());
        assert!(Fq::new(12380).is_err());
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(a in 0u32..40000, qi in 0usize..4) {
            let q = [12379u64, 31991, 13001, 17][qi];
            let f = Fq::new(q).unwrap();
            let a = a % f.q();
            match f.sqrt(a) {
                Ok(r) => {
                    prop_assert_eq!(f.mul(r, r), a);
                    prop_assert!(r <= f.q() - r || r == 0);
                }
                Err(_) => prop_assert!(!f.is_square(a)),
            }
        }

        #[test]
        fn inverse(a in 1u32..31991) {
            let f = Fq::new(31991).unwrap();
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
