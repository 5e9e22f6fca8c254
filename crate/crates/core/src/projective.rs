//! Points of the projective line and plane over Z/pZ with dense indices.
//!
//! Canonical form: the first nonzero coordinate is 1. Plane points are laid out
//! as `(1:y:z)` at `y*p + z`, then `(0:1:z)` at `p^2 + z`, then `(0:0:1)` at
//! `p^2 + p`. Line points are `(1:y)` at `y` and `(0:1)` at `p`.

use crate::arith::{inv_mod, is_prime, reduce_i64};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("{0} is not a prime level")]
    NotPrime(u64),
    #[error("level {0} too large for 32-bit residues")]
    TooLarge(u64),
    #[error("all coordinates vanish mod {0}")]
    AllZero(u32),
}

/// A prime level `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeLevel(u32);

impl PrimeLevel {
    pub fn new(p: u64) -> Result<Self, ProjectiveError> {
        if p > (1 << 20) {
            return Err(ProjectiveError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(ProjectiveError::NotPrime(p));
        }
        Ok(PrimeLevel(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of points of P^2(Z/pZ).
    pub fn p2_len(self) -> usize {
        let p = self.0 as usize;
        p * p + p + 1
    }

    /// Number of points of P^1(Z/pZ).
    pub fn p1_len(self) -> usize {
        self.0 as usize + 1
    }
}

impl std::fmt::Display for PrimeLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct P2Point {
    pub coords: [u32; 3],
    pub index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct P1Point {
    pub coords: [u32; 2],
    pub index: u32,
}

fn p2_index_canonical(c: [u32; 3], p: u32) -> u32 {
    if c[0] == 1 {
        c[1] * p + c[2]
    } else if c[1] == 1 {
        p * p + c[2]
    } else {
        p * p + p
    }
}

/// Canonical representative of `(x:y:z)` mod p.
pub fn canon_p2(x: i64, y: i64, z: i64, level: PrimeLevel) -> Result<P2Point, ProjectiveError> {
    let p = level.get();
    let v = [reduce_i64(x, p), reduce_i64(y, p), reduce_i64(z, p)];
    let lead = v.iter().position(|&c| c != 0).ok_or(ProjectiveError::AllZero(p))?;
    let s = inv_mod(v[lead] as u64, p as u64);
    let coords = v.map(|c| ((c as u64 * s) % p as u64) as u32);
    Ok(P2Point { coords, index: p2_index_canonical(coords, p) })
}

/// Canonical representative of `(x:y)` mod p.
pub fn canon_p1(x: i64, y: i64, level: PrimeLevel) -> Result<P1Point, ProjectiveError> {
    let p = level.get();
    let (x, y) = (reduce_i64(x, p), reduce_i64(y, p));
    if x != 0 {
        let s = inv_mod(x as u64, p as u64);
        let y = ((y as u64 * s) % p as u64) as u32;
        Ok(P1Point { coords: [1, y], index: y })
    } else if y != 0 {
        Ok(P1Point { coords: [0, 1], index: p })
    } else {
        Err(ProjectiveError::AllZero(p))
    }
}

/// All points of P^2 in index order.
pub fn enumerate_p2(level: PrimeLevel) -> Vec<P2Point> {
    let space = ProjectiveSpace::new(level);
    (0..level.p2_len() as u32).map(|i| space.p2_point(i)).collect()
}

/// All points of P^1 in index order.
pub fn enumerate_p1(level: PrimeLevel) -> Vec<P1Point> {
    let space = ProjectiveSpace::new(level);
    (0..level.p1_len() as u32).map(|i| space.p1_point(i)).collect()
}

/// Point of P^2 given by the first column of an integer matrix.
pub fn first_column_point(m: &[[i64; 3]; 3], level: PrimeLevel) -> Result<P2Point, ProjectiveError> {
    canon_p2(m[0][0], m[1][0], m[2][0], level)
}

/// Table-driven indexing for hot loops: holds the inverses mod p.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    level: PrimeLevel,
    inv: Vec<u32>,
}

impl ProjectiveSpace {
    pub fn new(level: PrimeLevel) -> Self {
        let p = level.get();
        let mut inv = vec![0u32; p as usize];
        for a in 1..p {
            inv[a as usize] = inv_mod(a as u64, p as u64) as u32;
        }
        ProjectiveSpace { level, inv }
    }

    #[inline]
    pub fn level(&self) -> PrimeLevel {
        self.level
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.level.get()
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    #[inline]
    fn mulp(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p() as u64) as u32
    }

    /// Index of `(x:y:z)` for residues already in `[0, p)`; `None` on the zero vector.
    #[inline]
    pub fn p2_index(&self, x: u32, y: u32, z: u32) -> Option<u32> {
        let p = self.p();
        if x != 0 {
            let s = self.inv(x);
            Some(self.mulp(y, s) * p + self.mulp(z, s))
        } else if y != 0 {
            Some(p * p + self.mulp(z, self.inv(y)))
        } else if z != 0 {
            Some(p * p + p)
        } else {
            None
        }
    }

    /// Index of `(x:y:z)` for arbitrary integers.
    #[inline]
    pub fn p2_index_i64(&self, x: i64, y: i64, z: i64) -> Option<u32> {
        let p = self.p();
        self.p2_index(reduce_i64(x, p), reduce_i64(y, p), reduce_i64(z, p))
    }

    #[inline]
    pub fn p1_index(&self, x: u32, y: u32) -> Option<u32> {
        if x != 0 {
            Some(self.mulp(y, self.inv(x)))
        } else if y != 0 {
            Some(self.p())
        } else {
            None
        }
    }

    #[inline]
    pub fn p1_index_i64(&self, x: i64, y: i64) -> Option<u32> {
        let p = self.p();
        self.p1_index(reduce_i64(x, p), reduce_i64(y, p))
    }

    pub fn p2_point(&self, index: u32) -> P2Point {
        let p = self.p();
        let coords = if index < p * p {
            [1, index / p, index % p]
        } else if index < p * p + p {
            [0, 1, index - p * p]
        } else {
            assert_eq!(index, p * p + p, "P^2 index out of range");
            [0, 0, 1]
        };
        P2Point { coords, index }
    }

    pub fn p1_point(&self, index: u32) -> P1Point {
        let p = self.p();
        let coords = if index < p {
            [1, index]
        } else {
            assert_eq!(index, p, "P^1 index out of range");
            [0, 1]
        };
        P1Point { coords, index }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(p: u64) -> PrimeLevel {
        PrimeLevel::new(p).unwrap()
    }

    #[test]
    fn canon_examples() {
        assert_eq!(canon_p2(2, 4, 6, lv(5)).unwrap().coords, [1, 2, 3]);
        assert_eq!(canon_p2(0, 0, 3, lv(5)).unwrap().coords, [0, 0, 1]);
        assert_eq!(canon_p2(0, 0, 0, lv(5)), Err(ProjectiveError::AllZero(5)));
        assert_eq!(canon_p1(3, 6, lv(5)).unwrap().coords, [1, 2]);
        assert_eq!(canon_p1(0, 4, lv(5)).unwrap().coords, [0, 1]);
        assert_eq!(canon_p1(0, 0, lv(5)), Err(ProjectiveError::AllZero(5)));
    }

    #[test]
    fn level_validation() {
        assert!(PrimeLevel::new(53).is_ok());
        assert_eq!(PrimeLevel::new(51), Err(ProjectiveError::NotPrime(51)));
        assert_eq!(PrimeLevel::new(1), Err(ProjectiveError::NotPrime(1)));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_p2(lv(2)).len(), 7);
        assert_eq!(enumerate_p2(lv(5)).len(), 31);
        assert_eq!(enumerate_p2(lv(53)).len(), 2863);
        assert_eq!(enumerate_p1(lv(53)).len(), 54);
    }

    #[test]
    fn enumeration_is_canonical_and_indexed() {
        for p in [2u64, 3, 5, 13] {
            let l = lv(p);
            for (i, pt) in enumerate_p2(l).into_iter().enumerate() {
                assert_eq!(pt.index as usize, i);
                let c = pt.coords.map(|v| v as i64);
                assert_eq!(canon_p2(c[0], c[1], c[2], l).unwrap(), pt);
            }
            for (i, pt) in enumerate_p1(l).into_iter().enumerate() {
                assert_eq!(pt.index as usize, i);
                assert_eq!(canon_p1(pt.coords[0] as i64, pt.coords[1] as i64, l).unwrap(), pt);
            }
        }
    }

    #[test]
    fn first_column() {
        let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(first_column_point(&id, lv(53)).unwrap().coords, [1, 0, 0]);
        for p in [5i64, 53, 521] {
            let m = [[p + 1, 7, 1], [2 * p, 3, 4], [3 * p, 5, 9]];
            assert_eq!(first_column_point(&m, lv(p as u64)).unwrap().coords, [1, 0, 0]);
            let m = [[p, 7, 1], [2 * p, 3, 4], [3 * p, 5, 9]];
            assert!(first_column_point(&m, lv(p as u64)).is_err());
        }
    }

    proptest! {
        #[test]
        fn scaling_invariance(x in -200i64..200, y in -200i64..200, z in -200i64..200, lam in 1i64..53) {
            prop_assume!(x.rem_euclid(53) != 0 || y.rem_euclid(53) != 0 || z.rem_euclid(53) != 0);
            let l = lv(53);
            let a = canon_p2(x, y, z, l).unwrap();
            let b = canon_p2(lam * x, lam * y, lam * z, l).unwrap();
            prop_assert_eq!(a, b);
            let space = ProjectiveSpace::new(l);
            prop_assert_eq!(space.p2_index_i64(x, y, z), Some(a.index));
            prop_assert_eq!(space.p2_point(a.index), a);
        }

        #[test]
        fn p1_roundtrip(x in -100i64..100, y in -100i64..100, lam in 1i64..13) {
            prop_assume!(x.rem_euclid(13) != 0 || y.rem_euclid(13) != 0);
            let l = lv(13);
            let a = canon_p1(x, y, l).unwrap();
            prop_assert_eq!(canon_p1(lam * x, lam * y, l).unwrap(), a);
            let space = ProjectiveSpace::new(l);
            prop_assert_eq!(space.p1_index_i64(x, y), Some(a.index));
            prop_assert_eq!(space.p1_point(a.index), a);
        }
    }
}
