#![allow(dead_code)]

use rand::Rng;
use sl3cusp::exactla::{Fq, Solver};
use sl3cusp::wspaces::{build_w0_system, build_w_system, random_combination, W0Function, WFunction};
use sl3cusp::PrimeLevel;

pub const Q: u64 = 12379;

pub fn field() -> Fq {
    Fq::new(Q).unwrap()
}

pub fn level(p: u64) -> PrimeLevel {
    PrimeLevel::new(p).unwrap()
}

pub fn random_w0<R: Rng>(p: u64, rng: &mut R) -> W0Function {
    let sys = build_w0_system(level(p), field()).unwrap();
    let x = random_combination(&sys.kernel(Solver::Elimination), sys.orbits.nvars(), field(), rng);
    W0Function { level: level(p), field: field(), values: sys.orbits.expand(&x, field()) }
}

pub fn random_w<R: Rng>(p: u64, rng: &mut R) -> WFunction {
    let sys = build_w_system(level(p), field()).unwrap();
    let x = random_combination(&sys.kernel(Solver::Elimination), sys.orbits.nvars(), field(), rng);
    WFunction { level: level(p), field: field(), values: sys.orbits.expand(&x, field()) }
}

/// Plain Gaussian elimination mod q, kept separate from the library solvers.
pub fn oracle_rank(mut rows: Vec<Vec<u64>>, q: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] % q != 0) else { continue };
        rows.swap(rank, pr);
        let inv = pow(rows[rank][c], q - 2, q);
        let pivot: Vec<u64> = rows[rank].iter().map(|&x| x * inv % q).collect();
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for (x, &y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + q * q - f * y % q) % q;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn pow(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}
