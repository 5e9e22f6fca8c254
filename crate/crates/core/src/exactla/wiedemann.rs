//! Blackbox kernel search: scalar Wiedemann on `B = M^T D M` with a random diagonal `D`.
//!
//! Each trial recovers a (random) vector of `ker B`; it is kept only if `M x = 0`
//! holds exactly and it is independent of what was already found. The search
//! stops after `confirm_trials` consecutive trials that add nothing.

use super::dense::rref;
use super::{Fq, SparseMatrixFq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct WiedemannOptions {
    pub seed: u64,
    pub confirm_trials: usize,
}

impl Default for WiedemannOptions {
    fn default() -> Self {
        WiedemannOptions { seed: 0x5eed, confirm_trials: 3 }
    }
}

/// Berlekamp-Massey: shortest connection polynomial `C` (with `C[0] = 1`)
/// such that `sum_j C[j] s[i-j] = 0` for all `i >= deg C`.
pub fn berlekamp_massey(s: &[u32], field: Fq) -> Vec<u32> {
    let mut c = vec![1u32];
    let mut b = vec![1u32];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = 1u32;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l.min(c.len() - 1) {
            d = field.add(d, field.mul(c[i], s[n - i]));
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = field.mul(d, field.inv(bd));
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + m] = field.sub(c[i + m], field.mul(coef, bi));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    c.resize(l + 1, 0);
    c
}

struct Blackbox<'a> {
    m: &'a SparseMatrixFq,
    diag: Vec<u32>,
}

impl Blackbox<'_> {
    fn apply(&self, x: &[u32]) -> Vec<u32> {
        let f = self.m.field();
        let mut y = self.m.mul_vec(x);
        for (v, &d) in y.iter_mut().zip(&self.diag) {
            *v = f.mul(*v, d);
        }
        self.m.transpose_mul_vec(&y)
    }
}

/// Kernel vectors of `m` found by repeated Wiedemann trials. Every returned
/// vector satisfies `m x = 0` exactly; the count is a lower bound on the
/// nullity that is exact with high probability.
pub fn wiedemann_kernel(m: &SparseMatrixFq, opts: WiedemannOptions) -> Vec<Vec<u32>> {
    let field = m.field();
    let n = m.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut idle = 0;
    if n == 0 {
        return found;
    }
    while idle < opts.confirm_trials {
        let bb = Blackbox {
            m,
            diag: (0..m.nrows()).map(|_| rng.gen_range(1..field.q())).collect(),
        };
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.q())).collect();
        let u: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.q())).collect();
        let mut seq = Vec::with_capacity(2 * n + 2);
        let mut cur = v.clone();
        for _ in 0..2 * n + 2 {
            seq.push(field.dot(&u, &cur));
            cur = bb.apply(&cur);
        }
        let conn = berlekamp_massey(&seq, field);
        // minimal polynomial g, low-to-high, is the reversal of the connection polynomial
        let g: Vec<u32> = conn.iter().rev().copied().collect();
        let k = g.iter().take_while(|&&c| c == 0).count();
        let kernel_vec = if k == 0 {
            None
        } else {
            let h = &g[k..];
            // w = h(B) v by Horner
            let mut w = vec![0u32; n];
            for &c in h.iter().rev() {
                w = bb.apply(&w);
                field.axpy(&mut w, c, &v);
            }
            let mut last = None;
            for _ in 0..=k {
                if w.iter().all(|&x| x == 0) {
                    break;
                }
                let next = bb.apply(&w);
                last = Some(w);
                w = next;
            }
            last.filter(|x| m.mul_vec(x).iter().all(|&y| y == 0))
        };
        let added = match kernel_vec {
            Some(x) => {
                let mut trial = found.clone();
                trial.push(x.clone());
                if rref(trial, field).pivot_cols.len() > found.len() {
                    found.push(x);
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if added {
            idle = 0;
        } else {
            idle += 1;
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bm_recovers_fibonacci_recurrence() {
        let f = Fq::new(101).unwrap();
        let mut s = vec![0u32, 1];
        for i in 2..20 {
            s.push(f.add(s[i - 1], s[i - 2]));
        }
        // s_i - s_{i-1} - s_{i-2} = 0
        assert_eq!(berlekamp_massey(&s, f), vec![1, 100, 100]);
    }

    #[test]
    fn finds_full_kernel_of_small_system() {
        let f = Fq::new(12379).unwrap();
        let mut m = SparseMatrixFq::new(f, 6);
        m.push_row([(0, 1), (1, 1)]);
        m.push_row([(1, 1), (2, -1)]);
        m.push_row([(3, 2), (4, 1), (5, 1)]);
        m.push_row([(0, 2), (2, 2)]);
        let k = wiedemann_kernel(&m, WiedemannOptions::default());
        assert_eq!(k.len(), 6 - super::super::rank(&m));
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }
}
