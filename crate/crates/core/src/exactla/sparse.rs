//! Row-sparse matrices over F_q and structured Gaussian elimination.
//!
//! Elimination runs in two phases. The sparse phase repeatedly pivots on the
//! lightest remaining row, choosing inside it the column with the fewest
//! occurrences (a Markowitz-style minimal-fill rule). Once the lightest row is
//! heavier than `dense_switch`, the surviving rows are packed into a dense
//! block over the surviving columns and streamed into a row echelon basis.

use super::dense;
use super::Fq;
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub type SparseRow = Vec<(u32, u32)>;

#[derive(Debug, Clone)]
pub struct SparseMatrixFq {
    field: Fq,
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMatrixFq {
    pub fn new(field: Fq, ncols: usize) -> Self {
        SparseMatrixFq { field, ncols, rows: Vec::new() }
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Normalize `(col, coeff)` pairs into a sorted row without zeros.
    pub fn normalize_row(field: Fq, entries: impl IntoIterator<Item = (u32, i64)>) -> SparseRow {
        let mut v: Vec<(u32, i64)> = entries.into_iter().collect();
        v.sort_unstable_by_key(|e| e.0);
        let mut out: SparseRow = Vec::with_capacity(v.len());
        for (c, a) in v {
            let a = field.from_i64(a);
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = field.add(last.1, a),
                _ => out.push((c, a)),
            }
        }
        out.retain(|e| e.1 != 0);
        out
    }

    /// Append a relation; returns `false` (and stores nothing) if it is identically zero.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (u32, i64)>) -> bool {
        let row = Self::normalize_row(self.field, entries);
        self.push_sparse_row(row)
    }

    /// Append an already normalized row.
    pub fn push_sparse_row(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row.iter().all(|e| e.1 != 0 && e.1 < self.field.q() && (e.0 as usize) < self.ncols));
        if row.is_empty() {
            return false;
        }
        self.rows.push(row);
        true
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.ncols);
        let q = self.field.q() as u64;
        self.rows
            .par_iter()
            .map(|row| {
                let mut acc = 0u64;
                for &(c, a) in row {
                    acc = (acc + a as u64 * x[c as usize] as u64) % q;
                }
                acc as u32
            })
            .collect()
    }

    /// `M^T y`.
    pub fn transpose_mul_vec(&self, y: &[u32]) -> Vec<u32> {
        assert_eq!(y.len(), self.rows.len());
        let q = self.field.q() as u64;
        let mut acc = vec![0u64; self.ncols];
        for (row, &yi) in self.rows.iter().zip(y) {
            if yi == 0 {
                continue;
            }
            for &(c, a) in row {
                let slot = &mut acc[c as usize];
                *slot = (*slot + a as u64 * yi as u64) % q;
            }
        }
        acc.into_iter().map(|v| v as u32).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0u32; self.ncols];
                for &(c, a) in row {
                    d[c as usize] = a;
                }
                d
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EliminationOptions {
    /// Switch to the dense finish once the lightest active row has more entries than this.
    pub dense_switch: usize,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions { dense_switch: 48 }
    }
}

/// Result of elimination: pivot rows in elimination order plus the free columns.
///
/// Each pivot row has coefficient 1 at its pivot column and otherwise only
/// references columns that were pivoted later or are free, so kernel vectors
/// follow by back-substitution in reverse order.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub ncols: usize,
    pub pivots: Vec<(u32, SparseRow)>,
    pub free: Vec<u32>,
    /// Size of the dense block (rows, cols) used for the finish.
    pub dense_block: (usize, usize),
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.free.len()
    }

    /// Kernel basis: one vector per free column, equal to 1 there and 0 at the other free columns.
    pub fn kernel(&self, field: Fq) -> Vec<Vec<u32>> {
        self.free
            .par_iter()
            .map(|&f| {
                let mut x = vec![0u32; self.ncols];
                x[f as usize] = 1;
                let q = field.q() as u64;
                for (c, row) in self.pivots.iter().rev() {
                    let mut acc = 0u64;
                    for &(j, a) in row {
                        if j != *c {
                            acc = (acc + a as u64 * x[j as usize] as u64) % q;
                        }
                    }
                    x[*c as usize] = field.neg(acc as u32);
                }
                x
            })
            .collect()
    }
}

fn merge_sub(field: Fq, target: &[(u32, u32)], factor: u32, pivot: &[(u32, u32)], out: &mut SparseRow, added: &mut Vec<u32>, removed: &mut Vec<u32>) {
    // out = target - factor * pivot
    out.clear();
    let neg = field.neg(factor);
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i]);
            i += 1;
        } else if cj < ci {
            out.push((cj, field.mul(neg, pivot[j].1)));
            added.push(cj);
            j += 1;
        } else {
            let v = field.add(target[i].1, field.mul(neg, pivot[j].1));
            if v != 0 {
                out.push((ci, v));
            } else {
                removed.push(ci);
            }
            i += 1;
            j += 1;
        }
    }
}

/// Structured Gaussian elimination with a dense finish.
pub fn eliminate(m: &SparseMatrixFq, opts: EliminationOptions) -> Echelon {
    let field = m.field;
    let ncols = m.ncols;
    let mut rows: Vec<SparseRow> = m.rows.clone();
    let mut alive: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count: Vec<u32> = vec![0; ncols];
    let mut col_done = vec![false; ncols];
    for (ri, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c as usize].push(ri as u32);
            col_count[c as usize] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| Reverse((r.len() as u32, i as u32)))
        .collect();

    let mut pivots: Vec<(u32, SparseRow)> = Vec::new();
    let mut scratch: SparseRow = Vec::new();
    let mut added = Vec::new();
    let mut removed = Vec::new();

    while let Some(Reverse((w, ri))) = heap.pop() {
        let ri = ri as usize;
        if !alive[ri] || rows[ri].len() as u32 != w {
            continue;
        }
        if w as usize > opts.dense_switch {
            heap.push(Reverse((w, ri as u32)));
            break;
        }
        // column of the row with the fewest occurrences
        let &(pc, pa) = rows[ri]
            .iter()
            .min_by_key(|e| (col_count[e.0 as usize], e.0))
            .expect("alive rows are nonempty");
        let inv = field.inv(pa);
        let mut prow = std::mem::take(&mut rows[ri]);
        for e in prow.iter_mut() {
            e.1 = field.mul(e.1, inv);
        }
        alive[ri] = false;
        for &(c, _) in &prow {
            col_count[c as usize] -= 1;
        }
        let targets = std::mem::take(&mut col_rows[pc as usize]);
        for &t in &targets {
            let t = t as usize;
            if t == ri || !alive[t] {
                continue;
            }
            let Ok(pos) = rows[t].binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let factor = rows[t][pos].1;
            added.clear();
            removed.clear();
            merge_sub(field, &rows[t], factor, &prow, &mut scratch, &mut added, &mut removed);
            // copy rather than swap, so buffers stay sized to their own row
            rows[t].clear();
            rows[t].extend_from_slice(&scratch);
            for &c in &added {
                col_count[c as usize] += 1;
                col_rows[c as usize].push(t as u32);
            }
            for &c in &removed {
                col_count[c as usize] -= 1;
            }
            if rows[t].is_empty() {
                alive[t] = false;
                rows[t] = Vec::new();
            } else {
                heap.push(Reverse((rows[t].len() as u32, t as u32)));
            }
        }
        debug_assert_eq!(col_count[pc as usize], 0);
        col_done[pc as usize] = true;
        prow.shrink_to_fit();
        pivots.push((pc, prow));
    }

    // dense finish over the columns still referenced by live rows
    let live: Vec<usize> = (0..rows.len()).filter(|&i| alive[i]).collect();
    let mut dense_cols: Vec<u32> = (0..ncols as u32)
        .filter(|&c| !col_done[c as usize] && col_count[c as usize] > 0)
        .collect();
    dense_cols.sort_unstable();
    let mut col_pos = vec![u32::MAX; ncols];
    for (k, &c) in dense_cols.iter().enumerate() {
        col_pos[c as usize] = k as u32;
    }
    let nd = dense_cols.len();
    drop(col_rows);
    drop(heap);
    let block: Vec<SparseRow> = live
        .iter()
        .map(|&ri| std::mem::take(&mut rows[ri]).into_iter().map(|(c, a)| (col_pos[c as usize], a)).collect())
        .collect();
    drop(rows);
    let dense_block = (block.len(), nd);
    let rref = dense::echelon_sparse(&block, nd, field);
    for (k, prow) in rref.pivot_cols.iter().zip(&rref.rows) {
        let row: SparseRow = prow
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(j, &a)| (dense_cols[j], a))
            .collect();
        pivots.push((dense_cols[*k], row));
        col_done[dense_cols[*k] as usize] = true;
    }
    let free: Vec<u32> = (0..ncols as u32).filter(|&c| !col_done[c as usize]).collect();
    Echelon { ncols, pivots, free, dense_block }
}

/// Kernel basis in reduced normalization (1 at each free column, 0 at the others).
pub fn kernel_basis(m: &SparseMatrixFq) -> Vec<Vec<u32>> {
    eliminate(m, EliminationOptions::default()).kernel(m.field)
}

pub fn rank(m: &SparseMatrixFq) -> usize {
    eliminate(m, EliminationOptions::default()).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Plain dense Gaussian elimination, independent of the sparse path.
    fn oracle_rank(mut a: Vec<Vec<u32>>, q: u32) -> usize {
        let q64 = q as u64;
        let ncols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..ncols {
            let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
            a.swap(r, piv);
            let inv = crate::arith::inv_mod(a[r][c] as u64, q64);
            for i in 0..a.len() {
                if i != r && a[i][c] != 0 {
                    let f = a[i][c] as u64 * inv % q64;
                    for j in 0..ncols {
                        a[i][j] = ((a[i][j] as u64 + (q64 - f) * a[r][j] as u64) % q64) as u32;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn random_sparse(rng: &mut ChaCha8Rng, field: Fq, nrows: usize, ncols: usize, per_row: usize) -> SparseMatrixFq {
        let mut m = SparseMatrixFq::new(field, ncols);
        for _ in 0..nrows {
            let k = rng.gen_range(1..=per_row);
            let entries: Vec<(u32, i64)> = (0..k)
                .map(|_| (rng.gen_range(0..ncols as u32), rng.gen_range(-5..=5)))
                .collect();
            m.push_row(entries);
        }
        m
    }

    #[test]
    fn small_examples() {
        let f = Fq::new(7).unwrap();
        let mut id = SparseMatrixFq::new(f, 2);
        id.push_row([(0, 1)]);
        id.push_row([(1, 1)]);
        assert!(kernel_basis(&id).is_empty());
        assert_eq!(rank(&id), 2);

        let zero = SparseMatrixFq::new(f, 4);
        let k = kernel_basis(&zero);
        assert_eq!(k.len(), 4);
        assert_eq!(rank(&zero), 0);

        let f = Fq::new(12379).unwrap();
        let mut outer = SparseMatrixFq::new(f, 5);
        let u = [1i64, 2, 3, 4, 5];
        let v = [2i64, 0, 7, 1, 3];
        for &ui in &u {
            outer.push_row(v.iter().enumerate().map(|(j, &vj)| (j as u32, ui * vj)));
        }
        assert_eq!(rank(&outer), 1);

        let n = 30;
        let mut idn = SparseMatrixFq::new(f, n);
        for i in 0..n as u32 {
            idn.push_row([(i, 1)]);
        }
        assert_eq!(rank(&idn), n);
    }

    #[test]
    fn push_row_normalizes() {
        let f = Fq::new(7).unwrap();
        let mut m = SparseMatrixFq::new(f, 4);
        assert!(!m.push_row([(2, 3), (2, 4)]));
        assert!(m.push_row([(3, 1), (0, -1), (3, 1)]));
        assert_eq!(m.rows()[0], vec![(0, 6), (3, 2)]);
    }

    #[test]
    fn random_rank_matches_dense_oracle() {
        let f = Fq::new(12379).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let nrows = rng.gen_range(5..80);
            let ncols = rng.gen_range(5..=200);
            let per_row = rng.gen_range(1..6);
            let m = random_sparse(&mut rng, f, nrows, ncols, per_row);
            let dense_switch = [0usize, 3, 48][trial % 3];
            let ech = eliminate(&m, EliminationOptions { dense_switch });
            assert_eq!(ech.rank(), oracle_rank(m.to_dense(), f.q()), "trial {trial}");
            assert_eq!(ech.rank() + ech.nullity(), ncols);
            for v in ech.kernel(f) {
                assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn rank_50x60_matches_dense_oracle() {
        let f = Fq::new(12379).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let mut m = SparseMatrixFq::new(f, 60);
        for _ in 0..50 {
            m.push_row((0..60u32).map(|j| (j, rng.gen_range(0..12379i64))));
        }
        assert_eq!(rank(&m), oracle_rank(m.to_dense(), f.q()));
    }

    #[test]
    fn kernel_is_reduced_and_independent() {
        let f = Fq::new(31991).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_sparse(&mut rng, f, 40, 70, 4);
        let ech = eliminate(&m, EliminationOptions::default());
        let k = ech.kernel(f);
        for (i, v) in k.iter().enumerate() {
            for (j, &fc) in ech.free.iter().enumerate() {
                assert_eq!(v[fc as usize], u32::from(i == j));
            }
        }
        assert_eq!(oracle_rank(k.clone(), f.q()), k.len());
    }
}
