use super::Fq;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Reduced row echelon form: nonzero rows with their pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: Vec<Vec<u32>>,
    pub pivot_cols: Vec<usize>,
}

/// Gauss-Jordan elimination. Rows that reduce to zero are dropped.
pub fn rref(mut a: Vec<Vec<u32>>, field: Fq) -> Rref {
    let ncols = a.first().map_or(0, Vec::len);
    let q = field.q() as u64;
    let mut done: Vec<Vec<u32>> = Vec::new();
    let mut pivot_cols = Vec::new();
    for c in 0..ncols {
        if a.is_empty() {
            break;
        }
        let Some(pi) = a.iter().position(|r| r[c] != 0) else { continue };
        let mut prow = a.swap_remove(pi);
        let inv = field.inv(prow[c]) as u64;
        for v in prow[c..].iter_mut() {
            *v = (*v as u64 * inv % q) as u32;
        }
        a.par_iter_mut().for_each(|r| {
            let f = r[c] as u64;
            if f != 0 {
                let nf = q - f;
                for (x, &y) in r[c..].iter_mut().zip(&prow[c..]) {
                    *x = ((*x as u64 + nf * y as u64) % q) as u32;
                }
            }
        });
        a.retain(|r| r.iter().any(|&x| x != 0));
        done.push(prow);
        pivot_cols.push(c);
    }
    // back substitution: clear entries above each pivot
    for k in (0..done.len()).rev() {
        let c = pivot_cols[k];
        let (upper, lower) = done.split_at_mut(k);
        let prow = &lower[0];
        upper.par_iter_mut().for_each(|r| {
            let f = r[c] as u64;
            if f != 0 {
                let nf = q - f;
                for (x, &y) in r[c..].iter_mut().zip(&prow[c..]) {
                    *x = ((*x as u64 + nf * y as u64) % q) as u32;
                }
            }
        });
    }
    Rref { rows: done, pivot_cols }
}

/// Row echelon form of sparse rows, built by streaming, without back substitution.
///
/// Rows are `(col, value)` pairs with `col < ncols`. The result is sorted by
/// pivot column; row `k` is zero before `pivot_cols[k]` and 1 there.
///
/// Once a whole batch adds no pivot and the basis has at most `CHECK_NULLITY`
/// free columns, its kernel is computed. A remaining row lies in the row space
/// iff it is orthogonal to that kernel, so only rows failing the check are
/// absorbed. The result is exact either way.
pub fn echelon_sparse(rows: &[Vec<(u32, u32)>], ncols: usize, field: Fq) -> Rref {
    const CHECK_NULLITY: usize = 64;
    let mut basis = Basis { field, ncols, rows: Vec::new(), cols: Vec::new() };
    // Order does not change the pivot columns; shuffling lets the rank saturate early.
    let mut order: Vec<&Vec<(u32, u32)>> = rows.iter().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(ncols as u64));
    let rows = order;
    let mut next = 0;
    while next < rows.len() {
        let end = rows.len().min(next + BATCH);
        let grew = basis.absorb(&rows[next..end]);
        next = end;
        if grew == 0 && ncols - basis.rows.len() <= CHECK_NULLITY && next < rows.len() {
            let kernel = basis.kernel();
            let failing: Vec<&Vec<(u32, u32)>> = rows[next..]
                .par_iter()
                .copied()
                .filter(|r| kernel.iter().any(|v| dot_sparse(r, v, field) != 0))
                .collect();
            log::debug!("dense finish: {} of {} remaining rows outside the row space", failing.len(), rows.len() - next);
            for chunk in failing.chunks(BATCH) {
                basis.absorb(chunk);
            }
            break;
        }
    }
    Rref { rows: basis.rows, pivot_cols: basis.cols }
}

const BATCH: usize = 256;

fn dot_sparse(r: &[(u32, u32)], v: &[u32], field: Fq) -> u32 {
    let q = field.q() as u64;
    r.iter().fold(0u64, |acc, &(c, a)| (acc + a as u64 * v[c as usize] as u64) % q) as u32
}

struct Basis {
    field: Fq,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    cols: Vec<usize>,
}

impl Basis {
    /// Reduce a batch against the basis and insert what survives; returns the number of new pivots.
    fn absorb(&mut self, batch: &[&Vec<(u32, u32)>]) -> usize {
        let q = self.field.q() as u64;
        let mut reduced: Vec<Vec<u64>> = batch
            .par_iter()
            .map(|r| {
                let mut x = vec![0u64; self.ncols];
                for &(c, a) in r.iter() {
                    x[c as usize] = a as u64;
                }
                reduce_lazy(&mut x, &self.rows, &self.cols, q);
                x
            })
            .collect();
        let mut new_rows: Vec<Vec<u32>> = Vec::new();
        let mut new_cols: Vec<usize> = Vec::new();
        for x in reduced.iter_mut() {
            reduce_lazy(x, &new_rows, &new_cols, q);
            let Some(c) = x.iter().position(|&v| v != 0) else { continue };
            let inv = self.field.inv(x[c] as u32) as u64;
            new_rows.push(x.iter().map(|&v| (v * inv % q) as u32).collect());
            new_cols.push(c);
        }
        let grew = new_rows.len();
        for (r, c) in new_rows.into_iter().zip(new_cols) {
            let at = self.cols.partition_point(|&k| k < c);
            self.cols.insert(at, c);
            self.rows.insert(at, r);
        }
        grew
    }

    /// One kernel vector per non-pivot column, by back-substitution.
    fn kernel(&self) -> Vec<Vec<u32>> {
        let q = self.field.q() as u64;
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.cols {
            is_pivot[c] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|f| {
                let mut x = vec![0u32; self.ncols];
                x[f] = 1;
                for (row, &c) in self.rows.iter().zip(&self.cols).rev() {
                    let acc = row[c + 1..]
                        .iter()
                        .zip(&x[c + 1..])
                        .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q);
                    x[c] = self.field.neg(acc as u32);
                }
                x
            })
            .collect()
    }
}

/// Subtract each basis row (sorted by pivot, zero before it) to clear its
/// pivot column. Products accumulate unreduced and are folded mod q only
/// when they could overflow; on return every entry is reduced.
fn reduce_lazy(x: &mut [u64], basis: &[Vec<u32>], cols: &[usize], q: u64) {
    let limit = (u64::MAX - q) / ((q - 1) * (q - 1));
    let mut adds = 0;
    for (p, &c) in basis.iter().zip(cols) {
        let f = x[c] % q;
        if f == 0 {
            continue;
        }
        if adds == limit {
            x.iter_mut().for_each(|v| *v %= q);
            adds = 0;
        }
        let nf = q - f;
        for (v, &y) in x[c..].iter_mut().zip(&p[c..]) {
            *v += nf * y as u64;
        }
        adds += 1;
    }
    x.iter_mut().for_each(|v| *v %= q);
}

pub fn rank_dense(a: Vec<Vec<u32>>, field: Fq) -> usize {
    rref(a, field).pivot_cols.len()
}

/// Null space of a dense matrix, one vector per free column.
pub fn kernel_dense(a: Vec<Vec<u32>>, ncols: usize, field: Fq) -> Vec<Vec<u32>> {
    let r = rref(a, field);
    let mut is_pivot = vec![false; ncols];
    for &c in &r.pivot_cols {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|f| {
            let mut x = vec![0u32; ncols];
            x[f] = 1;
            for (row, &pc) in r.rows.iter().zip(&r.pivot_cols) {
                x[pc] = field.neg(row[f]);
            }
            x
        })
        .collect()
}

pub type Mat2 = [[u32; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2, field: Fq) -> Mat2 {
    let mut out = [[0u32; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = field.add(field.mul(a[i][0], b[0][j]), field.mul(a[i][1], b[1][j]));
        }
    }
    out
}

pub fn mat2_det(a: &Mat2, field: Fq) -> u32 {
    field.sub(field.mul(a[0][0], a[1][1]), field.mul(a[0][1], a[1][0]))
}

/// Inverse of a 2x2 matrix, `None` when singular.
pub fn mat2_inv(a: &Mat2, field: Fq) -> Option<Mat2> {
    let d = mat2_det(a, field);
    if d == 0 {
        return None;
    }
    let di = field.inv(d);
    Some([
        [field.mul(a[1][1], di), field.mul(field.neg(a[0][1]), di)],
        [field.mul(field.neg(a[1][0]), di), field.mul(a[0][0], di)],
    ])
}
