//! Exact linear algebra over F_q: sparse kernels and ranks, small dense
//! matrices, quadratic characteristic polynomials and their roots.

pub mod dense;
mod fq;
mod poly;
pub mod sparse;
pub mod wiedemann;

pub use fq::Fq;
pub use poly::{charpoly_2x2, quadratic_roots, PolyFq, QuadraticRoots};
pub use sparse::{eliminate, rank, EliminationOptions, Echelon, SparseMatrixFq, SparseRow};
pub use wiedemann::{wiedemann_kernel, WiedemannOptions};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("modulus {0} is not an odd prime below 2^31")]
    BadModulus(u64),
    #[error("{a} is a quadratic non-residue mod {q}")]
    NonResidue { a: u32, q: u32 },
    #[error("polynomial is not monic of degree 2")]
    NotMonicQuadratic,
}

/// Kernel solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// Structured Gaussian elimination (exact, deterministic).
    Elimination,
    /// Randomized blackbox search, seeded for reproducibility.
    Wiedemann { seed: u64 },
}

/// Square root mod q, the smaller of the two roots.
pub fn sqrt_mod_q(a: u32, field: Fq) -> Result<u32, LinAlgError> {
    field.sqrt(a)
}

/// Kernel basis of `m` in reduced row echelon form (unique for the kernel,
/// so both solvers return identical bases).
pub fn kernel_basis_with(m: &SparseMatrixFq, solver: Solver) -> Vec<Vec<u32>> {
    let raw = match solver {
        Solver::Elimination => eliminate(m, EliminationOptions::default()).kernel(m.field()),
        Solver::Wiedemann { seed } => wiedemann_kernel(m, WiedemannOptions { seed, ..Default::default() }),
    };
    canonical_basis(raw, m.field())
}

pub fn kernel_basis(m: &SparseMatrixFq) -> Vec<Vec<u32>> {
    kernel_basis_with(m, Solver::Elimination)
}

/// Reduced row echelon basis of the span of `vectors`.
pub fn canonical_basis(vectors: Vec<Vec<u32>>, field: Fq) -> Vec<Vec<u32>> {
    if vectors.is_empty() {
        return vectors;
    }
    dense::rref(vectors, field).rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solvers_agree_on_canonical_basis() {
        let f = Fq::new(12379).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let ncols = rng.gen_range(10..40);
            let mut m = SparseMatrixFq::new(f, ncols);
            for _ in 0..rng.gen_range(3..ncols) {
                let row: Vec<(u32, i64)> = (0..3).map(|_| (rng.gen_range(0..ncols as u32), rng.gen_range(-3..4))).collect();
                m.push_row(row);
            }
            let a = kernel_basis_with(&m, Solver::Elimination);
            let b = kernel_basis_with(&m, Solver::Wiedemann { seed: 9 });
            assert_eq!(a, b);
        }
    }

    #[test]
    fn identity_and_zero_kernels() {
        let f = Fq::new(7).unwrap();
        let mut id = SparseMatrixFq::new(f, 2);
        id.push_row([(0, 1)]);
        id.push_row([(1, 1)]);
        assert!(kernel_basis(&id).is_empty());
        let zero = SparseMatrixFq::new(f, 4);
        let k = kernel_basis(&zero);
        assert_eq!(k.len(), 4);
        assert_eq!(canonical_basis(k.clone(), f).len(), 4);
    }
}
