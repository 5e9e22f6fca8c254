//! Cuspidal cohomology of the congruence subgroups Γ₀(3, p) of SL(3, Z).
//!
//! The cuspidal part is realized as the kernel `U` of an explicit sparse
//! relation system over F_q. Hecke operators `E_ℓ`, `F_ℓ` are computed
//! directly on `U` by pairing against the annihilator operators `R_{x,y,z}`,
//! reducing each translated modular symbol to unimodular ones. Eigenvalues
//! are then lifted to exact elements of `Z[√D]`.

pub mod arith;
pub mod exactla;
pub mod hecke;
pub mod lift;
pub mod modsym;
pub mod pipeline;
pub mod projective;
pub mod published;
pub mod wspaces;

pub use exactla::{Fq, Solver, SparseMatrixFq};
pub use projective::{PrimeLevel, ProjectiveSpace};
