//! Hecke operators `E_ℓ`, `F_ℓ` on the cuspidal space, computed through the
//! annihilator operators `R_{x,y,z}`.
//!
//! For a symbol `[Q]`, `⟨[Q], T* f⟩ = Σ_i ⟨[Q·B_i], f⟩` over representatives
//! of the left cosets `B_iΓ` in `ΓAΓ`. Evaluation reads `f` at the first
//! column, which is invariant under `Q ↦ Qγ` for `γ ∈ Γ₀(3,p)`, so the sum
//! does not depend on the representatives chosen.

use crate::arith::{is_prime, symmetric_lift};
use crate::exactla::dense::{mat2_inv, mat2_mul, Mat2};
use crate::exactla::{Fq, SparseMatrixFq, SparseRow};
use crate::modsym::{adjugate, mat3_mul, reduce_to_unimodular, Mat3, ModularSymbol, SymbolError};
use crate::projective::{PrimeLevel, ProjectiveSpace};
use crate::wspaces::{OrbitMap, RelationSystem, SpaceError, SpaceKind, WFunction};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("ℓ = {0} is not a prime different from the level")]
    BadPrime(u32),
    #[error("R_{{x,y,z}} needs xyz ≠ 0 mod p, got ({0},{1},{2})")]
    ZeroCoordinate(u32, u32, u32),
    #[error("no pair of annihilator operators with invertible pairing matrix")]
    Exhausted,
    #[error("expected a 2-dimensional cuspidal space, got dimension {0}")]
    DimMismatch(usize),
    #[error("coset representatives {0} and {1} lie in the same coset")]
    DuplicateCoset(usize, usize),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeckeKind {
    /// `E_ℓ = T_{diag(ℓ,1,1)}`
    E,
    /// `F_ℓ = T_{diag(ℓ,ℓ,1)}`
    F,
}

impl fmt::Display for HeckeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeckeKind::E => "E",
            HeckeKind::F => "F",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeckeOp {
    pub kind: HeckeKind,
    pub ell: u32,
}

impl HeckeOp {
    pub fn new(kind: HeckeKind, ell: u32, level: PrimeLevel) -> Result<Self, HeckeError> {
        if !is_prime(ell as u64) || ell == level.get() {
            return Err(HeckeError::BadPrime(ell));
        }
        Ok(HeckeOp { kind, ell })
    }
}

impl fmt::Display for HeckeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.ell)
    }
}

#[derive(Debug, Clone)]
pub struct CosetReps {
    pub op: HeckeOp,
    pub mats: Vec<Mat3>,
}

fn adj64(m: &Mat3) -> Mat3 {
    adjugate(&m.map(|r| r.map(|x| x as i128))).map(|r| r.map(|x| x as i64))
}

/// Upper-triangular Hermite forms of determinant `ℓ` reduced by row
/// operations: representatives of `SL₃(Z)\M` for `M` of type `(1,1,ℓ)`.
pub fn row_hermite_family(ell: u32) -> Vec<Mat3> {
    let l = ell as i64;
    let mut out = vec![[[l, 0, 0], [0, 1, 0], [0, 0, 1]]];
    out.extend((0..l).map(|a| [[1, a, 0], [0, l, 0], [0, 0, 1]]));
    for a in 0..l {
        for b in 0..l {
            out.push([[1, 0, a], [0, 1, b], [0, 0, l]]);
        }
    }
    out
}

/// Upper-triangular Hermite forms of determinant `ℓ` reduced by column
/// operations: representatives of `M/SL₃(Z)` for `M` of type `(1,1,ℓ)`.
pub fn column_hermite_family(ell: u32) -> Vec<Mat3> {
    let l = ell as i64;
    let mut out = Vec::with_capacity((l * l + l + 1) as usize);
    for a in 0..l {
        for b in 0..l {
            out.push([[l, a, b], [0, 1, 0], [0, 0, 1]]);
        }
    }
    out.extend((0..l).map(|c| [[1, 0, 0], [0, l, c], [0, 0, 1]]));
    out.push([[1, 0, 0], [0, 1, 0], [0, 0, l]]);
    out
}

/// Is `a⁻¹ b ∈ Γ₀(3,p)`? (`a`, `b` of equal determinant.)
pub fn same_left_coset(a: &Mat3, b: &Mat3, p: u32) -> bool {
    let d = det64(a);
    let m = mat3_mul(&adj64(a), b);
    if m.iter().flatten().any(|&x| x % d != 0) {
        return false;
    }
    let p = p as i64;
    (m[1][0] / d) % p == 0 && (m[2][0] / d) % p == 0
}

fn det64(m: &Mat3) -> i64 {
    crate::modsym::det3(&m.map(|r| r.map(|x| x as i128))) as i64
}

/// Representatives of `ΓAΓ/Γ`: the column-Hermite family for `E_ℓ`, and the
/// adjugates of the row-Hermite family for `F_ℓ`.
pub fn coset_reps(op: HeckeOp, level: PrimeLevel) -> Result<CosetReps, HeckeError> {
    if op.ell == level.get() || !is_prime(op.ell as u64) {
        return Err(HeckeError::BadPrime(op.ell));
    }
    let mats = match op.kind {
        HeckeKind::E => column_hermite_family(op.ell),
        HeckeKind::F => row_hermite_family(op.ell).iter().map(adj64).collect(),
    };
    let reps = CosetReps { op, mats };
    reps.check_distinct(level.get())?;
    Ok(reps)
}

impl CosetReps {
    /// Pairwise distinctness of the left cosets `B_iΓ`.
    pub fn check_distinct(&self, p: u32) -> Result<(), HeckeError> {
        let n = self.mats.len();
        let dup = (0..n).into_par_iter().find_map_any(|i| {
            (i + 1..n).find(|&j| same_left_coset(&self.mats[j], &self.mats[i], p)).map(|j| (i, j))
        });
        match dup {
            Some((i, j)) => Err(HeckeError::DuplicateCoset(i, j)),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }
}

/// `Q_{x,y}`: lower unitriangular with first column `(1, x, y)`.
pub fn q_matrix(x: i64, y: i64) -> Mat3 {
    [[1, 0, 0], [x, 1, 0], [y, 0, 1]]
}

/// `R_{x,y,z} = [Q_{x,y}] + [Q_{y,z}] + [Q_{z,x}] − [Q_{y/x,z/x}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorOp {
    pub params: (u32, u32, u32),
    pub symbols: [(i64, Mat3); 4],
}

pub fn make_r(x: i64, y: i64, z: i64, level: PrimeLevel) -> Result<AnnihilatorOp, HeckeError> {
    let p = level.get() as u64;
    let (xr, yr, zr) = (
        crate::arith::reduce_i64(x, p as u32),
        crate::arith::reduce_i64(y, p as u32),
        crate::arith::reduce_i64(z, p as u32),
    );
    if xr == 0 || yr == 0 || zr == 0 {
        return Err(HeckeError::ZeroCoordinate(xr, yr, zr));
    }
    let xi = crate::arith::inv_mod(xr as u64, p);
    let lift = |r: u64| symmetric_lift(r as u32, p as u32);
    let (x, y, z) = (lift(xr as u64), lift(yr as u64), lift(zr as u64));
    let yx = lift(yr as u64 * xi % p);
    let zx = lift(zr as u64 * xi % p);
    Ok(AnnihilatorOp {
        params: (xr, yr, zr),
        symbols: [(1, q_matrix(x, y)), (1, q_matrix(y, z)), (1, q_matrix(z, x)), (-1, q_matrix(yx, zx))],
    })
}

impl AnnihilatorOp {
    /// `Σ sign · (point of the first column)`.
    pub fn points(&self, space: &ProjectiveSpace) -> [(i64, u32); 4] {
        self.symbols.map(|(s, q)| (s, space.p2_index_i64(q[0][0], q[1][0], q[2][0]).unwrap()))
    }
}

/// `⟨R, f⟩ = f(1:x:y) + f(1:y:z) + f(1:z:x) − f(1:y/x:z/x)`.
pub fn pair(r: &AnnihilatorOp, f: &WFunction, space: &ProjectiveSpace) -> u32 {
    evaluate_points(&r.points(space), f)
}

fn evaluate_points(points: &[(i64, u32)], f: &WFunction) -> u32 {
    let field = f.field;
    points
        .iter()
        .fold(0, |acc, &(c, i)| field.add(acc, field.mul(field.from_i64(c), f.values[i as usize])))
}

/// The functional `f ↦ ⟨R, T* f⟩` as a list of `(coefficient, point)`.
pub fn hecke_functional(r: &AnnihilatorOp, reps: &CosetReps, space: &ProjectiveSpace) -> Result<Vec<(i64, u32)>, HeckeError> {
    let jobs: Vec<(i64, &Mat3, &Mat3)> =
        r.symbols.iter().flat_map(|(s, q)| reps.mats.iter().map(move |b| (*s, q, b))).collect();
    let partial: Result<Vec<HashMap<u32, i64>>, HeckeError> = jobs
        .par_chunks(64)
        .map(|chunk| {
            let mut acc: HashMap<u32, i64> = HashMap::new();
            for &(s, q, b) in chunk {
                let sym = ModularSymbol::normalize(&mat3_mul(q, b))?;
                for (c, idx) in reduce_to_unimodular(&sym)?.points(space) {
                    *acc.entry(idx).or_insert(0) += s * c;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total: HashMap<u32, i64> = HashMap::new();
    for m in partial? {
        for (k, v) in m {
            *total.entry(k).or_insert(0) += v;
        }
    }
    let mut out: Vec<(i64, u32)> = total.into_iter().filter(|&(_, c)| c != 0).map(|(k, c)| (c, k)).collect();
    out.sort_by_key(|&(_, k)| k);
    Ok(out)
}

/// `Σ_i evaluate(reduce(normalize(Q·B_i)), f)` over the four signed `Q` of `R`.
pub fn pair_hecke(r: &AnnihilatorOp, f: &WFunction, reps: &CosetReps, space: &ProjectiveSpace) -> Result<u32, HeckeError> {
    Ok(evaluate_points(&hecke_functional(r, reps, space)?, f))
}

/// Residues `1, −1, 2, −2, …` in symmetric-lift order.
fn scan_residues(p: i64) -> impl Iterator<Item = i64> + Clone {
    (1..=p / 2).flat_map(|k| [k, -k])
}

/// Two annihilator operators and the pairing matrix `P_{kj} = ⟨R_k, f_j⟩`.
#[derive(Debug, Clone)]
pub struct RPair {
    pub ops: [AnnihilatorOp; 2],
    pub pairing: Mat2,
}

/// First `R` (scan order from `(1,1,2)`) with a nonzero pairing row, then the
/// next one whose row is independent of it.
pub fn select_r_pair(basis: &[WFunction], space: &ProjectiveSpace) -> Result<RPair, HeckeError> {
    if basis.len() != 2 {
        return Err(HeckeError::DimMismatch(basis.len()));
    }
    let level = space.level();
    let field = basis[0].field;
    let p = level.get() as i64;
    let res = scan_residues(p);
    let triples = res
        .clone()
        .flat_map(move |x| {
            let r2 = res.clone();
            res.clone().flat_map(move |y| r2.clone().map(move |z| (x, y, z)))
        })
        .skip_while(|&t| t != (1, 1, 2));
    let mut first: Option<(AnnihilatorOp, [u32; 2])> = None;
    for (x, y, z) in triples {
        let r = make_r(x, y, z, level)?;
        let row = [pair(&r, &basis[0], space), pair(&r, &basis[1], space)];
        match &first {
            None if row != [0, 0] => first = Some((r, row)),
            Some((r0, row0)) => {
                let pairing = [*row0, row];
                if mat2_inv(&pairing, field).is_some() {
                    return Ok(RPair { ops: [r0.clone(), r], pairing });
                }
            }
            None => {}
        }
    }
    Err(HeckeError::Exhausted)
}

/// Matrix of `T*` on the cuspidal space in the given basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub op: HeckeOp,
    pub mat: Mat2,
}

/// `P⁻¹ H` with `H_{kj} = ⟨R_k, T* f_j⟩`.
pub fn hecke_matrix(
    op: HeckeOp,
    basis: &[WFunction],
    rpair: &RPair,
    reps: &CosetReps,
    space: &ProjectiveSpace,
) -> Result<HeckeMatrix, HeckeError> {
    if basis.len() != 2 {
        return Err(HeckeError::DimMismatch(basis.len()));
    }
    let field = basis[0].field;
    let mut h = [[0u32; 2]; 2];
    for (k, r) in rpair.ops.iter().enumerate() {
        let functional = hecke_functional(r, reps, space)?;
        for (j, f) in basis.iter().enumerate() {
            h[k][j] = evaluate_points(&functional, f);
        }
    }
    let pinv = mat2_inv(&rpair.pairing, field).ok_or(HeckeError::Exhausted)?;
    Ok(HeckeMatrix { op, mat: mat2_mul(&pinv, &h, field) })
}

/// Everything fixed once per level: the cuspidal basis and the `R` pair.
#[derive(Debug, Clone)]
pub struct HeckeContext {
    pub level: PrimeLevel,
    pub field: Fq,
    pub space: ProjectiveSpace,
    pub basis: Vec<WFunction>,
    pub rpair: RPair,
}

impl HeckeContext {
    pub fn new(basis: Vec<WFunction>) -> Result<Self, HeckeError> {
        let first = basis.first().ok_or(HeckeError::DimMismatch(0))?;
        let (level, field) = (first.level, first.field);
        let space = ProjectiveSpace::new(level);
        let rpair = select_r_pair(&basis, &space)?;
        Ok(HeckeContext { level, field, space, basis, rpair })
    }

    pub fn matrix(&self, op: HeckeOp) -> Result<HeckeMatrix, HeckeError> {
        let reps = coset_reps(op, self.level)?;
        hecke_matrix(op, &self.basis, &self.rpair, &reps, &self.space)
    }
}

/// `W` together with `⟨R_{x,y,z}, f⟩ = 0` for every admissible triple: the
/// joint kernel is the non-cuspidal part `im α ⊕ im β`.
pub fn build_ann_system(level: PrimeLevel, field: Fq) -> Result<RelationSystem, HeckeError> {
    let mut sys = crate::wspaces::build_w_system(level, field)?;
    let space = ProjectiveSpace::new(level);
    let p = level.get() as i64;
    let orbits: &OrbitMap = &sys.orbits;
    let rows: Vec<SparseRow> = (1..p)
        .into_par_iter()
        .flat_map_iter(|x| (1..p).flat_map(move |y| (1..p).map(move |z| (x, y, z))))
        .map(|(x, y, z)| {
            let r = make_r(x, y, z, level).expect("nonzero triple");
            let entries = r
                .points(&space)
                .into_iter()
                .filter_map(|(c, i)| orbits.var_of(i).map(|(v, s)| (v, c * s)));
            SparseMatrixFq::normalize_row(field, entries)
        })
        .collect();
    for row in rows {
        sys.matrix.push_sparse_row(row);
    }
    sys.kind = SpaceKind::W;
    Ok(sys)
}
