//! One level end to end: cuspidal basis, Hecke matrices, field detection,
//! eigenvector tracking and exact eigenvalues.

use crate::arith::primes_in;
use crate::exactla::{charpoly_2x2, Fq, LinAlgError, Solver};
use crate::hecke::{HeckeContext, HeckeError, HeckeKind, HeckeMatrix, HeckeOp};
use crate::lift::{
    detect_field, eigenvalue_candidates, fix_eigenvector, lift_charpoly, lift_eigenvalue_with_trace, lift_trace,
    local_factor, AlgebraicEigenvalue, LiftError, LiftedCharPoly, LocalFactor, QuadField,
};
use crate::projective::PrimeLevel;
use crate::wspaces::{build_u_system, SpaceError};
use rayon::prelude::*;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cuspidal space at p = {p} has dimension {dim}, expected 2")]
    Dimension { p: u32, dim: usize },
    #[error("lifts disagree for {op}: polynomial {poly}, eigenvalue gives {from_eig}")]
    LiftMismatch { op: HeckeOp, poly: LiftedCharPoly, from_eig: LiftedCharPoly },
    #[error("{lifted} does not reduce to the computed polynomial of {op}")]
    ReductionMismatch { op: HeckeOp, lifted: LiftedCharPoly },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone)]
pub struct LevelConfig {
    pub q: u32,
    pub lmax: u32,
    pub kinds: Vec<HeckeKind>,
    pub solver: Solver,
}

impl LevelConfig {
    pub fn new(q: u32) -> Self {
        LevelConfig { q, lmax: 47, kinds: vec![HeckeKind::E, HeckeKind::F], solver: Solver::Elimination }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftPath {
    /// Both windows unique; the eigenvalue lift was cross-checked against it.
    PolyChecked,
    /// Only the trace window is unique; `b` comes from the field.
    TraceOnly,
}

#[derive(Debug, Clone)]
pub struct EntryResult {
    pub op: HeckeOp,
    pub matrix: HeckeMatrix,
    /// `[c0, c1]` of `T² + c1 T + c0` mod q.
    pub charpoly_red: [u32; 2],
    pub charpoly: LiftedCharPoly,
    pub eigenvalue: AlgebraicEigenvalue,
    pub path: LiftPath,
    /// Number of `(a, b)` in the Ramanujan disc matching the eigenvalue alone.
    pub field_candidates: usize,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct LevelResult {
    pub p: u32,
    pub q: u32,
    pub dim: usize,
    pub field: QuadField,
    pub reference: HeckeOp,
    pub entries: Vec<EntryResult>,
    pub local_factors: Vec<LocalFactor>,
}

impl LevelResult {
    pub fn entry(&self, kind: HeckeKind, ell: u32) -> Option<&EntryResult> {
        self.entries.iter().find(|e| e.op.kind == kind && e.op.ell == ell)
    }
}

/// Hecke operators `ℓ ≤ lmax`, `ℓ ≠ p`, sorted by `(ℓ, kind)`.
pub fn operators(level: PrimeLevel, lmax: u32, kinds: &[HeckeKind]) -> Vec<HeckeOp> {
    let mut ops: Vec<HeckeOp> = primes_in(2, lmax as u64 + 1)
        .into_iter()
        .filter(|&l| l != level.get() as u64)
        .flat_map(|l| kinds.iter().map(move |&kind| HeckeOp { kind, ell: l as u32 }))
        .collect();
    ops.sort_by_key(|o| (o.ell, o.kind));
    ops
}

pub fn run_level(level: PrimeLevel, cfg: &LevelConfig) -> Result<LevelResult, PipelineError> {
    let field = Fq::new(cfg.q as u64)?;
    let p = level.get();
    let t = Instant::now();
    let basis = build_u_system(level, field)?.w_basis(cfg.solver);
    log::debug!("p={p} q={} basis in {:?}", cfg.q, t.elapsed());
    if basis.len() != 2 {
        return Err(PipelineError::Dimension { p, dim: basis.len() });
    }
    let ctx = HeckeContext::new(basis)?;
    let ops = operators(level, cfg.lmax, &cfg.kinds);
    let timed: Vec<(HeckeMatrix, u128)> = ops
        .par_iter()
        .map(|&op| {
            let t = Instant::now();
            let m = ctx.matrix(op)?;
            log::debug!("{op} in {:?}", t.elapsed());
            Ok((m, t.elapsed().as_millis()))
        })
        .collect::<Result<_, HeckeError>>()?;
    let mats: Vec<HeckeMatrix> = timed.iter().map(|(m, _)| m.clone()).collect();

    let poly_lifts: Vec<Option<LiftedCharPoly>> = mats
        .iter()
        .map(|m| {
            let window_unique = 9 * (m.op.ell as u64).pow(2) < cfg.q as u64;
            window_unique.then(|| lift_charpoly(&charpoly_2x2(&m.mat, field), m.op.ell, field)).transpose()
        })
        .collect::<Result<_, LiftError>>()?;
    let k = detect_field(&poly_lifts.iter().flatten().copied().collect::<Vec<_>>(), field)?;
    let tracker = fix_eigenvector(&mats, k, field)?;

    let mut entries = Vec::with_capacity(mats.len());
    for ((m, millis), poly) in timed.into_iter().zip(poly_lifts) {
        let (lambda, other) = tracker.eigenvalues(&m, field)?;
        let trace = lift_trace(field.add(lambda, other), m.op.ell, field)?;
        let eigenvalue = lift_eigenvalue_with_trace(lambda, m.op, trace, k, field)?;
        let from_eig = eigenvalue.charpoly(k.d);
        let cp = charpoly_2x2(&m.mat, field);
        let charpoly_red = [cp.coeffs[0], cp.coeffs[1]];
        if from_eig.reduce(field) != charpoly_red {
            return Err(PipelineError::ReductionMismatch { op: m.op, lifted: from_eig });
        }
        let path = match poly {
            Some(poly) if poly != from_eig => return Err(PipelineError::LiftMismatch { op: m.op, poly, from_eig }),
            Some(_) => LiftPath::PolyChecked,
            None => LiftPath::TraceOnly,
        };
        entries.push(EntryResult {
            op: m.op,
            charpoly_red,
            charpoly: from_eig,
            eigenvalue,
            path,
            field_candidates: eigenvalue_candidates(lambda, m.op.ell, k, field).len(),
            millis,
            matrix: m,
        });
    }
    let local_factors = entries
        .iter()
        .filter(|e| e.op.kind == HeckeKind::E)
        .filter_map(|e| {
            entries
                .iter()
                .find(|f| f.op.kind == HeckeKind::F && f.op.ell == e.op.ell)
                .map(|f| local_factor(&e.eigenvalue, &f.eigenvalue))
        })
        .collect();
    Ok(LevelResult { p, q: cfg.q, dim: 2, field: k, reference: tracker.reference, entries, local_factors })
}
