//! Lifting mod-q Hecke data to exact algebraic integers.
//!
//! Eigenvalues satisfy `|e_ℓ| ≤ 3ℓ`, so the characteristic polynomial
//! `T² − tT + c` has `|t| ≤ 6ℓ` and `0 ≤ c ≤ 9ℓ²`. The trace window is unique
//! mod q whenever `12ℓ + 1 ≤ q`; the constant window only for `ℓ < √q/3`.
//! Beyond that the eigenvalue is pinned down inside `Z + Z√D` using the
//! lifted trace.

use crate::arith::{squarefree_part, symmetric_lift};
use crate::exactla::dense::Mat2;
use crate::exactla::{charpoly_2x2, quadratic_roots, Fq, LinAlgError, PolyFq, QuadraticRoots};
use crate::hecke::{HeckeMatrix, HeckeOp};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("no lift of {what} inside the bound for ℓ = {ell}")]
    OutOfBound { what: &'static str, ell: u32 },
    #[error("several lifts of {what} inside the bound for ℓ = {ell}: {candidates:?}")]
    Ambiguous { what: &'static str, ell: u32, candidates: Vec<i64> },
    #[error("ℓ = {ell} is too large for a unique lift mod {q}")]
    WindowTooSmall { ell: u32, q: u32 },
    #[error("characteristic polynomials give different fields: D = {0} and D = {1}")]
    Inconsistent(i64, i64),
    #[error("totally real field Q(√{0}) is not supported")]
    RealField(i64),
    #[error("no operator has two distinct eigenvalues in F_q")]
    NoSplitOperator,
    #[error("{0} does not preserve the reference eigenbasis")]
    NotCommuting(HeckeOp),
    #[error("no lift of the eigenvalue for ℓ = {ell}")]
    NoLift { ell: u32 },
    #[error("several lifts of the eigenvalue for ℓ = {ell}: {candidates:?}")]
    MultiLift { ell: u32, candidates: Vec<(i64, i64)> },
    #[error("lifted trace {trace} is odd, so the eigenvalue is not in Z + Z√D")]
    OddTrace { trace: i64 },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Exact characteristic polynomial `T² − trace·T + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftedCharPoly {
    pub ell: u32,
    pub trace: i64,
    pub constant: i64,
}

impl LiftedCharPoly {
    pub fn discriminant(&self) -> i64 {
        self.trace * self.trace - 4 * self.constant
    }

    /// Coefficients `[c0, c1]` of the monic reduction mod q.
    pub fn reduce(&self, field: Fq) -> [u32; 2] {
        [field.from_i64(self.constant), field.from_i64(-self.trace)]
    }
}

impl fmt::Display for LiftedCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = -self.trace;
        let sign = if t < 0 { '-' } else { '+' };
        write!(f, "T^2 {sign} {}T + {}", t.abs(), self.constant)
    }
}

/// Integers in `[lo, hi]` congruent to `r` mod `q`.
fn window_lifts(r: u32, q: u32, lo: i64, hi: i64) -> Vec<i64> {
    let q = q as i64;
    let first = lo + (r as i64 - lo).rem_euclid(q);
    (0..).map(|k| first + k * q).take_while(|&x| x <= hi).collect()
}

fn unique(cands: Vec<i64>, what: &'static str, ell: u32) -> Result<i64, LiftError> {
    match cands.len() {
        0 => Err(LiftError::OutOfBound { what, ell }),
        1 => Ok(cands[0]),
        _ => Err(LiftError::Ambiguous { what, ell, candidates: cands }),
    }
}

/// The trace in `[−6ℓ, 6ℓ]`.
pub fn lift_trace(trace_red: u32, ell: u32, field: Fq) -> Result<i64, LiftError> {
    let b = 6 * ell as i64;
    unique(window_lifts(trace_red, field.q(), -b, b), "trace", ell)
}

/// Lift `φ^red = T² + c1·T + c0` using the Ramanujan windows.
pub fn lift_charpoly(fred: &PolyFq, ell: u32, field: Fq) -> Result<LiftedCharPoly, LiftError> {
    if fred.coeffs.len() != 3 || fred.coeffs[2] != 1 {
        return Err(LinAlgError::NotMonicQuadratic.into());
    }
    let q = field.q() as u64;
    if 9 * (ell as u64).pow(2) >= q {
        return Err(LiftError::WindowTooSmall { ell, q: field.q() });
    }
    let trace = lift_trace(field.neg(fred.coeffs[1]), ell, field)?;
    let c = 9 * (ell as i64).pow(2);
    let constant = unique(window_lifts(fred.coeffs[0], field.q(), 0, c), "constant", ell)?;
    Ok(LiftedCharPoly { ell, trace, constant })
}

/// `Q(√D)` with a fixed square root `s` of `D` mod q. `D = 0` stands for `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadField {
    pub d: i64,
    pub s: u32,
}

impl QuadField {
    pub fn rational() -> Self {
        QuadField { d: 0, s: 0 }
    }

    pub fn new(d: i64, field: Fq) -> Result<Self, LiftError> {
        Ok(QuadField { d, s: field.sqrt(field.from_i64(d))? })
    }
}

/// `D` = squarefree part of the discriminants; repeated-root polynomials
/// impose nothing.
pub fn detect_field(polys: &[LiftedCharPoly], field: Fq) -> Result<QuadField, LiftError> {
    let mut d: Option<i64> = None;
    for p in polys {
        let disc = p.discriminant();
        if disc == 0 {
            continue;
        }
        let sf = squarefree_part(disc);
        match d {
            None => d = Some(sf),
            Some(d0) if d0 != sf => return Err(LiftError::Inconsistent(d0, sf)),
            _ => {}
        }
    }
    match d {
        None => Ok(QuadField::rational()),
        Some(d) if d > 0 => Err(LiftError::RealField(d)),
        Some(d) => QuadField::new(d, field).map_err(|e| match e {
            // Eigenvalues live in F_{q²}: no operator splits over F_q.
            LiftError::LinAlg(LinAlgError::NonResidue { .. }) => LiftError::NoSplitOperator,
            e => e,
        }),
    }
}

/// `a + b√D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const fn new(a: i64, b: i64) -> Self {
        QuadInt { a, b }
    }

    pub fn conj(self) -> Self {
        QuadInt { a: self.a, b: -self.b }
    }

    pub fn mul(self, o: QuadInt, d: i64) -> QuadInt {
        QuadInt { a: self.a * o.a + d * self.b * o.b, b: self.a * o.b + self.b * o.a }
    }

    pub fn scale(self, k: i64) -> QuadInt {
        QuadInt { a: self.a * k, b: self.b * k }
    }

    pub fn neg(self) -> QuadInt {
        self.scale(-1)
    }

    /// `a² − D b²`
    pub fn norm(self, d: i64) -> i64 {
        self.a * self.a - d * self.b * self.b
    }

    pub fn reduce(self, k: QuadField, field: Fq) -> u32 {
        field.add(field.from_i64(self.a), field.mul(field.from_i64(self.b), k.s))
    }

    pub fn fmt_with(&self, symbol: &str) -> String {
        match (self.a, self.b) {
            (a, 0) => a.to_string(),
            (0, b) => format!("{}{symbol}", coef(b)),
            (a, b) => format!("{}{symbol} {} {}", coef(b), if a < 0 { '-' } else { '+' }, a.abs()),
        }
    }
}

fn coef(b: i64) -> String {
    match b {
        1 => String::new(),
        -1 => "-".into(),
        b => b.to_string(),
    }
}

/// A lifted Hecke eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraicEigenvalue {
    pub op: HeckeOp,
    pub value: QuadInt,
}

impl AlgebraicEigenvalue {
    pub fn satisfies_ramanujan(&self, d: i64) -> bool {
        self.value.norm(d) <= 9 * (self.op.ell as i64).pow(2)
    }

    pub fn charpoly(&self, d: i64) -> LiftedCharPoly {
        LiftedCharPoly { ell: self.op.ell, trace: 2 * self.value.a, constant: self.value.norm(d) }
    }
}

/// All `(a, b)` with `a + b·s ≡ λ` and `a² + |D| b² ≤ 9ℓ²`.
pub fn eigenvalue_candidates(lambda: u32, ell: u32, k: QuadField, field: Fq) -> Vec<(i64, i64)> {
    let bound = 9 * (ell as i64).pow(2);
    let r = 3 * ell as i64;
    let bmax = if k.d == 0 { 0 } else { (1..).take_while(|b| -k.d * b * b <= bound).last().unwrap_or(0) };
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        let a_red = field.sub(lambda, field.mul(field.from_i64(b), k.s));
        for a in window_lifts(a_red, field.q(), -r, r) {
            if a * a - k.d * b * b <= bound {
                out.push((a, b));
            }
        }
    }
    out
}

/// Unconstrained field enumeration: may report `MultiLift` once `ℓ` is large
/// compared to `√q`.
pub fn lift_eigenvalue(lambda: u32, op: HeckeOp, k: QuadField, field: Fq) -> Result<AlgebraicEigenvalue, LiftError> {
    pick_one(eigenvalue_candidates(lambda, op.ell, k, field), op)
}

/// Field enumeration restricted to `2a = trace`.
pub fn lift_eigenvalue_with_trace(
    lambda: u32,
    op: HeckeOp,
    trace: i64,
    k: QuadField,
    field: Fq,
) -> Result<AlgebraicEigenvalue, LiftError> {
    if trace % 2 != 0 {
        return Err(LiftError::OddTrace { trace });
    }
    let cands = eigenvalue_candidates(lambda, op.ell, k, field).into_iter().filter(|&(a, _)| 2 * a == trace).collect();
    pick_one(cands, op)
}

fn pick_one(cands: Vec<(i64, i64)>, op: HeckeOp) -> Result<AlgebraicEigenvalue, LiftError> {
    match cands.as_slice() {
        [] => Err(LiftError::NoLift { ell: op.ell }),
        [(a, b)] => Ok(AlgebraicEigenvalue { op, value: QuadInt::new(*a, *b) }),
        _ => Err(LiftError::MultiLift { ell: op.ell, candidates: cands }),
    }
}

/// A right eigenvector of `m` for `lambda`.
pub fn eigenvector(m: &Mat2, lambda: u32, field: Fq) -> [u32; 2] {
    let v = [m[0][1], field.sub(lambda, m[0][0])];
    if v != [0, 0] {
        return v;
    }
    let v = [field.sub(lambda, m[1][1]), m[1][0]];
    if v != [0, 0] {
        v
    } else {
        [1, 0]
    }
}

/// Eigenvalue of `m` on `v`, if `v` is an eigenvector.
pub fn eigenvalue_on(m: &Mat2, v: &[u32; 2], field: Fq) -> Option<u32> {
    let mv = [
        field.add(field.mul(m[0][0], v[0]), field.mul(m[0][1], v[1])),
        field.add(field.mul(m[1][0], v[0]), field.mul(m[1][1], v[1])),
    ];
    let i = if v[0] != 0 { 0 } else { 1 };
    let mu = field.mul(mv[i], field.inv(v[i]));
    (field.mul(mu, v[0]) == mv[0] && field.mul(mu, v[1]) == mv[1]).then_some(mu)
}

/// The common eigenvector followed through all operators.
#[derive(Debug, Clone)]
pub struct EigenTracker {
    pub reference: HeckeOp,
    pub chosen: [u32; 2],
    pub other: [u32; 2],
}

/// Reference operator: the first (by `ℓ`, then kind) whose reduced
/// characteristic polynomial has distinct roots in F_q. The eigenvector is the
/// one whose eigenvalue there has `b > 0` (or is the smaller root when `D = 0`).
pub fn fix_eigenvector(mats: &[HeckeMatrix], k: QuadField, field: Fq) -> Result<EigenTracker, LiftError> {
    let mut sorted: Vec<&HeckeMatrix> = mats.iter().collect();
    sorted.sort_by_key(|m| (m.op.ell, m.op.kind));
    let (reference, (r1, r2)) = sorted
        .iter()
        .find_map(|m| match quadratic_roots(&charpoly_2x2(&m.mat, field), field) {
            Ok(QuadraticRoots::Distinct(x, y)) => Some((*m, (x, y))),
            _ => None,
        })
        .ok_or(LiftError::NoSplitOperator)?;
    let trace = lift_trace(field.add(r1, r2), reference.op.ell, field)?;
    let first_is_chosen = if k.d == 0 {
        true
    } else {
        lift_eigenvalue_with_trace(r1, reference.op, trace, k, field)?.value.b > 0
    };
    let (c, o) = if first_is_chosen { (r1, r2) } else { (r2, r1) };
    let tracker = EigenTracker {
        reference: reference.op,
        chosen: eigenvector(&reference.mat, c, field),
        other: eigenvector(&reference.mat, o, field),
    };
    for m in mats {
        if eigenvalue_on(&m.mat, &tracker.chosen, field).is_none() || eigenvalue_on(&m.mat, &tracker.other, field).is_none() {
            return Err(LiftError::NotCommuting(m.op));
        }
    }
    Ok(tracker)
}

impl EigenTracker {
    /// Eigenvalues of `m` on the chosen and on the other eigenvector.
    pub fn eigenvalues(&self, m: &HeckeMatrix, field: Fq) -> Result<(u32, u32), LiftError> {
        let a = eigenvalue_on(&m.mat, &self.chosen, field).ok_or(LiftError::NotCommuting(m.op))?;
        let b = eigenvalue_on(&m.mat, &self.other, field).ok_or(LiftError::NotCommuting(m.op))?;
        Ok((a, b))
    }
}

/// `1 − e X + f ℓ X² − ℓ³ X³` with `X = ℓ^{−s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalFactor {
    pub ell: u32,
    pub coeffs: [QuadInt; 4],
    pub f_is_conjugate_of_e: bool,
}

pub fn local_factor(e: &AlgebraicEigenvalue, f: &AlgebraicEigenvalue) -> LocalFactor {
    let l = e.op.ell as i64;
    LocalFactor {
        ell: e.op.ell,
        coeffs: [QuadInt::new(1, 0), e.value.neg(), f.value.scale(l), QuadInt::new(-l * l * l, 0)],
        f_is_conjugate_of_e: f.value == e.value.conj(),
    }
}

/// Symmetric lift of a residue, re-exported for reporting.
pub fn centered(r: u32, field: Fq) -> i64 {
    symmetric_lift(r, field.q())
}
