//! The function spaces `W`, `W₀(Δ(p))`, `W'` and the cuspidal subspace `U`,
//! realized as kernels of sparse relation systems, and the linear maps
//! `α, β: W₀ → W`, `A, B: W → W₀`, `C, D: Ann(V) → W₀` between them.
//!
//! Condition (i) (cyclic invariance, sign invariance, antisymmetry under a
//! transposition) says `f(gP) = sgn(g) f(P)` for every signed permutation `g`
//! of the coordinates. It is imposed by construction: unknowns are the orbits
//! of that group, and an orbit whose stabilizer contains an odd permutation is
//! forced to zero. The remaining conditions become matrix rows.

use crate::exactla::{kernel_basis_with, Fq, Solver, SparseMatrixFq, SparseRow};
use crate::projective::{PrimeLevel, ProjectiveSpace};
use rayon::prelude::*;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("modulus {q} divides p - 1 = {pm1}")]
    ModulusDividesLevel { q: u32, pm1: u32 },
    #[error("modulus {0} equals the level")]
    ModulusIsLevel(u32),
}

/// Which space a relation system cuts out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Conditions (i)-(ii) on P².
    W,
    /// Conditions (i)-(iii) on P² (the complement `W'` of `im β`).
    WPrime,
    /// Conditions (i)-(iv) on P²: the cuspidal subspace.
    U,
    /// Conditions (i)-(iii) on P¹.
    W0,
}

/// Element of `W` (or of a subspace of it): a value table indexed by P² point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WFunction {
    pub level: PrimeLevel,
    pub field: Fq,
    pub values: Vec<u32>,
}

/// Element of `W₀(Δ(p))`: a value table indexed by P¹ point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct W0Function {
    pub level: PrimeLevel,
    pub field: Fq,
    pub values: Vec<u32>,
}

impl WFunction {
    pub fn zero(level: PrimeLevel, field: Fq) -> Self {
        WFunction { level, field, values: vec![0; level.p2_len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value at `(x:y:z)`; zero vector maps to 0.
    pub fn at(&self, space: &ProjectiveSpace, x: i64, y: i64, z: i64) -> u32 {
        space.p2_index_i64(x, y, z).map_or(0, |i| self.values[i as usize])
    }

    pub fn add(&self, other: &WFunction) -> WFunction {
        let f = self.field;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect();
        WFunction { level: self.level, field: f, values }
    }

    pub fn sub(&self, other: &WFunction) -> WFunction {
        let f = self.field;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.sub(a, b)).collect();
        WFunction { level: self.level, field: f, values }
    }

    pub fn scale(&self, c: u32) -> WFunction {
        let f = self.field;
        WFunction { level: self.level, field: f, values: self.values.iter().map(|&a| f.mul(a, c)).collect() }
    }
}

impl W0Function {
    pub fn zero(level: PrimeLevel, field: Fq) -> Self {
        W0Function { level, field, values: vec![0; level.p1_len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value at `(x:y)` with the convention `f(0:0) = 0`.
    pub fn at(&self, space: &ProjectiveSpace, x: i64, y: i64) -> u32 {
        space.p1_index_i64(x, y).map_or(0, |i| self.values[i as usize])
    }

    pub fn add(&self, other: &W0Function) -> W0Function {
        let f = self.field;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect();
        W0Function { level: self.level, field: f, values }
    }

    pub fn scale(&self, c: u32) -> W0Function {
        let f = self.field;
        W0Function { level: self.level, field: f, values: self.values.iter().map(|&a| f.mul(a, c)).collect() }
    }
}

/// Signed slot of each point: 0 if forced to vanish, else `±(var + 1)`.
#[derive(Debug, Clone)]
pub struct OrbitMap {
    slot: Vec<i32>,
    reps: Vec<u32>,
}

const PERMS3: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

impl OrbitMap {
    /// Orbits on P² under signed coordinate permutations. With `axes_vanish`,
    /// points with a zero coordinate are forced to zero (condition (iii)
    /// together with cyclic invariance).
    pub fn plane(space: &ProjectiveSpace, axes_vanish: bool) -> Self {
        let p = space.p();
        let n = space.level().p2_len();
        let mut slot = vec![i32::MIN; n];
        let mut reps = Vec::new();
        let mut images: Vec<(u32, i64)> = Vec::with_capacity(48);
        for idx in 0..n as u32 {
            if slot[idx as usize] != i32::MIN {
                continue;
            }
            let c = space.p2_point(idx).coords;
            let v = [c[0] as i64, c[1] as i64, c[2] as i64];
            images.clear();
            for (perm, sgn) in PERMS3 {
                for signs in 0..4 {
                    let s = [if signs & 1 == 1 { -1 } else { 1 }, if signs & 2 == 2 { -1 } else { 1 }, 1];
                    let w = [s[0] * v[perm[0]], s[1] * v[perm[1]], s[2] * v[perm[2]]];
                    let j = space.p2_index_i64(w[0], w[1], w[2]).expect("nonzero point");
                    images.push((j, sgn));
                }
            }
            let forced_zero = (axes_vanish && c.contains(&0))
                || images.iter().any(|&(j, s)| images.iter().any(|&(k, t)| j == k && s != t));
            let _ = p;
            if forced_zero {
                for &(j, _) in &images {
                    slot[j as usize] = 0;
                }
            } else {
                let var = reps.len() as i32 + 1;
                reps.push(idx);
                for &(j, s) in &images {
                    slot[j as usize] = var * s as i32;
                }
            }
        }
        OrbitMap { slot, reps }
    }

    /// Orbits on P¹ under signed swaps; `(1:0)` and `(0:1)` are forced to zero.
    pub fn line(space: &ProjectiveSpace) -> Self {
        let n = space.level().p1_len();
        let mut slot = vec![i32::MIN; n];
        let mut reps = Vec::new();
        for idx in 0..n as u32 {
            if slot[idx as usize] != i32::MIN {
                continue;
            }
            let c = space.p1_point(idx).coords;
            let (x, y) = (c[0] as i64, c[1] as i64);
            let mut images = Vec::with_capacity(8);
            for (a, b, sgn) in [(x, y, 1i64), (y, x, -1)] {
                for (sa, sb) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                    images.push((space.p1_index_i64(sa * a, sb * b).unwrap(), sgn));
                }
            }
            let forced_zero = c.contains(&0) || images.iter().any(|&(j, s)| images.iter().any(|&(k, t)| j == k && s != t));
            if forced_zero {
                for &(j, _) in &images {
                    slot[j as usize] = 0;
                }
            } else {
                let var = reps.len() as i32 + 1;
                reps.push(idx);
                for &(j, s) in &images {
                    slot[j as usize] = var * s as i32;
                }
            }
        }
        OrbitMap { slot, reps }
    }

    pub fn nvars(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[u32] {
        &self.reps
    }

    /// `(var, sign)` of a point, `None` if the point is forced to zero.
    #[inline]
    pub fn var_of(&self, point: u32) -> Option<(u32, i64)> {
        let s = self.slot[point as usize];
        if s == 0 {
            None
        } else {
            Some(((s.unsigned_abs() - 1), s.signum() as i64))
        }
    }

    /// Value table from orbit coordinates.
    pub fn expand(&self, x: &[u32], field: Fq) -> Vec<u32> {
        self.slot
            .iter()
            .map(|&s| match s {
                0 => 0,
                s if s > 0 => x[(s - 1) as usize],
                s => field.neg(x[(-s - 1) as usize]),
            })
            .collect()
    }

    /// Orbit coordinates of a value table (read off at representatives).
    pub fn restrict(&self, values: &[u32]) -> Vec<u32> {
        self.reps.iter().map(|&r| values[r as usize]).collect()
    }
}

/// A sparse system whose kernel (in orbit coordinates) is one of the spaces.
#[derive(Debug, Clone)]
pub struct RelationSystem {
    pub kind: SpaceKind,
    pub level: PrimeLevel,
    pub field: Fq,
    pub matrix: SparseMatrixFq,
    pub orbits: OrbitMap,
}

fn signed_row(orbits: &OrbitMap, points: impl IntoIterator<Item = (Option<u32>, i64)>, field: Fq) -> SparseRow {
    let entries = points
        .into_iter()
        .filter_map(|(pt, c)| pt.and_then(|pt| orbits.var_of(pt)).map(|(v, s)| (v, s * c)));
    SparseMatrixFq::normalize_row(field, entries)
}

/// Scale a row so its first coefficient is 1 (for deduplication).
fn monic(mut row: SparseRow, field: Fq) -> SparseRow {
    if let Some(&(_, a)) = row.first() {
        let inv = field.inv(a);
        for e in row.iter_mut() {
            e.1 = field.mul(e.1, inv);
        }
    }
    row
}

fn push_unique(matrix: &mut SparseMatrixFq, rows: Vec<SparseRow>, field: Fq) {
    let mut seen: HashSet<SparseRow> = HashSet::with_capacity(rows.len());
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let key = monic(row.clone(), field);
        if seen.insert(key) {
            matrix.push_sparse_row(row);
        }
    }
}

/// Three-term rows `f(P) + f(τP) + f(τ²P) = 0`, `τ(x,y,z) = (-y, x-y, z)`, one per τ-orbit.
fn three_term_rows_plane(space: &ProjectiveSpace, orbits: &OrbitMap, field: Fq) -> Vec<SparseRow> {
    let n = space.level().p2_len() as u32;
    (0..n)
        .into_par_iter()
        .filter_map(|idx| {
            let [x, y, z] = space.p2_point(idx).coords.map(|c| c as i64);
            let t1 = space.p2_index_i64(-y, x - y, z);
            let t2 = space.p2_index_i64(y - x, -x, z);
            if t1.is_some_and(|t| t < idx) || t2.is_some_and(|t| t < idx) {
                return None;
            }
            let row = signed_row(orbits, [(Some(idx), 1), (t1, 1), (t2, 1)], field);
            (!row.is_empty()).then_some(row)
        })
        .collect()
}

fn check_modulus(level: PrimeLevel, field: Fq) -> Result<(), SpaceError> {
    if field.q() == level.get() {
        return Err(SpaceError::ModulusIsLevel(field.q()));
    }
    Ok(())
}

fn build_plane_system(kind: SpaceKind, level: PrimeLevel, field: Fq) -> Result<RelationSystem, SpaceError> {
    check_modulus(level, field)?;
    let space = ProjectiveSpace::new(level);
    let orbits = OrbitMap::plane(&space, kind != SpaceKind::W);
    let mut matrix = SparseMatrixFq::new(field, orbits.nvars());
    let rows = three_term_rows_plane(&space, &orbits, field);
    push_unique(&mut matrix, rows, field);
    if kind == SpaceKind::U {
        let p = level.get() as i64;
        let sums: Vec<SparseRow> = (0..level.p1_len() as u32)
            .into_par_iter()
            .map(|i| {
                let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
                signed_row(&orbits, (0..p).map(|z| (space.p2_index_i64(x, y, z), 1)), field)
            })
            .collect();
        push_unique(&mut matrix, sums, field);
    }
    Ok(RelationSystem { kind, level, field, matrix, orbits })
}

/// Relations cutting out the cuspidal subspace `U` (conditions (i)-(iv)).
pub fn build_u_system(level: PrimeLevel, field: Fq) -> Result<RelationSystem, SpaceError> {
    build_plane_system(SpaceKind::U, level, field)
}

/// Relations cutting out `W` (conditions (i)-(ii)).
pub fn build_w_system(level: PrimeLevel, field: Fq) -> Result<RelationSystem, SpaceError> {
    build_plane_system(SpaceKind::W, level, field)
}

/// Relations cutting out `W'` (conditions (i)-(iii)).
pub fn build_wprime_system(level: PrimeLevel, field: Fq) -> Result<RelationSystem, SpaceError> {
    build_plane_system(SpaceKind::WPrime, level, field)
}

/// Relations cutting out `W₀(Δ(p))`.
pub fn build_w0_system(level: PrimeLevel, field: Fq) -> Result<RelationSystem, SpaceError> {
    check_modulus(level, field)?;
    let space = ProjectiveSpace::new(level);
    let orbits = OrbitMap::line(&space);
    let mut matrix = SparseMatrixFq::new(field, orbits.nvars());
    let rows: Vec<SparseRow> = (0..level.p1_len() as u32)
        .map(|i| {
            let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
            let pts = [
                (Some(i), 1),
                (space.p1_index_i64(-y, x - y), 1),
                (space.p1_index_i64(y - x, -x), 1),
            ];
            signed_row(&orbits, pts, field)
        })
        .collect();
    push_unique(&mut matrix, rows, field);
    Ok(RelationSystem { kind: SpaceKind::W0, level, field, matrix, orbits })
}

impl RelationSystem {
    /// Kernel in orbit coordinates (reduced echelon basis).
    pub fn kernel(&self, solver: Solver) -> Vec<Vec<u32>> {
        kernel_basis_with(&self.matrix, solver)
    }

    pub fn nullity(&self, solver: Solver) -> usize {
        match solver {
            Solver::Elimination => crate::exactla::eliminate(&self.matrix, Default::default()).nullity(),
            Solver::Wiedemann { .. } => self.kernel(solver).len(),
        }
    }

    /// Kernel basis as value tables on P² (kinds W, W', U).
    pub fn w_basis(&self, solver: Solver) -> Vec<WFunction> {
        assert_ne!(self.kind, SpaceKind::W0, "W0 systems live on P^1");
        self.kernel(solver)
            .into_iter()
            .map(|x| WFunction { level: self.level, field: self.field, values: self.orbits.expand(&x, self.field) })
            .collect()
    }

    /// Kernel basis as value tables on P¹ (kind W0).
    pub fn w0_basis(&self, solver: Solver) -> Vec<W0Function> {
        assert_eq!(self.kind, SpaceKind::W0, "only W0 systems live on P^1");
        self.kernel(solver)
            .into_iter()
            .map(|x| W0Function { level: self.level, field: self.field, values: self.orbits.expand(&x, self.field) })
            .collect()
    }
}

/// `(αf)(x:y:z) = f(x:y) + f(y:z) + f(z:x)`.
pub fn apply_alpha(f: &W0Function) -> WFunction {
    let space = ProjectiveSpace::new(f.level);
    let field = f.field;
    let values = (0..f.level.p2_len() as u32)
        .into_par_iter()
        .map(|i| {
            let [x, y, z] = space.p2_point(i).coords.map(|c| c as i64);
            field.add(field.add(f.at(&space, x, y), f.at(&space, y, z)), f.at(&space, z, x))
        })
        .collect();
    WFunction { level: f.level, field, values }
}

/// `βf`: zero off the coordinate lines, `f(x:y)` on `z = 0`, `f(y:z)` on `x = 0`, `f(z:x)` on `y = 0`.
pub fn apply_beta(f: &W0Function) -> WFunction {
    let space = ProjectiveSpace::new(f.level);
    let values = (0..f.level.p2_len() as u32)
        .into_par_iter()
        .map(|i| {
            let [x, y, z] = space.p2_point(i).coords.map(|c| c as i64);
            if z == 0 {
                f.at(&space, x, y)
            } else if x == 0 {
                f.at(&space, y, z)
            } else if y == 0 {
                f.at(&space, z, x)
            } else {
                0
            }
        })
        .collect();
    WFunction { level: f.level, field: f.field, values }
}

/// `(Ag)(x:y) = Σ_{z ≠ 0} g(x:y:z)`.
pub fn apply_a(g: &WFunction) -> W0Function {
    let space = ProjectiveSpace::new(g.level);
    let field = g.field;
    let p = g.level.get() as i64;
    let values = (0..g.level.p1_len() as u32)
        .map(|i| {
            let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
            (1..p).fold(0, |acc, z| field.add(acc, g.at(&space, x, y, z)))
        })
        .collect();
    W0Function { level: g.level, field, values }
}

/// `(Bg)(x:y) = g(x:y:0)`.
pub fn apply_b(g: &WFunction) -> W0Function {
    let space = ProjectiveSpace::new(g.level);
    let values = (0..g.level.p1_len() as u32)
        .map(|i| {
            let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
            g.at(&space, x, y, 0)
        })
        .collect();
    W0Function { level: g.level, field: g.field, values }
}

/// `(Cf)(x:y) = (p-1)⁻¹ Σ_{1≤λ≤p-1} f(1 : λx : λy)`.
pub fn apply_c(f: &WFunction) -> Result<W0Function, SpaceError> {
    let field = f.field;
    let p = f.level.get();
    let pm1 = field.from_i64(p as i64 - 1);
    if pm1 == 0 {
        return Err(SpaceError::ModulusDividesLevel { q: field.q(), pm1: p - 1 });
    }
    let inv = field.inv(pm1);
    let space = ProjectiveSpace::new(f.level);
    let values = (0..f.level.p1_len() as u32)
        .map(|i| {
            let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
            let s = (1..p as i64).fold(0, |acc, l| field.add(acc, f.at(&space, 1, l * x, l * y)));
            field.mul(s, inv)
        })
        .collect();
    Ok(W0Function { level: f.level, field, values })
}

/// `Df = -Cf + Bf`.
pub fn apply_d(f: &WFunction) -> Result<W0Function, SpaceError> {
    let c = apply_c(f)?;
    let b = apply_b(f);
    let field = f.field;
    let values = c.values.iter().zip(&b.values).map(|(&cv, &bv)| field.sub(bv, cv)).collect();
    Ok(W0Function { level: f.level, field, values })
}

fn plane_relations_hold(f: &WFunction, space: &ProjectiveSpace) -> bool {
    let field = f.field;
    (0..f.level.p2_len() as u32).into_par_iter().all(|i| {
        let [x, y, z] = space.p2_point(i).coords.map(|c| c as i64);
        let v = f.values[i as usize];
        f.at(space, z, x, y) == v
            && f.at(space, -x, y, z) == v
            && f.at(space, y, x, z) == field.neg(v)
            && field.add(field.add(v, f.at(space, -y, x - y, z)), f.at(space, y - x, -x, z)) == 0
    })
}

/// Exhaustive check of conditions (i)-(ii).
pub fn is_in_w(f: &WFunction) -> bool {
    let space = ProjectiveSpace::new(f.level);
    plane_relations_hold(f, &space)
}

/// Exhaustive check of conditions (i)-(iii).
pub fn is_in_wprime(f: &WFunction) -> bool {
    let space = ProjectiveSpace::new(f.level);
    plane_relations_hold(f, &space) && axes_vanish(f, &space)
}

fn axes_vanish(f: &WFunction, space: &ProjectiveSpace) -> bool {
    (0..f.level.p1_len() as u32).all(|i| {
        let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
        f.at(space, x, y, 0) == 0
    })
}

/// Exhaustive check of conditions (i)-(iv).
pub fn is_in_u(f: &WFunction) -> bool {
    let space = ProjectiveSpace::new(f.level);
    let field = f.field;
    let p = f.level.get() as i64;
    plane_relations_hold(f, &space)
        && axes_vanish(f, &space)
        && (0..f.level.p1_len() as u32).all(|i| {
            let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
            (0..p).fold(0, |acc, z| field.add(acc, f.at(&space, x, y, z))) == 0
        })
}

/// Exhaustive check of the `W₀(Δ(p))` conditions.
pub fn is_in_w0(f: &W0Function) -> bool {
    let space = ProjectiveSpace::new(f.level);
    let field = f.field;
    f.at(&space, 1, 0) == 0
        && (0..f.level.p1_len() as u32).all(|i| {
            let [x, y] = space.p1_point(i).coords.map(|c| c as i64);
            let v = f.values[i as usize];
            f.at(&space, -x, y) == v
                && f.at(&space, y, x) == field.neg(v)
                && field.add(field.add(v, f.at(&space, -y, x - y)), f.at(&space, y - x, -x)) == 0
        })
}

/// Random element of the span of `basis`.
pub fn random_combination<R: rand::Rng>(basis: &[Vec<u32>], n: usize, field: Fq, rng: &mut R) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for b in basis {
        field.axpy(&mut out, rng.gen_range(0..field.q()), b);
    }
    out
}

/// The cuspidal dimension and the `W₀` dimension at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelDims {
    pub dim_u: usize,
    pub dim_w0: usize,
}

impl LevelDims {
    /// `dim W / im β = dim U + dim W₀`.
    pub fn dim_w_mod_im_beta(&self) -> usize {
        self.dim_u + self.dim_w0
    }
}

pub fn level_dims(level: PrimeLevel, field: Fq, solver: Solver) -> Result<LevelDims, SpaceError> {
    let dim_u = build_u_system(level, field)?.nullity(solver);
    let dim_w0 = build_w0_system(level, field)?.nullity(solver);
    Ok(LevelDims { dim_u, dim_w0 })
}
