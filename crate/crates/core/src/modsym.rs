//! Modular symbols `[Q]` for 3×3 integer matrices (rows are the projective
//! points) and their reduction to sums of unimodular symbols.
//!
//! A step replaces `[q₁,q₂,q₃]` of determinant `d` by
//! `[v,q₂,q₃] + [q₁,v,q₃] + [q₁,q₂,v]`. Writing `w = v·adj(Q)`, the new
//! determinants are exactly `w₁, w₂, w₃`, and `w` ranges over the row lattice
//! of `adj(Q)`, which has covolume `d²` and contains `dZ³`. Minkowski gives a
//! nonzero `w` with `max |wᵢ| ≤ d^{2/3}`.

use crate::projective::ProjectiveSpace;
use crate::wspaces::WFunction;
use thiserror::Error;

pub type Mat3 = [[i64; 3]; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("row {0} of the symbol is zero")]
    ZeroRow(usize),
    #[error("no reducing vector found for determinant {0}")]
    SearchExhausted(i128),
    #[error("entry overflow during reduction")]
    Overflow,
}

/// A symbol with primitive rows and nonnegative determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModularSymbol {
    rows: Mat3,
    det: i64,
}

pub fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Adjugate: `m · adj(m) = det(m) · I`.
pub fn adjugate(m: &[[i128; 3]; 3]) -> [[i128; 3]; 3] {
    let mut a = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    a
}

fn widen(m: &Mat3) -> [[i128; 3]; 3] {
    m.map(|r| r.map(|x| x as i128))
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(r: [i128; 3]) -> [i128; 3] {
    let g = gcd128(gcd128(r[0], r[1]), r[2]);
    if g <= 1 {
        r
    } else {
        r.map(|x| x / g)
    }
}

impl ModularSymbol {
    /// Divide rows by their content and make the determinant nonnegative by
    /// negating row 1. Neither changes the symbol.
    pub fn normalize(raw: &Mat3) -> Result<Self, SymbolError> {
        let mut rows = [[0i128; 3]; 3];
        for (i, r) in raw.iter().enumerate() {
            if r.iter().all(|&x| x == 0) {
                return Err(SymbolError::ZeroRow(i));
            }
            rows[i] = primitive(r.map(|x| x as i128));
        }
        Self::from_wide(rows)
    }

    fn from_wide(mut rows: [[i128; 3]; 3]) -> Result<Self, SymbolError> {
        let mut det = det3(&rows);
        if det < 0 {
            rows[0] = rows[0].map(|x| -x);
            det = -det;
        }
        let narrow = |x: i128| i64::try_from(x).map_err(|_| SymbolError::Overflow);
        let mut out = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = narrow(rows[i][j])?;
            }
        }
        Ok(ModularSymbol { rows: out, det: narrow(det)? })
    }

    pub fn rows(&self) -> &Mat3 {
        &self.rows
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn is_degenerate(&self) -> bool {
        self.det == 0
    }

    pub fn is_unimodular(&self) -> bool {
        self.det == 1
    }

    pub fn first_column(&self) -> [i64; 3] {
        [self.rows[0][0], self.rows[1][0], self.rows[2][0]]
    }

    /// `[Q]` with row `i` replaced by `v`.
    fn substitute(&self, i: usize, v: [i128; 3]) -> Result<Self, SymbolError> {
        let mut rows = widen(&self.rows);
        rows[i] = v;
        Self::from_wide(rows)
    }
}

/// Formal integer combination of unimodular symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolSum {
    pub terms: Vec<(i64, ModularSymbol)>,
}

impl SymbolSum {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coefficient, P² index of the first column mod p)` per term.
    pub fn points(&self, space: &ProjectiveSpace) -> Vec<(i64, u32)> {
        self.terms
            .iter()
            .map(|(c, s)| {
                let [a, b, d] = s.first_column();
                (*c, space.p2_index_i64(a, b, d).expect("unimodular column is nonzero mod p"))
            })
            .collect()
    }
}

/// Order in which admissible reducing vectors are preferred. Any choice gives
/// the same value against `W`; the alternative exists to test that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VectorChoice {
    #[default]
    Canonical,
    Reversed,
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, s, t) with s a + t b = g >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Upper-triangular basis of the lattice spanned by `gens` and `dZ³`.
fn triangular_basis(gens: [[i128; 3]; 3], d: i128) -> [[i128; 3]; 3] {
    let mut rows: Vec<[i128; 3]> = gens.iter().map(|g| g.map(|x| x.rem_euclid(d))).collect();
    let mut basis = [[0i128; 3]; 3];
    for col in 0..3 {
        let mut pivot = [0i128; 3];
        pivot[col] = d;
        for r in rows.iter_mut() {
            if r[col] == 0 {
                continue;
            }
            let (g, s, t) = egcd(pivot[col], r[col]);
            let (a, b) = (pivot[col] / g, r[col] / g);
            let mut np = [0i128; 3];
            let mut nr = [0i128; 3];
            for j in col..3 {
                np[j] = s * pivot[j] + t * r[j];
                nr[j] = a * r[j] - b * pivot[j];
            }
            for j in col + 1..3 {
                np[j] = np[j].rem_euclid(d);
                nr[j] = nr[j].rem_euclid(d);
            }
            debug_assert_eq!(nr[col], 0);
            pivot = np;
            *r = nr;
        }
        basis[col] = pivot;
    }
    basis
}

/// LLL (δ = 3/4) for three small integer vectors, Gram-Schmidt in f64.
fn lll(mut b: [[i128; 3]; 3]) -> [[i128; 3]; 3] {
    let gso = |b: &[[i128; 3]; 3]| {
        let mut bs = [[0f64; 3]; 3];
        let mut mu = [[0f64; 3]; 3];
        let mut norm = [0f64; 3];
        for i in 0..3 {
            let bi = b[i].map(|x| x as f64);
            bs[i] = bi;
            for j in 0..i {
                mu[i][j] = (0..3).map(|k| bi[k] * bs[j][k]).sum::<f64>() / norm[j];
                for k in 0..3 {
                    bs[i][k] -= mu[i][j] * bs[j][k];
                }
            }
            norm[i] = (0..3).map(|k| bs[i][k] * bs[i][k]).sum();
        }
        (mu, norm)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < 3 && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&b);
            let r = mu[k][j].round() as i128;
            if r != 0 {
                for t in 0..3 {
                    b[k][t] -= r * b[j][t];
                }
            }
        }
        let (mu, norm) = gso(&b);
        if norm[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Largest `B` with `B³ ≤ d²`.
fn minkowski_bound(d: i128) -> i128 {
    let target = d * d;
    let mut b = (target as f64).cbrt() as i128;
    while (b + 1) * (b + 1) * (b + 1) <= target {
        b += 1;
    }
    while b * b * b > target {
        b -= 1;
    }
    b
}

fn sup(w: &[i128; 3]) -> i128 {
    w.iter().map(|x| x.abs()).max().unwrap_or(0)
}

type Candidate = ([i128; 3], [i128; 3]); // (w, v)

/// Preference key: smaller replacement determinants first, then `v` by
/// absolute entries, then by sign.
fn key(c: &Candidate) -> (i128, [i128; 3], [bool; 3]) {
    let (w, v) = c;
    (sup(w), v.map(|x| x.abs()), v.map(|x| x < 0))
}

/// `v = w·Q/d`, primitive with first nonzero entry positive, and the matching `w`.
fn candidate(w: [i128; 3], q: &[[i128; 3]; 3], d: i128) -> Candidate {
    let mut v = [0i128; 3];
    for j in 0..3 {
        let s: i128 = (0..3).map(|i| w[i] * q[i][j]).sum();
        debug_assert_eq!(s % d, 0);
        v[j] = s / d;
    }
    let g = gcd128(gcd128(v[0], v[1]), v[2]);
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
    (w.map(|x| sign * x / g), v.map(|x| sign * x / g))
}

fn pick(cands: impl Iterator<Item = Candidate>, choice: VectorChoice) -> Option<Candidate> {
    match choice {
        VectorChoice::Canonical => cands.min_by_key(key),
        VectorChoice::Reversed => cands.max_by_key(|c| {
            let (_, abs, neg) = key(c);
            (abs, neg)
        }),
    }
}

/// A primitive `v` with every replacement determinant at most `d^{2/3}` in
/// absolute value. Returns `(v, [det(Q with row i ← v)])`.
pub fn find_reducing_vector(q: &ModularSymbol, choice: VectorChoice) -> Result<([i128; 3], [i128; 3]), SymbolError> {
    let d = q.det as i128;
    assert!(d > 1, "find_reducing_vector needs |det| > 1");
    let qw = widen(&q.rows);
    let adj = adjugate(&qw);
    let bound = minkowski_bound(d);
    let basis = lll(triangular_basis(adj, d));

    let mut found: Vec<Candidate> = Vec::new();
    for c0 in -2i128..=2 {
        for c1 in -2i128..=2 {
            for c2 in -2i128..=2 {
                let w: [i128; 3] = std::array::from_fn(|j| c0 * basis[0][j] + c1 * basis[1][j] + c2 * basis[2][j]);
                if w != [0, 0, 0] && sup(&w) <= bound {
                    found.push(candidate(w, &qw, d));
                }
            }
        }
    }
    if found.is_empty() {
        found = enumerate_box(&triangular_basis(adj, d), bound).into_iter().map(|w| candidate(w, &qw, d)).collect();
    }
    pick(found.into_iter(), choice).map(|(w, v)| (v, w)).ok_or(SymbolError::SearchExhausted(d))
}

/// Every nonzero lattice vector with sup-norm at most `bound`, given an
/// upper-triangular basis.
fn enumerate_box(h: &[[i128; 3]; 3], bound: i128) -> Vec<[i128; 3]> {
    let mut out = Vec::new();
    let range = |offset: i128, step: i128| {
        // c with |offset + c·step| ≤ bound
        let lo = (-bound - offset).div_euclid(step) + i128::from((-bound - offset).rem_euclid(step) != 0);
        let hi = (bound - offset).div_euclid(step);
        lo..=hi
    };
    for c0 in range(0, h[0][0]) {
        let w0 = c0 * h[0][0];
        for c1 in range(c0 * h[0][1], h[1][1]) {
            let w1 = c0 * h[0][1] + c1 * h[1][1];
            for c2 in range(c0 * h[0][2] + c1 * h[1][2], h[2][2]) {
                let w2 = c0 * h[0][2] + c1 * h[1][2] + c2 * h[2][2];
                if (w0, w1, w2) != (0, 0, 0) {
                    out.push([w0, w1, w2]);
                }
            }
        }
    }
    out
}

/// Rewrite `[Q]` as a sum of unimodular symbols. Degenerate symbols give the empty sum.
pub fn reduce_to_unimodular(q: &ModularSymbol) -> Result<SymbolSum, SymbolError> {
    reduce_with(q, VectorChoice::Canonical)
}

pub fn reduce_with(q: &ModularSymbol, choice: VectorChoice) -> Result<SymbolSum, SymbolError> {
    let mut out = SymbolSum::default();
    let mut stack = vec![(1i64, *q)];
    while let Some((c, s)) = stack.pop() {
        match s.det {
            0 => {}
            1 => out.terms.push((c, s)),
            _ => {
                let (v, w) = find_reducing_vector(&s, choice)?;
                for i in 0..3 {
                    if w[i] != 0 {
                        stack.push((c, s.substitute(i, v)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Σ c · f(first column mod p)` over the terms.
pub fn evaluate(sum: &SymbolSum, f: &WFunction, space: &ProjectiveSpace) -> u32 {
    let field = f.field;
    sum.points(space)
        .into_iter()
        .fold(0, |acc, (c, idx)| field.add(acc, field.mul(field.from_i64(c), f.values[idx as usize])))
}
