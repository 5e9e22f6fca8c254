//! Diffing a level record against a published eigenvalue table.

use crate::record::LevelRecord;
use sl3cusp::published::EigenTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub field_matches: bool,
    /// True when the record agrees with the table after `√D ↦ −√D`.
    pub conjugated: bool,
    /// `ℓ` values (within `ells`) that disagree under the chosen conjugation.
    pub mismatches: Vec<u32>,
    /// `ℓ` values with no `E` entry in the record.
    pub missing: Vec<u32>,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        self.field_matches && self.mismatches.is_empty() && self.missing.is_empty()
    }
}

fn mismatches(rec: &LevelRecord, table: &EigenTable, ells: &[u32], sign: i64) -> (Vec<u32>, Vec<u32>) {
    let mut bad = Vec::new();
    let mut missing = Vec::new();
    for &l in ells {
        let Some(row) = table.row(l) else { continue };
        match rec.entry("E", l) {
            None => missing.push(l),
            Some(e) => {
                let same = e.eig.a == row.a
                    && sign * e.eig.b == row.b
                    && e.lift.trace == -row.c1
                    && e.lift.constant == row.c0;
                if !same {
                    bad.push(l);
                }
            }
        }
    }
    (bad, missing)
}

/// Compares `E_ℓ` eigenvalues and characteristic polynomials for `ℓ ∈ ells`,
/// choosing whichever global conjugation fits better.
pub fn compare(rec: &LevelRecord, table: &EigenTable, ells: &[u32]) -> Comparison {
    let (direct, missing) = mismatches(rec, table, ells, 1);
    let (conj, _) = mismatches(rec, table, ells, -1);
    let conjugated = conj.len() < direct.len();
    Comparison {
        field_matches: rec.d == table.d,
        conjugated,
        mismatches: if conjugated { conj } else { direct },
        missing,
    }
}
