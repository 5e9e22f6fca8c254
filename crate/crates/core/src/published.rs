//! Published reference values: the levels below 2400 carrying cuspidal
//! classes, and `E_ℓ` eigenvalues for a fixed common eigenvector.

/// `(p, dim W/im β, dim U)`.
pub const LEVEL_DIMENSIONS: [(u32, usize, usize); 11] = [
    (53, 6, 2),
    (61, 6, 2),
    (79, 8, 2),
    (89, 9, 2),
    (223, 20, 2),
    (521, 45, 2),
    (953, 81, 2),
    (1289, 109, 2),
    (1433, 121, 2),
    (1913, 161, 2),
    (2089, 175, 2),
];

/// One row: `e_ℓ = a + b√D` and `φ_ℓ = T² + c1·T + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenRow {
    pub ell: u32,
    pub a: i64,
    pub b: i64,
    pub c1: i64,
    pub c0: i64,
}

const fn row(ell: u32, a: i64, b: i64, c1: i64, c0: i64) -> EigenRow {
    EigenRow { ell, a, b, c1, c0 }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenTable {
    pub p: u32,
    pub d: i64,
    /// Modulus the values were computed with.
    pub q: u32,
    pub rows: &'static [EigenRow],
}

impl EigenTable {
    pub fn row(&self, ell: u32) -> Option<&EigenRow> {
        self.rows.iter().find(|r| r.ell == ell)
    }
}

pub const P521: EigenTable = EigenTable {
    p: 521,
    d: -2,
    q: 12379,
    rows: &[
        row(2, 1, 0, -2, 1),
        row(3, -1, 1, 2, 3),
        row(5, -5, 4, 10, 57),
        row(7, -3, 3, 6, 27),
        row(11, 1, 2, -2, 9),
        row(13, 1, -6, -2, 73),
        row(17, -17, 12, 34, 577),
        row(19, 7, -3, -14, 67),
        row(23, 13, -9, -26, 331),
        row(29, 1, -18, -2, 649),
        row(31, -7, -12, 14, 337),
        row(37, 9, 18, -18, 729),
        row(41, -29, 32, 58, 2889),
        row(43, -33, -9, 66, 1251),
        row(47, 73, -2, -146, 5337),
    ],
};

pub const P953: EigenTable = EigenTable {
    p: 953,
    d: -2,
    q: 12379,
    rows: &[
        row(2, 1, 0, -2, 1),
        row(3, -1, -1, 2, 3),
        row(5, 1, 0, -2, 1),
        row(7, 1, 0, -2, 1),
        row(11, 7, -3, -14, 67),
        row(13, -9, -12, 18, 369),
        row(17, 1, 8, -2, 129),
        row(19, 11, -3, -22, 139),
        row(23, -11, -13, 22, 459),
        row(29, 7, 8, -14, 177),
        row(31, -23, 33, 46, 2707),
        row(37, -9, -12, 18, 369),
        row(41, 37, -12, -74, 1657),
        row(43, 3, 15, -6, 459),
        row(47, -47, 45, 94, 6259),
    ],
};

pub const P1289: EigenTable = EigenTable {
    p: 1289,
    d: -1,
    q: 13001,
    rows: &[
        row(2, -1, 2, 2, 5),
        row(3, 1, 2, -2, 5),
        row(5, 2, 2, -4, 8),
        row(7, 5, -2, -10, 29),
        row(11, -5, -5, 10, 50),
        row(13, -11, 4, 22, 137),
        row(17, 23, -4, -46, 545),
        row(19, 1, 4, -2, 17),
        row(23, 1, -18, -2, 325),
        row(29, -4, 34, 8, 1172),
        row(31, 25, -20, -50, 1025),
        row(37, 31, 24, -62, 1537),
        row(41, -40, -20, 80, 2000),
        row(43, 7, -39, -14, 1570),
        row(47, -7, -29, 14, 890),
    ],
};

pub const P1433: EigenTable = EigenTable {
    p: 1433,
    d: -1,
    q: 13001,
    rows: &[
        row(2, -1, 2, 2, 5),
        row(3, 1, 2, -2, 5),
        row(5, -1, -4, 2, 17),
        row(7, -3, 5, 6, 34),
        row(11, 1, 10, -2, 101),
        row(13, 16, 2, -32, 260),
        row(17, -17, -24, 34, 865),
        row(19, 11, -3, -22, 130),
        row(23, -19, 17, 38, 650),
        row(29, -19, 8, 38, 425),
        row(31, -11, 20, 22, 521),
        row(37, 2, -30, -4, 904),
        row(41, 32, -20, -64, 1424),
        row(43, -39, 22, 78, 2005),
        row(47, -31, 77, 62, 6890),
    ],
};

pub const P1913: EigenTable = EigenTable {
    p: 1913,
    d: -1,
    q: 13001,
    rows: &[
        row(2, -1, 2, 2, 5),
        row(3, -1, -1, 2, 2),
        row(5, -1, -4, 2, 17),
        row(7, 1, 4, -2, 17),
        row(11, 3, -5, -6, 34),
        row(13, -11, -16, 22, 377),
        row(17, 12, 0, -24, 144),
        row(19, -9, -21, 18, 522),
        row(23, -3, -14, 6, 205),
        row(29, 6, 22, -12, 520),
        row(31, 1, -10, -2, 101),
        row(37, -29, -16, 58, 1097),
        row(41, 85, 0, -170, 7225),
        row(43, 5, -32, -10, 1049),
        row(47, 1, -26, -2, 677),
    ],
};

pub const EIGEN_TABLES: [EigenTable; 5] = [P521, P953, P1289, P1433, P1913];

pub fn eigen_table(p: u32) -> Option<&'static EigenTable> {
    EIGEN_TABLES.iter().find(|t| t.p == p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;

    #[test]
    fn rows_are_self_consistent() {
        for t in EIGEN_TABLES {
            for r in t.rows {
                assert_eq!(r.c1, -2 * r.a, "p={} ℓ={}", t.p, r.ell);
                assert_eq!(r.c0, r.a * r.a - t.d * r.b * r.b, "p={} ℓ={}", t.p, r.ell);
                assert!(r.c0 <= 9 * (r.ell as i64).pow(2), "p={} ℓ={}", t.p, r.ell);
            }
        }
    }

    #[test]
    fn levels_are_squares_in_two_adics() {
        for (p, _, _) in LEVEL_DIMENSIONS.iter().filter(|(p, _, _)| *p > 500) {
            assert!(is_prime(*p as u64));
            assert_eq!(p % 8, 1, "p={p}");
        }
    }
}
