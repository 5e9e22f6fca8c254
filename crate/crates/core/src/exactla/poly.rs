use super::{Fq, LinAlgError};

/// Polynomial over F_q, coefficients low to high.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFq {
    pub coeffs: Vec<u32>,
}

impl PolyFq {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFq { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, field: Fq, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// Roots of a monic quadratic over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticRoots {
    Double(u32),
    /// Distinct roots, smaller residue first.
    Distinct(u32, u32),
    Irreducible,
}

/// `T^2 - tr(A) T + det(A)`.
pub fn charpoly_2x2(a: &[[u32; 2]; 2], field: Fq) -> PolyFq {
    let tr = field.add(a[0][0], a[1][1]);
    let det = field.sub(field.mul(a[0][0], a[1][1]), field.mul(a[0][1], a[1][0]));
    PolyFq { coeffs: vec![det, field.neg(tr), 1] }
}

/// Roots of a monic degree-2 polynomial via the discriminant.
pub fn quadratic_roots(f: &PolyFq, field: Fq) -> Result<QuadraticRoots, LinAlgError> {
    if f.degree() != Some(2) || f.coeffs[2] != 1 {
        return Err(LinAlgError::NotMonicQuadratic);
    }
    let (c, b) = (f.coeffs[0], f.coeffs[1]);
    let disc = field.sub(field.mul(b, b), field.mul(4, c));
    let half = field.inv(2);
    let Ok(s) = field.sqrt(disc) else {
        return Ok(QuadraticRoots::Irreducible);
    };
    let r1 = field.mul(field.sub(s, b), half);
    if s == 0 {
        return Ok(QuadraticRoots::Double(r1));
    }
    let r2 = field.mul(field.sub(field.neg(b), s), half);
    Ok(QuadraticRoots::Distinct(r1.min(r2), r1.max(r2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn charpoly_examples() {
        let f = Fq::new(12379).unwrap();
        assert_eq!(charpoly_2x2(&[[1, 0], [0, 1]], f).coeffs, vec![1, f.neg(2), 1]);
        let (a, b) = (5u32, 9u32);
        assert_eq!(
            charpoly_2x2(&[[a, 0], [0, b]], f).coeffs,
            vec![a * b, f.neg(a + b), 1]
        );
        // companion of T^2 + 2T + 3
        let comp = [[0, f.neg(3)], [1, f.neg(2)]];
        assert_eq!(charpoly_2x2(&comp, f).coeffs, vec![3, 2, 1]);
    }

    #[test]
    fn root_examples() {
        let f = Fq::new(12379).unwrap();
        let sq = PolyFq::new(vec![1, f.neg(2), 1]);
        assert_eq!(quadratic_roots(&sq, f).unwrap(), QuadraticRoots::Double(1));
        let f7 = Fq::new(7).unwrap();
        assert_eq!(
            quadratic_roots(&PolyFq::new(vec![1, 0, 1]), f7).unwrap(),
            QuadraticRoots::Irreducible
        );
        // T^2 - 2 over F_7: exhaust residues
        let g = PolyFq::new(vec![f7.neg(2), 0, 1]);
        let brute: Vec<u32> = (0..7).filter(|&r| g.eval(f7, r) == 0).collect();
        assert_eq!(brute, vec![3, 4]);
        assert_eq!(quadratic_roots(&g, f7).unwrap(), QuadraticRoots::Distinct(3, 4));
        assert!(quadratic_roots(&PolyFq::new(vec![1, 1]), f7).is_err());
    }

    proptest! {
        #[test]
        fn roots_match_vieta(b in 0u32..101, c in 0u32..101) {
            let f = Fq::new(101).unwrap();
            let g = PolyFq::new(vec![c, b, 1]);
            let brute: Vec<u32> = (0..101).filter(|&r| g.eval(f, r) == 0).collect();
            match quadratic_roots(&g, f).unwrap() {
                QuadraticRoots::Irreducible => prop_assert!(brute.is_empty()),
                QuadraticRoots::Double(r) => {
                    prop_assert_eq!(brute, vec![r]);
                    prop_assert_eq!(f.mul(r, r), c);
                }
                QuadraticRoots::Distinct(r1, r2) => {
                    prop_assert_eq!(brute, vec![r1, r2]);
                    prop_assert_eq!(f.mul(r1, r2), c);
                    prop_assert_eq!(f.add(r1, r2), f.neg(b));
                }
            }
        }
    }
}
