//! Compact block-circulant form of the relation matrices.
//!
//! In coordinate order the point (c1, c2) sits at `c1·d2 + c2`, and the
//! entry of A_i at ((a1, a2), (b1, b2)) only depends on
//! `(a1 - b1 mod d1, a2 - b2 mod d2)`. So A_i is a d1 × d1 circulant
//! arrangement of d2 × d2 circulant blocks, and d1 vectors of length d2
//! describe it completely.

use serde::Serialize;

use super::{OrbitalScheme, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCirculantForm {
    pub class: usize,
    /// Number of blocks per block row (d1).
    pub outer: usize,
    /// Block size (d2).
    pub inner: usize,
    /// `generators[m][t]` is the entry for an offset of `m` blocks and `t`
    /// positions inside the block, i.e. `M_ij = a_{(i - j) mod n}` per level.
    pub generators: Vec<Vec<u8>>,
}

impl BlockCirculantForm {
    pub fn entry(&self, x: usize, y: usize) -> u8 {
        let (a1, a2) = (x / self.inner, x % self.inner);
        let (b1, b2) = (y / self.inner, y % self.inner);
        let m = (a1 + self.outer - b1) % self.outer;
        let t = (a2 + self.inner - b2) % self.inner;
        self.generators[m][t]
    }

    pub fn expand(&self) -> Vec<Vec<u8>> {
        let n = self.outer * self.inner;
        (0..n).map(|x| (0..n).map(|y| self.entry(x, y)).collect()).collect()
    }

    /// First rows of the blocks in the first block row.
    pub fn first_block_row(&self) -> Vec<Vec<u8>> {
        (0..self.outer)
            .map(|b| (0..self.inner).map(|y| self.entry(0, b * self.inner + y)).collect())
            .collect()
    }
}

pub fn block_circulant_form(scheme: &OrbitalScheme, class: usize) -> Result<BlockCirculantForm, SchemeError> {
    let s = scheme.scheme();
    let rank = s.rank();
    if class >= rank {
        return Err(SchemeError::ClassOutOfRange { class, rank });
    }
    let (d1, d2) = scheme.ring().invariant_factors();
    let generators = (0..d1)
        .map(|m| (0..d2).map(|t| u8::from(s.relation(m * d2 + t, 0) == class)).collect())
        .collect();
    let form = BlockCirculantForm { class, outer: d1, inner: d2, generators };
    let n = s.points();
    for x in 0..n {
        for y in 0..n {
            if form.entry(x, y) != u8::from(s.relation(x, y) == class) {
                return Err(SchemeError::NotBlockCirculant { class, x, y });
            }
        }
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussInt;
    use crate::quotient_ring::{PointOrdering, QuotientRing};

    fn scheme(a: &str, ordering: PointOrdering) -> OrbitalScheme {
        let ring = QuotientRing::build(a.parse::<GaussInt>().unwrap()).unwrap();
        OrbitalScheme::for_ordering(ring, ordering).unwrap()
    }

    #[test]
    fn cyclic_case_is_one_circulant() {
        let s = scheme("3+2i", PointOrdering::Gfp);
        let rows: Vec<Vec<u8>> = (0..4).map(|c| block_circulant_form(&s, c).unwrap().generators[0].clone()).collect();
        assert_eq!(rows[0], vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(rows[1], vec![0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(rows[2], vec![0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0]);
        assert_eq!(rows[3], vec![0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0]);
    }

    #[test]
    fn two_by_two_blocks_for_two_plus_two_i() {
        let s = scheme("2+2i", PointOrdering::Coords);
        for c in 0..4 {
            let f = block_circulant_form(&s, c).unwrap();
            assert_eq!((f.outer, f.inner), (2, 4));
            let a = f.expand();
            // [[D1, D2], [D2, D1]]
            for x in 0..4 {
                for y in 0..4 {
                    assert_eq!(a[x][y], a[x + 4][y + 4]);
                    assert_eq!(a[x][y + 4], a[x + 4][y]);
                }
            }
            assert_eq!(a, s.scheme().table().adjacency(c));
        }
        let identity = block_circulant_form(&s, 0).unwrap();
        assert_eq!(identity.generators, vec![vec![1, 0, 0, 0], vec![0, 0, 0, 0]]);
        assert!(block_circulant_form(&s, 4).is_err());
    }
}
