//! The finite quotient L = Z[i]/αZ[i].
//!
//! Each residue class is represented by its smallest-norm member (ties go to
//! the larger real part, then the larger imaginary part). The additive group
//! of L is decomposed as Z_{d1} × Z_{d2} with `d1 | d2`, and residues are
//! stored in coordinate order: index `c1·d2 + c2` for the element
//! `c1·g1 + c2·g2`. This puts `d1` blocks of length `d2` side by side, which
//! is what makes the relation matrices block-circulant.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{divmod_nearest, GaussInt, ONE, ZERO};
use crate::snf::smith_diagonal;

/// Upper bound on `norm(α)` accepted by [`QuotientRing::build`].
pub const MAX_ORDER: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("modulus {0} is a unit; the quotient is trivial")]
    UnitModulus(GaussInt),
    #[error("quotient of order {0} exceeds the limit of {MAX_ORDER}")]
    TooLarge(i64),
    #[error("residue {0:?} does not belong to Z[i]/({1})")]
    ForeignResidue(Residue, GaussInt),
    #[error("ordering {0} requires a cyclic quotient, but Z[i]/({1}) is Z_{2} x Z_{3}")]
    NotCyclic(&'static str, GaussInt, i64, i64),
}

/// One class of L: its canonical representative and its position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub rep: GaussInt,
    pub index: usize,
}

/// Point orderings in which relation vectors can be printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointOrdering {
    /// Coordinate order of Z_{d1} × Z_{d2}, second coordinate inner.
    Coords,
    /// Carrier {0, 1, ..., n-1} read as integers modulo α; needs L cyclic.
    Gfp,
}

impl std::str::FromStr for PointOrdering {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "coords" => Ok(PointOrdering::Coords),
            "gfp" => Ok(PointOrdering::Gfp),
            other => Err(format!("unknown ordering {other:?} (expected coords or gfp)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuotientRing {
    alpha: GaussInt,
    order: usize,
    residues: Vec<Residue>,
    invariant_factors: (usize, usize),
    basis: (GaussInt, GaussInt),
    index_of: HashMap<GaussInt, usize>,
}

/// Smallest-norm member of the class of `x` modulo `alpha`.
pub fn canonical_rep(x: GaussInt, alpha: GaussInt) -> GaussInt {
    let (_, r) = divmod_nearest(x, alpha).expect("modulus checked nonzero");
    let rot = alpha.rotate();
    let mut best = r;
    for a in -1..=1 {
        for b in -1..=1 {
            let c = r - alpha * a - rot * b;
            if c.preference_cmp(&best).is_lt() {
                best = c;
            }
        }
    }
    best
}

impl QuotientRing {
    pub fn build(alpha: GaussInt) -> Result<Self, RingError> {
        if alpha.is_zero() {
            return Err(RingError::ZeroModulus);
        }
        if alpha.is_unit() {
            return Err(RingError::UnitModulus(alpha));
        }
        let n = alpha.norm();
        if n > MAX_ORDER {
            return Err(RingError::TooLarge(n));
        }

        // scan a box wide enough to hold every minimal-norm representative
        let bound = alpha.l1();
        let mut reps = Vec::with_capacity(n as usize);
        for x in -bound..=bound {
            for y in -bound..=bound {
                let z = GaussInt::new(x, y);
                if canonical_rep(z, alpha) == z {
                    reps.push(z);
                }
            }
        }
        assert_eq!(reps.len() as i64, n, "residue scan for {alpha} is incomplete");

        let lattice = vec![vec![alpha.re, -alpha.im], vec![alpha.im, alpha.re]];
        let diag = smith_diagonal(lattice);
        let (d1, d2) = (diag[0] as usize, diag[1] as usize);
        debug_assert_eq!((d1 * d2) as i64, n);

        // 1 has order d2 = n / gcd(re, im): it spans the largest cyclic factor
        let g2 = ONE;
        let cyclic: Vec<GaussInt> = (0..d2 as i64).map(|k| canonical_rep(GaussInt::real(k), alpha)).collect();
        let g1 = if d1 == 1 {
            ZERO
        } else {
            let in_cyclic: std::collections::HashSet<GaussInt> = cyclic.iter().copied().collect();
            let mut candidates = reps.clone();
            candidates.sort_by(|a, b| a.preference_cmp(b));
            candidates
                .into_iter()
                .find(|&c| {
                    canonical_rep(c * d1 as i64, alpha).is_zero()
                        && (1..d1 as i64).all(|k| !in_cyclic.contains(&canonical_rep(c * k, alpha)))
                })
                .expect("a complement to the cyclic subgroup <1> exists")
        };

        let mut residues = Vec::with_capacity(n as usize);
        let mut index_of = HashMap::with_capacity(n as usize);
        for c1 in 0..d1 as i64 {
            for c2 in 0..d2 as i64 {
                let rep = canonical_rep(g1 * c1 + g2 * c2, alpha);
                let index = residues.len();
                let fresh = index_of.insert(rep, index).is_none();
                debug_assert!(fresh, "coordinate map is not injective");
                residues.push(Residue { rep, index });
            }
        }

        Ok(QuotientRing {
            alpha,
            order: n as usize,
            residues,
            invariant_factors: (d1, d2),
            basis: (g1, g2),
            index_of,
        })
    }

    pub fn alpha(&self) -> GaussInt {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn residue(&self, index: usize) -> Residue {
        self.residues[index]
    }

    pub fn invariant_factors(&self) -> (usize, usize) {
        self.invariant_factors
    }

    pub fn coordinate_basis(&self) -> (GaussInt, GaussInt) {
        self.basis
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.0 == 1
    }

    pub fn reduce(&self, x: GaussInt) -> Residue {
        let rep = canonical_rep(x, self.alpha);
        self.residues[self.index_of[&rep]]
    }

    pub fn index_of(&self, x: GaussInt) -> usize {
        self.reduce(x).index
    }

    pub fn contains(&self, res: &Residue) -> bool {
        self.residues.get(res.index) == Some(res)
    }

    pub fn coords(&self, res: &Residue) -> Result<(usize, usize), RingError> {
        if !self.contains(res) {
            return Err(RingError::ForeignResidue(*res, self.alpha));
        }
        Ok(self.coords_of_index(res.index))
    }

    pub fn coords_of_index(&self, index: usize) -> (usize, usize) {
        let d2 = self.invariant_factors.1;
        (index / d2, index % d2)
    }

    pub fn index_of_coords(&self, c1: usize, c2: usize) -> usize {
        let (d1, d2) = self.invariant_factors;
        (c1 % d1) * d2 + c2 % d2
    }

    /// Index of `x - y` via coordinate arithmetic.
    pub fn sub_index(&self, x: usize, y: usize) -> usize {
        let (d1, d2) = self.invariant_factors;
        let (a1, a2) = self.coords_of_index(x);
        let (b1, b2) = self.coords_of_index(y);
        self.index_of_coords(a1 + d1 - b1, a2 + d2 - b2)
    }

    /// Residue indices listed in the given point ordering.
    pub fn ordering(&self, ordering: PointOrdering) -> Result<Vec<usize>, RingError> {
        match ordering {
            PointOrdering::Coords => Ok((0..self.order).collect()),
            PointOrdering::Gfp => {
                if !self.is_cyclic() {
                    let (d1, d2) = self.invariant_factors;
                    return Err(RingError::NotCyclic("gfp", self.alpha, d1 as i64, d2 as i64));
                }
                Ok((0..self.order as i64).map(|g| self.index_of(GaussInt::real(g))).collect())
            }
        }
    }

    pub fn to_export(&self) -> RingExport {
        RingExport {
            alpha: self.alpha,
            order: self.order,
            invariant_factors: [self.invariant_factors.0, self.invariant_factors.1],
            coordinate_basis: [self.basis.0, self.basis.1],
            residues: self
                .residues
                .iter()
                .map(|r| {
                    let (c1, c2) = self.coords_of_index(r.index);
                    ResidueExport { index: r.index, rep: r.rep, coords: [c1, c2] }
                })
                .collect(),
        }
    }
}

/// A section of the projection Z[i] → L: the canonical representative.
pub fn section(res: &Residue) -> GaussInt {
    res.rep
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueExport {
    pub index: usize,
    pub rep: GaussInt,
    pub coords: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingExport {
    pub alpha: GaussInt,
    pub order: usize,
    pub invariant_factors: [usize; 2],
    pub coordinate_basis: [GaussInt; 2],
    pub residues: Vec<ResidueExport>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussInt {
        s.parse().unwrap()
    }

    fn ring(s: &str) -> QuotientRing {
        QuotientRing::build(g(s)).unwrap()
    }

    #[test]
    fn build_examples() {
        let r = ring("3+2i");
        assert_eq!((r.order(), r.invariant_factors()), (13, (1, 13)));
        let r = ring("7");
        assert_eq!((r.order(), r.invariant_factors()), (49, (7, 7)));
        let r = ring("2+2i");
        assert_eq!((r.order(), r.invariant_factors()), (8, (2, 4)));
        assert_eq!(r.coordinate_basis(), (g("1+i"), ONE));
    }

    #[test]
    fn build_rejects_degenerate_moduli() {
        assert_eq!(QuotientRing::build(ZERO).unwrap_err(), RingError::ZeroModulus);
        assert!(matches!(QuotientRing::build(g("-i")), Err(RingError::UnitModulus(_))));
        assert!(matches!(QuotientRing::build(g("2000")), Err(RingError::TooLarge(_))));
    }

    #[test]
    fn reduce_examples() {
        let r = ring("3+2i");
        assert_eq!(r.reduce(g("4")).rep, g("-1+i"));
        assert_eq!(r.reduce(ZERO).rep, ZERO);
        assert_eq!(r.reduce(ZERO).index, 0);
        assert_eq!(r.reduce(g("5")).rep, g("i"));
        // even order: four minimal candidates for the class of 2
        assert_eq!(ring("2+2i").reduce(g("-2i")).rep, g("2"));
    }

    #[test]
    fn coords_examples() {
        let r = ring("2+2i");
        assert_eq!(r.coords(&r.reduce(ZERO)).unwrap(), (0, 0));
        let (g1, g2) = r.coordinate_basis();
        assert_eq!(r.coords(&r.reduce(g2)).unwrap(), (0, 1));
        assert_eq!(r.coords(&r.reduce(g1)).unwrap(), (1, 0));
        let r = ring("3+2i");
        assert_eq!(r.coords(&r.reduce(ONE)).unwrap(), (0, 1));
        let foreign = Residue { rep: g("5"), index: 3 };
        assert!(matches!(r.coords(&foreign), Err(RingError::ForeignResidue(..))));
    }

    #[test]
    fn section_is_a_right_inverse() {
        let r = ring("3+2i");
        assert_eq!(section(&r.reduce(ZERO)), ZERO);
        assert_eq!(section(&r.reduce(g("4"))), g("-1+i"));
        for res in r.residues() {
            assert_eq!(r.reduce(section(res)), *res);
        }
    }

    #[test]
    fn gfp_ordering_needs_a_cyclic_quotient() {
        assert!(ring("2+2i").ordering(PointOrdering::Gfp).is_err());
        let r = ring("3+2i");
        assert_eq!(r.ordering(PointOrdering::Gfp).unwrap(), (0..13).collect::<Vec<_>>());
        assert_eq!("coords".parse::<PointOrdering>().unwrap(), PointOrdering::Coords);
        assert!("rows".parse::<PointOrdering>().is_err());
    }

    #[test]
    fn coordinates_are_an_additive_bijection() {
        for a in -6i64..=6 {
            for b in 0i64..=6 {
                let alpha = GaussInt::new(a, b);
                if alpha.norm() < 2 || alpha.norm() > 60 {
                    continue;
                }
                let r = QuotientRing::build(alpha).unwrap();
                let (d1, d2) = r.invariant_factors();
                for x in r.residues() {
                    assert_eq!(canonical_rep(x.rep, alpha), x.rep);
                    for y in r.residues() {
                        let sum = r.reduce(x.rep + y.rep);
                        let (x1, x2) = r.coords(x).unwrap();
                        let (y1, y2) = r.coords(y).unwrap();
                        assert_eq!(r.coords(&sum).unwrap(), ((x1 + y1) % d1, (x2 + y2) % d2));
                    }
                }
            }
        }
    }
}
