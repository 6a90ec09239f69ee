//! Association schemes given by a relation table.
//!
//! [`RelationTable`] is an arbitrary partition of X × X into numbered
//! classes. [`AssociationScheme`] is a table whose intersection numbers have
//! been computed and checked to be constant on every class. The orbital
//! schemes on Z[i]/αZ[i] live in [`orbital`]; everything else in this module
//! works for any scheme, including quotient schemes.

pub mod axioms;
pub mod circulant;
pub mod eigen;
pub mod orbital;
pub mod primitivity;

use serde::Serialize;
use thiserror::Error;

use crate::gaussian::GaussError;
use crate::quotient_ring::RingError;

pub use axioms::{verify_axioms, Axiom, AxiomCheck, AxiomReport, AxiomWitness};
pub use circulant::{block_circulant_form, BlockCirculantForm};
pub use eigen::{eigenvalues, Eigenmatrix};
pub use orbital::{
    build_scheme, is_primitive_by_primality, relation_vector, signed_refinement, ClassOrder, OrbitalScheme,
    RelationVector, RotationGroup, SignedRefinement,
};
pub use primitivity::{
    closed_subsets, is_closed, is_primitive_bruteforce, is_primitive_connectivity, Primitivity,
    MAX_BRUTEFORCE_CLASSES,
};

/// Largest point count for which the full scheme (relation table and
/// intersection tensor) is built.
pub const MAX_SCHEME_POINTS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("relation table has {got} cells, expected {n}x{n}")]
    TableShape { n: usize, got: usize },
    #[error("relation class {0} is empty")]
    EmptyClass(usize),
    #[error("scheme on {n} points exceeds the limit of {MAX_SCHEME_POINTS}")]
    TooManyPoints { n: usize },
    #[error("row {row} has valency {found} for class {class}, row 0 has {expected}")]
    NonConstantValency { class: usize, row: usize, expected: usize, found: usize },
    #[error(
        "p_{i}{j}^{k} is not constant: {expected} at {first:?} but {found} at {other:?}"
    )]
    NonConstantIntersection {
        i: usize,
        j: usize,
        k: usize,
        first: (usize, usize),
        other: (usize, usize),
        expected: u32,
        found: u32,
    },
    #[error("{d} nonzero classes exceed the subset-enumeration cap of {cap}")]
    TooManyClasses { d: usize, cap: usize },
    #[error("class set {0:?} is not closed (its union is not an equivalence relation)")]
    NotClosed(Vec<usize>),
    #[error("quotient relation between point classes {0} and {1} is not well defined")]
    IllDefinedQuotient(usize, usize),
    #[error("class {class} is not block-circulant in coordinate order: entry ({x}, {y}) differs")]
    NotBlockCirculant { class: usize, x: usize, y: usize },
    #[error("involution structure broken: {0}")]
    Involution(String),
    #[error("class {class} out of range 0..{rank}")]
    ClassOutOfRange { class: usize, rank: usize },
}

/// An n × n table of class indices `0..rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    n: usize,
    rank: usize,
    cells: Vec<u32>,
}

impl RelationTable {
    /// Every index in `0..=max(cells)` must occur.
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self, SchemeError> {
        if cells.len() != n * n || n == 0 {
            return Err(SchemeError::TableShape { n, got: cells.len() });
        }
        let rank = *cells.iter().max().unwrap() as usize + 1;
        let mut seen = vec![false; rank];
        for &c in &cells {
            seen[c as usize] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return Err(SchemeError::EmptyClass(empty));
        }
        Ok(RelationTable { n, rank, cells })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32) -> Result<Self, SchemeError> {
        let cells = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        RelationTable::new(n, cells)
    }

    pub fn points(&self) -> usize {
        self.n
    }

    /// Number of classes including the diagonal class, `d + 1`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.cells[x * self.n..(x + 1) * self.n]
    }

    /// Dense 0/1 adjacency matrix of class `i`, row-major.
    pub fn adjacency(&self, i: usize) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|x| self.row(x).iter().map(|&c| u8::from(c as usize == i)).collect())
            .collect()
    }

    /// For each class, for each point x, the points y with (x, y) in that class.
    pub(crate) fn neighbours(&self) -> Vec<Vec<Vec<u32>>> {
        let mut out = vec![vec![Vec::new(); self.n]; self.rank];
        for x in 0..self.n {
            for (y, &c) in self.row(x).iter().enumerate() {
                out[c as usize][x].push(y as u32);
            }
        }
        out
    }

    /// First pair (row-major) in each class.
    pub fn representative_pairs(&self) -> Vec<(usize, usize)> {
        let mut reps = vec![None; self.rank];
        let mut left = self.rank;
        'scan: for x in 0..self.n {
            for y in 0..self.n {
                let c = self.get(x, y);
                if reps[c].is_none() {
                    reps[c] = Some((x, y));
                    left -= 1;
                    if left == 0 {
                        break 'scan;
                    }
                }
            }
        }
        reps.into_iter().map(|r| r.expect("every class is nonempty")).collect()
    }

    /// Counts of z with (x, z) in R_i and (z, y) in R_j, indexed `i * rank + j`.
    pub(crate) fn path_counts(&self, x: usize, y: usize, out: &mut [u32]) {
        out.iter_mut().for_each(|v| *v = 0);
        let rx = self.row(x);
        for z in 0..self.n {
            let i = rx[z] as usize;
            let j = self.get(z, y);
            out[i * self.rank + j] += 1;
        }
    }
}

/// The tensor p_ij^k, stored with k innermost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionNumbers {
    rank: usize,
    data: Vec<u32>,
}

impl IntersectionNumbers {
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(i * self.rank + j) * self.rank + k]
    }

    /// Bitmask over k of `p_ij^k != 0`; only valid for rank <= 64.
    pub(crate) fn support_mask(&self, i: usize, j: usize) -> u64 {
        (0..self.rank).filter(|&k| self.get(i, j, k) != 0).fold(0, |m, k| m | 1 << k)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| (0..self.rank).map(|k| self.get(i, j, k)).collect()).collect())
            .collect()
    }
}

/// p_ij^k from one representative pair per class, then checked on every
/// pair of that class.
pub fn intersection_numbers(table: &RelationTable) -> Result<IntersectionNumbers, SchemeError> {
    let r = table.rank();
    let reps = table.representative_pairs();
    let mut data = vec![0u32; r * r * r];
    let mut counts = vec![0u32; r * r];
    for (k, &(x, y)) in reps.iter().enumerate() {
        table.path_counts(x, y, &mut counts);
        for ij in 0..r * r {
            data[ij * r + k] = counts[ij];
        }
    }
    let p = IntersectionNumbers { rank: r, data };

    // validate: touched entries must match; the totals then force the rest to 0
    let n = table.points();
    let mut seen = vec![0u32; r * r];
    for x in 0..n {
        let rx = table.row(x);
        for y in 0..n {
            let k = rx[y] as usize;
            for z in 0..n {
                seen[rx[z] as usize * r + table.get(z, y)] += 1;
            }
            for z in 0..n {
                let (i, j) = (rx[z] as usize, table.get(z, y));
                let found = seen[i * r + j];
                if found != 0 {
                    let expected = p.get(i, j, k);
                    if found != expected {
                        return Err(SchemeError::NonConstantIntersection {
                            i,
                            j,
                            k,
                            first: reps[k],
                            other: (x, y),
                            expected,
                            found,
                        });
                    }
                    seen[i * r + j] = 0;
                }
            }
        }
    }
    Ok(p)
}

/// A relation table together with its (validated) intersection numbers.
#[derive(Debug, Clone)]
pub struct AssociationScheme {
    table: RelationTable,
    valencies: Vec<usize>,
    p: IntersectionNumbers,
}

impl AssociationScheme {
    pub fn from_table(table: RelationTable) -> Result<Self, SchemeError> {
        if table.points() > MAX_SCHEME_POINTS {
            return Err(SchemeError::TooManyPoints { n: table.points() });
        }
        let r = table.rank();
        let mut valencies = vec![0usize; r];
        for &c in table.row(0) {
            valencies[c as usize] += 1;
        }
        for x in 1..table.points() {
            let mut row = vec![0usize; r];
            for &c in table.row(x) {
                row[c as usize] += 1;
            }
            if let Some(class) = (0..r).find(|&c| row[c] != valencies[c]) {
                return Err(SchemeError::NonConstantValency {
                    class,
                    row: x,
                    expected: valencies[class],
                    found: row[class],
                });
            }
        }
        let p = intersection_numbers(&table)?;
        Ok(AssociationScheme { table, valencies, p })
    }

    pub fn table(&self) -> &RelationTable {
        &self.table
    }

    pub fn points(&self) -> usize {
        self.table.points()
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    /// Number of nonzero classes.
    pub fn d(&self) -> usize {
        self.table.rank() - 1
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    pub fn intersection_numbers(&self) -> &IntersectionNumbers {
        &self.p
    }

    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.table.get(x, y)
    }

    /// Row 0 of the relation table.
    pub fn first_row(&self) -> Vec<usize> {
        self.table.row(0).iter().map(|&c| c as usize).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudocyclicReport {
    /// `Σ_i p_ii^k` for k = 1..=d.
    pub sums: Vec<u32>,
    pub constant: bool,
}

/// Constancy of `Σ_i p_ii^k` over the nonzero classes k.
pub fn is_pseudocyclic(scheme: &AssociationScheme) -> PseudocyclicReport {
    let p = scheme.intersection_numbers();
    let r = scheme.rank();
    let sums: Vec<u32> = (1..r).map(|k| (0..r).map(|i| p.get(i, i, k)).sum()).collect();
    let constant = sums.windows(2).all(|w| w[0] == w[1]);
    PseudocyclicReport { sums, constant }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    /// The 5-cycle rank-3 scheme: distance 1 and distance 2 on Z_5.
    pub fn pentagon() -> RelationTable {
        RelationTable::from_fn(5, |x, y| {
            let d = (x + 5 - y) % 5;
            match d {
                0 => 0,
                1 | 4 => 1,
                _ => 2,
            }
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation() {
        assert!(matches!(RelationTable::new(2, vec![0, 1, 1]), Err(SchemeError::TableShape { .. })));
        assert_eq!(RelationTable::new(2, vec![0, 2, 2, 0]), Err(SchemeError::EmptyClass(1)));
    }

    #[test]
    fn pentagon_intersection_numbers() {
        let s = AssociationScheme::from_table(test_util::pentagon()).unwrap();
        assert_eq!(s.valencies(), &[1, 2, 2]);
        let p = s.intersection_numbers();
        assert_eq!(p.get(0, 0, 0), 1);
        assert_eq!(p.get(1, 1, 0), 2);
        // z adjacent to both ends of an edge: none; of a non-edge: one
        assert_eq!(p.get(1, 1, 1), 0);
        assert_eq!(p.get(1, 1, 2), 1);
        assert_eq!(p.get(1, 2, 1), 1);
        let pc = is_pseudocyclic(&s);
        assert_eq!(pc.sums, vec![1, 1]);
        assert!(pc.constant);
    }

    #[test]
    fn non_constant_counts_are_reported() {
        // path on 3 points is not a scheme
        let t = RelationTable::from_fn(3, |x, y| match x.abs_diff(y) {
            0 => 0,
            1 => 1,
            _ => 2,
        })
        .unwrap();
        assert!(matches!(
            AssociationScheme::from_table(t),
            Err(SchemeError::NonConstantValency { .. })
        ));
    }
}
