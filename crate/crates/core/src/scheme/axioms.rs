//! The five scheme conditions, checked on adjacency matrices.

use serde::Serialize;

use super::RelationTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// Σ A_i = J, and the classes partition X × X.
    Partition,
    /// Every A_i^T is some A_j.
    TransposeClosed,
    /// A_0 = I.
    Identity,
    /// A_i A_j = Σ_k p_ij^k A_k.
    ProductExpansion,
    /// A_i A_j = A_j A_i.
    Commutative,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Partition,
        Axiom::TransposeClosed,
        Axiom::Identity,
        Axiom::ProductExpansion,
        Axiom::Commutative,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AxiomWitness {
    /// Entry (x, y) of the offending matrix.
    Entry { x: usize, y: usize },
    /// Class whose transpose is not a class.
    Class { class: usize },
    /// `(A_i A_j)(x, y)` disagrees with the reference value.
    Product { i: usize, j: usize, x: usize, y: usize, expected: u32, found: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub witness: Option<AxiomWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is checked")
    }
}

fn check(axiom: Axiom, witness: Option<AxiomWitness>) -> AxiomCheck {
    AxiomCheck { axiom, passed: witness.is_none(), witness }
}

/// Runs all five checks. The product check takes p_ij^k from the
/// representative pair of class k and compares every entry of every product
/// `A_i A_j` against it.
pub fn verify_axioms(table: &RelationTable) -> AxiomReport {
    let n = table.points();
    let r = table.rank();
    let nb = table.neighbours();

    // Σ_i A_i accumulated from the sparse rows of each A_i
    let mut sum = vec![0u32; n * n];
    for class in &nb {
        for (x, row) in class.iter().enumerate() {
            for &y in row {
                sum[x * n + y as usize] += 1;
            }
        }
    }
    let partition = sum
        .iter()
        .position(|&v| v != 1)
        .map(|c| AxiomWitness::Entry { x: c / n, y: c % n });

    let reps = table.representative_pairs();
    let transpose = (0..r)
        .find(|&i| {
            let (x0, y0) = reps[i];
            let j = table.get(y0, x0);
            !(0..n).all(|x| (0..n).all(|y| (table.get(x, y) == i) == (table.get(y, x) == j)))
        })
        .map(|class| AxiomWitness::Class { class });

    let identity = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| (table.get(x, y) == 0) != (x == y))
        .map(|(x, y)| AxiomWitness::Entry { x, y });

    // reference p_ij^k from one pair per class
    let mut p = vec![0u32; r * r * r];
    let mut counts = vec![0u32; r * r];
    for (k, &(x, y)) in reps.iter().enumerate() {
        table.path_counts(x, y, &mut counts);
        for ij in 0..r * r {
            p[ij * r + k] = counts[ij];
        }
    }

    let mut expansion = None;
    let mut commutative = None;
    let mut row_ij = vec![0u32; n];
    let mut row_ji = vec![0u32; n];
    'pairs: for i in 0..r {
        for j in i..r {
            for x in 0..n {
                product_row(&nb, i, j, x, &mut row_ij);
                product_row(&nb, j, i, x, &mut row_ji);
                for y in 0..n {
                    let k = table.get(x, y);
                    if expansion.is_none() {
                        for (a, b, found) in [(i, j, row_ij[y]), (j, i, row_ji[y])] {
                            let expected = p[(a * r + b) * r + k];
                            if found != expected {
                                expansion = Some(AxiomWitness::Product { i: a, j: b, x, y, expected, found });
                                break;
                            }
                        }
                    }
                    if commutative.is_none() && row_ij[y] != row_ji[y] {
                        commutative = Some(AxiomWitness::Product {
                            i,
                            j,
                            x,
                            y,
                            expected: row_ji[y],
                            found: row_ij[y],
                        });
                    }
                    if expansion.is_some() && commutative.is_some() {
                        break 'pairs;
                    }
                }
            }
        }
    }

    AxiomReport {
        checks: vec![
            check(Axiom::Partition, partition),
            check(Axiom::TransposeClosed, transpose),
            check(Axiom::Identity, identity),
            check(Axiom::ProductExpansion, expansion),
            check(Axiom::Commutative, commutative),
        ],
    }
}

/// Row x of A_i A_j, from the sparse rows of the adjacency matrices.
fn product_row(nb: &[Vec<Vec<u32>>], i: usize, j: usize, x: usize, out: &mut [u32]) {
    out.iter_mut().for_each(|v| *v = 0);
    for &z in &nb[i][x] {
        for &y in &nb[j][z as usize] {
            out[y as usize] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::test_util::pentagon;

    #[test]
    fn pentagon_passes() {
        assert!(verify_axioms(&pentagon()).all_passed());
    }

    #[test]
    fn directed_triangle_and_broken_identity() {
        // directed 3-cycle with its reverse: a fine non-symmetric scheme
        let t = RelationTable::from_fn(3, |x, y| ((y + 3 - x) % 3) as u32).unwrap();
        let report = verify_axioms(&t);
        assert!(report.all_passed(), "{report:?}");

        // identity class broken
        let t = RelationTable::from_fn(3, |x, y| if x == y && x != 2 { 0 } else { 1 }).unwrap();
        let report = verify_axioms(&t);
        assert!(!report.get(Axiom::Identity).passed);
        assert_eq!(report.get(Axiom::Identity).witness, Some(AxiomWitness::Entry { x: 2, y: 2 }));
    }

    #[test]
    fn transpose_failure_is_caught() {
        let t = RelationTable::from_fn(3, |x, y| match (x, y) {
            _ if x == y => 0,
            (0, 1) | (1, 2) => 1,
            _ => 2,
        })
        .unwrap();
        let report = verify_axioms(&t);
        assert!(!report.get(Axiom::TransposeClosed).passed);
    }
}
