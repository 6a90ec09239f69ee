//! Quotient schemes, involutions and divisor chains.
//!
//! For a closed class set 0̃ the union of its relations is an equivalence on
//! the points. Its classes are the points of the quotient, and the parent
//! classes are merged by the transitive closure of `a ~ b iff p_ab^i != 0
//! for some i in 0̃`. The construction is verified: if two parent pairs
//! between the same point classes fall into different merged classes, the
//! quotient is rejected.

use serde::Serialize;

use crate::gaussian::{canonical_associate, factor, GaussInt};
use crate::quotient_ring::{QuotientRing, RingError};
use crate::scheme::{build_scheme, is_closed, AssociationScheme, OrbitalScheme, RelationTable, SchemeError};

/// Minimal union-find over `0..n`.
struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Blocks sorted internally, ordered by smallest member.
    fn blocks(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|b| !b.is_empty()).collect()
    }
}

fn block_index(blocks: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut of = vec![0; n];
    for (b, members) in blocks.iter().enumerate() {
        for &m in members {
            of[m] = b;
        }
    }
    of
}

fn normalise(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Merged parent classes for the closed set `zero_tilde`; the block of 0 is
/// `zero_tilde` itself.
pub fn index_equivalence(scheme: &AssociationScheme, zero_tilde: &[usize]) -> Result<Vec<Vec<usize>>, SchemeError> {
    let zero_tilde = normalise(zero_tilde);
    if !is_closed(scheme, &zero_tilde)? {
        return Err(SchemeError::NotClosed(zero_tilde));
    }
    let r = scheme.rank();
    let p = scheme.intersection_numbers();
    let mut part = Partition::new(r);
    for a in 0..r {
        for b in 0..r {
            if zero_tilde.iter().any(|&i| p.get(a, b, i) != 0) {
                part.union(a, b);
            }
        }
    }
    let blocks = part.blocks();
    if blocks[0] != zero_tilde {
        return Err(SchemeError::NotClosed(zero_tilde));
    }
    Ok(blocks)
}

#[derive(Debug, Clone)]
pub struct QuotientScheme {
    pub zero_tilde: Vec<usize>,
    /// Parent points in each quotient point, ordered by smallest member.
    pub point_classes: Vec<Vec<usize>>,
    /// Parent classes merged into each quotient class; block 0 is 0̃.
    pub relation_classes: Vec<Vec<usize>>,
    pub scheme: AssociationScheme,
}

impl QuotientScheme {
    pub fn point_class_of(&self, parent_point: usize) -> usize {
        self.point_classes
            .iter()
            .position(|b| b.contains(&parent_point))
            .expect("point classes partition the parent points")
    }
}

pub fn quotient(scheme: &AssociationScheme, zero_tilde: &[usize]) -> Result<QuotientScheme, SchemeError> {
    let relation_classes = index_equivalence(scheme, zero_tilde)?;
    let zero_tilde = relation_classes[0].clone();
    let merged_of = block_index(&relation_classes, scheme.rank());

    let n = scheme.points();
    let mut part = Partition::new(n);
    for x in 0..n {
        for y in x + 1..n {
            if merged_of[scheme.relation(x, y)] == 0 {
                part.union(x, y);
            }
        }
    }
    let point_classes = part.blocks();
    let point_of = block_index(&point_classes, n);
    let m = point_classes.len();

    let mut cells: Vec<Option<u32>> = vec![None; m * m];
    for x in 0..n {
        for y in 0..n {
            let (bx, by) = (point_of[x], point_of[y]);
            let merged = merged_of[scheme.relation(x, y)] as u32;
            match cells[bx * m + by] {
                None => cells[bx * m + by] = Some(merged),
                Some(c) if c == merged => {}
                Some(_) => return Err(SchemeError::IllDefinedQuotient(bx, by)),
            }
        }
    }
    let cells = cells.into_iter().map(|c| c.expect("every block pair is visited")).collect();
    let table = RelationTable::new(m, cells)?;
    let quotient = AssociationScheme::from_table(table)?;
    Ok(QuotientScheme { zero_tilde, point_classes, relation_classes, scheme: quotient })
}

/// The classes of valency one and the point involutions they induce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Involutions {
    /// A = {a | p_aa^0 = 1}, ascending; always contains 0.
    pub classes: Vec<usize>,
    /// σ_a as a map on points, one per entry of `classes`.
    pub permutations: Vec<Vec<usize>>,
    /// `composition[x][y]` is the class c with σ_a σ_b = σ_c for
    /// a = classes[x], b = classes[y].
    pub composition: Vec<Vec<usize>>,
}

impl Involutions {
    /// Order of the group (A, ∘).
    pub fn order(&self) -> usize {
        self.classes.len()
    }
}

/// Builds σ_a for every a in A and verifies that (A, ∘) is an elementary
/// abelian 2-group with σ_a σ_b = σ_c where p_ab^c != 0.
pub fn involutions(scheme: &AssociationScheme) -> Result<Involutions, SchemeError> {
    let n = scheme.points();
    let p = scheme.intersection_numbers();
    let classes: Vec<usize> = (0..scheme.rank()).filter(|&a| p.get(a, a, 0) == 1).collect();
    let permutations: Vec<Vec<usize>> = classes
        .iter()
        .map(|&a| {
            (0..n)
                .map(|x| (0..n).find(|&y| scheme.relation(x, y) == a).expect("valency one"))
                .collect()
        })
        .collect();
    let broken = |msg: String| Err(SchemeError::Involution(msg));

    let mut composition = vec![vec![0; classes.len()]; classes.len()];
    for (ia, &a) in classes.iter().enumerate() {
        let sa = &permutations[ia];
        if (0..n).any(|x| sa[sa[x]] != x) {
            return broken(format!("σ_{a} is not an involution"));
        }
        for (ib, &b) in classes.iter().enumerate() {
            let sb = &permutations[ib];
            let ab: Vec<usize> = (0..n).map(|x| sa[sb[x]]).collect();
            let ba: Vec<usize> = (0..n).map(|x| sb[sa[x]]).collect();
            if ab != ba {
                return broken(format!("σ_{a} and σ_{b} do not commute"));
            }
            let c = scheme.relation(0, ab[0]);
            let Some(ic) = classes.iter().position(|&k| k == c) else {
                return broken(format!("σ_{a}σ_{b} lands in class {c} outside A"));
            };
            if permutations[ic] != ab {
                return broken(format!("σ_{a}σ_{b} is not σ_{c}"));
            }
            if p.get(a, b, c) == 0 {
                return broken(format!("p_{a}{b}^{c} = 0"));
            }
            composition[ia][ib] = c;
        }
    }
    Ok(Involutions { classes, permutations, composition })
}

/// Classes of L = Z[i]/α made of multiples of `delta` (a divisor of α):
/// the closed set whose quotient is Z[i]/δ.
pub fn divisor_zero_tilde(scheme: &OrbitalScheme, delta: GaussInt) -> Vec<usize> {
    let ring = scheme.ring();
    let classes = ring
        .residues()
        .iter()
        .filter(|r| r.rep.divisible_by(delta))
        .map(|r| scheme.class_of_index(r.index))
        .collect::<Vec<_>>();
    normalise(&classes)
}

#[derive(Debug, Clone)]
pub struct ChainStep {
    pub divisor: GaussInt,
    pub scheme: OrbitalScheme,
    pub involutions: Involutions,
}

/// One maximal divisor chain α = α_0, α_1, ..., dividing out one prime of
/// the factorization of α per step, in factor order. Divisors are reported
/// as canonical associates.
pub fn quotient_chain(alpha: GaussInt) -> Result<Vec<ChainStep>, SchemeError> {
    if alpha.is_unit() {
        return Err(RingError::UnitModulus(alpha).into());
    }
    let fact = factor(alpha)?;
    let mut current = alpha;
    let mut steps = Vec::new();
    for prime in fact.primes_with_repetition() {
        let divisor = canonical_associate(current)?;
        let scheme = build_scheme(QuotientRing::build(divisor)?)?;
        let involutions = involutions(scheme.scheme())?;
        steps.push(ChainStep { divisor, scheme, involutions });
        current = current.exact_div(prime).expect("prime from the factorization divides");
    }
    debug_assert!(current.is_unit());
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient_ring::PointOrdering;
    use crate::scheme::{closed_subsets, relation_vector, verify_axioms};

    fn g(s: &str) -> GaussInt {
        s.parse().unwrap()
    }

    fn orbital(s: &str) -> OrbitalScheme {
        build_scheme(QuotientRing::build(g(s)).unwrap()).unwrap()
    }

    #[test]
    fn closed_subsets_examples() {
        let s = orbital("3+2i");
        assert_eq!(closed_subsets(s.scheme()).unwrap(), vec![vec![0], vec![0, 1, 2, 3]]);
        let s = orbital("2+2i");
        let two = s.class_of(g("2"));
        let closed = closed_subsets(s.scheme()).unwrap();
        assert!(closed.contains(&vec![0, two]));
        assert!(closed.contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn index_equivalence_examples() {
        let s = orbital("2+2i");
        let two = s.class_of(g("2"));
        let blocks = index_equivalence(s.scheme(), &[0, two]).unwrap();
        assert_eq!(blocks, vec![vec![0, two], vec![1], vec![3]]);
        assert_eq!(index_equivalence(s.scheme(), &[0]).unwrap(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(index_equivalence(s.scheme(), &[0, 1, 2, 3]).unwrap(), vec![vec![0, 1, 2, 3]]);
        assert!(matches!(index_equivalence(s.scheme(), &[0, 1]), Err(SchemeError::NotClosed(_))));
    }

    #[test]
    fn first_and_second_quotient_of_two_plus_two_i() {
        let s = orbital("2+2i");
        let ring = s.ring();
        let two = s.class_of(g("2"));
        let q = quotient(s.scheme(), &[0, two]).unwrap();
        assert_eq!(q.scheme.points(), 4);
        assert_eq!(q.scheme.first_row(), vec![0, 1, 2, 1]);
        // point classes {(0,0),(2,0)}, {(1,0),(3,0)}, {(0,1),(2,1)}, {(1,1),(3,1)}
        // written as (coordinate on 1 mod 4, coordinate on 1+i)
        let reps: Vec<Vec<GaussInt>> =
            q.point_classes.iter().map(|b| b.iter().map(|&x| ring.residue(x).rep).collect()).collect();
        assert_eq!(reps[0], vec![g("0"), g("2")]);
        assert_eq!(reps[1], vec![g("1"), g("-1")]);
        assert!(verify_axioms(q.scheme.table()).all_passed());

        let closed = closed_subsets(&q.scheme).unwrap();
        let nontrivial: Vec<_> = closed.iter().filter(|c| c.len() > 1 && c.len() < q.scheme.rank()).collect();
        assert_eq!(nontrivial.len(), 1);
        let qq = quotient(&q.scheme, nontrivial[0]).unwrap();
        assert_eq!(qq.scheme.points(), 2);
        // {(0,0)~, (0,1)~} and {(1,0)~, (1,1)~}
        assert_eq!(qq.point_classes, vec![vec![0, 2], vec![1, 3]]);
        assert!(verify_axioms(qq.scheme.table()).all_passed());
        assert_eq!(relation_vector(&s, PointOrdering::Coords).unwrap().entries.len(), 8);
    }

    #[test]
    fn trivial_quotient_is_a_copy() {
        let s = orbital("4+1i");
        let q = quotient(s.scheme(), &[0]).unwrap();
        assert_eq!(q.scheme.table(), s.scheme().table());
        let all: Vec<usize> = (0..s.scheme().rank()).collect();
        let q = quotient(s.scheme(), &all).unwrap();
        assert_eq!(q.scheme.points(), 1);
    }

    #[test]
    fn involution_examples() {
        let s = orbital("2+2i");
        let inv = involutions(s.scheme()).unwrap();
        assert_eq!(inv.classes, vec![0, s.class_of(g("2"))]);
        assert_eq!(inv.permutations[0], (0..8).collect::<Vec<_>>());
        let two = s.class_of(g("2"));
        assert_eq!(inv.composition, vec![vec![0, two], vec![two, 0]]);

        let s = orbital("3+2i");
        assert_eq!(involutions(s.scheme()).unwrap().classes, vec![0]);
    }

    #[test]
    fn chain_examples() {
        let chain = quotient_chain(g("2+2i")).unwrap();
        let divisors: Vec<GaussInt> = chain.iter().map(|c| c.divisor).collect();
        assert_eq!(divisors, vec![g("2+2i"), g("2"), g("1+i")]);
        let orders: Vec<usize> = chain.iter().map(|c| c.involutions.order()).collect();
        assert_eq!(orders, vec![2, 2, 2]);

        assert_eq!(quotient_chain(g("3+2i")).unwrap().len(), 1);
        let chain = quotient_chain(g("2")).unwrap();
        assert_eq!(chain.iter().map(|c| c.divisor).collect::<Vec<_>>(), vec![g("2"), g("1+i")]);
        assert!(quotient_chain(g("0")).is_err());
        assert!(quotient_chain(g("-1")).is_err());
    }

    #[test]
    fn consecutive_chain_steps_are_quotients() {
        for a in ["2+2i", "4", "5+12i", "6+2i"] {
            let chain = quotient_chain(g(a)).unwrap();
            for w in chain.windows(2) {
                let zt = divisor_zero_tilde(&w[0].scheme, w[1].divisor);
                let q = quotient(w[0].scheme.scheme(), &zt).unwrap();
                assert_eq!(q.scheme.points(), w[1].scheme.ring().order(), "{a}");
            }
        }
    }
}
