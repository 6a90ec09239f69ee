//! The scheme on L = Z[i]/αZ[i] whose relations are the orbitals of the
//! rotations ⟨i⟩ together with the translations: (x, y) ∈ R_k iff x - y lies
//! in the k-th rotation orbit of L.

use std::fmt;

use serde::Serialize;

use super::{AssociationScheme, RelationTable, SchemeError, MAX_SCHEME_POINTS};
use crate::gaussian::{is_gaussian_prime, GaussInt, ONE, UNITS};
use crate::quotient_ring::{PointOrdering, QuotientRing, RingError};

/// The rotation group acting on L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RotationGroup {
    /// ⟨i⟩ = {1, i, -1, -i}
    QuarterTurns,
    /// {1, -1}
    HalfTurns,
}

impl RotationGroup {
    pub fn elements(self) -> &'static [GaussInt] {
        const HALF: [GaussInt; 2] = [ONE, GaussInt::new(-1, 0)];
        match self {
            RotationGroup::QuarterTurns => &UNITS,
            RotationGroup::HalfTurns => &HALF,
        }
    }
}

/// How the nonzero classes are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClassOrder {
    /// By the first residue, in coordinate order, that lies in the orbit.
    /// Row 0 of the relation table then introduces classes 1, 2, ... in turn.
    FirstAppearance,
    /// By orbit representative under [`GaussInt::preference_cmp`]
    /// (norm first).
    Norm,
}

impl ClassOrder {
    /// Numbering used with each point ordering: coordinate order introduces
    /// classes left to right, the integer carrier lists them by norm.
    pub fn for_ordering(ordering: PointOrdering) -> Self {
        match ordering {
            PointOrdering::Coords => ClassOrder::FirstAppearance,
            PointOrdering::Gfp => ClassOrder::Norm,
        }
    }
}

/// Rotation orbits of L: `(class of each residue, orbits, representatives)`.
/// Each orbit is listed as `rep, u·rep, ...` over the group elements in
/// order, duplicates removed.
pub fn rotation_orbits(
    ring: &QuotientRing,
    group: RotationGroup,
    order: ClassOrder,
) -> (Vec<usize>, Vec<Vec<usize>>, Vec<GaussInt>) {
    let n = ring.order();
    let mut assigned = vec![false; n];
    let mut orbits: Vec<(GaussInt, Vec<usize>)> = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let x = ring.residue(start).rep;
        let members: Vec<GaussInt> = group.elements().iter().map(|&u| ring.reduce(u * x).rep).collect();
        let rep = *members.iter().min_by(|a, b| a.preference_cmp(b)).expect("orbit is nonempty");
        let mut listed: Vec<usize> = Vec::with_capacity(members.len());
        for &u in group.elements() {
            let idx = ring.index_of(u * rep);
            if !listed.contains(&idx) {
                listed.push(idx);
            }
        }
        for &idx in &listed {
            assigned[idx] = true;
        }
        orbits.push((rep, listed));
    }
    match order {
        ClassOrder::FirstAppearance => {
            orbits.sort_by_key(|(_, members)| *members.iter().min().expect("nonempty"))
        }
        ClassOrder::Norm => orbits.sort_by(|a, b| a.0.preference_cmp(&b.0)),
    }
    let mut class_of = vec![0usize; n];
    for (c, (_, members)) in orbits.iter().enumerate() {
        for &idx in members {
            class_of[idx] = c;
        }
    }
    let reps = orbits.iter().map(|(r, _)| *r).collect();
    let lists = orbits.into_iter().map(|(_, m)| m).collect();
    (class_of, lists, reps)
}

#[derive(Debug, Clone)]
pub struct OrbitalScheme {
    ring: QuotientRing,
    group: RotationGroup,
    class_order: ClassOrder,
    class_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    orbit_reps: Vec<GaussInt>,
    scheme: AssociationScheme,
}

/// The ⟨i⟩-orbital scheme on `ring`, classes numbered by first appearance.
pub fn build_scheme(ring: QuotientRing) -> Result<OrbitalScheme, SchemeError> {
    OrbitalScheme::build(ring, RotationGroup::QuarterTurns, ClassOrder::FirstAppearance)
}

impl OrbitalScheme {
    pub fn build(ring: QuotientRing, group: RotationGroup, class_order: ClassOrder) -> Result<Self, SchemeError> {
        let n = ring.order();
        if n > MAX_SCHEME_POINTS {
            return Err(SchemeError::TooManyPoints { n });
        }
        let (class_of, orbits, orbit_reps) = rotation_orbits(&ring, group, class_order);
        let reps: Vec<GaussInt> = ring.residues().iter().map(|r| r.rep).collect();
        let table = RelationTable::from_fn(n, |x, y| class_of[ring.index_of(reps[x] - reps[y])] as u32)?;
        let scheme = AssociationScheme::from_table(table)?;
        Ok(OrbitalScheme { ring, group, class_order, class_of, orbits, orbit_reps, scheme })
    }

    pub fn for_ordering(ring: QuotientRing, ordering: PointOrdering) -> Result<Self, SchemeError> {
        OrbitalScheme::build(ring, RotationGroup::QuarterTurns, ClassOrder::for_ordering(ordering))
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn alpha(&self) -> GaussInt {
        self.ring.alpha()
    }

    pub fn scheme(&self) -> &AssociationScheme {
        &self.scheme
    }

    pub fn group(&self) -> RotationGroup {
        self.group
    }

    pub fn class_order(&self) -> ClassOrder {
        self.class_order
    }

    /// Residue indices of each class, class 0 first.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_reps(&self) -> &[GaussInt] {
        &self.orbit_reps
    }

    /// Class of the residue with the given index.
    pub fn class_of_index(&self, index: usize) -> usize {
        self.class_of[index]
    }

    /// Class of the orbit containing `x` mod α.
    pub fn class_of(&self, x: GaussInt) -> usize {
        self.class_of[self.ring.index_of(x)]
    }

    /// Canonical representatives of the members of each orbit.
    pub fn orbit_members(&self, class: usize) -> Vec<GaussInt> {
        self.orbits[class].iter().map(|&i| self.ring.residue(i).rep).collect()
    }
}

/// Row 0 of the relation table in a given point ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationVector {
    pub entries: Vec<usize>,
    /// Length of each block when printed with separators.
    pub block: Option<usize>,
}

impl fmt::Display for RelationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                let sep = match self.block {
                    Some(b) if k % b == 0 => "|",
                    _ => ",",
                };
                f.write_str(sep)?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

pub fn relation_vector(scheme: &OrbitalScheme, ordering: PointOrdering) -> Result<RelationVector, RingError> {
    let ring = scheme.ring();
    let order = ring.ordering(ordering)?;
    let origin = order[0];
    let entries = order.iter().map(|&y| scheme.scheme().relation(origin, y)).collect();
    let (d1, d2) = ring.invariant_factors();
    let block = (ordering == PointOrdering::Coords && d1 > 1).then_some(d2);
    Ok(RelationVector { entries, block })
}

/// Primitivity as predicted from the factorization: primitive iff α is a
/// Gaussian prime.
pub fn is_primitive_by_primality(alpha: GaussInt) -> Result<bool, RingError> {
    if alpha.is_zero() {
        return Err(RingError::ZeroModulus);
    }
    if alpha.is_unit() {
        return Err(RingError::UnitModulus(alpha));
    }
    Ok(is_gaussian_prime(alpha))
}

/// The {±1}-orbital scheme together with how its classes merge into the
/// ⟨i⟩-classes.
#[derive(Debug, Clone)]
pub struct SignedRefinement {
    pub refined: OrbitalScheme,
    /// For each ⟨i⟩-class (first-appearance numbering), the refined classes
    /// whose union it is.
    pub merge: Vec<Vec<usize>>,
}

pub fn signed_refinement(ring: QuotientRing) -> Result<SignedRefinement, SchemeError> {
    let coarse = build_scheme(ring.clone())?;
    let refined = OrbitalScheme::build(ring, RotationGroup::HalfTurns, ClassOrder::FirstAppearance)?;
    let merge: Vec<Vec<usize>> = coarse
        .orbits()
        .iter()
        .map(|members| {
            let mut parts: Vec<usize> = members.iter().map(|&i| refined.class_of_index(i)).collect();
            parts.sort_unstable();
            parts.dedup();
            parts
        })
        .collect();
    // each refined class must sit inside exactly one coarse class
    let mut owner = vec![None; refined.scheme().rank()];
    for (c, parts) in merge.iter().enumerate() {
        for &p in parts {
            if owner[p].replace(c).is_some() {
                return Err(SchemeError::Involution(format!("refined class {p} splits across classes")));
            }
        }
    }
    Ok(SignedRefinement { refined, merge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{verify_axioms, Axiom};

    fn g(s: &str) -> GaussInt {
        s.parse().unwrap()
    }

    fn orbital(s: &str, order: ClassOrder) -> OrbitalScheme {
        OrbitalScheme::build(QuotientRing::build(g(s)).unwrap(), RotationGroup::QuarterTurns, order).unwrap()
    }

    fn members(s: &OrbitalScheme) -> Vec<Vec<GaussInt>> {
        (0..s.scheme().rank()).map(|c| s.orbit_members(c)).collect()
    }

    #[test]
    fn orbits_of_two_plus_two_i() {
        let s = orbital("2+2i", ClassOrder::FirstAppearance);
        assert_eq!(
            members(&s),
            vec![
                vec![g("0")],
                vec![g("1"), g("i"), g("-1"), g("-i")],
                vec![g("2")],
                vec![g("1+i"), g("1-i")],
            ]
        );
        assert_eq!(s.scheme().valencies(), &[1, 4, 1, 2]);
        assert_eq!(relation_vector(&s, PointOrdering::Coords).unwrap().to_string(), "[0,1,2,1|3,1,3,1]");
    }

    #[test]
    fn cosets_of_three_plus_two_i_in_carrier_labels() {
        let s = orbital("3+2i", ClassOrder::Norm);
        let ring = s.ring();
        let label = |z: GaussInt| (0..13).find(|&k| ring.reduce(GaussInt::real(k)) == ring.reduce(z)).unwrap();
        let labelled: Vec<Vec<i64>> = members(&s).into_iter().map(|m| m.into_iter().map(label).collect()).collect();
        assert_eq!(labelled, vec![vec![0], vec![1, 5, 12, 8], vec![6, 4, 7, 9], vec![2, 10, 11, 3]]);
        assert_eq!(
            relation_vector(&s, PointOrdering::Gfp).unwrap().to_string(),
            "[0,1,3,3,2,1,2,2,1,2,3,3,1]"
        );
    }

    #[test]
    fn one_plus_i_has_a_single_class() {
        let s = orbital("1+i", ClassOrder::FirstAppearance);
        assert_eq!(s.scheme().d(), 1);
        assert_eq!(members(&s), vec![vec![g("0")], vec![g("1")]]);
    }

    #[test]
    fn vector_starts_with_the_diagonal_class() {
        for a in ["3+2i", "2+2i", "7", "4+1i", "3"] {
            let s = orbital(a, ClassOrder::FirstAppearance);
            assert_eq!(relation_vector(&s, PointOrdering::Coords).unwrap().entries[0], 0);
        }
    }

    #[test]
    fn intersection_number_examples() {
        let s = orbital("3+2i", ClassOrder::Norm);
        let p = s.scheme().intersection_numbers();
        assert_eq!(p.get(0, 0, 0), 1);
        assert_eq!(p.get(1, 1, 0), 4);
        assert_eq!(p.get(1, 1, 0) as usize, s.scheme().valencies()[1]);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(p.get(i, j, k), p.get(j, i, k));
                }
            }
        }
    }

    /// Direct count of p_ij^k over the 13 carrier labels, independent of the
    /// relation table: x - z in C_i and z - y in C_j.
    #[test]
    fn intersection_numbers_match_a_direct_count_mod_13() {
        let cosets: [&[i64]; 4] = [&[0], &[1, 5, 12, 8], &[6, 4, 7, 9], &[2, 10, 11, 3]];
        let class = |v: i64| cosets.iter().position(|c| c.contains(&v.rem_euclid(13))).unwrap();
        let s = orbital("3+2i", ClassOrder::Norm);
        let p = s.scheme().intersection_numbers();
        for k in 0..4 {
            let x = cosets[k][0];
            for i in 0..4 {
                for j in 0..4 {
                    let count = (0..13).filter(|&z| class(x - z) == i && class(z) == j).count();
                    assert_eq!(p.get(i, j, k) as usize, count, "p_{i}{j}^{k}");
                }
            }
        }
    }

    #[test]
    fn axioms_hold_and_a_corrupted_table_fails() {
        for a in ["3+2i", "2+2i"] {
            let s = orbital(a, ClassOrder::FirstAppearance);
            assert!(verify_axioms(s.scheme().table()).all_passed(), "{a}");
        }
        let s = orbital("3+2i", ClassOrder::Norm);
        let t = s.scheme().table();
        let n = t.points();
        let corrupted = RelationTable::from_fn(n, |x, y| match (x, y) {
            (0, 1) | (1, 0) => 2,
            _ => t.get(x, y) as u32,
        })
        .unwrap();
        let report = verify_axioms(&corrupted);
        let check = report.get(Axiom::ProductExpansion);
        assert!(!check.passed);
        assert!(check.witness.is_some());
        assert!(report.get(Axiom::Partition).passed);
        assert!(report.get(Axiom::Identity).passed);
    }

    #[test]
    fn primality_predicate() {
        assert!(is_primitive_by_primality(g("3+2i")).unwrap());
        assert!(!is_primitive_by_primality(g("2+2i")).unwrap());
        assert!(is_primitive_by_primality(g("7")).unwrap());
        assert!(is_primitive_by_primality(g("i")).is_err());
    }

    #[test]
    fn signed_refinement_examples() {
        let r = signed_refinement(QuotientRing::build(g("3+2i")).unwrap()).unwrap();
        assert_eq!(r.refined.scheme().d(), 6);
        assert!(r.refined.scheme().valencies()[1..].iter().all(|&k| k == 2));
        assert!(r.merge[1..].iter().all(|m| m.len() == 2));

        let r = signed_refinement(QuotientRing::build(g("1+i")).unwrap()).unwrap();
        assert_eq!(r.merge, vec![vec![0], vec![1]]);

        let ring = QuotientRing::build(g("2+2i")).unwrap();
        let r = signed_refinement(ring.clone()).unwrap();
        let coarse = build_scheme(ring).unwrap();
        let two = coarse.class_of(g("2"));
        assert_eq!(r.merge[two].len(), 1);
        assert_eq!(r.refined.orbit_members(r.merge[two][0]), vec![g("2")]);
        assert!(verify_axioms(r.refined.scheme().table()).all_passed());
    }
}
