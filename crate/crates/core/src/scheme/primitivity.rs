//! Closed class sets and primitivity.
//!
//! A set S of classes containing 0 is closed when the union of its relations
//! is an equivalence relation. A scheme is primitive when {0} and the full
//! set are the only closed sets.

use std::collections::VecDeque;

use serde::Serialize;

use super::{AssociationScheme, SchemeError};

/// Largest number of nonzero classes for the 2^d subset scan.
pub const MAX_BRUTEFORCE_CLASSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Primitivity {
    pub primitive: bool,
    /// A nontrivial closed class set, present when imprimitive.
    pub witness: Option<Vec<usize>>,
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

/// Closure test through the intersection numbers: S ∋ 0, S is closed under
/// transposition, and p_ij^k != 0 with i, j in S forces k in S.
pub fn is_closed(scheme: &AssociationScheme, set: &[usize]) -> Result<bool, SchemeError> {
    let r = scheme.rank();
    if let Some(&class) = set.iter().find(|&&c| c >= r) {
        return Err(SchemeError::ClassOutOfRange { class, rank: r });
    }
    let mut member = vec![false; r];
    for &c in set {
        member[c] = true;
    }
    if !member[0] {
        return Ok(false);
    }
    let p = scheme.intersection_numbers();
    let reps = scheme.table().representative_pairs();
    for &i in set {
        let (x, y) = reps[i];
        if !member[scheme.relation(y, x)] {
            return Ok(false);
        }
        for &j in set {
            if (0..r).any(|k| !member[k] && p.get(i, j, k) != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Point-level check that the union of the classes in `mask` is an
/// equivalence relation on X.
fn union_is_equivalence(scheme: &AssociationScheme, mask: u64) -> bool {
    let n = scheme.points();
    let inside = |x: usize, y: usize| mask >> scheme.relation(x, y) & 1 == 1;
    let reflexive = (0..n).all(|x| inside(x, x));
    let symmetric = (0..n).all(|x| (0..n).all(|y| inside(x, y) == inside(y, x)));
    // with reflexivity and symmetry, transitivity means related points have
    // identical neighbourhoods
    let transitive = (0..n).all(|x| {
        (0..n)
            .filter(|&y| inside(x, y))
            .all(|y| (0..n).all(|z| inside(x, z) == inside(y, z)))
    });
    reflexive && symmetric && transitive
}

/// All closed class sets, by exhaustive scan of the 2^d subsets of nonzero
/// classes, sorted by size and then lexicographically.
pub fn closed_subsets(scheme: &AssociationScheme) -> Result<Vec<Vec<usize>>, SchemeError> {
    let d = scheme.d();
    if d > MAX_BRUTEFORCE_CLASSES {
        return Err(SchemeError::TooManyClasses { d, cap: MAX_BRUTEFORCE_CLASSES });
    }
    let r = scheme.rank();
    let p = scheme.intersection_numbers();
    let support: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| p.support_mask(i, j)).collect()).collect();
    let reps = scheme.table().representative_pairs();
    let transpose: Vec<usize> = reps.iter().map(|&(x, y)| scheme.relation(y, x)).collect();

    let mask_closed = |s: u64| {
        mask_to_vec(s).into_iter().all(|i| {
            s >> transpose[i] & 1 == 1
                && mask_to_vec(s).into_iter().all(|j| support[i][j] & !s == 0)
        })
    };
    // smallest closed set containing {0, i}
    let generated: Vec<u64> = (0..r)
        .map(|i| {
            let mut s = 1u64 | 1 << i;
            loop {
                let mut next = s | 1 << transpose[i];
                for a in mask_to_vec(s) {
                    for b in mask_to_vec(s) {
                        next |= support[a][b];
                    }
                }
                if next == s {
                    break s;
                }
                s = next;
            }
        })
        .collect();

    let mut found = Vec::new();
    for bits in 0u64..1 << d {
        let s = 1 | bits << 1;
        // a closed set is the union of the sets its members generate
        let span = (0..r).filter(|&i| s >> i & 1 == 1).fold(0, |acc, i| acc | generated[i]);
        if span != s || !mask_closed(s) {
            continue;
        }
        debug_assert!(union_is_equivalence(scheme, s));
        found.push(mask_to_vec(s));
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found)
}

/// Subset-scan primitivity test, capped at [`MAX_BRUTEFORCE_CLASSES`].
pub fn is_primitive_bruteforce(scheme: &AssociationScheme) -> Result<Primitivity, SchemeError> {
    let closed = closed_subsets(scheme)?;
    let nontrivial = closed.into_iter().find(|s| s.len() > 1 && s.len() < scheme.rank());
    if let Some(w) = &nontrivial {
        let mask = w.iter().fold(0u64, |m, &c| m | 1 << c);
        if !union_is_equivalence(scheme, mask) {
            return Err(SchemeError::NotClosed(w.clone()));
        }
    }
    Ok(Primitivity { primitive: nontrivial.is_none(), witness: nontrivial })
}

/// Primitivity from the graphs of the relations: the scheme is primitive
/// iff every nonzero relation graph is connected. When one is not, the
/// classes met inside the component of point 0 form a closed set.
pub fn is_primitive_connectivity(scheme: &AssociationScheme) -> Primitivity {
    let n = scheme.points();
    let nb = scheme.table().neighbours();
    for class in 1..scheme.rank() {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &nb[class][x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    reached += 1;
                    queue.push_back(y as usize);
                }
            }
        }
        if reached < n {
            let mut w: Vec<usize> = (0..n).filter(|&y| seen[y]).map(|y| scheme.relation(0, y)).collect();
            w.sort_unstable();
            w.dedup();
            return Primitivity { primitive: false, witness: Some(w) };
        }
    }
    Primitivity { primitive: true, witness: None }
}
