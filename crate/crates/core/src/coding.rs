//! Constellations for codes over Gaussian integers in the Mannheim metric.
//!
//! For a split prime p = ππ̄ the field GF(p) is carried by the
//! smallest-norm residues of Z[i]/π through ν(g) = g - [gπ̄/p]π. For an
//! inert prime p the field GF(p²) is carried by the centred square
//! Z_p[i] = {k + il : |k|, |l| <= (p-1)/2}.

use serde::Serialize;
use thiserror::Error;

use crate::gaussian::{divmod_nearest, is_rational_prime, GaussInt};
use crate::quotient_ring::{QuotientRing, Residue, RingError};

#[derive(Debug, Error)]
pub enum CodingError {
    #[error("{0} does not have prime norm p = 1 mod 4")]
    NotSplitPrime(GaussInt),
    #[error("{0} is not a prime = 3 mod 4")]
    NotInertPrime(i64),
    #[error("label {g} is outside 0..{p}")]
    LabelOutOfRange { g: i64, p: i64 },
    #[error("residues belong to different quotient rings")]
    RingMismatch,
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn split_prime(pi: GaussInt) -> Result<i64, CodingError> {
    let p = pi.norm();
    if p % 4 == 1 && is_rational_prime(p) {
        Ok(p)
    } else {
        Err(CodingError::NotSplitPrime(pi))
    }
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut acc = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// ν(g) = g - [gπ̄/p]π with the quotient rounded to the nearest Gaussian
/// integer.
pub fn gfp_to_point(g: i64, pi: GaussInt) -> Result<GaussInt, CodingError> {
    let p = split_prime(pi)?;
    if !(0..p).contains(&g) {
        return Err(CodingError::LabelOutOfRange { g, p });
    }
    Ok(divmod_nearest(GaussInt::real(g), pi).expect("nonzero").1)
}

/// The label g with ν(g) ≡ z mod π. Modulo π = a + bi we have i ≡ -a/b,
/// so z = x + yi maps to x - y·a·b⁻¹ mod p.
pub fn point_to_gfp(z: GaussInt, pi: GaussInt) -> Result<i64, CodingError> {
    let p = split_prime(pi)?;
    // b is a unit mod p since p is prime and |b| < p
    let i_mod = (-pi.re).rem_euclid(p) * pow_mod(pi.im, p - 2, p) % p;
    Ok((z.re.rem_euclid(p) + z.im.rem_euclid(p) * i_mod) % p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstellationKind {
    Split { pi: GaussInt, p: i64 },
    Inert { p: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constellation {
    #[serde(flatten)]
    pub kind: ConstellationKind,
    /// `(label, point)`. Split: labels 0..p in order. Inert: the label of
    /// k + il is (k mod p) + p·(l mod p), listed by k then l.
    pub carrier: Vec<(i64, GaussInt)>,
}

impl Constellation {
    /// The carrier sorted top row first, left to right, as the points are
    /// drawn in the plane.
    pub fn layout_order(&self) -> Vec<(i64, GaussInt)> {
        let mut c = self.carrier.clone();
        c.sort_by_key(|&(_, z)| (-z.im, z.re));
        c
    }
}

pub fn build_split_constellation(pi: GaussInt) -> Result<Constellation, CodingError> {
    let p = split_prime(pi)?;
    let carrier = (0..p).map(|g| gfp_to_point(g, pi).map(|z| (g, z))).collect::<Result<_, _>>()?;
    Ok(Constellation { kind: ConstellationKind::Split { pi, p }, carrier })
}

pub fn build_inert_constellation(p: i64) -> Result<Constellation, CodingError> {
    if p % 4 != 3 || !is_rational_prime(p) {
        return Err(CodingError::NotInertPrime(p));
    }
    let h = (p - 1) / 2;
    let carrier = (-h..=h)
        .flat_map(|k| (-h..=h).map(move |l| (k.rem_euclid(p) + p * l.rem_euclid(p), GaussInt::new(k, l))))
        .collect();
    Ok(Constellation { kind: ConstellationKind::Inert { p }, carrier })
}

/// Least |re(β)| + |im(β)| over the members β of the class of `rep`.
///
/// The minimiser satisfies |β| <= l1(β) <= l1(rep), so β = rep - qα with
/// |q| <= (|rep| + l1(rep)) / |α|, and that box of q is searched.
fn class_weight(rep: GaussInt, alpha: GaussInt) -> i64 {
    let reach = (rep.norm() as f64).sqrt() + rep.l1() as f64;
    let k = (reach / (alpha.norm() as f64).sqrt()).ceil() as i64 + 1;
    let mut best = rep.l1();
    for a in -k..=k {
        for b in -k..=k {
            best = best.min((rep - GaussInt::new(a, b) * alpha).l1());
        }
    }
    best
}

fn check_member(ring: &QuotientRing, res: &Residue) -> Result<(), CodingError> {
    if ring.contains(res) {
        Ok(())
    } else {
        Err(RingError::ForeignResidue(*res, ring.alpha()).into())
    }
}

pub fn mannheim_weight(ring: &QuotientRing, res: &Residue) -> Result<i64, CodingError> {
    check_member(ring, res)?;
    Ok(class_weight(res.rep, ring.alpha()))
}

/// Mannheim weight of every residue, by residue index.
pub fn weight_table(ring: &QuotientRing) -> Vec<i64> {
    ring.residues().iter().map(|r| class_weight(r.rep, ring.alpha())).collect()
}

pub fn mannheim_distance(ring: &QuotientRing, x: &Residue, y: &Residue) -> Result<i64, CodingError> {
    if !ring.contains(x) || !ring.contains(y) {
        return Err(CodingError::RingMismatch);
    }
    Ok(class_weight(ring.reduce(x.rep - y.rep).rep, ring.alpha()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::associate_classes;

    fn g(s: &str) -> GaussInt {
        s.parse().unwrap()
    }

    /// The window definition: all β ≡ rep with |re|, |im| <= N.
    fn window_weight(ring: &QuotientRing, rep: GaussInt) -> i64 {
        let n = ring.alpha().norm();
        let target = ring.index_of(rep);
        let mut best = i64::MAX;
        for re in -n..=n {
            for im in -n..=n {
                let z = GaussInt::new(re, im);
                if z.l1() < best && ring.index_of(z) == target {
                    best = z.l1();
                }
            }
        }
        best
    }

    #[test]
    fn gf13_labels() {
        let pi = g("3+2i");
        // label -> position as drawn
        let drawn = [
            (0, "0"),
            (1, "1"),
            (2, "2"),
            (3, "-2i"),
            (4, "-1+i"),
            (5, "i"),
            (6, "1+i"),
            (7, "-1-1i"),
            (8, "-1i"),
            (9, "1-1i"),
            (10, "2i"),
            (11, "-2"),
            (12, "-1"),
        ];
        for (label, pos) in drawn {
            assert_eq!(gfp_to_point(label, pi).unwrap(), g(pos), "label {label}");
            assert_eq!(point_to_gfp(g(pos), pi).unwrap(), label);
        }
        assert!(gfp_to_point(13, pi).is_err());
        assert!(gfp_to_point(1, g("2+2i")).is_err());
    }

    #[test]
    fn nu_agrees_with_the_ring_and_is_additive() {
        for pi in [g("2+i"), g("3+2i"), g("4+i")] {
            let ring = QuotientRing::build(pi).unwrap();
            let p = pi.norm();
            for a in 0..p {
                let za = gfp_to_point(a, pi).unwrap();
                assert_eq!(ring.reduce(GaussInt::real(a)).rep, za);
                assert_eq!(point_to_gfp(za, pi).unwrap(), a);
                for b in 0..p {
                    let zb = gfp_to_point(b, pi).unwrap();
                    let sum = gfp_to_point((a + b) % p, pi).unwrap();
                    assert_eq!(ring.index_of(za + zb), ring.index_of(sum));
                }
            }
            let c = build_split_constellation(pi).unwrap();
            let mut pts: Vec<_> = c.carrier.iter().map(|&(_, z)| ring.index_of(z)).collect();
            pts.sort_unstable();
            pts.dedup();
            assert_eq!(pts.len() as i64, p);
        }
    }

    #[test]
    fn inert_constellations() {
        let c = build_inert_constellation(7).unwrap();
        assert_eq!(c.carrier.len(), 49);
        assert!(c.carrier.iter().all(|&(_, z)| z.re.abs() <= 3 && z.im.abs() <= 3));
        // labels address Z_7 x Z_7 and agree with the ring modulo 7
        let ring = QuotientRing::build(GaussInt::real(7)).unwrap();
        let mut idx: Vec<usize> = c.carrier.iter().map(|&(_, z)| ring.index_of(z)).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..49).collect::<Vec<_>>());
        for &(la, a) in &c.carrier {
            for &(lb, b) in &c.carrier {
                let (k, l) = ((la % 7 + lb % 7) % 7, (la / 7 + lb / 7) % 7);
                let sum = c.carrier.iter().find(|&&(lab, _)| lab == k + 7 * l).unwrap().1;
                assert_eq!(ring.index_of(a + b), ring.index_of(sum));
            }
        }
        assert_eq!(build_inert_constellation(3).unwrap().carrier.len(), 9);
        assert!(build_inert_constellation(5).is_err());
        assert!(build_inert_constellation(9).is_err());
    }

    #[test]
    fn weight_examples() {
        let ring = QuotientRing::build(g("3+2i")).unwrap();
        assert_eq!(mannheim_weight(&ring, &ring.reduce(g("0"))).unwrap(), 0);
        assert_eq!(mannheim_weight(&ring, &ring.reduce(GaussInt::real(4))).unwrap(), 2);
        assert_eq!(mannheim_weight(&ring, &ring.reduce(GaussInt::real(1))).unwrap(), 1);
        let (x, y) = (ring.reduce(GaussInt::real(1)), ring.reduce(GaussInt::real(5)));
        assert_eq!(mannheim_distance(&ring, &x, &y).unwrap(), 2);
        assert_eq!(mannheim_distance(&ring, &x, &x).unwrap(), 0);
        let other = QuotientRing::build(g("2+2i")).unwrap();
        let foreign = Residue { rep: g("5+5i"), index: 0 };
        assert!(mannheim_distance(&other, &foreign, &foreign).is_err());
        assert!(mannheim_weight(&ring, &foreign).is_err());
    }

    #[test]
    fn bounded_search_matches_window_scan() {
        for a in associate_classes(2, 40) {
            let ring = QuotientRing::build(a).unwrap();
            let table = weight_table(&ring);
            for r in ring.residues() {
                assert_eq!(table[r.index], window_weight(&ring, r.rep), "{a} {}", r.rep);
            }
        }
    }
}
