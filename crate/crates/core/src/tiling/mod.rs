//! Tilings of Z² by the translates of a fundamental region of αZ[i].

mod svg;

pub use svg::{render_svg, LabelMode, SvgOptions, MAX_RENDER_NORM, MAX_WINDOW};

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::gaussian::{canonical_associate, is_rational_prime, GaussInt};
use crate::quotient_ring::RingError;
use crate::quotient_scheme::quotient_chain;
use crate::scheme::SchemeError;

#[derive(Debug, Error)]
pub enum TilingError {
    #[error("alpha must be nonzero")]
    Zero,
    #[error("alpha = {0} is a unit; the sublattice is all of Z²")]
    Unit(GaussInt),
    #[error("alpha = {0} has even norm {1}; the clean corollary needs an odd number of points")]
    EvenOrder(GaussInt, i64),
    #[error("norm {norm} exceeds the render limit of {cap}")]
    RenderCap { norm: i64, cap: i64 },
    #[error("window half-width {window} outside 1..={cap}")]
    Window { window: i64, cap: i64 },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

fn check_modulus(alpha: GaussInt) -> Result<(), TilingError> {
    if alpha.is_zero() {
        Err(TilingError::Zero)
    } else if alpha.is_unit() {
        Err(TilingError::Unit(alpha))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TileType {
    OnePlusI,
    SplitPrime,
    InertPrime,
    Composite,
}

pub fn classify_tile(alpha: GaussInt) -> Result<TileType, TilingError> {
    check_modulus(alpha)?;
    let n = alpha.norm();
    let c = canonical_associate(alpha).expect("nonzero");
    Ok(if n == 2 {
        TileType::OnePlusI
    } else if n % 4 == 1 && is_rational_prime(n) {
        TileType::SplitPrime
    } else if c.im == 0 && c.re % 4 == 3 && is_rational_prime(c.re) {
        TileType::InertPrime
    } else {
        TileType::Composite
    })
}

/// Coordinates of `x` in the basis (α, -iα), scaled by N = N(α):
/// `x = (u·α + v·(-iα)) / N`.
fn region_coords(x: GaussInt, alpha: GaussInt) -> (i64, i64) {
    let t = x * alpha.conj();
    (t.re, -t.im)
}

/// Points of Z² in the bounding box of the parallelogram spanned by α and
/// -iα, in preference order.
fn bounding_box(alpha: GaussInt) -> Vec<GaussInt> {
    let b = GaussInt::new(alpha.im, -alpha.re);
    let corners = [GaussInt::new(0, 0), alpha, b, alpha + b];
    let (lo_re, hi_re) = (corners.iter().map(|c| c.re).min().unwrap(), corners.iter().map(|c| c.re).max().unwrap());
    let (lo_im, hi_im) = (corners.iter().map(|c| c.im).min().unwrap(), corners.iter().map(|c| c.im).max().unwrap());
    let mut pts: Vec<GaussInt> = (lo_re..=hi_re)
        .flat_map(|re| (lo_im..=hi_im).map(move |im| GaussInt::new(re, im)))
        .collect();
    pts.sort_by(GaussInt::preference_cmp);
    pts
}

/// The points of the half-open parallelogram {uα - viα : 0 ≤ u, v < 1},
/// one per class of Z[i]/α, in preference order.
pub fn fundamental_representatives(alpha: GaussInt) -> Result<Vec<GaussInt>, TilingError> {
    check_modulus(alpha)?;
    let n = alpha.norm();
    let reps: Vec<GaussInt> = bounding_box(alpha)
        .into_iter()
        .filter(|&x| {
            let (u, v) = region_coords(x, alpha);
            (0..n).contains(&u) && (0..n).contains(&v)
        })
        .collect();
    debug_assert_eq!(reps.len() as i64, n);
    Ok(reps)
}

/// Points of αZ[i] nearest to `z`, compared by exact squared distance.
pub fn nearest_lattice_points(z: GaussInt, alpha: GaussInt) -> Vec<GaussInt> {
    let n = alpha.norm();
    let t = z * alpha.conj();
    // z/α = t/N; its nearest Gaussian integers lie within one step of the
    // rounded quotient in each coordinate
    let (q_re, q_im) = ((2 * t.re + n).div_euclid(2 * n), (2 * t.im + n).div_euclid(2 * n));
    let mut best = i64::MAX;
    let mut out = Vec::new();
    for dr in -1..=1 {
        for di in -1..=1 {
            let w = GaussInt::new(q_re + dr, q_im + di) * alpha;
            let d = (z - w).norm();
            match d.cmp(&best) {
                Ordering::Less => {
                    best = d;
                    out = vec![w];
                }
                Ordering::Equal => out.push(w),
                Ordering::Greater => {}
            }
        }
    }
    out.sort_by(GaussInt::preference_cmp);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryVerdict {
    pub clean: bool,
    /// First point on a Voronoi boundary, in preference order.
    pub witness: Option<GaussInt>,
    /// The sublattice points the witness is equidistant from.
    pub equidistant: Vec<GaussInt>,
}

/// Clean when no point of Z² lies on the boundary of a Voronoi cell of αZ[i].
/// The cells are translates, so the bounding box of one fundamental region
/// covers every case.
pub fn is_clean_boundary(alpha: GaussInt) -> Result<BoundaryVerdict, TilingError> {
    check_modulus(alpha)?;
    for z in bounding_box(alpha) {
        let nearest = nearest_lattice_points(z, alpha);
        if nearest.len() > 1 {
            return Ok(BoundaryVerdict { clean: false, witness: Some(z), equidistant: nearest });
        }
    }
    Ok(BoundaryVerdict { clean: true, witness: None, equidistant: Vec::new() })
}

pub fn is_clean_odd(alpha: GaussInt) -> Result<bool, TilingError> {
    check_modulus(alpha)?;
    Ok(alpha.norm() % 2 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientCleanStep {
    pub divisor: GaussInt,
    pub points: usize,
    pub odd: bool,
    /// The classes of valency one.
    pub involutions: Vec<usize>,
    pub pass: bool,
}

/// Checks along a divisor chain that every quotient has an odd number of
/// points and no nontrivial involution.
pub fn clean_quotient_check(alpha: GaussInt) -> Result<Vec<QuotientCleanStep>, TilingError> {
    check_modulus(alpha)?;
    if alpha.norm() % 2 == 0 {
        return Err(TilingError::EvenOrder(alpha, alpha.norm()));
    }
    let steps = quotient_chain(alpha)?
        .into_iter()
        .map(|step| {
            let points = step.scheme.ring().order();
            let odd = points % 2 == 1;
            let involutions = step.involutions.classes;
            let pass = odd && involutions == [0];
            QuotientCleanStep { divisor: step.divisor, points, odd, involutions, pass }
        })
        .collect();
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TileReport {
    pub alpha: GaussInt,
    pub tile_type: TileType,
    pub clean_boundary: bool,
    pub clean_odd: bool,
    pub boundary_witness: Option<GaussInt>,
    pub representatives: Vec<GaussInt>,
}

pub fn tile_report(alpha: GaussInt) -> Result<TileReport, TilingError> {
    let boundary = is_clean_boundary(alpha)?;
    Ok(TileReport {
        alpha,
        tile_type: classify_tile(alpha)?,
        clean_boundary: boundary.clean,
        clean_odd: is_clean_odd(alpha)?,
        boundary_witness: boundary.witness,
        representatives: fundamental_representatives(alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{associate_classes, is_gaussian_prime};
    use crate::quotient_ring::QuotientRing;

    fn g(s: &str) -> GaussInt {
        s.parse().unwrap()
    }

    #[test]
    fn tile_types() {
        assert_eq!(classify_tile(g("1+i")).unwrap(), TileType::OnePlusI);
        assert_eq!(classify_tile(g("1-i")).unwrap(), TileType::OnePlusI);
        assert_eq!(classify_tile(g("3+2i")).unwrap(), TileType::SplitPrime);
        assert_eq!(classify_tile(g("7")).unwrap(), TileType::InertPrime);
        assert_eq!(classify_tile(g("-7i")).unwrap(), TileType::InertPrime);
        assert_eq!(classify_tile(g("2+2i")).unwrap(), TileType::Composite);
        assert_eq!(classify_tile(g("5")).unwrap(), TileType::Composite);
        assert!(classify_tile(g("0")).is_err());
        assert!(classify_tile(g("-i")).is_err());
    }

    #[test]
    fn tile_type_tracks_primality() {
        for re in -23i64..=23 {
            for im in -23i64..=23 {
                let a = GaussInt::new(re, im);
                if a.norm() < 2 || a.norm() > 500 {
                    continue;
                }
                let prime = classify_tile(a).unwrap() != TileType::Composite;
                assert_eq!(prime, is_gaussian_prime(a), "{a}");
            }
        }
    }

    #[test]
    fn boundary_examples() {
        assert!(is_clean_boundary(g("3+2i")).unwrap().clean);
        let v = is_clean_boundary(g("2+2i")).unwrap();
        assert_eq!(v.witness, Some(g("1+i")));
        assert!(v.equidistant.contains(&g("0")) && v.equidistant.contains(&g("2+2i")));
        let v = is_clean_boundary(g("1+i")).unwrap();
        assert_eq!(v.witness, Some(g("1")));
        for w in [g("0"), g("1+i"), g("1-i")] {
            assert!(v.equidistant.contains(&w));
        }
    }

    #[test]
    fn equidistant_points_really_tie() {
        for a in associate_classes(2, 60) {
            if let Some(z) = is_clean_boundary(a).unwrap().witness {
                let near = nearest_lattice_points(z, a);
                let d: Vec<i64> = near.iter().map(|&w| (z - w).norm()).collect();
                assert!(d.len() >= 2 && d.iter().all(|&x| x == d[0]), "{a}");
                // brute force: nothing in αZ[i] is closer
                for qr in -6i64..=6 {
                    for qi in -6i64..=6 {
                        assert!((z - GaussInt::new(qr, qi) * a).norm() >= d[0]);
                    }
                }
            }
        }
    }

    #[test]
    fn odd_examples() {
        assert!(is_clean_odd(g("3+2i")).unwrap());
        assert!(!is_clean_odd(g("2+2i")).unwrap());
        assert!(is_clean_odd(g("7")).unwrap());
    }

    #[test]
    fn representatives_of_two_plus_two_i() {
        let mut reps = fundamental_representatives(g("2+2i")).unwrap();
        reps.sort_by_key(|z| (z.re, z.im));
        let want = ["0", "1-1i", "1", "1+i", "2-1i", "2", "2+i", "3"].map(g);
        assert_eq!(reps, want);
        let mut reps = fundamental_representatives(g("1+i")).unwrap();
        reps.sort_by_key(|z| (z.re, z.im));
        assert_eq!(reps, vec![g("0"), g("1")]);
    }

    #[test]
    fn representatives_match_residues() {
        for a in associate_classes(2, 200) {
            let ring = QuotientRing::build(a).unwrap();
            let reps = fundamental_representatives(a).unwrap();
            let mut idx: Vec<usize> = reps.iter().map(|&x| ring.index_of(x)).collect();
            idx.sort_unstable();
            assert_eq!(idx, (0..ring.order()).collect::<Vec<_>>(), "{a}");
        }
    }

    #[test]
    fn inert_prime_powers() {
        for p in [3i64, 7] {
            for n in 1..=2u32 {
                let ring = QuotientRing::build(GaussInt::real(p).pow(n)).unwrap();
                assert_eq!(ring.order() as i64, p.pow(2 * n));
            }
        }
    }

    #[test]
    fn quotient_chain_stays_clean() {
        let steps = clean_quotient_check(g("3+2i")).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(steps[0].pass);
        let steps = clean_quotient_check(g("5+12i")).unwrap();
        assert_eq!(steps.iter().map(|s| s.points).collect::<Vec<_>>(), vec![169, 13]);
        assert!(steps.iter().all(|s| s.pass));
        let steps = clean_quotient_check(g("9")).unwrap();
        assert_eq!(steps.iter().map(|s| s.points).collect::<Vec<_>>(), vec![81, 9]);
        assert!(steps.iter().all(|s| s.pass));
        assert!(matches!(clean_quotient_check(g("2+2i")), Err(TilingError::EvenOrder(..))));
    }
}
