//! Eigenvalues of the relation matrices as character sums.
//!
//! Every character χ of the translation group Z_{d1} × Z_{d2} is a common
//! eigenvector of all A_i, with eigenvalue Σ_{t in orbit i} χ(t). Grouping
//! characters with equal eigenvalue vectors gives the rows of the first
//! eigenmatrix P.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::OrbitalScheme;

/// Eigenvalue vectors closer than this (max norm) are identified.
pub const DEDUP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Eigenmatrix {
    /// `rows[r][i]` is the eigenvalue of A_i on eigenspace r; row 0 is the
    /// trivial character.
    pub rows: Vec<Vec<Complex64>>,
    /// Dimension of each eigenspace.
    pub multiplicities: Vec<usize>,
    /// Eigenspace of each character, characters indexed like the points.
    pub character_row: Vec<usize>,
}

/// χ_s(c) = exp(2πi (s1·c1/d1 + s2·c2/d2)), with the angle reduced exactly.
pub fn character(d1: usize, d2: usize, s: (usize, usize), c: (usize, usize)) -> Complex64 {
    let n = d1 * d2;
    let num = (s.0 * c.0 % d1) * d2 + (s.1 * c.1 % d2) * d1;
    let frac = (num % n) as f64 / n as f64;
    Complex64::from_polar(1.0, TAU * frac)
}

/// Eigenvalues of A_i on the character `s`.
pub fn character_sums(scheme: &OrbitalScheme, s: (usize, usize)) -> Vec<Complex64> {
    let ring = scheme.ring();
    let (d1, d2) = ring.invariant_factors();
    scheme
        .orbits()
        .iter()
        .map(|orbit| orbit.iter().map(|&t| character(d1, d2, s, ring.coords_of_index(t))).sum())
        .collect()
}

pub fn eigenvalues(scheme: &OrbitalScheme) -> Eigenmatrix {
    let ring = scheme.ring();
    let (d1, d2) = ring.invariant_factors();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut multiplicities = Vec::new();
    let mut character_row = Vec::with_capacity(d1 * d2);
    for s1 in 0..d1 {
        for s2 in 0..d2 {
            let v = character_sums(scheme, (s1, s2));
            let found = rows.iter().position(|row| {
                row.iter().zip(&v).all(|(a, b)| (a - b).norm() < DEDUP_TOLERANCE)
            });
            let r = match found {
                Some(r) => r,
                None => {
                    rows.push(v);
                    multiplicities.push(0);
                    rows.len() - 1
                }
            };
            multiplicities[r] += 1;
            character_row.push(r);
        }
    }
    Eigenmatrix { rows, multiplicities, character_row }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussInt;
    use crate::quotient_ring::QuotientRing;
    use crate::scheme::build_scheme;

    fn scheme(a: &str) -> OrbitalScheme {
        build_scheme(QuotientRing::build(a.parse::<GaussInt>().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn row_zero_is_the_valency_vector() {
        for a in ["3+2i", "2+2i", "7", "5+1i"] {
            let s = scheme(a);
            let p = eigenvalues(&s);
            let k: Vec<f64> = s.scheme().valencies().iter().map(|&v| v as f64).collect();
            for (e, v) in p.rows[0].iter().zip(&k) {
                assert!((e.re - v).abs() < 1e-12 && e.im.abs() < 1e-12);
            }
            assert_eq!(p.rows.len(), s.scheme().rank(), "P is square for {a}");
            assert_eq!(p.multiplicities.iter().sum::<usize>(), s.scheme().points());
        }
    }

    #[test]
    fn one_plus_i() {
        let p = eigenvalues(&scheme("1+i"));
        let real: Vec<Vec<f64>> = p.rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        assert_eq!(real.len(), 2);
        for (row, want) in real.iter().zip([[1.0, 1.0], [1.0, -1.0]]) {
            for (a, b) in row.iter().zip(want) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_periods_mod_13() {
        // η_j = Σ_{x in coset} e^{2πi j x / 13} for the quartic residues
        let s = scheme("3+2i");
        let p = eigenvalues(&s);
        let c1 = s.orbits()[1].clone();
        let mut periods: Vec<f64> = (1..13)
            .map(|j| c1.iter().map(|&t| (TAU * (j * t) as f64 / 13.0).cos()).sum())
            .collect();
        periods.sort_by(f64::total_cmp);
        periods.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let mut ours: Vec<f64> = p.rows[1..].iter().map(|r| r[1].re).collect();
        ours.sort_by(f64::total_cmp);
        assert_eq!(ours.len(), 3);
        for (a, b) in ours.iter().zip(&periods) {
            assert!((a - b).abs() < 1e-9);
        }
        // Gaussian periods sum to -1
        assert!((ours.iter().sum::<f64>() + 1.0).abs() < 1e-9);
    }
}
