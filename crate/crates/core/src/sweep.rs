//! Batch property checks over all α up to associates.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::gaussian::{associate_classes, is_gaussian_prime, GaussInt};
use crate::quotient_ring::QuotientRing;
use crate::scheme::{
    block_circulant_form, build_scheme, is_primitive_bruteforce, is_primitive_connectivity, verify_axioms,
    MAX_BRUTEFORCE_CLASSES,
};
use crate::tiling::{is_clean_boundary, is_clean_odd};

pub const MAX_SWEEP_NORM: i64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Axioms,
    Primitivity,
    Clean,
    Circulant,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Axioms, Check::Primitivity, Check::Clean, Check::Circulant];
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Axioms => "axioms",
            Check::Primitivity => "primitivity",
            Check::Clean => "clean",
            Check::Circulant => "circulant",
        })
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown check {s:?} (expected axioms, primitivity, clean or circulant)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub alpha: GaussInt,
    pub norm: i64,
    pub check: Check,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub norm_bound: i64,
    pub checks: Vec<Check>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

fn primitivity_row(alpha: GaussInt) -> Result<(bool, String), String> {
    let s = build_scheme(QuotientRing::build(alpha).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let graph = is_primitive_connectivity(s.scheme());
    let (primitive, method) = if s.scheme().d() <= MAX_BRUTEFORCE_CLASSES {
        let brute = is_primitive_bruteforce(s.scheme()).map_err(|e| e.to_string())?;
        if brute.primitive != graph.primitive {
            return Ok((false, format!("subset scan says {} but connectivity says {}", brute.primitive, graph.primitive)));
        }
        (brute.primitive, "subset scan")
    } else {
        (graph.primitive, "connectivity")
    };
    let prime = is_gaussian_prime(alpha);
    Ok((primitive == prime, format!("primitive={primitive} ({method}) gaussian_prime={prime}")))
}

fn run_check(alpha: GaussInt, check: Check) -> SweepRow {
    let outcome: Result<(bool, String), String> = match check {
        Check::Axioms => QuotientRing::build(alpha)
            .map_err(|e| e.to_string())
            .and_then(|ring| build_scheme(ring).map_err(|e| e.to_string()))
            .map(|s| {
                let report = verify_axioms(s.scheme().table());
                let failed: Vec<String> =
                    report.checks.iter().filter(|c| !c.passed).map(|c| format!("{:?}", c.axiom)).collect();
                (failed.is_empty(), if failed.is_empty() { "all axioms hold".into() } else { failed.join(",") })
            }),
        Check::Primitivity => primitivity_row(alpha),
        Check::Clean => is_clean_boundary(alpha)
            .and_then(|b| Ok((b, is_clean_odd(alpha)?)))
            .map_err(|e| e.to_string())
            .map(|(b, odd)| {
                let witness = b.witness.map_or(String::new(), |w| format!(" witness={w}"));
                (b.clean == odd, format!("boundary={} odd={odd}{witness}", b.clean))
            }),
        Check::Circulant => QuotientRing::build(alpha)
            .map_err(|e| e.to_string())
            .and_then(|ring| build_scheme(ring).map_err(|e| e.to_string()))
            .map(|s| {
                let bad: Vec<String> = (0..s.scheme().rank())
                    .filter_map(|c| block_circulant_form(&s, c).err().map(|e| e.to_string()))
                    .collect();
                let (d1, d2) = s.ring().invariant_factors();
                (bad.is_empty(), if bad.is_empty() { format!("{d1}x{d1} blocks of size {d2}") } else { bad.join("; ") })
            }),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, e));
    SweepRow { alpha, norm: alpha.norm(), check, pass, detail }
}

/// Runs `checks` on one α per associate class with 2 <= norm <= `norm_bound`.
/// Rows are ordered by (norm, re, im) and then by check.
pub fn sweep(norm_bound: i64, checks: &[Check]) -> Result<SweepReport, String> {
    if norm_bound > MAX_SWEEP_NORM {
        return Err(format!("norm bound {norm_bound} exceeds {MAX_SWEEP_NORM}"));
    }
    let mut checks = checks.to_vec();
    checks.sort_unstable();
    checks.dedup();
    let rows = associate_classes(2, norm_bound)
        .into_par_iter()
        .flat_map_iter(|a| checks.iter().map(move |&c| run_check(a, c)).collect::<Vec<_>>())
        .collect();
    Ok(SweepReport { norm_bound, checks, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_is_clean() {
        let r = sweep(30, &Check::ALL).unwrap();
        assert_eq!(r.failures().count(), 0, "{:?}", r.failures().collect::<Vec<_>>());
        let alphas: Vec<GaussInt> = r.rows.iter().map(|row| row.alpha).collect();
        let mut sorted = alphas.clone();
        sorted.sort_by_key(|z| (z.norm(), z.re, z.im));
        assert_eq!(alphas, sorted);
        assert_eq!(r.rows[0].alpha, GaussInt::new(1, 1));
    }

    #[test]
    fn sweep_is_deterministic() {
        assert_eq!(sweep(40, &[Check::Clean]).unwrap(), sweep(40, &[Check::Clean]).unwrap());
    }

    #[test]
    fn bound_is_capped() {
        assert!(sweep(501, &[Check::Axioms]).is_err());
        assert_eq!("clean".parse::<Check>().unwrap(), Check::Clean);
        assert!("nope".parse::<Check>().is_err());
    }
}
