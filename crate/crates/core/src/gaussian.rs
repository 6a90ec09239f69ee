//! Exact arithmetic in the Gaussian integers Z[i].
//!
//! Values are stored as a pair of `i64`. Parsed inputs are limited to
//! components that fit in an `i32`, which keeps every norm and product used
//! by the rest of the crate inside `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} requires a nonzero input")]
    Zero(&'static str),
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("{0} is not 2 or a prime congruent to 1 mod 4")]
    NotSumOfTwoSquares(i64),
    #[error("cannot parse Gaussian integer {0:?}")]
    Parse(String),
}

/// A Gaussian integer `re + im·i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
pub const I: GaussInt = GaussInt { re: 0, im: 1 };

/// The four units in the order 1, i, -1, -i.
pub const UNITS: [GaussInt; 4] = [
    GaussInt { re: 1, im: 0 },
    GaussInt { re: 0, im: 1 },
    GaussInt { re: -1, im: 0 },
    GaussInt { re: 0, im: -1 },
];

impl GaussInt {
    pub const fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub const fn real(re: i64) -> Self {
        GaussInt { re, im: 0 }
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    /// Multiplication by `i`.
    pub fn rotate(self) -> Self {
        GaussInt::new(-self.im, self.re)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// `|re| + |im|`.
    pub fn l1(self) -> i64 {
        self.re.abs() + self.im.abs()
    }

    pub fn associates(self) -> [GaussInt; 4] {
        let a = self;
        let b = a.rotate();
        let c = b.rotate();
        let d = c.rotate();
        [a, b, c, d]
    }

    /// True when `d` divides `self` exactly.
    pub fn divisible_by(self, d: GaussInt) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        let n = d.norm();
        let t = self * d.conj();
        t.re % n == 0 && t.im % n == 0
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn exact_div(self, d: GaussInt) -> Option<GaussInt> {
        if d.is_zero() || !self.divisible_by(d) {
            return None;
        }
        let n = d.norm();
        let t = self * d.conj();
        Some(GaussInt::new(t.re / n, t.im / n))
    }

    pub fn pow(self, mut e: u32) -> GaussInt {
        let mut base = self;
        let mut acc = ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Ordering used whenever a single element must be picked from a set of
    /// candidates: smaller norm first, then larger real part, then larger
    /// imaginary part. Puts 1 before ±i and -1, and 1+i before the other
    /// associates of 1+i.
    pub fn preference_cmp(&self, other: &GaussInt) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then(other.re.cmp(&self.re))
            .then(other.im.cmp(&self.im))
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for GaussInt {
    fn add_assign(&mut self, o: GaussInt) {
        *self = *self + o;
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl SubAssign for GaussInt {
    fn sub_assign(&mut self, o: GaussInt) {
        *self = *self - o;
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Mul<i64> for GaussInt {
    type Output = GaussInt;
    fn mul(self, k: i64) -> GaussInt {
        GaussInt::new(self.re * k, self.im * k)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl From<i64> for GaussInt {
    fn from(re: i64) -> Self {
        GaussInt::real(re)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

fn parse_component(s: &str, whole: &str) -> Result<i64, GaussError> {
    let v: i64 = s.parse().map_err(|_| GaussError::Parse(whole.to_string()))?;
    if v.abs() > i32::MAX as i64 {
        return Err(GaussError::Parse(whole.to_string()));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, with optional whitespace and an
/// implicit coefficient on a bare `i`.
impl FromStr for GaussInt {
    type Err = GaussError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || GaussError::Parse(input.to_string());
        if s.is_empty() {
            return Err(err());
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussInt::real(parse_component(&s, input)?));
        };
        // split the real part off at the last sign that is not leading
        let split = body
            .char_indices()
            .rev()
            .find(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k);
        let (re_str, im_str) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_str {
            "" | "+" => 1,
            "-" => -1,
            other => parse_component(other, input)?,
        };
        let re = if re_str.is_empty() {
            0
        } else {
            parse_component(re_str, input)?
        };
        if re_str.ends_with(['+', '-']) {
            return Err(err());
        }
        Ok(GaussInt::new(re, im))
    }
}

impl Serialize for GaussInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `floor(n / d + 1/2)` for `d > 0`: nearest integer, halves toward +inf.
fn round_half_up(n: i64, d: i64) -> i64 {
    debug_assert!(d > 0);
    (2 * n + d).div_euclid(2 * d)
}

pub fn norm(z: GaussInt) -> i64 {
    z.norm()
}

/// Division with the quotient rounded coordinatewise to the nearest
/// Gaussian integer (exact halves toward +inf). The remainder has minimal
/// norm in its residue class, hence `norm(r) <= norm(divisor) / 2`.
pub fn divmod_nearest(x: GaussInt, divisor: GaussInt) -> Result<(GaussInt, GaussInt), GaussError> {
    if divisor.is_zero() {
        return Err(GaussError::DivisionByZero);
    }
    let n = divisor.norm();
    let t = x * divisor.conj();
    let q = GaussInt::new(round_half_up(t.re, n), round_half_up(t.im, n));
    Ok((q, x - q * divisor))
}

/// The associate of `z` with `re > 0` and `im >= 0`.
pub fn canonical_associate(z: GaussInt) -> Result<GaussInt, GaussError> {
    if z.is_zero() {
        return Err(GaussError::Zero("canonical_associate"));
    }
    Ok(z
        .associates()
        .into_iter()
        .find(|w| w.re > 0 && w.im >= 0)
        .expect("exactly one associate lies in the quadrant re > 0, im >= 0"))
}

pub fn gcd(a: GaussInt, b: GaussInt) -> Result<GaussInt, GaussError> {
    if a.is_zero() && b.is_zero() {
        return Err(GaussError::GcdOfZeros);
    }
    let (mut x, mut y) = (a, b);
    while !y.is_zero() {
        let (_, r) = divmod_nearest(x, y)?;
        x = y;
        y = r;
    }
    canonical_associate(x)
}

pub fn is_rational_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial division, primes ascending with multiplicities.
pub fn factor_rational(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_gaussian_prime(z: GaussInt) -> bool {
    let n = z.norm();
    if n < 2 {
        return false;
    }
    if is_rational_prime(n) {
        // covers associates of 1+i (norm 2) and the split primes
        return n == 2 || n % 4 == 1;
    }
    // inert: a unit times a rational prime p = 3 mod 4
    let p = if z.im == 0 {
        z.re.abs()
    } else if z.re == 0 {
        z.im.abs()
    } else {
        return false;
    };
    p % 4 == 3 && is_rational_prime(p)
}

/// Writes `p = a² + b²` with `a >= b >= 1`; `p = 2` gives `1+i`.
pub fn two_square(p: i64) -> Result<GaussInt, GaussError> {
    if p == 2 {
        return Ok(GaussInt::new(1, 1));
    }
    if p % 4 != 1 || !is_rational_prime(p) {
        return Err(GaussError::NotSumOfTwoSquares(p));
    }
    let mut b = 1;
    while 2 * b * b <= p {
        let rest = p - b * b;
        let a = isqrt(rest);
        if a * a == rest {
            return Ok(GaussInt::new(a, b));
        }
        b += 1;
    }
    unreachable!("Fermat: every prime 1 mod 4 is a sum of two squares")
}

pub fn isqrt(n: i64) -> i64 {
    if n < 2 {
        return n.max(0);
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `unit · Π prime^multiplicity`, primes in canonical-associate form
/// ordered by norm and then real part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: GaussInt,
    pub factors: Vec<(GaussInt, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> GaussInt {
        self.factors
            .iter()
            .fold(self.unit, |acc, &(p, m)| acc * p.pow(m))
    }

    /// Sum of multiplicities.
    pub fn length(&self) -> u32 {
        self.factors.iter().map(|&(_, m)| m).sum()
    }

    /// Primes repeated by multiplicity, in factor order.
    pub fn primes_with_repetition(&self) -> Vec<GaussInt> {
        self.factors
            .iter()
            .flat_map(|&(p, m)| std::iter::repeat(p).take(m as usize))
            .collect()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (p, m) in &self.factors {
            if *m == 1 {
                write!(f, " * ({p})")?;
            } else {
                write!(f, " * ({p})^{m}")?;
            }
        }
        Ok(())
    }
}

fn strip_prime(z: &mut GaussInt, p: GaussInt) -> u32 {
    let mut m = 0;
    while let Some(q) = z.exact_div(p) {
        *z = q;
        m += 1;
    }
    m
}

pub fn factor(z: GaussInt) -> Result<Factorization, GaussError> {
    if z.is_zero() {
        return Err(GaussError::Zero("factor"));
    }
    let mut rest = z;
    let mut factors = Vec::new();
    for (p, e) in factor_rational(z.norm()) {
        if p == 2 {
            let pi = GaussInt::new(1, 1);
            let m = strip_prime(&mut rest, pi);
            debug_assert_eq!(m, e);
            factors.push((pi, m));
        } else if p % 4 == 3 {
            let pi = GaussInt::real(p);
            let m = strip_prime(&mut rest, pi);
            debug_assert_eq!(2 * m, e);
            factors.push((pi, m));
        } else {
            let pi = two_square(p)?;
            let pi_bar = canonical_associate(pi.conj())?;
            for q in [pi, pi_bar] {
                let m = strip_prime(&mut rest, q);
                if m > 0 {
                    factors.push((q, m));
                }
            }
        }
    }
    factors.sort_by_key(|&(p, _)| (p.norm(), p.re));
    debug_assert!(rest.is_unit());
    Ok(Factorization { unit: rest, factors })
}

/// True when `c = r² + s²` has an integer solution, decided from the
/// factorization of `c`: every prime `3 mod 4` must occur to an even power.
pub fn is_representable(c: i64) -> bool {
    if c < 0 {
        return false;
    }
    if c == 0 {
        return true;
    }
    factor_rational(c)
        .into_iter()
        .all(|(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// One element per associate class with `lo <= norm <= hi`, as canonical
/// associates ordered by (norm, re, im).
pub fn associate_classes(lo: i64, hi: i64) -> Vec<GaussInt> {
    let r = isqrt(hi.max(0));
    let mut out: Vec<GaussInt> = (1..=r)
        .flat_map(|re| (0..=r).map(move |im| GaussInt::new(re, im)))
        .filter(|z| (lo..=hi).contains(&z.norm()))
        .collect();
    out.sort_by_key(|z| (z.norm(), z.re, z.im));
    out
}
