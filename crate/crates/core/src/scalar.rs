//! Number types shared by every module.
//!
//! `Rational` is the exact workhorse. `QuadSurd<D>` is exact arithmetic in
//! Q(sqrt D) for the eigen-measure fixtures, and `f64` is the approximate
//! fallback whose comparisons take an explicit tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Tolerance used by float comparisons when the caller does not pick one.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether comparisons are exact (tolerances ignored).
    const EXACT: bool;
    /// Short field name written into file headers.
    const FIELD: &'static str;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Sign of `self`; values within `tol` of zero count as zero for inexact types.
    fn sign_tol(&self, tol: f64) -> Ordering;
    fn parse_token(s: &str) -> Option<Self>;
    /// Canonical text form; `parse_token(x.token()) == Some(x)`.
    fn token(&self) -> String;
    /// The value as an exact rational, when it is one and the type can tell.
    fn as_rational(&self) -> Option<Rational> {
        None
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn cmp_tol(&self, other: &Self, tol: f64) -> Ordering {
        (self.clone() - other.clone()).sign_tol(tol)
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.sign_tol(tol) == Ordering::Equal
    }

    fn is_positive_tol(&self, tol: f64) -> bool {
        self.sign_tol(tol) == Ordering::Greater
    }

    fn is_negative_tol(&self, tol: f64) -> bool {
        self.sign_tol(tol) == Ordering::Less
    }

    fn abs_tol(&self, tol: f64) -> Self {
        if self.is_negative_tol(tol) {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const FIELD: &'static str = "Q";

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn sign_tol(&self, _tol: f64) -> Ordering {
        sign_of(self)
    }

    fn parse_token(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn token(&self) -> String {
        self.to_string()
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const FIELD: &'static str = "R";

    fn from_rational(r: &Rational) -> Self {
        ratio_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign_tol(&self, tol: f64) -> Ordering {
        if self.abs() <= tol {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn parse_token(s: &str) -> Option<Self> {
        if let Some(r) = parse_rational(s) {
            return Some(ratio_to_f64(&r));
        }
        s.parse::<f64>().ok().filter(|x| x.is_finite())
    }

    fn token(&self) -> String {
        format!("{:?}", self)
    }
}

fn sign_of(r: &Rational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Parse `p`, `p/q` or a terminating decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p).ok()?;
        let q = BigInt::from_str(q).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n = BigInt::from_str(&digits).ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    BigInt::from_str(s).ok().map(Rational::from_integer)
}

/// Conversion that survives huge numerators and denominators.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 60;
    let (n, d) = if shift > 0 {
        (r.numer() >> shift as usize, r.denom() >> shift as usize)
    } else {
        (r.numer().clone(), r.denom().clone())
    };
    let n = n.to_f64().unwrap_or(0.0);
    let d = d.to_f64().unwrap_or(1.0);
    if d == 0.0 {
        if n >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        n / d
    }
}

/// Smallest common multiple of denominators, used to clear a rational vector.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scale a nonzero rational vector to the primitive integer vector on its ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// a + b sqrt(D) with rational a, b. D must be a positive non-square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd<const D: i64> {
    pub a: Rational,
    pub b: Rational,
}

pub type Golden = QuadSurd<5>;

impl<const D: i64> QuadSurd<D> {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadSurd { a, b }
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm a^2 - D b^2.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(D) * &self.b * &self.b
    }

    pub fn sign(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a^2 with D b^2
                let lhs = &self.a * &self.a;
                let rhs = int(D) * &self.b * &self.b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
}

impl Golden {
    /// The golden ratio (1 + sqrt 5) / 2.
    pub fn phi() -> Self {
        QuadSurd::new(rat(1, 2), rat(1, 2))
    }
}

impl<const D: i64> PartialOrd for QuadSurd<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const D: i64> Ord for QuadSurd<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl<const D: i64> fmt::Display for QuadSurd<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*sqrt{}", self.b, D)
    }
}

impl<const D: i64> Zero for QuadSurd<D> {
    fn zero() -> Self {
        QuadSurd::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<const D: i64> One for QuadSurd<D> {
    fn one() -> Self {
        QuadSurd::new(Rational::one(), Rational::zero())
    }
}

impl<const D: i64> Add for QuadSurd<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuadSurd::new(self.a + o.a, self.b + o.b)
    }
}

impl<const D: i64> Sub for QuadSurd<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuadSurd::new(self.a - o.a, self.b - o.b)
    }
}

impl<const D: i64> Neg for QuadSurd<D> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadSurd::new(-self.a, -self.b)
    }
}

impl<const D: i64> Mul for QuadSurd<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.a * &o.a + int(D) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadSurd::new(a, b)
    }
}

impl<const D: i64> Div for QuadSurd<D> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt {})", D);
        let num = self * o.conjugate();
        QuadSurd::new(num.a / &n, num.b / n)
    }
}

impl<const D: i64> Scalar for QuadSurd<D> {
    const EXACT: bool = true;
    const FIELD: &'static str = "Q(sqrt5)";

    fn from_rational(r: &Rational) -> Self {
        QuadSurd::new(r.clone(), Rational::zero())
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * (D as f64).sqrt()
    }

    fn sign_tol(&self, _tol: f64) -> Ordering {
        self.sign()
    }

    fn parse_token(s: &str) -> Option<Self> {
        let s = s.trim();
        let suffix = format!("*sqrt{}", D);
        let Some(head) = s.strip_suffix(&suffix) else {
            return parse_rational(s).map(|a| QuadSurd::new(a, Rational::zero()));
        };
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let a = parse_rational(&head[..i])?;
                let b = parse_rational(head[i..].trim_start_matches('+'))?;
                Some(QuadSurd::new(a, b))
            }
            None => Some(QuadSurd::new(Rational::zero(), parse_rational(head)?)),
        }
    }

    fn token(&self) -> String {
        self.to_string()
    }

    fn as_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }
}
