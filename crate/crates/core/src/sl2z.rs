//! The linear action of SL(2,Z) on the plane: orbit balls with word
//! certificates, seed classification, orbit discreteness and a Monte Carlo
//! check that the action preserves area.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::flat::{Mat2, Vec2};
use crate::scalar::{Rational, Scalar};

/// Points closer than this are identified in floating point.
pub const DEDUP_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Sl2zError {
    #[error("the seed is the zero vector")]
    ZeroSeed,
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("matrix is not in SL(2,Z)")]
    NotInSl2z,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("box is empty")]
    EmptyBox,
    #[error("bad generator letter '{0}' (use S, s, T, t)")]
    BadLetter(char),
}

/// S = [[0,-1],[1,0]], T = [[1,1],[0,1]] and their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S,
    SInv,
    T,
    TInv,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::S, Generator::SInv, Generator::T, Generator::TInv];

    pub fn letter(self) -> char {
        match self {
            Generator::S => 'S',
            Generator::SInv => 's',
            Generator::T => 'T',
            Generator::TInv => 't',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Generator::ALL.into_iter().find(|g| g.letter() == c)
    }

    pub fn inverse(self) -> Self {
        match self {
            Generator::S => Generator::SInv,
            Generator::SInv => Generator::S,
            Generator::T => Generator::TInv,
            Generator::TInv => Generator::T,
        }
    }

    pub fn matrix(self) -> Mat2<Rational> {
        let m = |a, b, c, d| {
            Mat2::new(
                Rational::from_i64(a),
                Rational::from_i64(b),
                Rational::from_i64(c),
                Rational::from_i64(d),
            )
        };
        match self {
            Generator::S => m(0, -1, 1, 0),
            Generator::SInv => m(0, 1, -1, 0),
            Generator::T => m(1, 1, 0, 1),
            Generator::TInv => m(1, -1, 0, 1),
        }
    }

    pub fn apply<W: Scalar>(self, p: &Vec2<W>) -> Vec2<W> {
        let (x, y) = (p.x.clone(), p.y.clone());
        match self {
            Generator::S => Vec2::new(-y, x),
            Generator::SInv => Vec2::new(y, -x),
            Generator::T => Vec2::new(x + y.clone(), y),
            Generator::TInv => Vec2::new(x - y.clone(), y),
        }
    }
}

/// A product of generators; the rightmost letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `g` followed by this word, that is g * self.
    pub fn prepend(&self, g: Generator) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(g);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn matrix(&self) -> Mat2<Rational> {
        self.0.iter().fold(Mat2::identity(), |m, g| m * g.matrix())
    }

    pub fn apply<W: Scalar>(&self, p: &Vec2<W>) -> Vec2<W> {
        self.0.iter().rev().fold(p.clone(), |q, g| g.apply(&q))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Sl2zError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| Generator::from_letter(c).ok_or(Sl2zError::BadLetter(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// Representative of +-p with first nonzero coordinate positive.
pub fn canonical<W: Scalar>(p: &Vec2<W>, tol: f64) -> Vec2<W> {
    if p.is_upper(tol) {
        p.clone()
    } else {
        -p.clone()
    }
}

fn tol_for<W: Scalar>() -> f64 {
    if W::EXACT {
        0.0
    } else {
        DEDUP_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint<W> {
    pub point: Vec2<W>,
    /// `word` applied to the seed gives `point` up to sign.
    pub word: Word,
}

impl<W: Scalar> OrbitPoint<W> {
    pub fn verify(&self, seed: &Vec2<W>) -> bool {
        let tol = tol_for::<W>();
        let q = canonical(&self.word.apply(seed), tol);
        q.x.cmp_tol(&self.point.x, tol) == Ordering::Equal && q.y.cmp_tol(&self.point.y, tol) == Ordering::Equal
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitBall<W> {
    pub seed: Vec2<W>,
    pub radius: W,
    pub depth: usize,
    /// Orbit points of norm at most the radius, up to sign, in discovery order.
    pub points: Vec<OrbitPoint<W>>,
    /// The search ran out of new points before the depth bound, so the
    /// result does not depend on the depth.
    pub saturated: bool,
}

/// Exact (or tolerance) membership index over points, bucketed by their
/// rounded float coordinates.
struct PointIndex<W> {
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Vec2<W>>,
    tol: f64,
}

impl<W: Scalar> PointIndex<W> {
    const CELL: f64 = 1e-6;

    fn new(tol: f64) -> Self {
        PointIndex {
            cells: HashMap::new(),
            points: Vec::new(),
            tol,
        }
    }

    fn cell(p: &Vec2<W>) -> (i64, i64) {
        (
            (p.x.to_f64() / Self::CELL).floor() as i64,
            (p.y.to_f64() / Self::CELL).floor() as i64,
        )
    }

    /// Insert unless already present; true when inserted.
    fn insert(&mut self, p: &Vec2<W>) -> bool {
        let (cx, cy) = Self::cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.cells.get(&(cx + dx, cy + dy)) {
                    let hit = v.iter().any(|&i| {
                        let q = &self.points[i];
                        q.x.cmp_tol(&p.x, self.tol) == Ordering::Equal && q.y.cmp_tol(&p.y, self.tol) == Ordering::Equal
                    });
                    if hit {
                        return false;
                    }
                }
            }
        }
        self.cells.entry((cx, cy)).or_default().push(self.points.len());
        self.points.push(p.clone());
        true
    }
}

/// Breadth-first search of the orbit of `seed` through words of length at
/// most `depth`, walking only through points of norm at most `radius`.
/// Points are identified up to sign.
pub fn orbit_ball<W: Scalar>(seed: &Vec2<W>, radius: W, depth: usize) -> Result<OrbitBall<W>, Sl2zError> {
    let tol = tol_for::<W>();
    if seed.x.is_zero_tol(0.0) && seed.y.is_zero_tol(0.0) {
        return Err(Sl2zError::ZeroSeed);
    }
    if !radius.is_positive_tol(0.0) {
        return Err(Sl2zError::NonPositive("radius"));
    }
    let r2 = radius.clone() * radius.clone();
    let inside = |p: &Vec2<W>| p.norm2().cmp_tol(&r2, tol) != Ordering::Greater;
    let mut index = PointIndex::new(tol);
    let root = canonical(seed, tol);
    index.insert(&root);
    let mut all = vec![OrbitPoint {
        point: root,
        word: Word::default(),
    }];
    let mut frontier = vec![0usize];
    let mut saturated = false;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &i in &frontier {
            for g in Generator::ALL {
                let q = canonical(&g.apply(&all[i].point), tol);
                if inside(&q) && index.insert(&q) {
                    next.push(all.len());
                    all.push(OrbitPoint {
                        point: q,
                        word: all[i].word.prepend(g),
                    });
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            saturated = true;
            break;
        }
    }
    let points = all.into_iter().filter(|p| inside(&p.point)).collect();
    Ok(OrbitBall {
        seed: seed.clone(),
        radius,
        depth,
        points,
        saturated,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gap<W> {
    /// Squared distance, exact for exact scalars.
    pub distance2: W,
    pub distance: f64,
    /// Indices of a closest pair.
    pub pair: (usize, usize),
}

/// Smallest distance between two of the points in the plane modulo -1,
/// that is min |p - q| and |p + q| over distinct p, q.
pub fn discreteness_gap<W: Scalar>(points: &[Vec2<W>]) -> Result<Gap<W>, Sl2zError> {
    if points.len() < 2 {
        return Err(Sl2zError::TooFewPoints(points.len()));
    }
    let mut entries: Vec<(f64, usize, Vec2<W>)> = Vec::with_capacity(2 * points.len());
    for (i, p) in points.iter().enumerate() {
        entries.push((p.x.to_f64(), i, p.clone()));
        entries.push((-p.x.to_f64(), i, -p.clone()));
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<Gap<W>> = None;
    for a in 0..entries.len() {
        for b in a + 1..entries.len() {
            let dx = entries[b].0 - entries[a].0;
            if let Some(g) = &best {
                if dx * dx > g.distance * g.distance * (1.0 + 1e-9) + 1e-300 {
                    break;
                }
            }
            if entries[a].1 == entries[b].1 {
                continue;
            }
            let d2 = (entries[b].2.clone() - entries[a].2.clone()).norm2();
            let better = best.as_ref().is_none_or(|g| d2.cmp_tol(&g.distance2, 0.0) == Ordering::Less);
            if better {
                let (i, j) = (entries[a].1.min(entries[b].1), entries[a].1.max(entries[b].1));
                best = Some(Gap {
                    distance: d2.to_f64().sqrt(),
                    distance2: d2,
                    pair: (i, j),
                });
            }
        }
    }
    Ok(best.expect("two points give a pair"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedClass {
    /// The coordinates are linearly dependent over Q.
    RationalDependent,
    Independent,
    /// The floating point expansion could not decide.
    Unknown,
}

impl SeedClass {
    pub fn name(self) -> &'static str {
        match self {
            SeedClass::RationalDependent => "rational-dependent",
            SeedClass::Independent => "independent",
            SeedClass::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedReport {
    pub class: SeedClass,
    /// Decided by exact arithmetic rather than a float expansion.
    pub exact: bool,
    /// Continued fraction of the slope (or of its reciprocal when the
    /// first coordinate is zero).
    pub partial_quotients: Vec<i64>,
}

/// Cutoffs for the floating point continued fraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfCutoff {
    /// A remainder this small ends the expansion.
    pub tol: f64,
    /// Stop with Independent after this many quotients.
    pub max_terms: usize,
    /// Fewer quotients than this before precision runs out gives Unknown.
    pub min_terms: usize,
    /// A larger quotient signals a near-rational slope and gives Unknown.
    pub max_quotient: f64,
}

impl Default for CfCutoff {
    fn default() -> Self {
        CfCutoff {
            tol: 1e-9,
            max_terms: 30,
            min_terms: 8,
            max_quotient: 1e6,
        }
    }
}

fn exact_quotients(r: &Rational, max_terms: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut r = r.clone();
    while out.len() < max_terms {
        let a = r.floor();
        out.push(a.to_integer().to_i64().unwrap_or(i64::MAX));
        let f = r - a;
        if f.is_zero() {
            break;
        }
        r = f.recip();
    }
    out
}

fn float_expansion(slope: f64, cut: &CfCutoff) -> (SeedClass, Vec<i64>) {
    // the expansion loses about q^2 * epsilon of precision after reaching
    // the convergent with denominator q
    let q_max = (cut.tol / f64::EPSILON).sqrt();
    let mut r = slope;
    let mut out = Vec::new();
    let (mut q_prev, mut q) = (0.0f64, 1.0f64);
    loop {
        let a = r.floor();
        out.push(a as i64);
        let f = r - a;
        if f <= cut.tol {
            return (SeedClass::RationalDependent, out);
        }
        if out.len() >= cut.max_terms {
            return (SeedClass::Independent, out);
        }
        r = 1.0 / f;
        if r.floor() > cut.max_quotient {
            return (SeedClass::Unknown, out);
        }
        let q_next = r.floor() * q + q_prev;
        if q_next > q_max {
            let class = if out.len() >= cut.min_terms {
                SeedClass::Independent
            } else {
                SeedClass::Unknown
            };
            return (class, out);
        }
        q_prev = q;
        q = q_next;
    }
}

/// Decide whether the coordinates of `p` are dependent over Q. Exact
/// scalars decide exactly; floats use a continued fraction with cutoffs.
pub fn classify_seed<W: Scalar>(p: &Vec2<W>, cut: &CfCutoff) -> Result<SeedReport, Sl2zError> {
    let (x, y) = (&p.x, &p.y);
    if x.is_zero_tol(0.0) && y.is_zero_tol(0.0) {
        return Err(Sl2zError::ZeroSeed);
    }
    // expand the slope of the steeper coordinate over the other
    let (num, den) = if x.is_zero_tol(0.0) { (x, y) } else { (y, x) };
    let ratio = num.clone() / den.clone();
    if W::EXACT {
        return Ok(match ratio.as_rational() {
            Some(r) => SeedReport {
                class: SeedClass::RationalDependent,
                exact: true,
                partial_quotients: exact_quotients(&r, cut.max_terms),
            },
            None => SeedReport {
                class: SeedClass::Independent,
                exact: true,
                partial_quotients: float_expansion(ratio.to_f64(), cut).1,
            },
        });
    }
    let slope = ratio.to_f64();
    if slope.abs() <= cut.tol {
        return Ok(SeedReport {
            class: SeedClass::RationalDependent,
            exact: false,
            partial_quotients: vec![0],
        });
    }
    let (class, partial_quotients) = float_expansion(slope, cut);
    Ok(SeedReport {
        class,
        exact: false,
        partial_quotients,
    })
}

/// Axis-parallel rectangle [x0, x1] x [y0, y1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn unit() -> Self {
        Rect {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    pub fn contains(&self, p: &Vec2<f64>) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    fn corners(&self) -> [Vec2<f64>; 4] {
        [
            Vec2::new(self.x0, self.y0),
            Vec2::new(self.x1, self.y0),
            Vec2::new(self.x1, self.y1),
            Vec2::new(self.x0, self.y1),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LebesgueCheck {
    pub samples: usize,
    pub in_box: usize,
    pub in_preimage: usize,
    /// |in_box - in_preimage| / in_box.
    pub discrepancy: f64,
}

/// Count one uniform sample cloud inside `rect` and inside g^-1(rect).
/// Both regions have the same area, so the counts agree up to sampling
/// noise of relative size about n^-1/2.
pub fn lebesgue_invariance_check(g: &Mat2<Rational>, rect: &Rect, n_samples: usize, seed: u64) -> Result<LebesgueCheck, Sl2zError> {
    let entries = [&g.a, &g.b, &g.c, &g.d];
    if !entries.iter().all(|e| e.is_integer()) || !g.det().is_one() {
        return Err(Sl2zError::NotInSl2z);
    }
    if !(rect.x1 > rect.x0 && rect.y1 > rect.y0) {
        return Err(Sl2zError::EmptyBox);
    }
    if n_samples == 0 {
        return Err(Sl2zError::NonPositive("sample count"));
    }
    let gf = g.to_f64();
    let inv = g.unimodular_inverse().to_f64();
    let mut hull = *rect;
    for c in rect.corners() {
        let p = inv.apply(&c);
        hull.x0 = hull.x0.min(p.x);
        hull.x1 = hull.x1.max(p.x);
        hull.y0 = hull.y0.min(p.y);
        hull.y1 = hull.y1.max(p.y);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut in_box, mut in_preimage) = (0usize, 0usize);
    for _ in 0..n_samples {
        let p = Vec2::new(rng.gen_range(hull.x0..hull.x1), rng.gen_range(hull.y0..hull.y1));
        in_box += rect.contains(&p) as usize;
        in_preimage += rect.contains(&gf.apply(&p)) as usize;
    }
    let discrepancy = if in_box == 0 {
        if in_preimage == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (in_box as f64 - in_preimage as f64).abs() / in_box as f64
    };
    Ok(LebesgueCheck {
        samples: n_samples,
        in_box,
        in_preimage,
        discrepancy,
    })
}
