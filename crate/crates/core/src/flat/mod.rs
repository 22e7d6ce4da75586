//! Half-translation surfaces built from polygons, the SL(2,R) action on
//! them, saddle connections and the short-connection graph.

pub mod format;
mod graph;
mod horocycle;
mod search;
mod surface;

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

pub use graph::{
    disjoint, disjoint_system_alpha, in_k_epsilon, kruskal_threshold, max_disjoint_family, systole_lower_bound, Alpha, Circuit, KEpsilon,
};
pub use horocycle::{horocycle_average, HorocycleRun, HorocycleSample};
pub use search::{connections_in_region, saddle_connections, Piece, Region, SaddleConnection};
pub use surface::{ConePoint, FlatSurface, FlowState, Gluing, GluingKind, Triangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2<W> {
    pub x: W,
    pub y: W,
}

impl<W: Scalar> Vec2<W> {
    pub fn new(x: W, y: W) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(W::zero(), W::zero())
    }

    pub fn cross(&self, o: &Self) -> W {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn dot(&self, o: &Self) -> W {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    pub fn norm2(&self) -> W {
        self.dot(self)
    }

    pub fn scale(&self, c: &W) -> Self {
        Vec2::new(self.x.clone() * c.clone(), self.y.clone() * c.clone())
    }

    pub fn to_f64(&self) -> Vec2<f64> {
        Vec2::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn length(&self) -> f64 {
        self.norm2().to_f64().sqrt()
    }

    /// Sign representative up to +-: first nonzero coordinate positive.
    pub fn is_upper(&self, tol: f64) -> bool {
        match self.x.sign_tol(tol) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.y.is_positive_tol(tol),
        }
    }
}

impl<W: Scalar> Add for Vec2<W> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl<W: Scalar> Sub for Vec2<W> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl<W: Scalar> Neg for Vec2<W> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

/// Row-major 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<W> {
    pub a: W,
    pub b: W,
    pub c: W,
    pub d: W,
}

impl<W: Scalar> Mat2<W> {
    pub fn new(a: W, b: W, c: W, d: W) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(W::one(), W::zero(), W::zero(), W::one())
    }

    pub fn det(&self) -> W {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, v: &Vec2<W>) -> Vec2<W> {
        Vec2::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn unimodular_inverse(&self) -> Self {
        Mat2::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        Mat2::new(self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.d.to_f64())
    }
}

impl<W: Scalar> Mul for Mat2<W> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat2::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mat2<f64> {
    /// Teichmueller flow diag(e^t, e^-t).
    pub fn geodesic(t: f64) -> Self {
        Mat2::new(t.exp(), 0.0, 0.0, (-t).exp())
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }
}

impl<W: Scalar> Mat2<W> {
    /// Horocycle flow [[1,0],[t,1]]; it fixes vertical vectors.
    pub fn horocycle(t: W) -> Self {
        Mat2::new(W::one(), W::zero(), t, W::one())
    }
}

/// Determinant tolerance for matrices applied to surfaces.
pub const DET_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlatError {
    #[error("polygon {0} has fewer than three vertices")]
    TooFewVertices(usize),
    #[error("polygon {0} is not counterclockwise with positive area")]
    Orientation(usize),
    #[error("polygon {0} is not simple")]
    NotSimple(usize),
    #[error("edge {polygon}:{edge} does not exist")]
    NoSuchEdge { polygon: usize, edge: usize },
    #[error("edge {polygon}:{edge} is glued {count} times")]
    Matching { polygon: usize, edge: usize, count: usize },
    #[error("edges {0}:{1} and {2}:{3} cannot be glued: {4}")]
    Incompatible(usize, usize, usize, usize, String),
    #[error("cone point {point} has angle {angle_over_pi:.6} pi, not a multiple of pi")]
    NotMultipleOfPi { point: usize, angle_over_pi: f64 },
    #[error("cone point {point} has angle 2 pi; regular points are not allowed as vertices")]
    RegularVertex { point: usize },
    #[error("surface has no polygons")]
    Empty,
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(f64),
    #[error("k = {k} exceeds the disjointness cap {cap}")]
    KTooLarge { k: usize, cap: usize },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
}
