use std::collections::HashMap;
use std::f64::consts::PI;

use super::{FlatError, Mat2, Vec2, DET_TOL};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GluingKind {
    /// Boundary vectors of the two edges are opposite.
    Translation,
    /// Boundary vectors are equal: the edges are identified by a rotation by pi.
    HalfTranslation,
}

impl GluingKind {
    pub fn token(self) -> &'static str {
        match self {
            GluingKind::Translation => "translation",
            GluingKind::HalfTranslation => "half-translation",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "translation" => Some(GluingKind::Translation),
            "half-translation" => Some(GluingKind::HalfTranslation),
            _ => None,
        }
    }
}

/// Edge `e` of a polygon runs from vertex `e` to vertex `e + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub kind: GluingKind,
}

/// A singular point: its cone angle is `k` pi. k = 1 is a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePoint {
    pub k: u32,
    /// (polygon, vertex) corners making up the point.
    pub corners: Vec<(usize, usize)>,
}

/// A triangle of the internal triangulation, in its polygon's coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangle<W> {
    pub polygon: usize,
    pub vertices: [usize; 3],
    pub points: [Vec2<W>; 3],
    /// Across edge i (from corner i to corner i+1): neighbor triangle, its
    /// edge, and +1 or -1 for the orientation of the chart change.
    pub neighbors: [(usize, usize, i8); 3],
    /// Cone point at each corner.
    pub cone: [usize; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatSurface<W> {
    polygons: Vec<Vec<Vec2<W>>>,
    gluings: Vec<Gluing>,
    cone_points: Vec<ConePoint>,
    triangles: Vec<Triangle<W>>,
    tol: f64,
}

fn orient<W: Scalar>(a: &Vec2<W>, b: &Vec2<W>, c: &Vec2<W>) -> W {
    (b.clone() - a.clone()).cross(&(c.clone() - a.clone()))
}

fn segments_meet<W: Scalar>(p1: &Vec2<W>, p2: &Vec2<W>, q1: &Vec2<W>, q2: &Vec2<W>, tol: f64) -> bool {
    use std::cmp::Ordering::*;
    let d1 = orient(q1, q2, p1).sign_tol(tol);
    let d2 = orient(q1, q2, p2).sign_tol(tol);
    let d3 = orient(p1, p2, q1).sign_tol(tol);
    let d4 = orient(p1, p2, q2).sign_tol(tol);
    let opposite = |a, b| matches!((a, b), (Less, Greater) | (Greater, Less));
    if opposite(d1, d2) && opposite(d3, d4) {
        return true;
    }
    let on = |a: &Vec2<W>, b: &Vec2<W>, p: &Vec2<W>| (p.clone() - a.clone()).dot(&(p.clone() - b.clone())).sign_tol(tol) != Greater;
    (d1 == Equal && on(q1, q2, p1)) || (d2 == Equal && on(q1, q2, p2)) || (d3 == Equal && on(p1, p2, q1)) || (d4 == Equal && on(p1, p2, q2))
}

fn interior_angle(prev: Vec2<f64>, cur: Vec2<f64>, next: Vec2<f64>) -> f64 {
    let out = next - cur;
    let back = prev - cur;
    let a = out.cross(&back).atan2(out.dot(&back));
    if a <= 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
}

impl<W: Scalar> FlatSurface<W> {
    /// Build and check a surface. Polygons are counterclockwise; every edge
    /// is glued to exactly one other edge.
    pub fn new(polygons: Vec<Vec<Vec2<W>>>, gluings: Vec<Gluing>, tol: f64) -> Result<Self, FlatError> {
        if polygons.is_empty() {
            return Err(FlatError::Empty);
        }
        for (i, p) in polygons.iter().enumerate() {
            if p.len() < 3 {
                return Err(FlatError::TooFewVertices(i));
            }
            if !signed_area2(p).is_positive_tol(tol) {
                return Err(FlatError::Orientation(i));
            }
            let n = p.len();
            for e in 0..n {
                for f in e + 1..n {
                    let adjacent = f == e + 1 || (e == 0 && f == n - 1);
                    if adjacent {
                        // adjacent edges may only share their common vertex
                        let (a, b, c) = if f == e + 1 {
                            (&p[e], &p[f], &p[(f + 1) % n])
                        } else {
                            (&p[f], &p[0], &p[1])
                        };
                        let folds = orient(a, b, c).sign_tol(tol).is_eq()
                            && (c.clone() - b.clone()).dot(&(a.clone() - b.clone())).is_positive_tol(tol);
                        if folds {
                            return Err(FlatError::NotSimple(i));
                        }
                    } else if segments_meet(&p[e], &p[(e + 1) % n], &p[f], &p[(f + 1) % n], tol) {
                        return Err(FlatError::NotSimple(i));
                    }
                }
            }
        }
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for g in &gluings {
            for (p, e) in [g.a, g.b] {
                if p >= polygons.len() || e >= polygons[p].len() {
                    return Err(FlatError::NoSuchEdge { polygon: p, edge: e });
                }
                *count.entry((p, e)).or_default() += 1;
            }
        }
        for (p, poly) in polygons.iter().enumerate() {
            for e in 0..poly.len() {
                let c = count.get(&(p, e)).copied().unwrap_or(0);
                if c != 1 {
                    return Err(FlatError::Matching {
                        polygon: p,
                        edge: e,
                        count: c,
                    });
                }
            }
        }
        let edge = |(p, e): (usize, usize)| {
            let poly: &Vec<Vec2<W>> = &polygons[p];
            poly[(e + 1) % poly.len()].clone() - poly[e].clone()
        };
        for g in &gluings {
            let (u, v) = (edge(g.a), edge(g.b));
            let mismatch = match g.kind {
                GluingKind::Translation => u.clone() + v.clone(),
                GluingKind::HalfTranslation => u.clone() - v.clone(),
            };
            if !(mismatch.x.is_zero_tol(tol) && mismatch.y.is_zero_tol(tol)) {
                let want = match g.kind {
                    GluingKind::Translation => "translation needs opposite edge vectors",
                    GluingKind::HalfTranslation => "half-translation needs equal edge vectors",
                };
                return Err(FlatError::Incompatible(g.a.0, g.a.1, g.b.0, g.b.1, want.into()));
            }
        }

        // corners are identified across every gluing
        let mut offset = vec![0];
        for p in &polygons {
            offset.push(offset.last().unwrap() + p.len());
        }
        let id = |p: usize, v: usize| offset[p] + v % polygons[p].len();
        let mut uf = UnionFind((0..*offset.last().unwrap()).collect());
        for g in &gluings {
            let ((p, e), (q, f)) = (g.a, g.b);
            for (x, y) in [(id(p, e), id(q, f + 1)), (id(p, e + 1), id(q, f))] {
                let (rx, ry) = (uf.find(x), uf.find(y));
                uf.0[rx] = ry;
            }
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut cone_points: Vec<ConePoint> = Vec::new();
        let mut angle: Vec<f64> = Vec::new();
        let mut corner_class = vec![0; *offset.last().unwrap()];
        for (p, poly) in polygons.iter().enumerate() {
            let n = poly.len();
            for v in 0..n {
                let r = uf.find(id(p, v));
                let c = *class_of_root.entry(r).or_insert_with(|| {
                    cone_points.push(ConePoint { k: 0, corners: Vec::new() });
                    angle.push(0.0);
                    cone_points.len() - 1
                });
                corner_class[id(p, v)] = c;
                cone_points[c].corners.push((p, v));
                angle[c] += interior_angle(poly[(v + n - 1) % n].to_f64(), poly[v].to_f64(), poly[(v + 1) % n].to_f64());
            }
        }
        for (i, (cp, a)) in cone_points.iter_mut().zip(&angle).enumerate() {
            let k = (a / PI).round();
            if (a / PI - k).abs() > 1e-6 || k < 1.0 {
                return Err(FlatError::NotMultipleOfPi {
                    point: i,
                    angle_over_pi: a / PI,
                });
            }
            if k == 2.0 {
                return Err(FlatError::RegularVertex { point: i });
            }
            cp.k = k as u32;
        }

        let mut triangles = Vec::new();
        for (p, poly) in polygons.iter().enumerate() {
            for [a, b, c] in ear_clip(poly, tol) {
                triangles.push(Triangle {
                    polygon: p,
                    vertices: [a, b, c],
                    points: [poly[a].clone(), poly[b].clone(), poly[c].clone()],
                    neighbors: [(usize::MAX, 0, 1); 3],
                    cone: [corner_class[id(p, a)], corner_class[id(p, b)], corner_class[id(p, c)]],
                });
            }
        }
        let mut directed: HashMap<(usize, usize, usize), (usize, usize)> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                directed.insert((tri.polygon, tri.vertices[k], tri.vertices[(k + 1) % 3]), (t, k));
            }
        }
        let mut glue_map: HashMap<(usize, usize), ((usize, usize), i8)> = HashMap::new();
        for g in &gluings {
            let s = if g.kind == GluingKind::Translation { 1 } else { -1 };
            glue_map.insert(g.a, (g.b, s));
            glue_map.insert(g.b, (g.a, s));
        }
        #[allow(clippy::needless_range_loop)] // triangles[t] is written inside
        for t in 0..triangles.len() {
            for k in 0..3 {
                let tri = &triangles[t];
                let (p, u, v) = (tri.polygon, tri.vertices[k], tri.vertices[(k + 1) % 3]);
                let n = polygons[p].len();
                let nb = if v == (u + 1) % n {
                    let ((q, f), s) = glue_map[&(p, u)];
                    let m = polygons[q].len();
                    let (t2, k2) = directed[&(q, f, (f + 1) % m)];
                    (t2, k2, s)
                } else {
                    let (t2, k2) = directed[&(p, v, u)];
                    (t2, k2, 1)
                };
                triangles[t].neighbors[k] = nb;
            }
        }
        Ok(FlatSurface {
            polygons,
            gluings,
            cone_points,
            triangles,
            tol,
        })
    }

    pub fn polygons(&self) -> &[Vec<Vec2<W>>] {
        &self.polygons
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cone_points
    }

    pub fn triangles(&self) -> &[Triangle<W>] {
        &self.triangles
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn area(&self) -> W {
        let two = W::one() + W::one();
        self.polygons.iter().fold(W::zero(), |a, p| a + signed_area2(p) / two.clone())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let edges: usize = self.polygons.iter().map(|p| p.len()).sum::<usize>() / 2;
        self.cone_points.len() as i64 - edges as i64 + self.polygons.len() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// True when every gluing is a translation.
    pub fn is_translation_surface(&self) -> bool {
        self.gluings.iter().all(|g| g.kind == GluingKind::Translation)
    }

    /// Edges of a triangulation with the cone points as vertices. No family
    /// of pairwise disjoint saddle connections is larger.
    pub fn disjointness_cap(&self) -> usize {
        (3 * (2 * self.genus() - 2 + self.cone_points.len() as i64)) as usize
    }

    pub fn map_coordinates<V: Scalar>(&self, f: impl Fn(&Vec2<W>) -> Vec2<V>, tol: f64) -> Result<FlatSurface<V>, FlatError> {
        let polys = self.polygons.iter().map(|p| p.iter().map(&f).collect()).collect();
        FlatSurface::new(polys, self.gluings.clone(), tol)
    }

    pub fn to_f64(&self, tol: f64) -> Result<FlatSurface<f64>, FlatError> {
        self.map_coordinates(|v| v.to_f64(), tol)
    }

    /// Apply a linear map of positive determinant to every polygon.
    pub fn transformed(&self, m: &Mat2<W>) -> Result<FlatSurface<W>, FlatError> {
        self.map_coordinates(|v| m.apply(v), self.tol)
    }
}

impl<W: Scalar> FlatSurface<W> {
    /// Float copy rotated so that `direction` points along the positive
    /// x-axis, optionally rescaled to area one.
    pub fn with_horizontal(&self, direction: Vec2<f64>, normalize: bool, tol: f64) -> Result<FlatSurface<f64>, FlatError> {
        if direction.length().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(FlatError::NonPositive("direction length"));
        }
        let scale = if normalize { 1.0 / self.area().to_f64().sqrt() } else { 1.0 };
        let m = Mat2::rotation(-direction.y.atan2(direction.x));
        self.map_coordinates(|v| m.apply(&v.to_f64().scale(&scale)), tol)
    }
}

pub(crate) fn signed_area2<W: Scalar>(p: &[Vec2<W>]) -> W {
    let n = p.len();
    (0..n).fold(W::zero(), |a, i| a + p[i].cross(&p[(i + 1) % n]))
}

/// Ear clipping on a simple counterclockwise polygon. Straight (angle pi)
/// vertices are kept as triangle corners.
fn ear_clip<W: Scalar>(poly: &[Vec2<W>], tol: f64) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::new();
    while idx.len() > 3 {
        let n = idx.len();
        let ear = (0..n).find(|&i| {
            let (a, b, c) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
            if !orient(&poly[a], &poly[b], &poly[c]).is_positive_tol(tol) {
                return false;
            }
            idx.iter().all(|&j| {
                j == a
                    || j == b
                    || j == c
                    || !(orient(&poly[a], &poly[b], &poly[j]).sign_tol(tol).is_ge()
                        && orient(&poly[b], &poly[c], &poly[j]).sign_tol(tol).is_ge()
                        && orient(&poly[c], &poly[a], &poly[j]).sign_tol(tol).is_ge())
            })
        });
        let i = ear.expect("simple polygon has an ear");
        out.push([idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]]);
        idx.remove(i);
    }
    out.push([idx[0], idx[1], idx[2]]);
    out
}

/// A surface together with the accumulated SL(2,R) element acting on it.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState<W> {
    pub base: FlatSurface<W>,
    pub applied: Mat2<W>,
}

impl<W: Scalar> FlowState<W> {
    pub fn new(base: FlatSurface<W>) -> Self {
        FlowState {
            base,
            applied: Mat2::identity(),
        }
    }

    /// M applied after the current element.
    pub fn apply_matrix(&self, m: &Mat2<W>) -> Result<Self, FlatError> {
        let det = m.det().to_f64();
        if (det - 1.0).abs() > DET_TOL {
            return Err(FlatError::NotUnimodular(det));
        }
        Ok(FlowState {
            base: self.base.clone(),
            applied: m.clone() * self.applied.clone(),
        })
    }

    pub fn holonomy(&self, base: &Vec2<W>) -> Vec2<W> {
        self.applied.apply(base)
    }

    pub fn area(&self) -> W {
        self.base.area() * self.applied.det()
    }
}
