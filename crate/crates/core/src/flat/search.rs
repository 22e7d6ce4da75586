use std::cmp::Ordering;

use super::{FlatError, FlatSurface, FlowState, Mat2, Vec2};
use crate::scalar::Scalar;

/// A convex search window around the origin, in base holonomy coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum Region<W> {
    /// |m h|^2 <= r2.
    Ellipse { m: Mat2<W>, r2: W },
    /// |(m h).x| <= a and |(m h).y| <= b.
    Box { m: Mat2<W>, a: W, b: W },
}

impl<W: Scalar> Region<W> {
    pub fn disk(r: W) -> Self {
        Region::Ellipse {
            m: Mat2::identity(),
            r2: r.clone() * r,
        }
    }

    pub fn contains(&self, h: &Vec2<W>, tol: f64) -> bool {
        match self {
            Region::Ellipse { m, r2 } => m.apply(h).norm2().cmp_tol(r2, tol) != Ordering::Greater,
            Region::Box { m, a, b } => {
                let v = m.apply(h);
                v.x.abs_tol(tol).cmp_tol(a, tol) != Ordering::Greater && v.y.abs_tol(tol).cmp_tol(b, tol) != Ordering::Greater
            }
        }
    }

    /// Conservative test: false only if the segment misses the region.
    pub fn meets_segment(&self, p: &Vec2<W>, q: &Vec2<W>, tol: f64) -> bool {
        match self {
            Region::Ellipse { m, r2 } => {
                let u = m.apply(p);
                let d = m.apply(&(q.clone() - p.clone()));
                let dd = d.norm2();
                let mut t = W::zero();
                if dd.is_positive_tol(0.0) {
                    t = -(u.dot(&d)) / dd;
                    if t.is_negative_tol(0.0) {
                        t = W::zero();
                    } else if t.cmp_tol(&W::one(), 0.0) == Ordering::Greater {
                        t = W::one();
                    }
                }
                let closest = u + d.scale(&t);
                closest.norm2().cmp_tol(r2, tol) != Ordering::Greater
            }
            Region::Box { m, a, b } => {
                let u = m.apply(p);
                let d = m.apply(&(q.clone() - p.clone()));
                let mut lo = W::zero();
                let mut hi = W::one();
                for (c, dc, bound) in [(u.x.clone(), d.x.clone(), a), (u.y.clone(), d.y.clone(), b)] {
                    // -bound <= c + t dc <= bound
                    if dc.is_zero_tol(0.0) {
                        if c.abs_tol(0.0).cmp_tol(bound, tol) == Ordering::Greater {
                            return false;
                        }
                        continue;
                    }
                    let t1 = (-bound.clone() - c.clone()) / dc.clone();
                    let t2 = (bound.clone() - c) / dc;
                    let (t1, t2) = if t1.cmp_tol(&t2, 0.0) == Ordering::Greater {
                        (t2, t1)
                    } else {
                        (t1, t2)
                    };
                    if t1.cmp_tol(&lo, 0.0) == Ordering::Greater {
                        lo = t1;
                    }
                    if t2.cmp_tol(&hi, 0.0) == Ordering::Less {
                        hi = t2;
                    }
                }
                lo.cmp_tol(&hi, tol) != Ordering::Greater
            }
        }
    }
}

/// The part of a connection inside one triangle, in that triangle's chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<W> {
    pub triangle: usize,
    pub from: Vec2<W>,
    pub to: Vec2<W>,
}

/// Start point, end point, base holonomy and the pieces of one connection.
pub type RawConnection<W> = (usize, usize, Vec2<W>, Vec<Piece<W>>);

#[derive(Clone, Debug, PartialEq)]
pub struct SaddleConnection<W> {
    pub start: usize,
    pub end: usize,
    /// Holonomy on the base surface, up to sign (first nonzero coordinate positive).
    pub base_holonomy: Vec2<W>,
    /// Holonomy in the flowed state.
    pub holonomy: Vec2<W>,
    pub pieces: Vec<Piece<W>>,
}

impl<W: Scalar> SaddleConnection<W> {
    pub fn length(&self) -> f64 {
        self.holonomy.length()
    }

    pub fn length2(&self) -> W {
        self.holonomy.norm2()
    }

    pub fn is_horizontal(&self, tol: f64) -> bool {
        self.holonomy.y.is_zero_tol(tol)
    }
}

#[derive(Clone)]
struct Chart<W> {
    triangle: usize,
    sign: i8,
    offset: Vec2<W>,
}

impl<W: Scalar> Chart<W> {
    fn develop(&self, p: &Vec2<W>) -> Vec2<W> {
        let p = if self.sign > 0 { p.clone() } else { -p.clone() };
        p + self.offset.clone()
    }

    fn local(&self, q: &Vec2<W>) -> Vec2<W> {
        let d = q.clone() - self.offset.clone();
        if self.sign > 0 {
            d
        } else {
            -d
        }
    }
}

struct Search<'a, W> {
    surface: &'a FlatSurface<W>,
    region: &'a Region<W>,
    tol: f64,
    start_corner: usize,
    path: Vec<Chart<W>>,
    out: Vec<RawConnection<W>>,
}

impl<'a, W: Scalar> Search<'a, W> {
    fn pieces(&self, x: &Vec2<W>) -> Vec<Piece<W>> {
        self.path
            .iter()
            .map(|ch| {
                let t = &self.surface.triangles()[ch.triangle];
                let pts: Vec<Vec2<W>> = t.points.iter().map(|p| ch.develop(p)).collect();
                // clip the segment s x, s in [0,1], to the developed triangle
                let mut lo = W::zero();
                let mut hi = W::one();
                for i in 0..3 {
                    let e = pts[(i + 1) % 3].clone() - pts[i].clone();
                    let num = e.cross(&pts[i]);
                    let den = e.cross(x);
                    // den * s >= num
                    match den.sign_tol(0.0) {
                        Ordering::Greater => {
                            let s = num / den;
                            if s.cmp_tol(&lo, 0.0) == Ordering::Greater {
                                lo = s;
                            }
                        }
                        Ordering::Less => {
                            let s = num / den;
                            if s.cmp_tol(&hi, 0.0) == Ordering::Less {
                                hi = s;
                            }
                        }
                        Ordering::Equal => {}
                    }
                }
                Piece {
                    triangle: ch.triangle,
                    from: ch.local(&x.scale(&lo)),
                    to: ch.local(&x.scale(&hi)),
                }
            })
            .collect()
    }

    fn record(&mut self, end_corner: usize, end_point: usize, x: Vec2<W>) {
        let keep = self.start_corner < end_corner || (self.start_corner == end_corner && x.is_upper(self.tol));
        if keep && self.region.contains(&x, self.tol) {
            let pieces = self.pieces(&x);
            let start = self.surface.triangles()[self.start_corner / 3].cone[self.start_corner % 3];
            self.out.push((start, end_point, x, pieces));
        }
    }

    /// The open cone (l, r) leaves the current triangle through its edge
    /// `k`, whose developed ends are `u` (on the l side) and `w`.
    fn explore(&mut self, k: usize, u: Vec2<W>, w: Vec2<W>, l: &Vec2<W>, r: &Vec2<W>) {
        if !self.region.meets_segment(&u, &w, self.tol) {
            return;
        }
        let here = self.path.last().unwrap().clone();
        let (t2, k2, s) = self.surface.triangles()[here.triangle].neighbors[k];
        let tri = &self.surface.triangles()[t2];
        let sign = here.sign * s;
        let p = &tri.points[k2];
        let pk = if sign > 0 { p.clone() } else { -p.clone() };
        let chart = Chart {
            triangle: t2,
            sign,
            offset: w.clone() - pk,
        };
        let x = chart.develop(&tri.points[(k2 + 2) % 3]);
        let xcone = tri.cone[(k2 + 2) % 3];
        self.path.push(chart);
        let left_ok = l.cross(&x).is_positive_tol(self.tol);
        let right_ok = x.cross(r).is_positive_tol(self.tol);
        if left_ok && right_ok {
            self.record(3 * t2 + (k2 + 2) % 3, xcone, x.clone());
            self.explore_next((k2 + 1) % 3, u, x.clone(), l, &x);
            self.explore_next((k2 + 2) % 3, x.clone(), w, &x, r);
        } else if !left_ok {
            self.explore_next((k2 + 2) % 3, x, w, l, r);
        } else {
            self.explore_next((k2 + 1) % 3, u, x, l, r);
        }
        self.path.pop();
    }

    fn explore_next(&mut self, k: usize, u: Vec2<W>, w: Vec2<W>, l: &Vec2<W>, r: &Vec2<W>) {
        if l.cross(r).is_positive_tol(self.tol) {
            self.explore(k, u, w, l, r);
        }
    }
}

/// Every saddle connection whose base holonomy lies in `region`, each
/// listed once, sorted by base length.
pub fn connections_in_region<W: Scalar>(surface: &FlatSurface<W>, region: &Region<W>) -> Vec<RawConnection<W>> {
    let tol = surface.tol();
    let mut out = Vec::new();
    for (t, tri) in surface.triangles().iter().enumerate() {
        for j in 0..3 {
            let chart = Chart {
                triangle: t,
                sign: 1,
                offset: -tri.points[j].clone(),
            };
            let u = chart.develop(&tri.points[(j + 1) % 3]);
            let w = chart.develop(&tri.points[(j + 2) % 3]);
            let mut s = Search {
                surface,
                region,
                tol,
                start_corner: 3 * t + j,
                path: vec![chart],
                out: Vec::new(),
            };
            // the edge leaving this corner counterclockwise is a connection;
            // the reverse traversal starts at the neighbor's corner
            let (t2, k2, _) = tri.neighbors[j];
            s.record(3 * t2 + k2, tri.cone[(j + 1) % 3], u.clone());
            s.explore((j + 1) % 3, u.clone(), w.clone(), &u, &w);
            out.extend(s.out);
        }
    }
    for c in out.iter_mut() {
        if !c.2.is_upper(tol) {
            c.2 = -c.2.clone();
        }
    }
    out.sort_by(|a, b| {
        let (la, lb) = (a.2.norm2().to_f64(), b.2.norm2().to_f64());
        la.total_cmp(&lb)
            .then(a.2.x.to_f64().total_cmp(&b.2.x.to_f64()))
            .then(a.2.y.to_f64().total_cmp(&b.2.y.to_f64()))
            .then((a.0, a.1).cmp(&(b.0, b.1)))
    });
    out
}

/// Saddle connections of the flowed state with length at most `l`.
pub fn saddle_connections<W: Scalar>(state: &FlowState<W>, l: W) -> Result<Vec<SaddleConnection<W>>, FlatError> {
    if !l.is_positive_tol(0.0) {
        return Err(FlatError::NonPositive("length bound"));
    }
    let region = Region::Ellipse {
        m: state.applied.clone(),
        r2: l.clone() * l,
    };
    Ok(from_raw(state, connections_in_region(&state.base, &region)))
}

pub(crate) fn from_raw<W: Scalar>(state: &FlowState<W>, raw: Vec<RawConnection<W>>) -> Vec<SaddleConnection<W>> {
    let mut v: Vec<SaddleConnection<W>> = raw
        .into_iter()
        .map(|(start, end, h, pieces)| SaddleConnection {
            start,
            end,
            holonomy: state.holonomy(&h),
            base_holonomy: h,
            pieces,
        })
        .collect();
    v.sort_by(|a, b| a.length2().to_f64().total_cmp(&b.length2().to_f64()));
    v
}
