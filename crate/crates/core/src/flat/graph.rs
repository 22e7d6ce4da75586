use std::cmp::Ordering;
use std::collections::VecDeque;

use super::{saddle_connections, FlatError, FlatSurface, FlowState, SaddleConnection, Vec2};
use crate::scalar::Scalar;

/// A closed walk of short saddle connections.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    /// Indices into the connection list the circuit was found in.
    pub connections: Vec<usize>,
    /// Cone points visited; the walk returns to `points[0]`.
    pub points: Vec<usize>,
    pub length: f64,
}

impl Circuit {
    /// Recheck against the connection list: each edge has length at most
    /// `eps`, consecutive edges share cone points and the walk closes up.
    pub fn verify<W: Scalar>(&self, conns: &[SaddleConnection<W>], eps: f64) -> bool {
        let n = self.connections.len();
        if n == 0 || self.points.len() != n {
            return false;
        }
        let mut total = 0.0;
        for (i, &c) in self.connections.iter().enumerate() {
            let Some(sc) = conns.get(c) else { return false };
            if sc.length() > eps * (1.0 + 1e-12) {
                return false;
            }
            let (a, b) = (self.points[i], self.points[(i + 1) % n]);
            if !((sc.start == a && sc.end == b) || (sc.start == b && sc.end == a)) {
                return false;
            }
            total += sc.length();
        }
        let mut distinct = self.connections.clone();
        distinct.sort();
        distinct.dedup();
        distinct.len() == n && (total - self.length).abs() <= 1e-9 * (1.0 + total) && total <= n as f64 * eps * (1.0 + 1e-12)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KEpsilon<W> {
    /// No circuit among connections of length at most epsilon.
    pub acyclic: bool,
    /// The short connections touch every cone point and join them up.
    pub connected: bool,
    pub connections: Vec<SaddleConnection<W>>,
    pub circuit: Option<Circuit>,
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let n = p[y];
        p[y] = r;
        y = n;
    }
    r
}

/// Add connections in the given order; the first that closes a cycle
/// yields the circuit through it.
fn first_circuit<W: Scalar>(n_points: usize, conns: &[SaddleConnection<W>], order: &[usize]) -> Option<Circuit> {
    let mut parent: Vec<usize> = (0..n_points).collect();
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_points];
    for &i in order {
        let c = &conns[i];
        let (a, b) = (find(&mut parent, c.start), find(&mut parent, c.end));
        if a == b {
            // path from c.end back to c.start inside the forest
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n_points];
            let mut seen = vec![false; n_points];
            seen[c.end] = true;
            let mut q = VecDeque::from([c.end]);
            while let Some(v) = q.pop_front() {
                for &(w, e) in &tree[v] {
                    if !seen[w] {
                        seen[w] = true;
                        prev[w] = Some((v, e));
                        q.push_back(w);
                    }
                }
            }
            let mut connections = Vec::new();
            let mut points = vec![c.start];
            let mut v = c.start;
            while v != c.end {
                let (u, e) = prev[v].expect("forest path");
                connections.push(e);
                points.push(u);
                v = u;
            }
            // the new connection closes the walk from c.end back to c.start
            connections.push(i);
            let length = connections.iter().map(|&e| conns[e].length()).sum();
            return Some(Circuit {
                connections,
                points,
                length,
            });
        }
        parent[a] = b;
        tree[c.start].push((c.end, i));
        tree[c.end].push((c.start, i));
    }
    None
}

fn by_length<W: Scalar>(conns: &[SaddleConnection<W>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..conns.len()).collect();
    order.sort_by(|&a, &b| conns[a].length2().cmp_tol(&conns[b].length2(), 0.0).then(a.cmp(&b)));
    order
}

pub fn in_k_epsilon<W: Scalar>(state: &FlowState<W>, eps: W) -> Result<KEpsilon<W>, FlatError> {
    let conns = saddle_connections(state, eps)?;
    let n = state.base.cone_points().len();
    let circuit = first_circuit(n, &conns, &by_length(&conns));
    let mut parent: Vec<usize> = (0..n).collect();
    for c in &conns {
        let (a, b) = (find(&mut parent, c.start), find(&mut parent, c.end));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    let connected = (0..n).all(|v| find(&mut parent, v) == root);
    Ok(KEpsilon {
        acyclic: circuit.is_none(),
        connected,
        connections: conns,
        circuit,
    })
}

/// Smallest length at which the short connections in `conns` contain a
/// circuit, with that circuit. The graph of connections of length at most
/// epsilon is a forest exactly when epsilon is below the threshold.
pub fn kruskal_threshold<W: Scalar>(n_points: usize, conns: &[SaddleConnection<W>]) -> Option<(f64, Circuit)> {
    let order = by_length(conns);
    let c = first_circuit(n_points, conns, &order)?;
    let t = *c.connections.last().expect("nonempty circuit");
    Some((conns[t].length(), c))
}

/// Largest probe in `grid` at which the state lies in K(eps). Every closed
/// geodesic is then at least that long. None when no probe qualifies.
pub fn systole_lower_bound<W: Scalar>(state: &FlowState<W>, grid: &[W]) -> Result<Option<W>, FlatError> {
    let Some(top) = grid
        .iter()
        .cloned()
        .reduce(|a, b| if a.cmp_tol(&b, 0.0) == Ordering::Less { b } else { a })
    else {
        return Ok(None);
    };
    let conns = saddle_connections(state, top)?;
    let thr = kruskal_threshold(state.base.cone_points().len(), &conns).map(|(_, c)| conns[*c.connections.last().unwrap()].length2());
    let mut best: Option<W> = None;
    for e in grid {
        let ok = match &thr {
            None => true,
            Some(t2) => (e.clone() * e.clone()).cmp_tol(t2, 0.0) == Ordering::Less,
        };
        if ok && best.as_ref().is_none_or(|b| e.cmp_tol(b, 0.0) == Ordering::Greater) {
            best = Some(e.clone());
        }
    }
    Ok(best)
}

/// Do two pieces in the same triangle share a point other than a corner?
fn pieces_meet<W: Scalar>(p1: &Vec2<W>, p2: &Vec2<W>, q1: &Vec2<W>, q2: &Vec2<W>, corners: &[Vec2<W>; 3], tol: f64) -> bool {
    use Ordering::*;
    let same = |a: &Vec2<W>, b: &Vec2<W>| (a.x.clone() - b.x.clone()).is_zero_tol(tol) && (a.y.clone() - b.y.clone()).is_zero_tol(tol);
    let is_corner = |p: &Vec2<W>| corners.iter().any(|c| same(c, p));
    let orient = |a: &Vec2<W>, b: &Vec2<W>, c: &Vec2<W>| (b.clone() - a.clone()).cross(&(c.clone() - a.clone())).sign_tol(tol);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let opposite = |a, b| matches!((a, b), (Less, Greater) | (Greater, Less));
    if opposite(d1, d2) && opposite(d3, d4) {
        return true;
    }
    let on = |a: &Vec2<W>, b: &Vec2<W>, p: &Vec2<W>| (p.clone() - a.clone()).dot(&(p.clone() - b.clone())).sign_tol(tol) != Greater;
    if d1 == Equal && d2 == Equal {
        // collinear: overlap of positive length, or a single shared point
        let dir = p2.clone() - p1.clone();
        let t = |p: &Vec2<W>| (p.clone() - p1.clone()).dot(&dir);
        let (a0, a1) = (W::zero(), dir.norm2());
        let (mut b0, mut b1) = (t(q1), t(q2));
        if b0.cmp_tol(&b1, 0.0) == Greater {
            std::mem::swap(&mut b0, &mut b1);
        }
        let lo = if a0.cmp_tol(&b0, 0.0) == Greater { a0 } else { b0 };
        let hi = if a1.cmp_tol(&b1, 0.0) == Less { a1 } else { b1 };
        return match lo.cmp_tol(&hi, tol) {
            Less => true,
            Greater => false,
            Equal => {
                let touch = [p1, p2, q1, q2].into_iter().find(|p| on(p1, p2, p) && on(q1, q2, p));
                touch.is_some_and(|p| !is_corner(p))
            }
        };
    }
    let touches = [(d1, p1, q1, q2), (d2, p2, q1, q2), (d3, q1, p1, p2), (d4, q2, p1, p2)];
    touches.iter().any(|(d, p, a, b)| *d == Equal && on(a, b, p) && !is_corner(p))
}

/// Open segments of the two connections are disjoint on the surface.
pub fn disjoint<W: Scalar>(surface: &FlatSurface<W>, a: &SaddleConnection<W>, b: &SaddleConnection<W>) -> bool {
    let tol = surface.tol();
    for pa in &a.pieces {
        for pb in b.pieces.iter().filter(|p| p.triangle == pa.triangle) {
            let corners = &surface.triangles()[pa.triangle].points;
            if pieces_meet(&pa.from, &pa.to, &pb.from, &pb.to, corners, tol) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    /// Smallest possible maximum length, with one minimizing family.
    Value { length: f64, members: Vec<usize> },
    /// No k pairwise disjoint connections within the length cap.
    Unbounded,
}

/// Size-k clique containing `must` within `allowed`, by branch and bound.
fn clique_with(adj: &[Vec<bool>], allowed: &[usize], must: usize, k: usize) -> Option<Vec<usize>> {
    fn grow(adj: &[Vec<bool>], cand: &[usize], chosen: &mut Vec<usize>, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        if chosen.len() + cand.len() < k {
            return false;
        }
        for (i, &v) in cand.iter().enumerate() {
            if chosen.len() + cand.len() - i < k {
                return false;
            }
            chosen.push(v);
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| adj[v][w]).collect();
            if grow(adj, &next, chosen, k) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let cand: Vec<usize> = allowed.iter().copied().filter(|&w| w != must && adj[must][w]).collect();
    let mut chosen = vec![must];
    grow(adj, &cand, &mut chosen, k).then_some(chosen)
}

pub(crate) fn disjointness_matrix<W: Scalar>(surface: &FlatSurface<W>, conns: &[SaddleConnection<W>]) -> Vec<Vec<bool>> {
    let n = conns.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = disjoint(surface, &conns[i], &conns[j]);
            adj[i][j] = d;
            adj[j][i] = d;
        }
    }
    adj
}

/// Minimum over k-element families of pairwise disjoint saddle connections
/// (length at most `l_cap`) of the longest member.
pub fn disjoint_system_alpha<W: Scalar>(state: &FlowState<W>, k: usize, l_cap: W) -> Result<Alpha, FlatError> {
    let cap = state.base.disjointness_cap();
    if k == 0 {
        return Err(FlatError::NonPositive("k"));
    }
    if k > cap {
        return Err(FlatError::KTooLarge { k, cap });
    }
    let conns = saddle_connections(state, l_cap)?;
    let order = by_length(&conns);
    let adj = disjointness_matrix(&state.base, &conns);
    let mut allowed = Vec::new();
    for &i in &order {
        allowed.push(i);
        if let Some(mut members) = clique_with(&adj, &allowed, i, k) {
            members.sort();
            return Ok(Alpha::Value {
                length: conns[i].length(),
                members,
            });
        }
    }
    Ok(Alpha::Unbounded)
}

/// Size of the largest pairwise disjoint family among `conns`.
pub fn max_disjoint_family<W: Scalar>(surface: &FlatSurface<W>, conns: &[SaddleConnection<W>]) -> usize {
    let adj = disjointness_matrix(surface, conns);
    let all: Vec<usize> = (0..conns.len()).collect();
    let mut best = 0;
    for k in 1..=conns.len() {
        if all.iter().any(|&v| clique_with(&adj, &all, v, k).is_some()) {
            best = k;
        } else {
            break;
        }
    }
    best
}
