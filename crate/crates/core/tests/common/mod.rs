//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's own solvers.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lamina_core::traintrack::{Slot, TrainTrack};

/// Signed incidence rows computed straight from the branch list.
pub fn incidence(track: &TrainTrack) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0i64; track.branch_count()]; track.switch_count()];
    for (b, br) in track.branches().iter().enumerate() {
        for p in br.ends {
            rows[p.switch][b] += if p.slot == Slot::Large { 1 } else { -1 };
        }
    }
    rows
}

/// All nonzero integral switch solutions with every entry in `0..=max`.
pub fn small_solutions(track: &TrainTrack, max: i64) -> Vec<Vec<i64>> {
    let rows = incidence(track);
    let n = track.branch_count();
    // visit branches so that switches get completed as early as possible
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; n];
    for (s, row) in rows.iter().enumerate() {
        for (b, &x) in row.iter().enumerate() {
            if (x != 0 || track.branch(b).ends.iter().any(|p| p.switch == s)) && !placed[b] {
                placed[b] = true;
                order.push(b);
            }
        }
    }
    order.extend((0..n).filter(|&b| !placed[b]));
    // switch s can be checked after position last[s]
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for s in 0..rows.len() {
        let last = (0..n)
            .filter(|&k| track.branch(order[k]).ends.iter().any(|p| p.switch == s))
            .max()
            .unwrap_or(0);
        checks[last].push(s);
    }
    let mut out = Vec::new();
    let mut w = vec![0i64; n];
    fn rec(k: usize, order: &[usize], rows: &[Vec<i64>], checks: &[Vec<usize>], max: i64, w: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == order.len() {
            if w.iter().any(|&x| x != 0) {
                out.push(w.clone());
            }
            return;
        }
        for v in 0..=max {
            w[order[k]] = v;
            let ok = checks[k]
                .iter()
                .all(|&s| rows[s].iter().zip(w.iter()).map(|(a, b)| a * b).sum::<i64>() == 0);
            if ok {
                rec(k + 1, order, rows, checks, max, w, out);
            }
        }
        w[order[k]] = 0;
    }
    rec(0, &order, &rows, &checks, max, &mut w, &mut out);
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0, |g, &x| gcd(g, x)) == 1
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    // a and b nonnegative and nonzero
    let i = a.iter().position(|&x| x != 0).unwrap();
    a.iter().zip(b).all(|(&x, &y)| x * b[i] == y * a[i])
}

/// Extreme rays among the small solutions: primitive vectors whose support
/// contains the support of no other (non-proportional) small solution.
/// Sound and complete once every extreme ray has entries at most `max`.
pub fn oracle_extreme_rays(track: &TrainTrack, max: i64) -> BTreeSet<Vec<i64>> {
    let sols = small_solutions(track, max);
    let supports: Vec<u128> = sols
        .iter()
        .map(|v| v.iter().enumerate().filter(|(_, &x)| x != 0).fold(0u128, |m, (i, _)| m | 1 << i))
        .collect();
    let mut out = BTreeSet::new();
    for (i, v) in sols.iter().enumerate() {
        if !is_primitive(v) {
            continue;
        }
        let minimal = sols
            .iter()
            .enumerate()
            .all(|(j, u)| j == i || supports[j] & !supports[i] != 0 || proportional(v, u));
        if minimal {
            out.insert(v.clone());
        }
    }
    out
}

/// Primitive integer vectors (x, y) with x^2 + y^2 <= r2, one per sign class.
pub fn primitive_vectors_up_to_sign(r2: i64) -> BTreeSet<(i64, i64)> {
    let r = (r2 as f64).sqrt() as i64 + 1;
    let mut out = BTreeSet::new();
    for x in -r..=r {
        for y in -r..=r {
            if (x, y) == (0, 0) || x * x + y * y > r2 || gcd(x, y) != 1 {
                continue;
            }
            if x > 0 || (x == 0 && y > 0) {
                out.insert((x, y));
            }
        }
    }
    out
}

/// Holonomies of saddle connections on the three-square L surface with
/// length at most sqrt(r2), up to sign, with multiplicity. Every primitive
/// lattice vector is the holonomy of exactly three connections and no
/// other vector occurs.
pub fn three_square_l_holonomies(r2: i64) -> BTreeMap<(i64, i64), usize> {
    primitive_vectors_up_to_sign(r2).into_iter().map(|v| (v, 3)).collect()
}

/// Minimal-weight cycle in a multigraph by brute force over simple cycles
/// through each edge (vertex count is tiny in the fixtures).
pub fn min_cycle_weight(n: usize, edges: &[(usize, usize, f64)]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, &(u, v, w)) in edges.iter().enumerate() {
        if u == v {
            best = Some(best.map_or(w, |b: f64| b.min(w)));
            continue;
        }
        // Bellman-Ford style shortest path u -> v avoiding edge i
        let mut dist = vec![f64::INFINITY; n];
        dist[u] = 0.0;
        for _ in 0..n {
            for (j, &(a, b, c)) in edges.iter().enumerate() {
                if j == i {
                    continue;
                }
                if dist[a] + c < dist[b] {
                    dist[b] = dist[a] + c;
                }
                if dist[b] + c < dist[a] {
                    dist[a] = dist[b] + c;
                }
            }
        }
        if dist[v].is_finite() {
            let total = dist[v] + w;
            best = Some(best.map_or(total, |b: f64| b.min(total)));
        }
    }
    best
}

/// Branch sitting at (switch, slot), found by scanning the branch list.
pub fn branch_at(track: &TrainTrack, switch: usize, slot: Slot) -> usize {
    track
        .branches()
        .iter()
        .position(|b| b.ends.iter().any(|p| p.switch == switch && p.slot == slot))
        .expect("slot occupied")
}

/// The parent weight of a split large branch `e`: the child diagonal plus
/// the two small branches on the side the split turns away from. A right
/// split leaves the SL neighbours of e behind, a left split the SR ones.
pub fn projected_large_weight(parent: &TrainTrack, e: usize, right: bool, child: &[i64]) -> i64 {
    let [p, q] = parent.branch(e).ends;
    let slot = if right { Slot::SmallLeft } else { Slot::SmallRight };
    child[e] + child[branch_at(parent, p.switch, slot)] + child[branch_at(parent, q.switch, slot)]
}

/// Deterministic pseudo-random strictly positive integral measure: a
/// positive combination of every extreme ray of the cone.
pub fn positive_combination(rays: &[Vec<i64>], coeffs: &[i64]) -> Vec<i64> {
    let mut w = vec![0i64; rays[0].len()];
    for (r, &c) in rays.iter().zip(coeffs) {
        for (x, y) in w.iter_mut().zip(r) {
            *x += c * y;
        }
    }
    w
}
