use std::collections::{BTreeSet, VecDeque};

use crate::scalar::Scalar;
use crate::traintrack::{Dart, Slot, TrainTrack};

/// A slot-preserving bijection between two tracks. Branch `b` of the source
/// goes to `branch_map[b]`, with its ends swapped when `flip[b]` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrackIsomorphism {
    pub switch_map: Vec<usize>,
    pub branch_map: Vec<usize>,
    pub flip: Vec<bool>,
}

impl TrackIsomorphism {
    pub fn identity(track: &TrainTrack) -> Self {
        TrackIsomorphism {
            switch_map: (0..track.switch_count()).collect(),
            branch_map: (0..track.branch_count()).collect(),
            flip: vec![false; track.branch_count()],
        }
    }

    pub fn map_dart(&self, d: Dart) -> Dart {
        Dart::new(self.branch_map[d.branch], d.end ^ self.flip[d.branch] as u8)
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &TrackIsomorphism) -> TrackIsomorphism {
        TrackIsomorphism {
            switch_map: self.switch_map.iter().map(|&s| then.switch_map[s]).collect(),
            branch_map: self.branch_map.iter().map(|&b| then.branch_map[b]).collect(),
            flip: (0..self.branch_map.len())
                .map(|b| self.flip[b] ^ then.flip[self.branch_map[b]])
                .collect(),
        }
    }

    pub fn inverse(&self) -> TrackIsomorphism {
        let mut switch_map = vec![0; self.switch_map.len()];
        for (s, &t) in self.switch_map.iter().enumerate() {
            switch_map[t] = s;
        }
        let mut branch_map = vec![0; self.branch_map.len()];
        let mut flip = vec![false; self.flip.len()];
        for (b, &c) in self.branch_map.iter().enumerate() {
            branch_map[c] = b;
            flip[c] = self.flip[b];
        }
        TrackIsomorphism {
            switch_map,
            branch_map,
            flip,
        }
    }

    /// Check every condition directly: bijectivity, slots at every branch
    /// end, and punctured regions going to punctured regions.
    pub fn verify(&self, from: &TrainTrack, to: &TrainTrack) -> bool {
        if from.surface() != to.surface()
            || self.switch_map.len() != from.switch_count()
            || to.switch_count() != from.switch_count()
            || self.branch_map.len() != from.branch_count()
            || to.branch_count() != from.branch_count()
            || self.flip.len() != from.branch_count()
        {
            return false;
        }
        let bij = |m: &[usize], n: usize| m.iter().copied().collect::<BTreeSet<_>>().len() == n && m.iter().all(|&x| x < n);
        if !bij(&self.switch_map, from.switch_count()) || !bij(&self.branch_map, from.branch_count()) {
            return false;
        }
        for b in 0..from.branch_count() {
            for end in 0..2u8 {
                let p = from.port_of(Dart::new(b, end));
                let q = to.port_of(self.map_dart(Dart::new(b, end)));
                if q.switch != self.switch_map[p.switch] || q.slot != p.slot {
                    return false;
                }
            }
        }
        let (Ok(r1), Ok(r2)) = (from.census(), to.census()) else {
            return false;
        };
        let punctured = |regions: &[crate::traintrack::Region]| -> BTreeSet<Vec<Dart>> {
            regions
                .iter()
                .filter(|r| r.puncture_flags > 0)
                .map(|r| {
                    let mut d = r.darts.clone();
                    d.sort();
                    d
                })
                .collect()
        };
        let image: BTreeSet<Vec<Dart>> = punctured(&r1)
            .into_iter()
            .map(|ds| {
                let mut d: Vec<Dart> = ds.into_iter().map(|d| self.map_dart(d)).collect();
                d.sort();
                d
            })
            .collect();
        image == punctured(&r2)
    }

    /// Push branch values forward along the branch bijection.
    pub fn apply_measure<W: Scalar>(&self, values: &[W]) -> Vec<W> {
        let mut out = vec![W::zero(); values.len()];
        for (b, x) in values.iter().enumerate() {
            out[self.branch_map[b]] = x.clone();
        }
        out
    }
}

/// Propagate from `switch 0 -> start` through the connected track. Returns
/// the forced map, or None if the slots disagree somewhere.
fn extend_from(from: &TrainTrack, to: &TrainTrack, start: usize) -> Option<TrackIsomorphism> {
    let n = from.switch_count();
    let (p1, p2) = (from.ports().ok()?, to.ports().ok()?);
    let mut sw = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut br = vec![usize::MAX; from.branch_count()];
    let mut flip = vec![false; from.branch_count()];
    sw[0] = start;
    used[start] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for slot in Slot::ALL {
            let d1 = p1.dart_at(crate::traintrack::Port::new(s, slot));
            let d2 = p2.dart_at(crate::traintrack::Port::new(sw[s], slot));
            let f = d1.end != d2.end;
            if br[d1.branch] == usize::MAX {
                br[d1.branch] = d2.branch;
                flip[d1.branch] = f;
            } else if br[d1.branch] != d2.branch || flip[d1.branch] != f {
                return None;
            }
            let q1 = from.port_of(d1.reverse());
            let q2 = to.port_of(d2.reverse());
            if q1.slot != q2.slot {
                return None;
            }
            if sw[q1.switch] == usize::MAX {
                if used[q2.switch] {
                    return None;
                }
                sw[q1.switch] = q2.switch;
                used[q2.switch] = true;
                queue.push_back(q1.switch);
            } else if sw[q1.switch] != q2.switch {
                return None;
            }
        }
    }
    if sw.contains(&usize::MAX) || br.contains(&usize::MAX) {
        return None;
    }
    let iso = TrackIsomorphism {
        switch_map: sw,
        branch_map: br,
        flip,
    };
    iso.verify(from, to).then_some(iso)
}

/// Every isomorphism `from -> to`, sorted.
pub fn isomorphisms(from: &TrainTrack, to: &TrainTrack) -> Vec<TrackIsomorphism> {
    if from.surface() != to.surface()
        || from.switch_count() != to.switch_count()
        || from.branch_count() != to.branch_count()
        || from.switch_count() == 0
    {
        return Vec::new();
    }
    let mut out: Vec<TrackIsomorphism> = (0..to.switch_count()).filter_map(|s| extend_from(from, to, s)).collect();
    out.sort_by(|a, b| a.switch_map.cmp(&b.switch_map));
    out
}

pub fn tracks_isomorphic(t1: &TrainTrack, t2: &TrainTrack) -> Option<TrackIsomorphism> {
    isomorphisms(t1, t2).into_iter().next()
}

/// Relabeling-invariant encoding of a track: the least BFS encoding over
/// all start switches.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub genus: u32,
    pub punctures: u32,
    pub code: Vec<usize>,
}

fn bfs_code(track: &TrainTrack, start: usize) -> Option<Vec<usize>> {
    let ports = track.ports().ok()?;
    let n = track.switch_count();
    let mut label = vec![usize::MAX; n];
    let mut blabel = vec![usize::MAX; track.branch_count()];
    let (mut next_s, mut next_b) = (1, 0);
    label[start] = 0;
    let mut order = vec![start];
    let mut code = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let s = order[k];
        k += 1;
        for slot in Slot::ALL {
            let d = ports.dart_at(crate::traintrack::Port::new(s, slot));
            if blabel[d.branch] == usize::MAX {
                blabel[d.branch] = next_b;
                next_b += 1;
            }
            let q = track.port_of(d.reverse());
            if label[q.switch] == usize::MAX {
                label[q.switch] = next_s;
                next_s += 1;
                order.push(q.switch);
            }
            code.extend([blabel[d.branch], label[q.switch], q.slot.index()]);
        }
    }
    (order.len() == n).then_some(code)
}

pub fn canonical_form(track: &TrainTrack) -> Option<CanonicalForm> {
    let code = (0..track.switch_count()).filter_map(|s| bfs_code(track, s)).min()?;
    Some(CanonicalForm {
        genus: track.surface().genus,
        punctures: track.surface().punctures,
        code,
    })
}
