use super::{Direction, SplitError};
use crate::scalar::Scalar;
use crate::traintrack::{Branch, Dart, Port, Slot, TrainTrack};

/// The branch ends next to a large branch `e` joining switches v and w
/// (`e` leaves v from its end 0). Reading the figure with e horizontal,
/// a = (v,SR) upper left, b = (w,SL) upper right, c = (w,SR) lower right,
/// d = (v,SL) lower left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quad {
    pub a: Dart,
    pub b: Dart,
    pub c: Dart,
    pub d: Dart,
}

impl Quad {
    pub fn branches(&self) -> [usize; 4] {
        [self.a.branch, self.b.branch, self.c.branch, self.d.branch]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitRecord {
    pub parent: TrainTrack,
    pub child: TrainTrack,
    pub large_branch: usize,
    pub direction: Direction,
    pub quad: Quad,
    /// Parent branch i becomes child branch `correspondence[i]`; the large
    /// branch becomes the diagonal.
    pub correspondence: Vec<usize>,
}

impl SplitRecord {
    pub fn winners(&self) -> [Dart; 2] {
        match self.direction {
            Direction::Right => [self.quad.a, self.quad.c],
            Direction::Left => [self.quad.b, self.quad.d],
        }
    }

    pub fn losers(&self) -> [Dart; 2] {
        match self.direction {
            Direction::Right => [self.quad.b, self.quad.d],
            Direction::Left => [self.quad.a, self.quad.c],
        }
    }

    pub fn diagonal(&self) -> usize {
        self.correspondence[self.large_branch]
    }
}

pub fn quad(track: &TrainTrack, e: usize) -> Result<Quad, SplitError> {
    if e >= track.branch_count() {
        return Err(SplitError::NoSuchBranch(e));
    }
    let br = track.branch(e);
    if !br.is_large() {
        return Err(SplitError::NotLarge(e));
    }
    let ports = track.ports().map_err(|v| {
        SplitError::Track(crate::traintrack::TrackError::Invalid(crate::traintrack::ValidationReport {
            violations: v,
        }))
    })?;
    let v = br.ends[0].switch;
    let w = br.ends[1].switch;
    Ok(Quad {
        a: ports.dart_at(Port::new(v, Slot::SmallRight)),
        b: ports.dart_at(Port::new(w, Slot::SmallLeft)),
        c: ports.dart_at(Port::new(w, Slot::SmallRight)),
        d: ports.dart_at(Port::new(v, Slot::SmallLeft)),
    })
}

/// Split at the large branch `e`. Branch and switch names are kept, so the
/// correspondence is the identity and `e` becomes the diagonal.
pub fn split(track: &TrainTrack, e: usize, direction: Direction) -> Result<SplitRecord, SplitError> {
    let report = track.validate();
    if !report.is_valid() {
        return Err(SplitError::Track(crate::traintrack::TrackError::Invalid(report)));
    }
    let q = quad(track, e)?;
    let v = track.branch(e).ends[0].switch;
    let w = track.branch(e).ends[1].switch;
    let mut branches: Vec<Branch> = track.branches().to_vec();
    let mut put = |d: Dart, p: Port| branches[d.branch].ends[d.end as usize] = p;
    match direction {
        Direction::Right => {
            put(q.a, Port::new(v, Slot::Large));
            put(q.b, Port::new(v, Slot::SmallLeft));
            put(q.c, Port::new(w, Slot::Large));
            put(q.d, Port::new(w, Slot::SmallLeft));
            branches[e] = Branch::new(Port::new(v, Slot::SmallRight), Port::new(w, Slot::SmallRight));
        }
        Direction::Left => {
            put(q.b, Port::new(w, Slot::Large));
            put(q.a, Port::new(w, Slot::SmallRight));
            put(q.d, Port::new(v, Slot::Large));
            put(q.c, Port::new(v, Slot::SmallRight));
            branches[e] = Branch::new(Port::new(v, Slot::SmallLeft), Port::new(w, Slot::SmallLeft));
        }
    }
    let bare = TrainTrack::new(track.surface(), track.switch_count(), branches.clone(), vec![])?;
    let flags: Vec<Dart> = bare
        .census()?
        .iter()
        .filter(|r| r.cusps == 1)
        .map(|r| *r.darts.iter().min().expect("nonempty region"))
        .collect();
    let child = TrainTrack::new(track.surface(), track.switch_count(), branches, flags)?;
    let report = child.validate();
    if !report.is_valid() {
        return Err(SplitError::ChildInvalid(report));
    }
    Ok(SplitRecord {
        parent: track.clone(),
        child,
        large_branch: e,
        direction,
        quad: q,
        correspondence: (0..track.branch_count()).collect(),
    })
}

/// Outcome of asking which split carries a measure.
#[derive(Clone, Debug, PartialEq)]
pub enum Lift<W> {
    Determined {
        record: Box<SplitRecord>,
        child_measure: Vec<W>,
    },
    /// mu(a) = mu(b): both children carry the measure with zero on the diagonal.
    Undetermined,
}

pub fn lift_measure<W: Scalar>(track: &TrainTrack, e: usize, mu: &[W], tol: f64) -> Result<Lift<W>, SplitError> {
    let q = quad(track, e)?;
    let diff = mu[q.a.branch].clone() - mu[q.b.branch].clone();
    let direction = match diff.sign_tol(tol) {
        std::cmp::Ordering::Greater => Direction::Right,
        std::cmp::Ordering::Less => Direction::Left,
        std::cmp::Ordering::Equal => return Ok(Lift::Undetermined),
    };
    let record = split(track, e, direction)?;
    let mut child = vec![W::zero(); mu.len()];
    for (i, x) in mu.iter().enumerate() {
        child[record.correspondence[i]] = x.clone();
    }
    child[record.diagonal()] = diff.abs_tol(tol);
    check_switches(&record.child, &child, tol)?;
    Ok(Lift::Determined {
        record: Box::new(record),
        child_measure: child,
    })
}

/// Pull a child measure back through a split: the large branch collects the
/// diagonal and both losers, every other branch keeps its weight.
pub fn project_measure<W: Scalar>(rec: &SplitRecord, child: &[W], tol: f64) -> Result<Vec<W>, SplitError> {
    let mut parent: Vec<W> = rec.correspondence.iter().map(|&c| child[c].clone()).collect();
    let [l1, l2] = rec.losers();
    parent[rec.large_branch] =
        child[rec.diagonal()].clone() + child[rec.correspondence[l1.branch]].clone() + child[rec.correspondence[l2.branch]].clone();
    check_switches(&rec.parent, &parent, tol)?;
    Ok(parent)
}

fn check_switches<W: Scalar>(track: &TrainTrack, w: &[W], tol: f64) -> Result<(), SplitError> {
    let mut res = vec![W::zero(); track.switch_count()];
    for (b, br) in track.branches().iter().enumerate() {
        for p in br.ends {
            let x = res[p.switch].clone();
            res[p.switch] = if p.slot == Slot::Large {
                x + w[b].clone()
            } else {
                x - w[b].clone()
            };
        }
    }
    match res.iter().position(|r| !r.is_zero_tol(tol)) {
        Some(s) => Err(SplitError::Inconsistent(format!("switch condition fails at switch {}", s))),
        None => Ok(()),
    }
}

/// One full split: the result of splitting every large branch of the parent.
#[derive(Clone, Debug, PartialEq)]
pub struct FullSplit<W> {
    pub track: TrainTrack,
    pub directions: Vec<(usize, Direction)>,
    pub records: Vec<SplitRecord>,
    /// Child measure scaled to total weight one.
    pub measure: Vec<W>,
    /// Total weight before over total weight after, at least one.
    pub ratio: W,
}

pub fn full_split<W: Scalar>(track: &TrainTrack, mu: &[W], tol: f64) -> Result<FullSplit<W>, SplitError> {
    full_split_in_order(track, mu, &track.large_branches(), tol)
}

/// Full split visiting the large branches of `track` in the given order.
/// Any order of the parent's large branches gives the same result.
pub fn full_split_in_order<W: Scalar>(track: &TrainTrack, mu: &[W], order: &[usize], tol: f64) -> Result<FullSplit<W>, SplitError> {
    let mut sorted = order.to_vec();
    sorted.sort();
    if sorted != track.large_branches() {
        return Err(SplitError::Inconsistent("order is not the set of large branches".into()));
    }
    let mut cur = track.clone();
    let mut m = mu.to_vec();
    let mut records = Vec::new();
    let mut directions = Vec::new();
    for &e in order {
        if !cur.branch(e).is_large() {
            return Err(SplitError::NonCommuting(e));
        }
        match lift_measure(&cur, e, &m, tol)? {
            Lift::Undetermined => return Err(SplitError::NonGeneric { branch: e }),
            Lift::Determined { record, child_measure } => {
                directions.push((e, record.direction));
                cur = record.child.clone();
                m = child_measure;
                records.push(*record);
            }
        }
    }
    directions.sort();
    let before = mu.iter().fold(W::zero(), |acc, x| acc + x.clone());
    let after = m.iter().fold(W::zero(), |acc, x| acc + x.clone());
    let ratio = before / after.clone();
    let measure = m.into_iter().map(|x| x / after.clone()).collect();
    Ok(FullSplit {
        track: cur,
        directions,
        records,
        measure,
        ratio,
    })
}
