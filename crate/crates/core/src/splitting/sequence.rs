use super::iso::{isomorphisms, TrackIsomorphism};
use super::split::{full_split, SplitRecord};
use super::{Direction, SplitError};
use crate::scalar::Scalar;
use crate::traintrack::{BranchWeights, TrainTrack};

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceStep<W> {
    pub track: TrainTrack,
    /// Direction taken at each large branch of the previous track, by branch.
    pub directions: Vec<(usize, Direction)>,
    pub records: Vec<SplitRecord>,
    /// Total weight one.
    pub measure: Vec<W>,
    /// Expansion of this step; one for the initial state.
    pub ratio: W,
}

impl<W> SequenceStep<W> {
    pub fn word(&self) -> String {
        self.directions.iter().map(|(_, d)| d.letter()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingSequence<W> {
    pub steps: Vec<SequenceStep<W>>,
    pub tol: f64,
}

fn normalized<W: Scalar>(v: &[W]) -> Vec<W> {
    let t = v.iter().fold(W::zero(), |a, x| a + x.clone());
    v.iter().map(|x| x.clone() / t.clone()).collect()
}

impl<W: Scalar> SplittingSequence<W> {
    /// Initial state. The measure must be strictly positive.
    pub fn start(track: &TrainTrack, mu: &BranchWeights<W>, tol: f64) -> Result<Self, SplitError> {
        if mu.track_id() != track.id() {
            return Err(crate::traintrack::WeightError::TrackMismatch.into());
        }
        let report = track.validate();
        if !report.is_valid() {
            return Err(crate::traintrack::TrackError::Invalid(report).into());
        }
        if let Some(b) = mu.values().iter().position(|x| !x.is_positive_tol(tol)) {
            return Err(SplitError::NotPositive(b));
        }
        Ok(SplittingSequence {
            steps: vec![SequenceStep {
                track: track.clone(),
                directions: Vec::new(),
                records: Vec::new(),
                measure: normalized(mu.values()),
                ratio: W::one(),
            }],
            tol,
        })
    }

    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> &SequenceStep<W> {
        self.steps.last().expect("initial state")
    }

    /// Take `n` more full splits.
    pub fn advance(&mut self, n: usize) -> Result<(), SplitError> {
        for _ in 0..n {
            let step = self.steps.len();
            let last = self.last();
            let fs = full_split(&last.track, &last.measure, self.tol).map_err(|e| SplitError::AtStep { step, source: Box::new(e) })?;
            if fs.ratio.cmp_tol(&W::one(), self.tol) == std::cmp::Ordering::Less {
                return Err(SplitError::AtStep {
                    step,
                    source: Box::new(SplitError::Inconsistent(format!("expansion ratio {} below one", fs.ratio))),
                });
            }
            self.steps.push(SequenceStep {
                track: fs.track,
                directions: fs.directions,
                records: fs.records,
                measure: fs.measure,
                ratio: fs.ratio,
            });
        }
        Ok(())
    }

    /// Product of the step ratios: initial total over current total, both
    /// measured in the original scale.
    pub fn cumulative_expansion(&self) -> W {
        self.steps.iter().fold(W::one(), |a, s| a * s.ratio.clone())
    }

    /// Largest single-step ratio, as f64.
    pub fn max_ratio(&self) -> f64 {
        self.steps.iter().map(|s| s.ratio.to_f64()).fold(1.0, f64::max)
    }
}

pub fn drive_sequence<W: Scalar>(
    track: &TrainTrack,
    mu: &BranchWeights<W>,
    n: usize,
    tol: f64,
) -> Result<SplittingSequence<W>, SplitError> {
    let mut seq = SplittingSequence::start(track, mu, tol)?;
    seq.advance(n)?;
    Ok(seq)
}

/// Does `mu` on the initial track of `seq` follow the recorded directions
/// up to step `k`, so that it is carried by the track at step `k`?
pub fn in_cylinder<W: Scalar>(mu: &BranchWeights<W>, seq: &SplittingSequence<W>, k: usize) -> Result<bool, SplitError> {
    if k >= seq.steps.len() {
        return Err(SplitError::Inconsistent(format!(
            "step {} is beyond the sequence of length {}",
            k,
            seq.len()
        )));
    }
    let mut own = SplittingSequence::start(&seq.steps[0].track, mu, seq.tol)?;
    for i in 1..=k {
        own.advance(1)?;
        if own.steps[i].directions != seq.steps[i].directions {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Steps `i < j` whose tracks are isomorphic by a map carrying the
/// normalized measure of step `i` onto that of step `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Periodicity {
    pub i: usize,
    pub j: usize,
    pub iso: TrackIsomorphism,
}

impl Periodicity {
    pub fn verify<W: Scalar>(&self, seq: &SplittingSequence<W>) -> bool {
        let (Some(a), Some(b)) = (seq.steps.get(self.i), seq.steps.get(self.j)) else {
            return false;
        };
        self.i < self.j && self.iso.verify(&a.track, &b.track) && measures_match(&self.iso.apply_measure(&a.measure), &b.measure, seq.tol)
    }
}

fn measures_match<W: Scalar>(x: &[W], y: &[W], tol: f64) -> bool {
    let (x, y) = (normalized(x), normalized(y));
    x.iter().zip(&y).all(|(a, b)| a.cmp_tol(b, tol).is_eq())
}

/// First pair in order of `j`, then `i`.
pub fn detect_periodicity<W: Scalar>(seq: &SplittingSequence<W>) -> Option<Periodicity> {
    for j in 1..seq.steps.len() {
        for i in 0..j {
            let (a, b) = (&seq.steps[i], &seq.steps[j]);
            for iso in isomorphisms(&a.track, &b.track) {
                if measures_match(&iso.apply_measure(&a.measure), &b.measure, seq.tol) {
                    return Some(Periodicity { i, j, iso });
                }
            }
        }
    }
    None
}
