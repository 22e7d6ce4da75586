use num_traits::Zero;

use super::cones::{switch_residuals, trigon_inequalities};
use super::{TrackId, TrainTrack, WeightError};
use crate::scalar::{Rational, Scalar, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Transverse,
    Tangential,
}

impl WeightKind {
    pub fn token(self) -> &'static str {
        match self {
            WeightKind::Transverse => "transverse",
            WeightKind::Tangential => "tangential",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "transverse" => Some(WeightKind::Transverse),
            "tangential" => Some(WeightKind::Tangential),
            _ => None,
        }
    }
}

/// Nonnegative weights on the branches of one track.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchWeights<W = Rational> {
    track: TrackId,
    kind: WeightKind,
    values: Vec<W>,
}

impl<W: Scalar> BranchWeights<W> {
    pub fn transverse(track: &TrainTrack, values: Vec<W>) -> Result<Self, WeightError> {
        Self::transverse_tol(track, values, DEFAULT_TOL)
    }

    pub fn transverse_tol(track: &TrainTrack, values: Vec<W>, tol: f64) -> Result<Self, WeightError> {
        check_shape(track, &values, tol)?;
        if let Some(s) = switch_residuals(track, &values).iter().position(|r| !r.is_zero_tol(tol)) {
            return Err(WeightError::SwitchCondition(s));
        }
        Ok(BranchWeights {
            track: track.id(),
            kind: WeightKind::Transverse,
            values,
        })
    }

    pub fn tangential(track: &TrainTrack, values: Vec<W>) -> Result<Self, WeightError> {
        check_shape(track, &values, DEFAULT_TOL)?;
        for (i, sides) in trigon_inequalities(track)?.iter().enumerate() {
            let m: Vec<W> = sides
                .iter()
                .map(|s| s.iter().fold(W::zero(), |acc, &b| acc + values[b].clone()))
                .collect();
            for k in 0..3 {
                let slack = m[(k + 1) % 3].clone() + m[(k + 2) % 3].clone() - m[k].clone();
                if slack.is_negative_tol(DEFAULT_TOL) {
                    return Err(WeightError::TrigonInequality(i));
                }
            }
        }
        Ok(BranchWeights {
            track: track.id(),
            kind: WeightKind::Tangential,
            values,
        })
    }

    /// Wrap values without checking them against a track.
    pub fn unchecked(track: TrackId, kind: WeightKind, values: Vec<W>) -> Self {
        BranchWeights { track, kind, values }
    }

    pub fn track_id(&self) -> TrackId {
        self.track
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn into_values(self) -> Vec<W> {
        self.values
    }

    pub fn total(&self) -> W {
        self.values.iter().fold(W::zero(), |acc, x| acc + x.clone())
    }

    pub fn scaled(&self, c: &W) -> Self {
        BranchWeights {
            track: self.track,
            kind: self.kind,
            values: self.values.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Sum with weights of the same kind on the same track.
    pub fn plus(&self, other: &Self) -> Result<Self, WeightError> {
        if self.track != other.track {
            return Err(WeightError::TrackMismatch);
        }
        if self.kind != other.kind {
            return Err(WeightError::KindMismatch {
                expected: self.kind,
                found: other.kind,
            });
        }
        Ok(BranchWeights {
            track: self.track,
            kind: self.kind,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }
}

fn check_shape<W: Scalar>(track: &TrainTrack, values: &[W], tol: f64) -> Result<(), WeightError> {
    if values.len() != track.branch_count() {
        return Err(WeightError::Length {
            expected: track.branch_count(),
            found: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|x| x.is_negative_tol(tol)) {
        return Err(WeightError::Negative(i));
    }
    Ok(())
}

/// Intersection pairing of a transverse and a tangential measure.
pub fn pair(transverse: &BranchWeights, tangential: &BranchWeights) -> Result<Rational, WeightError> {
    if transverse.track != tangential.track {
        return Err(WeightError::TrackMismatch);
    }
    if transverse.kind != WeightKind::Transverse {
        return Err(WeightError::KindMismatch {
            expected: WeightKind::Transverse,
            found: transverse.kind,
        });
    }
    if tangential.kind != WeightKind::Tangential {
        return Err(WeightError::KindMismatch {
            expected: WeightKind::Tangential,
            found: tangential.kind,
        });
    }
    Ok(transverse
        .values
        .iter()
        .zip(&tangential.values)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
}
