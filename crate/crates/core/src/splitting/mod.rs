//! Splits, full splitting sequences driven by a measure, combinatorial
//! isomorphism of tracks and periodicity of sequences.

mod iso;
pub mod log;
mod sequence;
mod split;

use thiserror::Error;

use crate::parse::ParseError;
use crate::traintrack::{TrackError, ValidationReport, WeightError};

pub use iso::{canonical_form, isomorphisms, tracks_isomorphic, CanonicalForm, TrackIsomorphism};
pub use sequence::{detect_periodicity, drive_sequence, in_cylinder, Periodicity, SequenceStep, SplittingSequence};
pub use split::{full_split, full_split_in_order, lift_measure, project_measure, quad, split, FullSplit, Lift, Quad, SplitRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    pub fn letter(self) -> char {
        match self {
            Direction::Right => 'R',
            Direction::Left => 'L',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'R' => Some(Direction::Right),
            'L' => Some(Direction::Left),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplitError {
    #[error("branch {0} does not exist")]
    NoSuchBranch(usize),
    #[error("branch {0} is not large and cannot be split")]
    NotLarge(usize),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("split produced an invalid track:\n{0}")]
    ChildInvalid(ValidationReport),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("measure does not determine the split at branch {branch} (tie)")]
    NonGeneric { branch: usize },
    #[error("branch {0} stopped being large partway through a full split")]
    NonCommuting(usize),
    #[error("measure is not strictly positive (branch {0})")]
    NotPositive(usize),
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<SplitError>,
    },
    #[error(transparent)]
    Log(#[from] ParseError),
    #[error("log disagrees with replay at step {step}: {reason}")]
    LogMismatch { step: usize, reason: String },
}
