//! Maximal generic train tracks, their measure cones and vertex cycles.

mod cones;
pub mod format;
mod track;
mod weights;

use std::fmt;

use thiserror::Error;

pub use cones::{
    cone_dimension, extreme_rays, is_recurrent, is_transversely_recurrent, recurrence_lp, switch_system, trigon_inequalities,
    vertex_cycles, Recurrence, SwitchMatrix,
};
pub use track::{Branch, Dart, Port, PortTable, Region, RegionKind, Slot, SurfaceKind, TrackId, TrainTrack, ValidationReport};
pub use weights::{pair, BranchWeights, WeightKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Surface,
    LargeSlot { switch: usize, count: usize },
    SlotOccupancy { switch: usize, slot: Slot, count: usize },
    Disconnected,
    RegionKind { region: usize, cusps: usize, punctures: usize },
    PunctureCount { expected: usize, found: usize },
    CuspCount { cusps: usize, switches: usize },
    EulerCharacteristic { expected: i64, found: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Surface => write!(f, "surface: 3g-3+m must be at least 1"),
            Violation::LargeSlot { switch, count } => {
                write!(f, "large-slot: switch {} has {} large half-branches (expected 1)", switch, count)
            }
            Violation::SlotOccupancy { switch, slot, count } => write!(
                f,
                "slot: switch {} slot {} holds {} half-branches (expected 1)",
                switch,
                slot.token(),
                count
            ),
            Violation::Disconnected => write!(f, "connectivity: track is disconnected"),
            Violation::RegionKind { region, cusps, punctures } => write!(
                f,
                "region-kind: region {} has {} cusps and {} puncture flags",
                region, cusps, punctures
            ),
            Violation::PunctureCount { expected, found } => {
                write!(f, "punctures: {} punctured monogons, surface has {} punctures", found, expected)
            }
            Violation::CuspCount { cusps, switches } => {
                write!(f, "cusps: {} cusps for {} switches", cusps, switches)
            }
            Violation::EulerCharacteristic { expected, found } => {
                write!(f, "euler: cell structure gives {}, surface has {}", found, expected)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackError {
    #[error("no surface with genus {genus} and {punctures} punctures satisfies 3g-3+m >= 1")]
    Surface { genus: u32, punctures: u32 },
    #[error("malformed track: {0}")]
    Structural(String),
    #[error("track fails validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("the transverse cone is {{0}}: track is not recurrent")]
    EmptyCone,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("expected {expected} weights, got {found}")]
    Length { expected: usize, found: usize },
    #[error("weight on branch {0} is negative")]
    Negative(usize),
    #[error("switch condition fails at switch {0}")]
    SwitchCondition(usize),
    #[error("trigon inequality fails on region {0}")]
    TrigonInequality(usize),
    #[error("weights belong to different tracks")]
    TrackMismatch,
    #[error("expected {expected:?} weights, got {found:?}")]
    KindMismatch { expected: WeightKind, found: WeightKind },
    #[error(transparent)]
    Track(#[from] TrackError),
}
