//! Exact train-track calculus, flat-surface dynamics and the linear
//! SL(2,Z) model of measured laminations on exceptional surfaces.

pub mod catalog;
pub mod flat;
pub mod linalg;
pub mod lp;
pub mod parse;
pub mod scalar;
pub mod sl2z;
pub mod splitting;
pub mod traintrack;
