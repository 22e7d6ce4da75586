//! `.ttk` tracks and `.ttw` weight files.
//!
//! ```text
//! ttk 1
//! surface 0 4
//! switch 0
//! ...
//! branch 0 (0,L) (1,L)
//! puncture-region 0 0
//! ```
//!
//! A `puncture-region b k` line marks the region whose boundary walk runs
//! along branch `b` away from its end `k` as the one holding a puncture.

use std::fmt::Write as _;

use super::{Branch, BranchWeights, Dart, Port, Slot, SurfaceKind, TrackError, TrackId, TrainTrack, WeightKind};
use crate::parse::{arity, content_lines, expect_header, parse_num, ParseError};
use crate::scalar::Scalar;

fn parse_port(tok: &str, line: usize) -> Result<Port, ParseError> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| ParseError::new(line, format!("bad half-branch '{}', expected (switch,slot)", tok)))?;
    let (s, slot) = inner
        .split_once(',')
        .ok_or_else(|| ParseError::new(line, format!("bad half-branch '{}'", tok)))?;
    let switch = parse_num::<usize>(s.trim(), line, "switch index")?;
    let slot =
        Slot::from_token(slot.trim()).ok_or_else(|| ParseError::new(line, format!("unknown slot '{}' (use L, SL or SR)", slot.trim())))?;
    Ok(Port::new(switch, slot))
}

#[derive(Debug, thiserror::Error)]
pub enum TrackFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Track(#[from] TrackError),
}

pub fn parse_track(text: &str) -> Result<TrainTrack, TrackFileError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "ttk")?;
    let mut surface = None;
    let mut switches = 0usize;
    let mut branches = Vec::new();
    let mut flags = Vec::new();
    for (n, toks) in lines {
        match toks[0] {
            "surface" => {
                arity(&toks, 3, n)?;
                if surface.is_some() {
                    return Err(ParseError::new(n, "duplicate surface line").into());
                }
                let g = parse_num::<u32>(toks[1], n, "genus")?;
                let m = parse_num::<u32>(toks[2], n, "puncture count")?;
                surface = Some(SurfaceKind::new(g, m)?);
            }
            "switch" => {
                arity(&toks, 2, n)?;
                let i = parse_num::<usize>(toks[1], n, "switch index")?;
                if i != switches {
                    return Err(ParseError::new(n, format!("expected switch {}, found {}", switches, i)).into());
                }
                switches += 1;
            }
            "branch" => {
                arity(&toks, 4, n)?;
                let i = parse_num::<usize>(toks[1], n, "branch index")?;
                if i != branches.len() {
                    return Err(ParseError::new(n, format!("expected branch {}, found {}", branches.len(), i)).into());
                }
                let a = parse_port(toks[2], n)?;
                let b = parse_port(toks[3], n)?;
                for p in [a, b] {
                    if p.switch >= switches {
                        return Err(ParseError::new(n, format!("switch {} is not declared", p.switch)).into());
                    }
                }
                branches.push(Branch::new(a, b));
            }
            "puncture-region" => {
                arity(&toks, 3, n)?;
                let b = parse_num::<usize>(toks[1], n, "branch index")?;
                let e = parse_num::<u8>(toks[2], n, "branch end")?;
                if e > 1 {
                    return Err(ParseError::new(n, "branch end must be 0 or 1").into());
                }
                flags.push((n, Dart::new(b, e)));
            }
            other => return Err(ParseError::new(n, format!("unknown directive '{}'", other)).into()),
        }
    }
    let surface = surface.ok_or_else(|| ParseError::new(1, "missing surface line"))?;
    for (n, d) in &flags {
        if d.branch >= branches.len() {
            return Err(ParseError::new(*n, format!("branch {} is not declared", d.branch)).into());
        }
    }
    let flags = flags.into_iter().map(|(_, d)| d).collect();
    Ok(TrainTrack::new(surface, switches, branches, flags)?)
}

pub fn write_track(t: &TrainTrack) -> String {
    let mut s = String::from("ttk 1\n");
    let _ = writeln!(s, "surface {} {}", t.surface().genus, t.surface().punctures);
    for i in 0..t.switch_count() {
        let _ = writeln!(s, "switch {}", i);
    }
    for (i, b) in t.branches().iter().enumerate() {
        let _ = writeln!(s, "branch {} {} {}", i, b.ends[0], b.ends[1]);
    }
    for d in t.puncture_flags() {
        let _ = writeln!(s, "puncture-region {} {}", d.branch, d.end);
    }
    s
}

/// Parsed contents of a `.ttw` file, not yet checked against a track.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightsFile<W> {
    pub track: Option<TrackId>,
    pub kind: WeightKind,
    pub values: Vec<W>,
}

impl<W: Scalar> WeightsFile<W> {
    pub fn check(self, track: &TrainTrack) -> Result<BranchWeights<W>, super::WeightError> {
        if let Some(id) = self.track {
            if id != track.id() {
                return Err(super::WeightError::TrackMismatch);
            }
        }
        match self.kind {
            WeightKind::Transverse => BranchWeights::transverse(track, self.values),
            WeightKind::Tangential => BranchWeights::tangential(track, self.values),
        }
    }
}

pub fn parse_weights<W: Scalar>(text: &str) -> Result<WeightsFile<W>, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "ttw")?;
    let mut track = None;
    let mut out = None;
    for (n, toks) in lines {
        match toks[0] {
            "track" => {
                arity(&toks, 2, n)?;
                let id = u64::from_str_radix(toks[1], 16).map_err(|_| ParseError::new(n, format!("bad track id '{}'", toks[1])))?;
                track = Some(TrackId(id));
            }
            "field" => {
                arity(&toks, 2, n)?;
                // An exact file may be read into a wider field, never the reverse.
                let ok = toks[1] == W::FIELD || toks[1] == "Q" || !W::EXACT;
                if !ok {
                    return Err(ParseError::new(
                        n,
                        format!("weights over {} cannot be read as {}", toks[1], W::FIELD),
                    ));
                }
            }
            "weights" => {
                if toks.len() < 2 {
                    return Err(ParseError::new(n, "weights line needs a kind"));
                }
                let kind =
                    WeightKind::from_token(toks[1]).ok_or_else(|| ParseError::new(n, format!("unknown weight kind '{}'", toks[1])))?;
                let values = toks[2..]
                    .iter()
                    .map(|t| W::parse_token(t).ok_or_else(|| ParseError::new(n, format!("bad weight '{}'", t))))
                    .collect::<Result<Vec<W>, _>>()?;
                out = Some((kind, values));
            }
            other => return Err(ParseError::new(n, format!("unknown directive '{}'", other))),
        }
    }
    let (kind, values) = out.ok_or_else(|| ParseError::new(1, "missing weights line"))?;
    Ok(WeightsFile { track, kind, values })
}

pub fn write_weights<W: Scalar>(w: &BranchWeights<W>) -> String {
    let mut s = String::from("ttw 1\n");
    let _ = writeln!(s, "track {}", w.track_id());
    let _ = writeln!(s, "field {}", W::FIELD);
    let _ = write!(s, "weights {}", w.kind().token());
    for x in w.values() {
        let _ = write!(s, " {}", x.token());
    }
    s.push('\n');
    s
}
