//! `.ssl` splitting-sequence logs.
//!
//! ```text
//! ssl 1
//! field Q
//! track 3f2a...
//! branches 6
//! init 102/409 1/409 ...
//! step 1 RL 409/308 ...
//! ```
//!
//! The direction word has one letter per large branch of the previous
//! track, in increasing branch order.

use std::fmt::Write as _;

use super::{Direction, SequenceStep, SplitError, SplittingSequence};
use crate::parse::{arity, content_lines, expect_header, parse_num, ParseError};
use crate::scalar::Scalar;
use crate::traintrack::{BranchWeights, TrackId, TrainTrack};

#[derive(Clone, Debug, PartialEq)]
pub struct LogStep<W> {
    pub index: usize,
    pub word: String,
    pub ratio: W,
    pub measure: Vec<W>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceLog<W> {
    pub track: TrackId,
    pub init: Vec<W>,
    pub steps: Vec<LogStep<W>>,
}

impl<W: Scalar> SequenceLog<W> {
    pub fn from_sequence(seq: &SplittingSequence<W>) -> Self {
        let first = &seq.steps[0];
        SequenceLog {
            track: first.track.id(),
            init: first.measure.clone(),
            steps: seq
                .steps
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, s)| LogStep {
                    index: i,
                    word: s.word(),
                    ratio: s.ratio.clone(),
                    measure: s.measure.clone(),
                })
                .collect(),
        }
    }

    /// Rebuild the sequence from `track`, checking every recorded word,
    /// ratio and measure against a fresh computation.
    pub fn replay(&self, track: &TrainTrack, tol: f64) -> Result<SplittingSequence<W>, SplitError> {
        if track.id() != self.track {
            return Err(SplitError::LogMismatch {
                step: 0,
                reason: format!("log is for track {}, got {}", self.track, track.id()),
            });
        }
        let mu = BranchWeights::transverse_tol(track, self.init.clone(), tol)?;
        let mut seq = SplittingSequence::start(track, &mu, tol)?;
        let same = |a: &[W], b: &[W]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.cmp_tol(y, tol).is_eq());
        if !same(&seq.steps[0].measure, &self.init) {
            return Err(SplitError::LogMismatch {
                step: 0,
                reason: "initial measure is not normalized".into(),
            });
        }
        for s in &self.steps {
            seq.advance(1)?;
            let got: &SequenceStep<W> = seq.last();
            let reason = if got.word() != s.word {
                Some(format!("direction word {} recomputes as {}", s.word, got.word()))
            } else if !got.ratio.cmp_tol(&s.ratio, tol).is_eq() {
                Some(format!("ratio {} recomputes as {}", s.ratio.token(), got.ratio.token()))
            } else if !same(&got.measure, &s.measure) {
                Some("measure differs".to_string())
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(SplitError::LogMismatch { step: s.index, reason });
            }
        }
        Ok(seq)
    }
}

pub fn write_log<W: Scalar>(log: &SequenceLog<W>) -> String {
    let mut s = String::from("ssl 1\n");
    let _ = writeln!(s, "field {}", W::FIELD);
    let _ = writeln!(s, "track {}", log.track);
    let _ = writeln!(s, "branches {}", log.init.len());
    s.push_str("init");
    for x in &log.init {
        let _ = write!(s, " {}", x.token());
    }
    s.push('\n');
    for st in &log.steps {
        let _ = write!(s, "step {} {} {}", st.index, st.word, st.ratio.token());
        for x in &st.measure {
            let _ = write!(s, " {}", x.token());
        }
        s.push('\n');
    }
    s
}

pub fn parse_log<W: Scalar>(text: &str) -> Result<SequenceLog<W>, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "ssl")?;
    let mut track = None;
    let mut branches = None;
    let mut init = None;
    let mut steps: Vec<LogStep<W>> = Vec::new();
    let values = |toks: &[&str], n: usize| -> Result<Vec<W>, ParseError> {
        toks.iter()
            .map(|t| W::parse_token(t).ok_or_else(|| ParseError::new(n, format!("bad number '{}'", t))))
            .collect()
    };
    for (n, toks) in lines {
        match toks[0] {
            "field" => {
                arity(&toks, 2, n)?;
                let ok = toks[1] == W::FIELD || toks[1] == "Q" || !W::EXACT;
                if !ok {
                    return Err(ParseError::new(n, format!("log over {} cannot be read as {}", toks[1], W::FIELD)));
                }
            }
            "track" => {
                arity(&toks, 2, n)?;
                let id = u64::from_str_radix(toks[1], 16).map_err(|_| ParseError::new(n, format!("bad track id '{}'", toks[1])))?;
                track = Some(TrackId(id));
            }
            "branches" => {
                arity(&toks, 2, n)?;
                branches = Some(parse_num::<usize>(toks[1], n, "branch count")?);
            }
            "init" => {
                let b = branches.ok_or_else(|| ParseError::new(n, "init before branches"))?;
                arity(&toks, b + 1, n)?;
                init = Some(values(&toks[1..], n)?);
            }
            "step" => {
                let b = branches.ok_or_else(|| ParseError::new(n, "step before branches"))?;
                if init.is_none() {
                    return Err(ParseError::new(n, "step before init"));
                }
                arity(&toks, b + 4, n)?;
                let index = parse_num::<usize>(toks[1], n, "step index")?;
                if index != steps.len() + 1 {
                    return Err(ParseError::new(n, format!("expected step {}, found {}", steps.len() + 1, index)));
                }
                let word = toks[2].to_string();
                if word.is_empty() || !word.chars().all(|c| Direction::from_letter(c).is_some()) {
                    return Err(ParseError::new(n, format!("bad direction word '{}'", word)));
                }
                let ratio = W::parse_token(toks[3]).ok_or_else(|| ParseError::new(n, format!("bad ratio '{}'", toks[3])))?;
                steps.push(LogStep {
                    index,
                    word,
                    ratio,
                    measure: values(&toks[4..], n)?,
                });
            }
            other => return Err(ParseError::new(n, format!("unknown directive '{}'", other))),
        }
    }
    let track = track.ok_or_else(|| ParseError::new(1, "missing track line"))?;
    let init = init.ok_or_else(|| ParseError::new(1, "missing init line"))?;
    Ok(SequenceLog { track, init, steps })
}
