use std::fmt::Write as _;
use std::path::Path;

use lamina_core::scalar::{Golden, Scalar};
use lamina_core::splitting::log::{parse_log, write_log, SequenceLog};
use lamina_core::splitting::{detect_periodicity, full_split, lift_measure, Lift, SplitError, SplittingSequence};
use lamina_core::traintrack::format::{parse_track, parse_weights, write_track, TrackFileError, WeightsFile};
use lamina_core::traintrack::{cone_dimension, is_recurrent, is_transversely_recurrent, vertex_cycles, BranchWeights, TrainTrack};

use crate::error::{CliError, CliResult};
use crate::io::{from_golden, read, Field, Sink};
use crate::with_field;

/// Tolerance for float runs of the splitting calculus.
const FLOAT_TOL: f64 = 1e-9;

fn tol_for<W: Scalar>() -> f64 {
    if W::EXACT {
        0.0
    } else {
        FLOAT_TOL
    }
}

pub fn load_track(path: &str) -> CliResult<TrainTrack> {
    let text = read(path)?;
    parse_track(&text).map_err(|e| match e {
        TrackFileError::Parse(p) => CliError::parse(path, p),
        TrackFileError::Track(t) => CliError::domain(format!("{}: {}", path, t)),
    })
}

fn load_valid_track(path: &str) -> CliResult<TrainTrack> {
    let t = load_track(path)?;
    let report = t.validate();
    if !report.is_valid() {
        return Err(CliError::domain(format!("{}: invalid track\n{}", path, report)));
    }
    Ok(t)
}

fn load_measure<W: Scalar>(path: &str, text: &str, track: &TrainTrack) -> CliResult<BranchWeights<W>> {
    let file = if W::EXACT || Field::of(text, false) == Field::Float {
        parse_weights::<W>(text)
    } else {
        // float run on an exact file: read exactly, then round
        parse_weights::<Golden>(text).map(|f| WeightsFile {
            track: f.track,
            kind: f.kind,
            values: f.values.iter().map(from_golden).collect(),
        })
    }
    .map_err(|e| CliError::parse(path, e))?;
    file.check(track).map_err(|e| CliError::domain(format!("{}: {}", path, e)))
}

fn values<W: Scalar>(v: &[W]) -> String {
    v.iter().map(|x| x.token()).collect::<Vec<_>>().join(" ")
}

/// Map a splitting failure to an exit status: ties and positivity problems
/// are domain negatives, the rest are internal inconsistencies.
fn split_failure(e: SplitError) -> CliError {
    match e {
        SplitError::AtStep { step, source } => {
            // `step` counts states produced; the failing split starts from the one before
            CliError::domain(format!("step {}: {}", step - 1, split_failure(*source)))
        }
        other => CliError::domain(other),
    }
}

pub fn validate(path: &str, sink: &Sink) -> CliResult {
    let t = load_track(path)?;
    let report = t.validate();
    if report.is_valid() {
        sink.emit("valid\n")
    } else {
        Err(CliError::domain(format!("{}: invalid track\n{}", path, report)))
    }
}

pub fn track_cones(path: &str, sink: &Sink) -> CliResult {
    let t = load_valid_track(path)?;
    let s = t.surface();
    let mut out = String::new();
    let _ = writeln!(out, "surface {} {}", s.genus, s.punctures);
    let _ = writeln!(out, "switches {}", t.switch_count());
    let _ = writeln!(out, "branches {}", t.branch_count());
    let dim = cone_dimension(&t).map_err(CliError::domain)?;
    let _ = writeln!(out, "cone-dimension {}", dim);
    let _ = writeln!(out, "expected-dimension {}", s.ml_dimension());
    let rec = is_recurrent(&t).map_err(CliError::domain)?;
    let trec = is_transversely_recurrent(&t).map_err(CliError::domain)?;
    let witness = |w: &Option<BranchWeights>| w.as_ref().map_or(String::new(), |w| format!(" {}", values(w.values())));
    let _ = writeln!(out, "recurrent {}{}", rec.holds, witness(&rec.witness));
    let _ = writeln!(out, "transversely-recurrent {}{}", trec.holds, witness(&trec.witness));
    for (i, r) in t.census().map_err(CliError::domain)?.iter().enumerate() {
        let sides: Vec<String> = r
            .sides()
            .iter()
            .map(|s| s.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        let _ = writeln!(
            out,
            "region {} cusps {} punctured {} sides {}",
            i,
            r.cusps,
            r.puncture_flags > 0,
            sides.join(" ")
        );
    }
    sink.emit(&out)
}

pub fn cycles(path: &str, sink: &Sink) -> CliResult {
    let t = load_valid_track(path)?;
    let vc = vertex_cycles(&t).map_err(CliError::domain)?;
    let mut out = String::new();
    for v in &vc {
        let _ = writeln!(out, "{}", values(v.values()));
    }
    sink.emit(&out)
}

pub fn split_cmd(
    track_path: &str,
    measure_path: &str,
    branch: Option<usize>,
    float: bool,
    child_out: Option<&Path>,
    sink: &Sink,
) -> CliResult {
    let t = load_valid_track(track_path)?;
    let text = read(measure_path)?;
    with_field!(Field::of(&text, float), W => {
        let mu = load_measure::<W>(measure_path, &text, &t)?;
        let tol = tol_for::<W>();
        let mut out = String::new();
        let child = match branch {
            Some(e) => match lift_measure(&t, e, mu.values(), tol).map_err(CliError::domain)? {
                Lift::Determined { record, child_measure } => {
                    let _ = writeln!(out, "branch {}", e);
                    let _ = writeln!(out, "direction {}", record.direction.letter());
                    let _ = writeln!(out, "measure {}", values(&child_measure));
                    record.child
                }
                Lift::Undetermined => {
                    return Err(CliError::domain(format!("branch {}: tie, neither split carries the measure", e)));
                }
            },
            None => {
                let fs = full_split(&t, mu.values(), tol).map_err(split_failure)?;
                let word: String = fs.directions.iter().map(|(_, d)| d.letter()).collect();
                let _ = writeln!(out, "word {}", word);
                let _ = writeln!(out, "ratio {}", fs.ratio.token());
                let _ = writeln!(out, "measure {}", values(&fs.measure));
                fs.track
            }
        };
        let _ = writeln!(out, "track {}", child.id());
        if let Some(p) = child_out {
            std::fs::write(p, write_track(&child)).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
        }
        sink.emit(&out)
    })
}

/// Drive `steps` full splits, resuming from an existing log at `resume`.
pub fn drive(track_path: &str, measure_path: &str, steps: usize, float: bool, resume: Option<&str>, sink: &Sink) -> CliResult {
    let t = load_valid_track(track_path)?;
    let text = read(measure_path)?;
    with_field!(Field::of(&text, float), W => {
        let mu = load_measure::<W>(measure_path, &text, &t)?;
        let tol = tol_for::<W>();
        let mut seq = match resume {
            Some(p) if Path::new(p).exists() => {
                let log: SequenceLog<W> = parse_log(&read(p)?).map_err(|e| CliError::parse(p, e))?;
                let fresh = SplittingSequence::start(&t, &mu, tol).map_err(CliError::domain)?;
                if fresh.steps[0].measure != log.init {
                    return Err(CliError::usage(format!("{}: log starts from a different measure", p)));
                }
                if log.steps.len() > steps {
                    return Err(CliError::usage(format!("{}: log already has {} steps, more than {}", p, log.steps.len(), steps)));
                }
                log.replay(&t, tol).map_err(|e| CliError::domain(format!("{}: {}", p, e)))?
            }
            _ => SplittingSequence::start(&t, &mu, tol).map_err(CliError::domain)?,
        };
        let todo = steps - seq.len();
        let result = seq.advance(todo);
        // completed steps are kept so that the run can resume
        sink.emit(&write_log(&SequenceLog::from_sequence(&seq)))?;
        result.map_err(split_failure)
    })
}

pub fn periodicity(track_path: &str, measure_path: &str, steps: usize, float: bool, sink: &Sink) -> CliResult {
    let t = load_valid_track(track_path)?;
    let text = read(measure_path)?;
    with_field!(Field::of(&text, float), W => {
        let mu = load_measure::<W>(measure_path, &text, &t)?;
        let tol = tol_for::<W>();
        let mut seq = SplittingSequence::start(&t, &mu, tol).map_err(CliError::domain)?;
        let mut out = String::new();
        // extend one step at a time and stop at the first period
        loop {
            if let Some(p) = detect_periodicity(&seq) {
                let expansion = seq.steps[p.i + 1..=p.j].iter().fold(W::from_i64(1), |a, s| a * s.ratio.clone());
                let word: Vec<String> = seq.steps[p.i + 1..=p.j].iter().map(|s| s.word()).collect();
                let _ = writeln!(out, "period {} {}", p.i, p.j);
                let _ = writeln!(out, "words {}", word.join(" "));
                let _ = writeln!(out, "expansion {}", expansion.token());
                let _ = writeln!(out, "switch-map {}", p.iso.switch_map.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
                let _ = writeln!(out, "branch-map {}", p.iso.branch_map.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
                let _ = writeln!(out, "verified {}", p.verify(&seq));
                return sink.emit(&out);
            }
            if seq.len() >= steps {
                let _ = writeln!(out, "none");
                return sink.emit(&out);
            }
            seq.advance(1).map_err(split_failure)?;
        }
    })
}
