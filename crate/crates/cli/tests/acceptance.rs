//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;
#[path = "../../core/tests/common/mod.rs"]
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lamina_core::catalog;
use lamina_core::flat::format::{parse_surface, write_surface};
use lamina_core::flat::{horocycle_average, in_k_epsilon, saddle_connections, systole_lower_bound, FlowState, Mat2, Vec2};
use lamina_core::scalar::{int, Golden, Rational, Scalar};
use lamina_core::sl2z::{discreteness_gap, orbit_ball};
use lamina_core::splitting::log::{parse_log, write_log, SequenceLog};
use lamina_core::splitting::{detect_periodicity, drive_sequence, lift_measure, project_measure, split, Direction, Lift};
use lamina_core::traintrack::format::{parse_track, parse_weights, write_track, write_weights};
use lamina_core::traintrack::{cone_dimension, switch_system, vertex_cycles, TrainTrack};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rats(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn ints(xs: &[Rational]) -> Vec<i64> {
    xs.iter().map(|x| x.to_integer().to_i64().expect("small integer")).collect()
}

fn cone_dimensions() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, t) in catalog::valid_tracks() {
        let s = t.surface();
        let expected = 6 * s.genus as i64 - 6 + 2 * s.punctures as i64;
        let got = cone_dimension(&t).map(|d| d as i64).unwrap_or(-1);
        pass &= got == expected;
        parts.push(format!("{} {}/{}", name, got, expected));
    }
    outcome(pass, parts.join(", "))
}

fn vertex_cycle_oracle() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, t) in catalog::valid_tracks() {
        let vc: BTreeSet<Vec<i64>> = vertex_cycles(&t).unwrap().iter().map(|w| ints(w.values())).collect();
        let oracle = oracle::oracle_extreme_rays(&t, 2);
        let small = vc.iter().flatten().all(|&x| (0..=2).contains(&x));
        pass &= vc == oracle && small;
        parts.push(format!("{} {} rays", name, vc.len()));
    }
    outcome(pass, parts.join(", "))
}

/// Complete fixtures and the children of their single splits.
fn trial_tracks() -> Vec<TrainTrack> {
    let mut out = Vec::new();
    for (_, t) in catalog::complete_tracks() {
        for e in t.large_branches() {
            for d in [Direction::Right, Direction::Left] {
                out.push(split(&t, e, d).unwrap().child);
            }
        }
        out.push(t);
    }
    out
}

fn split_calculus() -> Outcome {
    let tracks: Vec<(TrainTrack, Vec<Vec<i64>>)> = trial_tracks()
        .into_iter()
        .map(|t| {
            let rays = oracle::oracle_extreme_rays(&t, 2).into_iter().collect();
            (t, rays)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20240101);
    let (mut determined, mut ties, mut bad) = (0, 0, 0);
    for _ in 0..1000 {
        let (t, rays) = &tracks[rng.gen_range(0..tracks.len())];
        let coeffs: Vec<i64> = rays.iter().map(|_| rng.gen_range(1..50)).collect();
        let mu = oracle::positive_combination(rays, &coeffs);
        let large = t.large_branches();
        let e = large[rng.gen_range(0..large.len())];
        match lift_measure(t, e, &rats(&mu), 0.0) {
            Ok(Lift::Undetermined) => ties += 1,
            Ok(Lift::Determined { record, child_measure }) => {
                determined += 1;
                let back = project_measure(&record, &child_measure, 0.0).map(|b| ints(&b));
                let child = ints(&child_measure);
                let right = record.direction == Direction::Right;
                let identity = oracle::projected_large_weight(t, e, right, &child) == mu[e];
                if back.ok().as_deref() != Some(&mu[..]) || !identity {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    outcome(
        bad == 0 && determined + ties == 1000,
        format!(
            "{} determined, {} ties, {} failures over 1000 trials on S04/T12/G2 and their children",
            determined, ties, bad
        ),
    )
}

fn splitting_sequences() -> Outcome {
    // every measure on PT1 ties at its single large branch, so the
    // four-punctured sphere track carries the run
    let pt1 = drive_sequence(&catalog::pt1(), &catalog::pt1_positive_measure(), 100, 0.0);
    let t = catalog::s04();
    let seq = match drive_sequence(&t, &catalog::s04_drive_measure(), 100, 0.0) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("S04 drive failed: {}", e)),
    };
    let mut pass = seq.len() == 100;
    let mut max_ratio = Rational::one();
    for s in &seq.steps {
        let sys = switch_system(&s.track).unwrap();
        pass &= sys.annihilates(&s.measure, 0.0);
        pass &= s.ratio >= Rational::one();
        pass &= s.measure.iter().all(|x| x >= &Rational::zero());
        pass &= s.measure.iter().sum::<Rational>().is_one();
        if s.ratio > max_ratio {
            max_ratio = s.ratio.clone();
        }
    }
    outcome(
        pass,
        format!(
            "S04 drive measure, {} steps, max ratio {}; PT1 stand-in needed: {}",
            seq.len(),
            max_ratio,
            match pt1 {
                Ok(_) => "no (PT1 drove)".to_string(),
                Err(e) => format!("PT1 stops with '{}'", e),
            }
        ),
    )
}

fn periodicity() -> Outcome {
    let t = catalog::s04();
    let seq = match drive_sequence(&t, &catalog::s04_golden_measure(), 50, 0.0) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("drive failed: {}", e)),
    };
    let Some(p) = detect_periodicity(&seq) else {
        return outcome(false, "no period within 50 steps");
    };
    let (a, b) = (&seq.steps[p.i], &seq.steps[p.j]);
    let iso_ok = p.iso.verify(&a.track, &b.track);
    // image of state i must be a positive multiple of state j
    let image = p.iso.apply_measure(&a.measure);
    let k = b
        .measure
        .iter()
        .zip(&image)
        .find(|(x, _)| !x.is_zero())
        .map(|(x, y)| y.clone() / x.clone());
    let multiple = match &k {
        Some(k) if k.is_positive_tol(0.0) => b.measure.iter().zip(&image).all(|(x, y)| x.clone() * k.clone() == *y),
        _ => false,
    };
    let expansion: Golden = seq.steps[p.i + 1..=p.j].iter().fold(Golden::one(), |x, s| x * s.ratio.clone());
    outcome(
        iso_ok && multiple && p.verify(&seq),
        format!(
            "golden eigen-measure on S04: period ({}, {}), expansion {}, certificate rechecked",
            p.i,
            p.j,
            expansion.token()
        ),
    )
}

fn saddle_oracle() -> Outcome {
    let conns = saddle_connections(&FlowState::new(catalog::st2()), int(10)).unwrap();
    let mut got: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut lattice = true;
    for c in &conns {
        let h = &c.holonomy;
        lattice &= h.x.is_integer() && h.y.is_integer();
        let (x, y) = (h.x.to_integer().to_i64().unwrap(), h.y.to_integer().to_i64().unwrap());
        let key = if x > 0 || (x == 0 && y > 0) { (x, y) } else { (-x, -y) };
        *got.entry(key).or_insert(0) += 1;
    }
    let expected = oracle::three_square_l_holonomies(100);
    outcome(
        lattice && got == expected,
        format!("ST2, L = 10: {} connections, {} holonomy classes", conns.len(), got.len()),
    )
}

/// Shortest circuit of saddle connections. The window grows until the best
/// circuit fits inside it, after which no shorter circuit can use a longer edge.
fn oracle_systole(state: &FlowState<f64>) -> Option<f64> {
    let mut window = 6.0;
    while window <= 1e4 {
        let conns = saddle_connections(state, window).unwrap();
        let edges: Vec<(usize, usize, f64)> = conns.iter().map(|c| (c.start, c.end, c.length())).collect();
        match oracle::min_cycle_weight(state.base.cone_points().len(), &edges) {
            Some(w) if w <= window => return Some(w),
            _ => window *= 2.0,
        }
    }
    None
}

fn k_epsilon() -> Outcome {
    let st2 = FlowState::new(catalog::st2().to_f64(1e-9).unwrap());
    let flowed = st2.apply_matrix(&Mat2::geodesic(-3.0)).unwrap();
    let k = in_k_epsilon(&flowed, 0.1).unwrap();
    let negative = !k.acyclic && k.circuit.as_ref().is_some_and(|c| c.verify(&k.connections, 0.1));

    let grid: Vec<f64> = (1..=40).map(|i| i as f64 * 0.05).collect();
    let mut states = 0;
    let mut positives = 0;
    let mut sound = true;
    let bases = [
        st2,
        FlowState::new(catalog::pillowcase().to_f64(1e-9).unwrap()),
        FlowState::new(catalog::golden_l_rotated()),
    ];
    for base in bases {
        for m in [
            Mat2::identity(),
            Mat2::geodesic(-1.0),
            Mat2::geodesic(0.8),
            Mat2::horocycle(0.7),
            Mat2::geodesic(-3.0),
        ] {
            let state = base.apply_matrix(&m).unwrap();
            states += 1;
            let systole = oracle_systole(&state);
            for &eps in &grid {
                let k = in_k_epsilon(&state, eps).unwrap();
                if k.acyclic {
                    positives += 1;
                    sound &= systole.is_some_and(|s| s >= eps - 1e-12);
                } else {
                    sound &= k.circuit.as_ref().is_some_and(|c| c.verify(&k.connections, eps));
                }
            }
            if let (Ok(Some(b)), Some(s)) = (systole_lower_bound(&state, &grid), systole) {
                sound &= b <= s + 1e-12;
            }
        }
    }
    outcome(
        negative && sound,
        format!(
            "ST2 after geodesic(-3) at eps 0.1: in K = {}, circuit verified = {}; {} in-K probes over {} states all bounded by the oracle systole",
            k.acyclic,
            negative,
            positives,
            states
        ),
    )
}

fn horocycle() -> Outcome {
    let state = FlowState::new(catalog::golden_l_rotated());
    let run = horocycle_average(&state, 0.05, 1000.0, 0.1).unwrap();
    let f = [0.05, 0.02, 0.01].map(|d| run.fraction(d));
    outcome(
        f[0] >= 0.9 && f[0] <= f[1] && f[1] <= f[2],
        format!(
            "rotated golden L, {} samples, fractions {:.4} / {:.4} / {:.4} at delta 0.05 / 0.02 / 0.01",
            run.samples.len(),
            f[0],
            f[1],
            f[2]
        ),
    )
}

fn sl2z_dichotomy() -> Outcome {
    let ball = orbit_ball(&Vec2::new(int(1), int(0)), int(100), 400).unwrap();
    let got: BTreeSet<(i64, i64)> = ball
        .points
        .iter()
        .map(|p| (p.point.x.to_integer().to_i64().unwrap(), p.point.y.to_integer().to_i64().unwrap()))
        .collect();
    let words_ok = ball.points.iter().all(|p| p.verify(&ball.seed));
    let pts: Vec<_> = ball.points.iter().map(|p| p.point.clone()).collect();
    let gap = discreteness_gap(&pts).unwrap();
    let lattice = got == oracle::primitive_vectors_up_to_sign(10_000) && words_ok && gap.distance2 == int(1);

    let seed = Vec2::new(Golden::from_i64(1), Golden::phi());
    let golden_gap = |depth: usize| {
        let b = orbit_ball(&seed, Golden::from_i64(5), depth).unwrap();
        let pts: Vec<_> = b.points.iter().map(|p| p.point.clone()).collect();
        (b.points.len(), discreteness_gap(&pts).unwrap().distance)
    };
    let (n14, g14) = golden_gap(14);
    let mut detail = format!(
        "(1,0) R=100: {} points = primitive vectors, gap 1 exact = {}; (1,phi) R=5 depth 14: {} points, gap {:.6} (needs < 0.01)",
        got.len(),
        lattice,
        n14,
        g14
    );
    if g14 >= 1e-2 {
        let (n20, g20) = golden_gap(20);
        detail += &format!("; depth 20: {} points, gap {:.6}", n20, g20);
    }
    outcome(lattice && g14 < 1e-2, detail)
}

fn determinism_and_round_trips() -> Outcome {
    let mut failures = Vec::new();
    for line in common::EVERY_COMMAND {
        let a = common::lamina(&common::args(line));
        let b = common::lamina(&common::args(line));
        if a.code != 0 || a.stdout != b.stdout || a.stderr != b.stderr {
            failures.push(format!("'{}'", line));
        }
    }
    let tracks = [
        catalog::PT1_TTK,
        catalog::S04_TTK,
        catalog::T12_TTK,
        catalog::G2_TTK,
        catalog::G2_QUAD_TTK,
        catalog::TR_ONLY_TTK,
    ];
    for text in tracks {
        let t = parse_track(text).unwrap();
        let w = write_track(&t);
        if parse_track(&w).unwrap() != t || write_track(&parse_track(&w).unwrap()) != w {
            failures.push(format!("track {}", t.id()));
        }
    }
    for (text, track) in [
        (catalog::PT1_POSITIVE_TTW, catalog::pt1()),
        (catalog::S04_POSITIVE_TTW, catalog::s04()),
        (catalog::S04_DRIVE_TTW, catalog::s04()),
    ] {
        let m = parse_weights::<Rational>(text).unwrap().check(&track).unwrap();
        let w = write_weights(&m);
        if w != text || parse_weights::<Rational>(&w).unwrap().check(&track).unwrap() != m {
            failures.push("rational measure".into());
        }
    }
    let g = parse_weights::<Golden>(catalog::S04_GOLDEN_TTW)
        .unwrap()
        .check(&catalog::s04())
        .unwrap();
    if g != catalog::s04_golden_measure() || write_weights(&g) != catalog::S04_GOLDEN_TTW {
        failures.push("golden measure".into());
    }
    fn surface<W: Scalar>(text: &str) -> bool {
        let s = parse_surface::<W>(text, 0.0).unwrap();
        let w = write_surface(&s);
        let back = parse_surface::<W>(&w, 0.0).unwrap();
        back == s && write_surface(&back) == w
    }
    for (name, ok) in [
        ("st2", surface::<Rational>(catalog::ST2_FSF)),
        ("pillowcase", surface::<Rational>(catalog::PILLOWCASE_FSF)),
        ("golden L", surface::<Golden>(catalog::GOLDEN_L_FSF)),
    ] {
        if !ok {
            failures.push(name.into());
        }
    }
    let seq = drive_sequence(&catalog::s04(), &catalog::s04_golden_measure(), 8, 0.0).unwrap();
    let text = write_log(&SequenceLog::from_sequence(&seq));
    let back: SequenceLog<Golden> = parse_log(&text).unwrap();
    if write_log(&back) != text || back.replay(&catalog::s04(), 0.0).ok().as_ref() != Some(&seq) {
        failures.push("ssl log".into());
    }
    let dir = common::scratch_dir();
    let p = common::path_in(&dir, "run.ssl");
    let mut a = common::args("drive @s04.ttk @s04_drive.ttw --steps 10 --out");
    a.push(p.display().to_string());
    let cli_log = (common::lamina(&a).code == 0).then(|| fs::read_to_string(&p).unwrap());
    match cli_log.map(|t| (parse_log::<Rational>(&t).map(|l| write_log(&l)), t)) {
        Some((Ok(w), t)) if w == t => {}
        _ => failures.push("cli ssl log".into()),
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} commands byte-identical twice; ttk, ttw, fsf and ssl fixtures round-trip",
                common::EVERY_COMMAND.len()
            )
        } else {
            format!("failures: {}", failures.join(", "))
        },
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cone dimension", Duration::from_secs(1), cone_dimensions),
        ("vertex cycles", Duration::from_secs(10), vertex_cycle_oracle),
        ("split calculus", Duration::from_secs(30), split_calculus),
        ("splitting sequences", Duration::from_secs(10), splitting_sequences),
        ("periodicity", Duration::from_secs(30), periodicity),
        ("saddle connections", Duration::from_secs(10), saddle_oracle),
        ("K(eps) semantics", Duration::from_secs(30), k_epsilon),
        ("horocycle nondivergence", Duration::from_secs(300), horocycle),
        ("SL(2,Z) dichotomy", Duration::from_secs(60), sl2z_dichotomy),
        ("determinism and round trips", Duration::from_secs(60), determinism_and_round_trips),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let pass = o.pass && took <= *budget;
        failed += !pass as usize;
        println!(
            "criterion {:>2} {:<28} {} ({:.2?} of {:?}) {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            took,
            budget,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
