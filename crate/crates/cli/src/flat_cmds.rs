use std::fmt::Write as _;

use lamina_core::flat::format::{parse_surface, SurfaceFileError};
use lamina_core::flat::{horocycle_average, in_k_epsilon, saddle_connections, FlatSurface, FlowState, Mat2, Vec2};
use lamina_core::scalar::Scalar;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::io::{read, Field, Sink};
use crate::with_field;

/// Construction tolerance for float surfaces.
const FLOAT_TOL: f64 = 1e-9;

/// Matrices applied to the surface, in the order given here.
#[derive(Clone, Debug, Default)]
pub struct Flow {
    pub matrix: Option<[String; 4]>,
    pub geodesic: Option<f64>,
    pub horocycle: Option<String>,
}

pub fn load_surface<W: Scalar>(path: &str, text: &str) -> CliResult<FlatSurface<W>> {
    let tol = if W::EXACT { 0.0 } else { FLOAT_TOL };
    parse_surface(text, tol).map_err(|e| match e {
        SurfaceFileError::Parse(p) => CliError::parse(path, p),
        SurfaceFileError::Surface(s) => CliError::domain(format!("{}: {}", path, s)),
    })
}

fn number<W: Scalar>(tok: &str, what: &str) -> CliResult<W> {
    W::parse_token(tok).ok_or_else(|| CliError::usage(format!("bad {} '{}'", what, tok)))
}

fn flowed<W: Scalar>(surface: FlatSurface<W>, flow: &Flow) -> CliResult<FlowState<W>> {
    let mut state = FlowState::new(surface);
    let apply = |s: &FlowState<W>, m: Mat2<W>| s.apply_matrix(&m).map_err(|e| CliError::usage(e.to_string()));
    if let Some([a, b, c, d]) = &flow.matrix {
        let m = Mat2::new(
            number(a, "matrix entry")?,
            number(b, "matrix entry")?,
            number(c, "matrix entry")?,
            number(d, "matrix entry")?,
        );
        state = apply(&state, m)?;
    }
    if let Some(t) = flow.geodesic {
        if W::EXACT {
            return Err(CliError::usage("--geodesic needs --float: e^t is not exact"));
        }
        // only float surfaces get here; the shortest float text reads back exactly
        let g = Mat2::geodesic(t);
        let (a, d) = (number(&g.a.to_string(), "scale")?, number(&g.d.to_string(), "scale")?);
        state = apply(&state, Mat2::new(a, W::zero(), W::zero(), d))?;
    }
    if let Some(s) = &flow.horocycle {
        state = apply(&state, Mat2::horocycle(number(s, "horocycle time")?))?;
    }
    Ok(state)
}

pub fn surface_cones(path: &str, text: &str, float: bool, sink: &Sink) -> CliResult {
    with_field!(Field::of(text, float), W => {
        let s = load_surface::<W>(path, text)?;
        let mut out = String::new();
        let _ = writeln!(out, "genus {}", s.genus());
        let _ = writeln!(out, "area {}", s.area().token());
        let _ = writeln!(out, "kind {}", if s.is_translation_surface() { "translation" } else { "half-translation" });
        let _ = writeln!(out, "disjointness-cap {}", s.disjointness_cap());
        for (i, c) in s.cone_points().iter().enumerate() {
            let _ = writeln!(out, "point {} angle {}pi corners {}", i, c.k, c.corners.len());
        }
        sink.emit(&out)
    })
}

pub fn connections(path: &str, length: &str, flow: &Flow, float: bool, sink: &Sink) -> CliResult {
    let text = read(path)?;
    with_field!(Field::of(&text, float), W => {
        let state = flowed(load_surface::<W>(path, &text)?, flow)?;
        let l: W = number(length, "length")?;
        let conns = saddle_connections(&state, l).map_err(|e| CliError::usage(e.to_string()))?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::usage(e.to_string());
        w.write_record(["start", "end", "x", "y", "base_x", "base_y", "length", "horizontal"]).map_err(io)?;
        let tol = state.base.tol();
        for c in &conns {
            w.write_record([
                c.start.to_string(),
                c.end.to_string(),
                c.holonomy.x.token(),
                c.holonomy.y.token(),
                c.base_holonomy.x.token(),
                c.base_holonomy.y.token(),
                format!("{}", c.length()),
                c.is_horizontal(tol).to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
        sink.emit(&String::from_utf8(bytes).expect("csv is utf-8"))
    })
}

pub fn k_epsilon(path: &str, eps: &str, flow: &Flow, float: bool, sink: &Sink) -> CliResult {
    let text = read(path)?;
    with_field!(Field::of(&text, float), W => {
        let state = flowed(load_surface::<W>(path, &text)?, flow)?;
        let e: W = number(eps, "epsilon")?;
        let k = in_k_epsilon(&state, e.clone()).map_err(|e| CliError::usage(e.to_string()))?;
        let circuit = k.circuit.as_ref().map(|c| {
            json!({
                "connections": c.connections,
                "points": c.points,
                "length": c.length,
                "verified": c.verify(&k.connections, e.to_f64()),
            })
        });
        let report = json!({
            "surface": path,
            "epsilon": e.token(),
            "in_k_epsilon": k.acyclic,
            "connected": k.connected,
            "short_connections": k.connections.len(),
            "circuit": circuit,
        });
        sink.emit(&(serde_json::to_string_pretty(&report).expect("json") + "\n"))
    })
}

pub struct HorocycleArgs {
    pub delta: f64,
    pub t_max: f64,
    pub dt: f64,
    pub direction: Option<Vec2<f64>>,
    pub normalize: bool,
    pub report: Vec<f64>,
}

/// Time series to the sink, summary JSON returned for the caller to place.
pub fn horocycle(path: &str, args: &HorocycleArgs, sink: &Sink) -> CliResult<String> {
    for (v, name) in [(args.delta, "--delta"), (args.t_max, "--t-max"), (args.dt, "--dt")] {
        if v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(CliError::usage(format!("{} must be positive", name)));
        }
    }
    if let Some(d) = args.report.iter().find(|&&d| !(d > 0.0 && d <= args.delta)) {
        return Err(CliError::usage(format!("report delta {} must lie in (0, --delta]", d)));
    }
    let text = read(path)?;
    let surface: FlatSurface<f64> = with_field!(Field::of(&text, false), W => {
        let s = load_surface::<W>(path, &text)?;
        match args.direction {
            Some(d) => s.with_horizontal(d, args.normalize, FLOAT_TOL),
            None if args.normalize => s.with_horizontal(Vec2::new(1.0, 0.0), true, FLOAT_TOL),
            None => s.to_f64(FLOAT_TOL),
        }
        .map_err(|e| CliError::usage(e.to_string()))?
    });
    let run = horocycle_average(&FlowState::new(surface), args.delta, args.t_max, args.dt).map_err(|e| CliError::usage(e.to_string()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::usage(e.to_string());
    w.write_record(["t", "threshold", "certified"]).map_err(io)?;
    for s in &run.samples {
        w.write_record([
            format!("{}", s.t),
            s.threshold.map_or(String::new(), |x| format!("{}", x)),
            (s.certified(args.delta) as u8).to_string(),
        ])
        .map_err(io)?;
    }
    sink.emit(&String::from_utf8(w.into_inner().map_err(|e| CliError::usage(e.to_string()))?).expect("csv is utf-8"))?;
    let mut deltas = vec![args.delta];
    deltas.extend(args.report.iter().copied());
    let fractions: Vec<_> = deltas.iter().map(|&d| json!({ "delta": d, "fraction": run.fraction(d) })).collect();
    let summary = json!({
        "surface": path,
        "delta": args.delta,
        "t_max": args.t_max,
        "dt": args.dt,
        "samples": run.samples.len(),
        "candidates": run.candidates,
        "fractions": fractions,
    });
    Ok(serde_json::to_string_pretty(&summary).expect("json") + "\n")
}
