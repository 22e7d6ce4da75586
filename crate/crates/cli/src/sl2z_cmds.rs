use lamina_core::flat::{Mat2, Vec2};
use lamina_core::scalar::{Golden, Rational, Scalar};
use lamina_core::sl2z::{classify_seed, discreteness_gap, lebesgue_invariance_check, orbit_ball, CfCutoff, OrbitBall, Rect};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::io::{from_golden, Field, Sink};
use crate::with_field;

/// Seed coordinates, read exactly in Q(sqrt5).
pub struct Point {
    x: Golden,
    y: Golden,
}

impl Point {
    pub fn parse(s: &str) -> CliResult<Point> {
        let bad = || CliError::usage(format!("bad point '{}', expected x,y", s));
        let (x, y) = s.split_once(',').ok_or_else(bad)?;
        let num = |t: &str| Golden::parse_token(t.trim()).ok_or_else(bad);
        Ok(Point { x: num(x)?, y: num(y)? })
    }

    /// Smallest field holding the coordinates, or floats when asked.
    fn field(&self, float: bool) -> Field {
        if float {
            Field::Float
        } else if self.x.as_rational().is_some() && self.y.as_rational().is_some() {
            Field::Rational
        } else {
            Field::Golden
        }
    }

    fn to<W: Scalar>(&self) -> Vec2<W> {
        Vec2::new(from_golden(&self.x), from_golden(&self.y))
    }
}

fn radius<W: Scalar>(r: &str) -> CliResult<W> {
    W::parse_token(r).ok_or_else(|| CliError::usage(format!("bad radius '{}'", r)))
}

fn ball<W: Scalar>(p: &Point, r: &str, depth: usize) -> CliResult<OrbitBall<W>> {
    orbit_ball(&p.to::<W>(), radius::<W>(r)?, depth).map_err(|e| CliError::usage(e.to_string()))
}

pub fn orbit(p: &Point, r: &str, depth: usize, float: bool, sink: &Sink) -> CliResult {
    with_field!(p.field(float), W => {
        let b = ball::<W>(p, r, depth)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::usage(e.to_string());
        w.write_record(["x", "y", "word"]).map_err(io)?;
        for q in &b.points {
            w.write_record([q.point.x.token(), q.point.y.token(), q.word.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
        sink.emit(&String::from_utf8(bytes).expect("csv is utf-8"))
    })
}

pub fn gap(p: &Point, r: &str, depth: usize, float: bool, sink: &Sink) -> CliResult {
    let field = p.field(float);
    with_field!(field, W => {
        let b = ball::<W>(p, r, depth)?;
        let pts: Vec<Vec2<W>> = b.points.iter().map(|q| q.point.clone()).collect();
        let g = discreteness_gap(&pts).map_err(CliError::domain)?;
        let report = json!({
            "seed": [b.seed.x.token(), b.seed.y.token()],
            "mode": field.name(),
            "radius": b.radius.token(),
            "depth": depth,
            "points": b.points.len(),
            "saturated": b.saturated,
            "gap": g.distance,
            "gap_squared": g.distance2.token(),
            "pair": [pts[g.pair.0].x.token(), pts[g.pair.0].y.token(), pts[g.pair.1].x.token(), pts[g.pair.1].y.token()],
        });
        sink.emit(&(serde_json::to_string_pretty(&report).expect("json") + "\n"))
    })
}

pub fn classify(p: &Point, float: bool, sink: &Sink) -> CliResult {
    let field = p.field(float);
    with_field!(field, W => {
        let r = classify_seed(&p.to::<W>(), &CfCutoff::default()).map_err(|e| CliError::usage(e.to_string()))?;
        let report = json!({
            "mode": field.name(),
            "class": r.class.name(),
            "exact": r.exact,
            "partial_quotients": r.partial_quotients,
        });
        sink.emit(&(serde_json::to_string_pretty(&report).expect("json") + "\n"))
    })
}

pub fn lebesgue(matrix: &[String; 4], rect: &Rect, samples: usize, seed: Option<u64>, sink: &Sink) -> CliResult {
    let seed = seed.ok_or_else(|| CliError::usage("randomized runs need --seed"))?;
    let entry = |t: &String| Rational::parse_token(t).ok_or_else(|| CliError::usage(format!("bad matrix entry '{}'", t)));
    let g = Mat2::new(entry(&matrix[0])?, entry(&matrix[1])?, entry(&matrix[2])?, entry(&matrix[3])?);
    let c = lebesgue_invariance_check(&g, rect, samples, seed).map_err(|e| CliError::usage(e.to_string()))?;
    let report = json!({
        "matrix": matrix,
        "box": [rect.x0, rect.x1, rect.y0, rect.y1],
        "seed": seed,
        "samples": c.samples,
        "in_box": c.in_box,
        "in_preimage": c.in_preimage,
        "discrepancy": c.discrepancy,
    });
    sink.emit(&(serde_json::to_string_pretty(&report).expect("json") + "\n"))
}
