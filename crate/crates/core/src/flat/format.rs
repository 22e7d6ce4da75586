//! `.fsf` flat surface files.
//!
//! ```text
//! fsf 1
//! field Q
//! polygon 0 (0,0) (1,0) (1,1) (0,1)
//! glue 0:0 0:2 translation
//! glue 0:1 0:3 translation
//! ```
//!
//! Polygons list their vertices counterclockwise; edge `e` runs from vertex
//! `e` to vertex `e + 1`.

use std::fmt::Write as _;

use super::{FlatError, FlatSurface, Gluing, GluingKind, Vec2};
use crate::parse::{arity, content_lines, expect_header, parse_num, ParseError};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum SurfaceFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Surface(#[from] FlatError),
}

fn parse_point<W: Scalar>(tok: &str, line: usize) -> Result<Vec2<W>, ParseError> {
    let bad = || ParseError::new(line, format!("bad vertex '{}', expected (x,y)", tok));
    let inner = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (x, y) = inner.split_once(',').ok_or_else(bad)?;
    Ok(Vec2::new(
        W::parse_token(x.trim()).ok_or_else(bad)?,
        W::parse_token(y.trim()).ok_or_else(bad)?,
    ))
}

fn parse_edge(tok: &str, line: usize) -> Result<(usize, usize), ParseError> {
    let (p, e) = tok
        .split_once(':')
        .ok_or_else(|| ParseError::new(line, format!("bad edge '{}', expected polygon:edge", tok)))?;
    Ok((parse_num(p, line, "polygon index")?, parse_num(e, line, "edge index")?))
}

pub fn parse_surface<W: Scalar>(text: &str, tol: f64) -> Result<FlatSurface<W>, SurfaceFileError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "fsf")?;
    let mut polygons: Vec<Vec<Vec2<W>>> = Vec::new();
    let mut gluings = Vec::new();
    for (n, toks) in lines {
        match toks[0] {
            "field" => {
                arity(&toks, 2, n)?;
                let ok = toks[1] == W::FIELD || toks[1] == "Q" || !W::EXACT;
                if !ok {
                    return Err(ParseError::new(n, format!("coordinates over {} cannot be read as {}", toks[1], W::FIELD)).into());
                }
            }
            "polygon" => {
                if toks.len() < 2 {
                    return Err(ParseError::new(n, "polygon needs an index").into());
                }
                let i = parse_num::<usize>(toks[1], n, "polygon index")?;
                if i != polygons.len() {
                    return Err(ParseError::new(n, format!("expected polygon {}, found {}", polygons.len(), i)).into());
                }
                let pts = toks[2..].iter().map(|t| parse_point(t, n)).collect::<Result<Vec<_>, _>>()?;
                polygons.push(pts);
            }
            "glue" => {
                arity(&toks, 4, n)?;
                let a = parse_edge(toks[1], n)?;
                let b = parse_edge(toks[2], n)?;
                let kind = GluingKind::from_token(toks[3])
                    .ok_or_else(|| ParseError::new(n, format!("unknown gluing '{}' (use translation or half-translation)", toks[3])))?;
                gluings.push(Gluing { a, b, kind });
            }
            other => return Err(ParseError::new(n, format!("unknown directive '{}'", other)).into()),
        }
    }
    Ok(FlatSurface::new(polygons, gluings, tol)?)
}

pub fn write_surface<W: Scalar>(s: &FlatSurface<W>) -> String {
    let mut out = String::from("fsf 1\n");
    let _ = writeln!(out, "field {}", W::FIELD);
    for (i, p) in s.polygons().iter().enumerate() {
        let _ = write!(out, "polygon {}", i);
        for v in p {
            let _ = write!(out, " ({},{})", v.x.token(), v.y.token());
        }
        out.push('\n');
    }
    for g in s.gluings() {
        let _ = writeln!(out, "glue {}:{} {}:{} {}", g.a.0, g.a.1, g.b.0, g.b.1, g.kind.token());
    }
    out
}
