use std::fs;
use std::io::Write;
use std::path::PathBuf;

use lamina_core::scalar::{Golden, Scalar};

use crate::error::{CliError, CliResult};

pub fn read(path: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

/// Number field of a text file, from its `field` line. Files without one
/// are rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Golden,
    Float,
}

impl Field {
    pub fn of(text: &str, float: bool) -> Field {
        if float {
            return Field::Float;
        }
        let declared = text.lines().find_map(|l| {
            let mut t = l.split('#').next().unwrap_or("").split_whitespace();
            (t.next() == Some("field")).then(|| t.next().unwrap_or("").to_string())
        });
        match declared.as_deref() {
            Some("Q(sqrt5)") => Field::Golden,
            Some("R") => Field::Float,
            _ => Field::Rational,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Rational => "rational",
            Field::Golden => "Q(sqrt5)",
            Field::Float => "real",
        }
    }
}

/// Run `$body` with `$w` bound to the scalar type of `$field`.
#[macro_export]
macro_rules! with_field {
    ($field:expr, $w:ident => $body:expr) => {
        match $field {
            $crate::io::Field::Rational => {
                type $w = lamina_core::scalar::Rational;
                $body
            }
            $crate::io::Field::Golden => {
                type $w = lamina_core::scalar::Golden;
                $body
            }
            $crate::io::Field::Float => {
                type $w = f64;
                $body
            }
        }
    };
}

/// A Q(sqrt5) value in `W`: exact when it is rational, otherwise the
/// nearest double (only float runs take that branch).
pub fn from_golden<W: Scalar>(g: &Golden) -> W {
    match g.as_rational() {
        Some(r) => W::from_rational(&r),
        None => W::parse_token(&g.token()).unwrap_or_else(|| W::parse_token(&g.to_f64().to_string()).expect("float token")),
    }
}

/// Leading magic token of a file.
pub fn magic(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next())
}

/// Main output: the `--out` file when given, standard output otherwise.
pub struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Sink { out }
    }

    pub fn is_file(&self) -> bool {
        self.out.is_some()
    }

    pub fn emit(&self, text: &str) -> CliResult {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            }),
            None => {
                let mut o = std::io::stdout().lock();
                o.write_all(text.as_bytes()).and_then(|_| o.flush()).map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
            }
        }
    }
}
