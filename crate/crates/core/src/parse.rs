//! Line-oriented text formats share one error type and a tokenizer.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Nonblank lines with comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() {
            None
        } else {
            Some((i + 1, toks))
        }
    })
}

/// Check the leading `magic version` line.
pub(crate) fn expect_header<'a, I>(lines: &mut I, magic: &str) -> Result<(), ParseError>
where
    I: Iterator<Item = (usize, Vec<&'a str>)>,
{
    match lines.next() {
        Some((n, toks)) => {
            if toks.first() != Some(&magic) {
                return Err(ParseError::new(n, format!("expected header '{} 1'", magic)));
            }
            match toks.get(1) {
                Some(&"1") if toks.len() == 2 => Ok(()),
                Some(v) => Err(ParseError::new(n, format!("unsupported {} version '{}'", magic, v))),
                None => Err(ParseError::new(n, "missing format version")),
            }
        }
        None => Err(ParseError::new(1, format!("empty input, expected '{} 1'", magic))),
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse::<T>()
        .map_err(|_| ParseError::new(line, format!("bad {} '{}'", what, tok)))
}

pub(crate) fn arity(toks: &[&str], n: usize, line: usize) -> Result<(), ParseError> {
    if toks.len() != n {
        return Err(ParseError::new(
            line,
            format!("'{}' takes {} fields, found {}", toks[0], n - 1, toks.len() - 1),
        ));
    }
    Ok(())
}
