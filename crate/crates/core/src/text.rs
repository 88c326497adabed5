// Shared helpers for the line-oriented text formats.

use crate::error::{Error, Result};

/// Non-blank lines that do not start with `#`, trimmed.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_usizes(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Invalid(format!("expected a non-negative integer, got `{tok}`")))
        })
        .collect()
}

/// Parses a header line of the form `<keyword> <a> <b>`.
pub(crate) fn parse_header(line: Option<&str>, keyword: &str) -> Result<(usize, usize)> {
    let line = line.ok_or_else(|| Error::Invalid(format!("missing `{keyword}` header")))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(Error::Invalid(format!("expected `{keyword}` header, got `{line}`")));
    }
    let nums = parse_usizes(&parts.collect::<Vec<_>>().join(" "))?;
    match nums[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Invalid(format!("`{keyword}` header needs two integers"))),
    }
}
