//! Rate input: inline lists and rates files.
//!
//! Inline: comma-separated values, where `VALUExCOUNT` repeats a value
//! (`0.03x10`). Files: one positive decimal per line; `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

fn parse_value(token: &str) -> Result<f64, CliError> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Input(format!("cannot parse rate {:?}", token.trim())))
}

pub fn parse_inline(list: &str) -> Result<Vec<f64>, CliError> {
    let mut rates = Vec::new();
    for token in list.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(CliError::Input(format!("empty entry in rate list {list:?}")));
        }
        match token.split_once(['x', '*']) {
            Some((value, count)) => {
                let value = parse_value(value)?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("bad repeat count in {token:?}")))?;
                rates.extend(std::iter::repeat_n(value, count));
            }
            None => rates.push(parse_value(token)?),
        }
    }
    Ok(rates)
}

pub fn parse_file_contents(text: &str) -> Result<Vec<f64>, CliError> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(parse_value)
        .collect()
}

pub fn read_file(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    parse_file_contents(&text)
}

/// Shortest round-trip decimal for each rate, one per line.
pub fn render_file(rates: &[f64]) -> String {
    let mut out = String::from("# hypoexp rates, one per line\n");
    for r in rates {
        writeln!(out, "{r:?}").unwrap();
    }
    out
}
