use std::io::Read;

use nilbohr::{Scalar, WindowSet};

use crate::commands::CliError;

/// Argument text, read from a file for `@path` or from stdin for `-`.
pub fn read_arg(s: &str) -> Result<String, CliError> {
    if let Some(path) = s.strip_prefix('@') {
        return std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")));
    }
    if s == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    Ok(s.to_string())
}

/// A window set given as JSON, or as a comma list of members inside the
/// configured window.
pub fn parse_set(s: &str, window: Option<(i64, i64)>) -> Result<WindowSet, CliError> {
    let text = read_arg(s)?;
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CliError::Input(format!("window set: {e}")));
    }
    let (lo, hi) = window.ok_or_else(|| CliError::Input("a member list needs --window".into()))?;
    let members = if text.is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Input(format!("not an integer: {t:?}"))))
            .collect::<Result<_, _>>()?
    };
    Ok(WindowSet::new(lo, hi, members)?)
}

pub fn parse_scalars<S: Scalar>(items: &[String]) -> Result<Vec<S>, CliError> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .map(|t| Ok(S::parse(t.trim())?))
        .collect()
}

pub fn parse_json(s: &str, what: &str) -> Result<serde_json::Value, CliError> {
    let text = read_arg(s)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}
