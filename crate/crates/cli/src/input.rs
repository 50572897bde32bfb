use std::path::Path;

use probrec::fixtures;

use crate::error::{CliError, CliResult};

/// A file argument: a path, or failing that the name of a bundled fixture.
pub struct Source {
    pub label: String,
    pub text: String,
}

/// Fixture directories searched for each kind of file argument.
pub const TERMS: &[&str] = &["terms/", "tier/"];
pub const MACHINES: &[&str] = &["machines/"];
pub const PROGRAMS: &[&str] = &["programs/"];

pub fn read(arg: &str, dirs: &[&str]) -> CliResult<Source> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| CliError::Invalid(format!("{arg}: {e}")))?;
        return Ok(Source { label: arg.to_string(), text });
    }
    let path = dirs
        .iter()
        .find_map(|d| fixtures::find_in(d, arg))
        .ok_or_else(|| CliError::Invalid(format!("{arg}: no such file or fixture")))?;
    let text = fixtures::load(path).ok_or_else(|| CliError::Invalid(format!("{arg}: fixture unreadable")))?;
    Ok(Source { label: format!("fixture:{path}"), text })
}

/// File stem, used to name machine-specific functions.
pub fn stem(arg: &str) -> String {
    Path::new(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string())
}

/// `"3,4"` as naturals; the empty string is no arguments.
pub fn nat_args(s: &str) -> CliResult<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Invalid(format!("bad natural {x:?} in --args"))))
        .collect()
}

/// `"ab,ba"` as words. A trailing comma gives a trailing empty word, and an
/// empty string is a single empty word unless `nullary` allows none.
pub fn word_args(s: &str, nullary: bool) -> Vec<String> {
    if s.is_empty() && nullary {
        return vec![];
    }
    s.split(',').map(str::to_string).collect()
}
