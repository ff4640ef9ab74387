//! Number formatting and atomic file output.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::error::CliError;

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x + 0.0;
    }
    format!("{x:.14e}").parse().unwrap_or(x) + 0.0
}

/// CSV cell: shortest exponent form of the 15-digit value.
pub fn cell(x: f64) -> String {
    let r = round15(x);
    if r.is_nan() {
        "nan".into()
    } else if r.is_infinite() {
        if r > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{r:e}")
    }
}

/// JSON number rounded to 15 significant digits; non-finite becomes null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round15(x)).map(Value::Number).unwrap_or(Value::Null)
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Writes `content` to `path` through a temporary file in the same
/// directory, or to stdout when no path is given.
pub fn emit(content: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write output: {e}"));
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(content.as_bytes()).map_err(io);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_cells() {
        assert_eq!(round15(0.1 + 0.2), 0.3);
        assert_eq!(cell(400.0), "4e2");
        assert_eq!(cell(-0.0), "0e0");
        assert_eq!(cell(f64::INFINITY), "inf");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(serde_json::to_string(&num(1.0 / 3.0)).unwrap(), "0.333333333333333");
    }

    #[test]
    fn csv_has_header_and_lf() {
        let text = csv("a,b", vec![vec![1.0, 2.5]]);
        assert_eq!(text, "a,b\n1e0,2.5e0\n");
    }

    #[test]
    fn emit_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit("first\n", Some(&path)).unwrap();
        emit("second\n", Some(&path)).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
