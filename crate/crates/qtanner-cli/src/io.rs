use std::fs;
use std::path::Path;

use anyhow::Context;
use planted_qtanner::tanner::CssCode;
use planted_qtanner::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Pretty JSON to `out`, or to stdout when absent.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    emit_text(&text, out)
}

pub fn emit_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
        .map_err(Into::into)
}

/// `steane`, `shor`, or a code JSON file; file contents are re-validated.
pub fn load_code(spec: &str) -> anyhow::Result<CssCode> {
    match spec {
        "steane" => Ok(CssCode::steane()),
        "shor" => Ok(CssCode::shor()),
        path => {
            let c: CssCode = read_json(Path::new(path))?;
            Ok(CssCode::new(c.hx().clone(), c.hz().clone(), c.provenance().clone())?)
        }
    }
}

pub fn precondition(msg: impl Into<String>) -> anyhow::Error {
    Error::Precondition(msg.into()).into()
}
