use std::path::Path;

use crate::error::HarnessError;

/// Shortest round-trip decimal form, so reruns produce identical bytes.
pub fn fmt(x: f64) -> String {
    format!("{x}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_toml<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let text = toml::to_string(value).map_err(|e| HarnessError::Output(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}
