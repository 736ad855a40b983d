//! Deterministic CSV and metadata emission. Identical inputs must produce
//! byte-identical files, so all floats are written with fixed precision and
//! all iteration orders are fixed.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Fixed-precision float field; enough digits to round-trip the plots.
pub fn num(x: f64) -> String {
    format!("{x:.9}")
}

/// Coarser field for grid coordinates given in degrees or dB.
pub fn coord(x: f64) -> String {
    format!("{x:.4}")
}

/// Scientific notation for quantities spanning many decades (residuals).
pub fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

pub fn write_row<W: Write>(w: &mut W, fields: &[String]) -> std::io::Result<()> {
    writeln!(w, "{}", fields.join(","))
}

/// Sidecar describing one experiment run: config echo, seed, code version.
#[derive(Debug, Serialize)]
pub struct Metadata<C: Serialize, X: Serialize> {
    pub experiment: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub units: &'static str,
    pub config: C,
    pub results: X,
}

impl<C: Serialize, X: Serialize> Metadata<C, X> {
    pub fn new(
        experiment: &'static str,
        seed: Option<u64>,
        units: &'static str,
        config: C,
        results: X,
    ) -> Self {
        Metadata {
            experiment,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            units,
            config,
            results,
        }
    }

    pub fn write_to(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)
    }
}

/// `<stem>.meta.json` next to the main output file.
pub fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}{suffix}"))
}
