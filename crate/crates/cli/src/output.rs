//! Report emission: CSV (RFC quoting, header row), JSON (array of flat
//! objects), and regression-lock files.

use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use nrlab_core::experiments::{parse_lock_lines, render_lock_lines};

/// Writes records as CSV with a header row; field order is the struct
/// field order.
pub fn write_csv<T: Serialize>(path: &Path, records: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes records as a pretty-printed JSON array.
pub fn write_json<T: Serialize>(path: &Path, records: &[T]) -> anyhow::Result<()> {
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), records)?;
    Ok(())
}

/// Outcome of a lock-file comparison.
pub enum LockOutcome {
    Created,
    Verified,
    Mismatch { detail: String },
}

/// Compares the statistics against `path` if it exists, creates it
/// otherwise. Values must reproduce bit-for-bit in the locked rendering.
pub fn check_or_write_lock(path: &Path, stats: &[(&str, f64)]) -> anyhow::Result<LockOutcome> {
    let rendered = render_lock_lines(stats);
    if path.exists() {
        let committed = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let want = parse_lock_lines(&committed);
        let got = parse_lock_lines(&rendered);
        if want == got {
            Ok(LockOutcome::Verified)
        } else {
            Ok(LockOutcome::Mismatch {
                detail: format!("locked:\n{committed}computed:\n{rendered}"),
            })
        }
    } else {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, rendered)?;
        Ok(LockOutcome::Created)
    }
}
