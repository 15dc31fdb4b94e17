//! Text rendering of reports and atomic file output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use vqss_core::engine::Transcript;

use crate::experiments::{aggregate, Report};

pub fn render(report: &Report) -> String {
    let c = &report.config;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} n={} t={} p={} delta={} backend={} trials={} seed={}",
        c.protocol, c.n, c.t, c.p, c.delta, c.backend, c.trials, c.seed
    );
    let _ = writeln!(
        s,
        "{:>4} {:<24} {:>8} {:>22} {:>22} {:>10} {:>10} {:>6} {:>8}",
        "k", "adversary", "trials", "accept [99% CI]", "bad [99% CI]", "bound", "exact", "viol", "ms"
    );
    for cell in &report.cells {
        let exact = match cell.strategy_rate {
            Some(r) => format!("{r:.3e}"),
            None => "-".into(),
        };
        let _ = writeln!(
            s,
            "{:>4} {:<24} {:>8} {:>7.4} [{:.4},{:.4}] {:>7.4} [{:.4},{:.4}] {:>10.3e} {:>10} {:>6} {:>8}",
            cell.k,
            cell.adversary,
            cell.trials,
            cell.accept_rate,
            cell.accept_ci.lo,
            cell.accept_ci.hi,
            cell.bad_rate,
            cell.bad_ci.lo,
            cell.bad_ci.hi,
            cell.bound,
            exact,
            if cell.violation { "YES" } else { "no" },
            cell.wall_ms
        );
        if cell.exact_checked > 0 {
            let _ = writeln!(s, "     oracle mismatches: {} of {}", cell.exact_failures, cell.exact_checked);
        }
    }
    s
}

/// Whether every cell's aggregates equal a recomputation from its raw outcomes.
pub fn consistent(report: &Report) -> bool {
    report.cells.len() == report.raw.len()
        && report.cells.iter().zip(&report.raw).all(|(cell, raw)| {
            let again = aggregate(&report.config, cell.k, &cell.adversary, raw, cell.wall_ms);
            serde_json::to_value(&again).ok() == serde_json::to_value(cell).ok()
        })
}

/// Writes `bytes` to `path` through a temporary file in the same
/// directory, so a failed run leaves no partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// One JSON object per event.
pub fn transcript_jsonl(t: &Transcript) -> Result<String> {
    let mut s = String::new();
    for e in &t.events {
        s.push_str(&serde_json::to_string(e)?);
        s.push('\n');
    }
    Ok(s)
}
