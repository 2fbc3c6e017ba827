//! CSV emission for result tables and trajectory traces.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::engine::TraceRow;
use crate::experiments::EffectRow;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("no rows to write")]
    NoRows,
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let mut file = fs::File::create(path).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn table(rows: &[EffectRow], format: impl Fn(f64) -> String) -> String {
    let replicates = rows[0].per_replicate.len();
    let mut s = String::from("scenario,effect");
    for r in 1..=replicates {
        s.push_str(&format!(",R{r}"));
    }
    s.push_str(",avg,std,conf\n");
    for row in rows {
        s.push_str(row.scenario.label());
        s.push(',');
        s.push_str(&row.effect_name);
        for v in &row.per_replicate {
            s.push(',');
            s.push_str(&format(*v));
        }
        for v in [row.stats.mean, row.stats.std, row.stats.ci_halfwidth] {
            s.push(',');
            s.push_str(&format(v));
        }
        s.push('\n');
    }
    s
}

/// Writes the effect table twice: 2-decimal values at `destination` and
/// full-precision values at the sibling `*.raw.csv`.
pub fn emit_results_csv(rows: &[EffectRow], destination: &Path) -> Result<(), OutputError> {
    if rows.is_empty() {
        return Err(OutputError::NoRows);
    }
    write_file(destination, &table(rows, |v| format!("{v:.2}")))?;
    write_file(&raw_sibling(destination), &table(rows, |v| format!("{v}")))
}

/// `stage1.csv` -> `stage1.raw.csv`.
pub fn raw_sibling(destination: &Path) -> PathBuf {
    match destination.extension().and_then(|e| e.to_str()) {
        Some(ext) => destination.with_extension(format!("raw.{ext}")),
        None => destination.with_extension("raw"),
    }
}

/// Per-tick trace rows: `tick,agent_id,kind,x,y,vx,vy,trust`.
pub fn emit_trace_csv(trace: &[TraceRow], destination: &Path) -> Result<(), OutputError> {
    if trace.is_empty() {
        return Err(OutputError::NoRows);
    }
    let mut s = String::from("tick,agent_id,kind,x,y,vx,vy,trust\n");
    for row in trace {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.tick,
            row.agent_id,
            row.kind.label(),
            row.position.x,
            row.position.y,
            row.velocity.x,
            row.velocity.y,
            row.trust
        ));
    }
    write_file(destination, &s)
}
