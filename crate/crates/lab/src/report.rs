//! JSON and CSV emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::experiments::{mc_singularity, CellEstimate, ExperimentSpec};

#[derive(Debug, Clone, Serialize)]
pub struct Report<'a> {
    pub spec: &'a ExperimentSpec,
    pub cells: &'a [CellEstimate],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub json: PathBuf,
    pub csv: PathBuf,
}

pub const CSV_HEADER: &str =
    "n,d,trials,hits,p_hat,ci_low,ci_high,seed,signed_hits,signed_p_hat,signed_ci_low,signed_ci_high";

pub fn to_csv(cells: &[CellEstimate]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        let (p, s) = (&c.plain, &c.signed);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            c.n, c.d, p.trials, p.hits, p.p_hat, p.ci_low, p.ci_high, p.seed, s.hits, s.p_hat, s.ci_low, s.ci_high
        );
    }
    out
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes through a sibling temp file so a failed write leaves nothing behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("partial");
    fs::write(&tmp, contents).map_err(|e| LabError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        LabError::io(path, e)
    })
}

/// Runs the singularity study and writes `{name}.json` and `{name}.csv`
/// under `spec.out`.
pub fn run_report(spec: &ExperimentSpec) -> Result<ReportFiles> {
    spec.validate()?;
    let cells = mc_singularity(spec)?;
    let json = to_json(&Report { spec, cells: &cells })?;
    let csv = to_csv(&cells);
    fs::create_dir_all(&spec.out).map_err(|e| LabError::io(&spec.out, e))?;
    let files = ReportFiles {
        json: spec.out.join(format!("{}.json", spec.name)),
        csv: spec.out.join(format!("{}.csv", spec.name)),
    };
    write_atomic(&files.json, &json)?;
    if let Err(e) = write_atomic(&files.csv, &csv) {
        let _ = fs::remove_file(&files.json);
        return Err(e);
    }
    Ok(files)
}
