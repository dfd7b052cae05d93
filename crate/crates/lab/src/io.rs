//! File formats. CSV numbers are written with 15 significant digits in
//! scientific notation, rows end with `\n`; JSON keys keep declaration
//! order for structs and sorted order for maps.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use pmelab_core::elliptic::TimeMapSample;
use pmelab_core::pme::State;
use serde::Serialize;

use crate::error::{LabError, LabResult};
use crate::experiments::ExperimentReport;

pub const SNAPSHOT_HEADER: &str = "x,rho,p";

fn num(v: f64) -> String {
    format!("{v:.14e}")
}

fn write_text(path: &Path, text: &str) -> LabResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

/// CSV text with the given header and equally long numeric columns.
pub fn columns_csv(header: &str, columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let mut out = String::with_capacity(24 * (rows + 1) * columns.len().max(1));
    out.push_str(header);
    out.push('\n');
    for i in 0..rows {
        for (j, col) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&num(col[i]));
        }
        out.push('\n');
    }
    out
}

pub fn snapshot_csv(state: &State) -> String {
    let xs = state.grid.centers();
    let ps = state.pressures();
    columns_csv(SNAPSHOT_HEADER, &[&xs, &state.rho, &ps])
}

pub fn write_snapshot(state: &State, path: &Path) -> LabResult<()> {
    write_text(path, &snapshot_csv(state))
}

/// Columns of a snapshot file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot, String> {
    let mut lines = text.split('\n');
    match lines.next() {
        Some(SNAPSHOT_HEADER) => {}
        other => return Err(format!("expected header `{SNAPSHOT_HEADER}`, got {other:?}")),
    }
    let mut snap = Snapshot::default();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(format!("line {}: expected 3 fields", k + 2));
        }
        let mut vals = [0.0; 3];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f
                .parse()
                .map_err(|e| format!("line {}: `{f}`: {e}", k + 2))?;
        }
        snap.x.push(vals[0]);
        snap.rho.push(vals[1]);
        snap.p.push(vals[2]);
    }
    Ok(snap)
}

pub fn read_snapshot(path: &Path) -> LabResult<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_snapshot(&text).map_err(|message| LabError::Format {
        path: path.to_path_buf(),
        message,
    })
}

pub fn json_string(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

pub fn write_json(value: &impl Serialize, path: &Path) -> LabResult<()> {
    write_text(path, &json_string(value))
}

pub fn write_report(report: &ExperimentReport, path: &Path) -> LabResult<()> {
    write_json(report, path)
}

/// One row per run: fixed columns, then the union of all value keys.
pub fn report_csv(report: &ExperimentReport) -> String {
    let keys: BTreeSet<&str> = report
        .records
        .iter()
        .flat_map(|r| r.values.keys().map(String::as_str))
        .collect();
    let mut out = String::from("scenario,m,x_min,x_max,n_cells,cfl,status,outcome,error");
    for k in &keys {
        out.push(',');
        out.push_str(k);
    }
    out.push('\n');
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for r in &report.records {
        let (x_min, x_max, n) = match &r.grid {
            Some(g) => (num(g.x_min), num(g.x_max), g.n_cells.to_string()),
            None => Default::default(),
        };
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            report.scenario.as_str(),
            num(r.m),
            x_min,
            x_max,
            n,
            opt(r.cfl),
            r.status.as_str(),
            r.outcome.as_deref().unwrap_or(""),
            csv_field(r.error.as_deref().unwrap_or("")),
        );
        for k in &keys {
            out.push(',');
            out.push_str(&opt(r.values.get(*k).copied()));
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_report_csv(report: &ExperimentReport, path: &Path) -> LabResult<()> {
    write_text(path, &report_csv(report))
}

pub fn write_timemap_csv(samples: &[TimeMapSample], path: &Path) -> LabResult<()> {
    let g: Vec<f64> = samples.iter().map(|s| s.gamma).collect();
    let s0: Vec<f64> = samples.iter().map(|s| s.s0).collect();
    let l: Vec<f64> = samples.iter().map(|s| s.length).collect();
    write_text(path, &columns_csv("gamma,s0,L", &[&g, &s0, &l]))
}

/// Two-column profile file, `x,u` for elliptic profiles and `x,p` for waves.
pub fn write_profile_csv(header: &str, xs: &[f64], ys: &[f64], path: &Path) -> LabResult<()> {
    write_text(path, &columns_csv(header, &[xs, ys]))
}
