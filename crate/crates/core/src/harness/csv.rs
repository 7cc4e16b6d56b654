//! Trajectory CSV format.
//!
//! Header `iteration,loss,theta,grad_norm,mean_dfc`, one row per record,
//! `\n` line endings, UTF-8. Reals are serialized as the shortest decimal
//! that round-trips, so write-read-write is byte-identical.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Trajectory, TrajectoryRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "iteration,loss,theta,grad_norm,mean_dfc";

pub fn records_to_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iteration, r.loss, r.theta, r.grad_norm, r.mean_dfc
        ));
    }
    out
}

pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    records_to_csv(&traj.records)
}

pub fn records_from_csv(text: &str) -> Result<Vec<TrajectoryRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        _ => return Err(Error::CsvParse { line: 1, reason: "missing or wrong header" }),
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next = || {
            fields.next().ok_or(Error::CsvParse {
                line: line_no,
                reason: "expected 5 comma-separated fields",
            })
        };
        let iteration = next()?
            .parse::<u64>()
            .map_err(|_| Error::CsvParse { line: line_no, reason: "bad iteration" })?;
        let mut real = |reason: &'static str| -> Result<f64> {
            next()?
                .parse::<f64>()
                .map_err(|_| Error::CsvParse { line: line_no, reason })
        };
        let loss = real("bad loss")?;
        let theta = real("bad theta")?;
        let grad_norm = real("bad grad_norm")?;
        let mean_dfc = real("bad mean_dfc")?;
        if fields.next().is_some() {
            return Err(Error::CsvParse { line: line_no, reason: "trailing fields" });
        }
        records.push(TrajectoryRecord {
            iteration,
            loss,
            theta,
            grad_norm,
            mean_dfc,
        });
    }
    Ok(records)
}
