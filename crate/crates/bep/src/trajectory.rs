//! Trajectory CSV: header `t,<column>,...`, one row per recorded step.

use std::io::{Read, Write};

use bep_core::dynamics::{TerminalReason, Trajectory};

use crate::error::{CliError, CliResult};
use crate::numfmt::sig12;

pub fn write_trajectory<W: Write>(out: W, columns: &[String], traj: &Trajectory) -> CliResult<()> {
    let width: usize = traj.blocks.iter().sum();
    if columns.len() != width {
        return Err(CliError::Config(format!("{} column labels for states of width {width}", columns.len())));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = Vec::with_capacity(width + 1);
    header.push("t".to_string());
    header.extend(columns.iter().cloned());
    w.write_record(&header)?;
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let mut row = Vec::with_capacity(width + 1);
        row.push(sig12(*t));
        row.extend(x.iter().map(|&v| sig12(v)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::Config(format!("writing trajectory: {e}")))?;
    Ok(())
}

/// Reads a trajectory written by [`write_trajectory`]. `blocks` gives the
/// population sizes; the terminal reason is not stored and reads as
/// [`TerminalReason::Horizon`].
pub fn read_trajectory<R: Read>(input: R, blocks: &[usize]) -> CliResult<(Vec<String>, Trajectory)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let width: usize = blocks.iter().sum();
    if header.get(0) != Some("t") || header.len() != width + 1 {
        return Err(CliError::Config(format!(
            "trajectory header must be `t` followed by {width} columns, got `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let columns = header.iter().skip(1).map(str::to_string).collect();
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut vals = Vec::with_capacity(rec.len());
        for field in rec.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::Config(format!("row {}: `{field}` is not a number", line + 2)))?;
            vals.push(v);
        }
        times.push(vals[0]);
        states.push(vals[1..].to_vec());
    }
    if times.is_empty() {
        return Err(CliError::Config("trajectory has no rows".into()));
    }
    Ok((columns, Trajectory { blocks: blocks.to_vec(), times, states, terminal_reason: TerminalReason::Horizon }))
}
