//! Region classification of prisoner's dilemma parameter pairs.

use std::io::{Read, Write};

use bep_core::pd::classify_region;
use bep_core::rational::{format_rational, parse_rational};
use bep_core::{BepError, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::numfmt::sig12;

pub const BOUNDARY: &str = "BOUNDARY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub g: String,
    pub l: String,
    pub region_id: String,
    /// Empty on boundary rows.
    pub stable_equilibrium: String,
}

#[derive(Debug, Deserialize)]
struct PairRecord {
    g: String,
    l: String,
}

/// Reads a CSV with header `g,l`; values are rationals or decimals.
pub fn read_pairs<R: Read>(input: R) -> CliResult<Vec<(Rational, Rational)>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["g", "l"] {
        return Err(CliError::Config("pair file header must be `g,l`".into()));
    }
    let mut out = Vec::new();
    for (line, rec) in r.deserialize::<PairRecord>().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            parse_rational(s).map_err(|e| CliError::Config(format!("row {}: {e}", line + 2)))
        };
        out.push((parse(&rec.g)?, parse(&rec.l)?));
    }
    Ok(out)
}

/// Grid `lo, lo+step, ..., <= hi` in exact arithmetic.
pub fn grid(lo: Rational, hi: Rational, step: Rational) -> CliResult<Vec<Rational>> {
    if step <= Rational::from_integer(0) || hi < lo {
        return Err(CliError::Config("grid needs lo <= hi and a positive step".into()));
    }
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x);
        x += step;
        if out.len() > 1_000_000 {
            return Err(CliError::Resource("grid has more than 10^6 points per axis".into()));
        }
    }
    Ok(out)
}

pub fn classify_pair(g: Rational, l: Rational, k: usize) -> CliResult<ScanRow> {
    let (gs, ls) = (format_rational(&g), format_rational(&l));
    match classify_region(g, l, k) {
        Ok(region) => Ok(ScanRow {
            g: gs,
            l: ls,
            region_id: region.region_id.to_string(),
            stable_equilibrium: sig12(region.stable_equilibrium),
        }),
        Err(BepError::RegionBoundary { .. }) => {
            Ok(ScanRow { g: gs, l: ls, region_id: BOUNDARY.into(), stable_equilibrium: String::new() })
        }
        Err(e) => Err(e.into()),
    }
}

/// Classifies every pair in parallel; rows keep the input order.
pub fn scan(pairs: &[(Rational, Rational)], k: usize) -> CliResult<Vec<ScanRow>> {
    if !(k == 2 || k == 3) {
        return Err(CliError::Config(format!("the region catalog covers k = 2 and 3, got {k}")));
    }
    pairs.par_iter().map(|&(g, l)| classify_pair(g, l, k)).collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[ScanRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["g", "l", "region_id", "stable_equilibrium"])?;
    }
    w.flush().map_err(|e| CliError::Config(format!("writing scan: {e}")))?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> CliResult<Vec<ScanRow>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}
