use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use sympath::kepler::{analyze_monodromy, elements_from, fundamental_solution, morse_index_iterate, LinearizedSystem};
use sympath::maslov::IndexOptions;

use super::kepler_report::OrbitArgs;
use crate::output::{csv_table, emit, json, Format};
use crate::Exit;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Comma-separated eccentricities; an empty string gives an empty grid.
    #[arg(long, default_value = "0,0.2,0.4,0.6,0.8", allow_hyphen_values = true)]
    pub ecc_list: String,
    /// Comma-separated iterates k.
    #[arg(long, default_value = "1,2,3,4,5", allow_hyphen_values = true)]
    pub k_list: String,
    /// Comma-separated homotopy parameters s in [0, 1] (s = 1 is the orbit itself).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub s_list: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub const HEADER: [&str; 8] = ["ecc", "k", "s", "cz_index", "nullity", "max_abs_lambda_minus_1", "drift", "error"];

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub ecc: f64,
    pub k: i64,
    pub s: f64,
    pub cz_index: Option<i64>,
    pub nullity: Option<usize>,
    pub max_abs_lambda_minus_1: Option<f64>,
    pub drift: Option<f64>,
    pub error: Option<String>,
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    schema: u32,
    rows: &'a [Row],
}

fn parse_list<T: std::str::FromStr>(flag: &str, s: &str) -> Result<Vec<T>, Exit> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Exit::new(2, format!("--{flag}: cannot parse {t:?}"))))
        .collect()
}

/// Rows for one (ecc, s) pair, in increasing k order.
fn rows_for(orbit: &OrbitArgs, ecc: f64, s: f64, ks: &[i64]) -> Vec<Row> {
    let blank = |k: i64, err: String| Row {
        ecc,
        k,
        s,
        cz_index: None,
        nullity: None,
        max_abs_lambda_minus_1: None,
        drift: None,
        error: Some(err),
    };
    let tagged = |e: sympath::Error| format!("{}: {e}", e.code());
    let sol = elements_from(orbit.a, ecc, orbit.mu, orbit.m)
        .and_then(|el| LinearizedSystem::new(el, s, orbit.model.into()))
        .and_then(|sys| fundamental_solution(&sys, orbit.steps));
    let sol = match sol {
        Ok(sol) => sol,
        Err(e) => return ks.iter().map(|&k| blank(k, tagged(e.clone()))).collect(),
    };
    let an = analyze_monodromy(&sol.monodromy);
    let opts = IndexOptions::default();
    ks.iter()
        .map(|&k| {
            if k < 1 {
                return blank(k, "DOMAIN: k must be at least 1".into());
            }
            let mut row = Row {
                ecc,
                k,
                s,
                cz_index: None,
                nullity: Some(an.nullity),
                max_abs_lambda_minus_1: Some(an.max_dist_to_one),
                drift: Some(sol.info.drift),
                error: None,
            };
            match morse_index_iterate(&sol, k as usize, &opts) {
                Ok(r) => {
                    row.cz_index = Some(r.value);
                    if !r.certified {
                        row.error = Some("UNCERTIFIED".into());
                    }
                }
                Err(e) => row.error = Some(tagged(e)),
            }
            row
        })
        .collect()
}

pub fn run(args: &Args) -> Result<(), Exit> {
    args.orbit.validate()?;
    let eccs: Vec<f64> = parse_list("ecc-list", &args.ecc_list)?;
    let ks: Vec<i64> = parse_list("k-list", &args.k_list)?;
    let ss: Vec<f64> = parse_list("s-list", &args.s_list)?;

    let pairs: Vec<(f64, f64)> = eccs.iter().flat_map(|&e| ss.iter().map(move |&s| (e, s))).collect();
    let blocks: Vec<Vec<Row>> = if ks.is_empty() {
        Vec::new()
    } else {
        pairs.par_iter().map(|&(e, s)| rows_for(&args.orbit, e, s, &ks)).collect()
    };
    // Lexicographic (ecc, k, s) order: blocks are (ecc, s) major, rows within a block follow k.
    let mut rows = Vec::with_capacity(pairs.len() * ks.len());
    for per_ecc in blocks.chunks(ss.len().max(1)) {
        for ki in 0..ks.len() {
            rows.extend(per_ecc.iter().map(|b| b[ki].clone()));
        }
    }
    let bytes = match args.format {
        Format::Csv => csv_table(&rows, &HEADER)?,
        Format::Json => json(&JsonSweep { schema: 1, rows: &rows })?,
    };
    emit(args.output.as_ref(), &bytes)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(Exit::new(1, format!("{failed} of {} rows reported an error", rows.len())));
    }
    Ok(())
}
