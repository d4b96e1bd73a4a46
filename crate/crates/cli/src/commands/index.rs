use std::fs::File;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use sympath::analytic::{analytic_clm, analytic_cz, PathFamily};
use sympath::maslov::{clm_index, cz_index_intersection, IndexOptions, IndexResult, DEFAULT_EPSILON, DEFAULT_GRID};
use sympath::path::read_path_csv;

use crate::family::{lattice_warning, FamilyArgs};
use crate::output::{emit, json};
use crate::Exit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    /// Crossing forms of the graph against the diagonal.
    Crossing,
    /// Signed intersections with the singular set.
    Intersection,
    /// Both, with a match flag.
    Both,
}

#[derive(Debug, clap::Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["family", "path"]))]
pub struct Args {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// CSV file with header t,m11,m12,... (4 or 16 matrix entries per row).
    #[arg(long)]
    pub path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
    pub method: MethodChoice,
    /// Perturbation size for the index computations (certified with epsilon / 2).
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Scan grid cells over [0, T] (certified with twice as many).
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Source {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<PathFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

#[derive(Serialize)]
struct Analytic {
    clm: i64,
    cz: i64,
}

#[derive(Serialize)]
struct Report {
    schema: u32,
    source: Source,
    dim: usize,
    method: MethodChoice,
    /// Conley-Zehnder index (intersection method when computed).
    value: i64,
    /// Maslov index of the graph against the diagonal, when computed.
    clm: Option<i64>,
    certified: bool,
    /// Both methods computed and `cz_from_clm == cz_index_intersection`.
    #[serde(rename = "match")]
    matched: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic: Option<Analytic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intersection: Option<IndexResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crossing_forms: Option<IndexResult>,
    warnings: Vec<String>,
}

pub fn run(args: &Args) -> Result<(), Exit> {
    if !(args.epsilon > 0.0 && args.epsilon < 0.5) {
        return Err(Exit::new(2, format!("--epsilon must lie in (0, 0.5), got {}", args.epsilon)));
    }
    if args.grid < 16 {
        return Err(Exit::new(2, format!("--grid must be at least 16, got {}", args.grid)));
    }
    let fam = args.family.family.map(|n| args.family.build(n)).transpose()?;
    let path = match (&fam, &args.path) {
        (Some(f), _) => f.path(),
        (None, Some(p)) => {
            let file = File::open(p).map_err(|e| Exit::new(2, format!("MALFORMED_CSV: {}: {e}", p.display())))?;
            read_path_csv(file)?
        }
        (None, None) => unreachable!("clap enforces a source"),
    };
    path.require_identity_start(1e-8)?;

    let mut warnings = Vec::new();
    if let Some(w) = fam.as_ref().and_then(lattice_warning) {
        eprintln!("warning: {w}");
        warnings.push(w);
    }
    let opts = IndexOptions { epsilon: args.epsilon, grid: args.grid, ..IndexOptions::default() };
    let n = path.half_dim() as i64;
    let want_x = args.method != MethodChoice::Crossing;
    let want_c = args.method != MethodChoice::Intersection;
    let inter = want_x.then(|| cz_index_intersection(&path, &opts)).transpose()?;
    let cross = want_c.then(|| clm_index(&path, &opts)).transpose()?;

    let clm = cross.as_ref().map(|c| c.value);
    let value = inter.as_ref().map(|r| r.value).or(clm.map(|c| c - n)).expect("one method runs");
    let certified = inter.as_ref().is_none_or(|r| r.certified) && cross.as_ref().is_none_or(|r| r.certified);
    let matched = match (&inter, clm) {
        (Some(i), Some(c)) => Some(i.value == c - n),
        _ => None,
    };
    let analytic = fam.as_ref().map(|f| Analytic { clm: analytic_clm(f), cz: analytic_cz(f) });
    let analytic_ok = analytic.as_ref().is_none_or(|a| a.cz == value && clm.is_none_or(|c| c == a.clm));

    let report = Report {
        schema: 1,
        source: Source { family: fam, path: args.path.as_ref().map(|p| p.display().to_string()) },
        dim: path.dim(),
        method: args.method,
        value,
        clm,
        certified,
        matched,
        analytic,
        intersection: inter,
        crossing_forms: cross,
        warnings,
    };
    emit(args.output.as_ref(), &json(&report)?)?;
    if !certified {
        return Err(Exit::new(1, "UNCERTIFIED: the index changed under epsilon halving or grid doubling"));
    }
    if matched == Some(false) {
        return Err(Exit::new(1, "MISMATCH: the two methods disagree"));
    }
    if !analytic_ok {
        return Err(Exit::new(1, "MISMATCH: numerical index differs from the closed form"));
    }
    Ok(())
}
