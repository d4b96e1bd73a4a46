use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::PathBuf;

use serde::Serialize;

use sympath::symcore::{classify_region, det_indicator, to_cyl, SymplecticMatrix, TOL_SYMP};

use crate::family::{lattice_warning, FamilyArgs};
use crate::output::{csv_table, emit, json, Format};
use crate::Exit;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of intervals; samples are taken at t = i T / N for i = 0..=N.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Number of angles sampling the section curve.
    #[arg(long, default_value_t = 181)]
    pub section_samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub const PATH_HEADER: [&str; 10] = ["t", "m11", "m12", "m21", "m22", "r", "theta", "z", "indicator", "region"];
pub const SECTION_HEADER: [&str; 3] = ["theta", "r_inner", "r_outer"];

#[derive(Debug, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    pub r: f64,
    pub theta: f64,
    pub z: f64,
    pub indicator: f64,
    pub region: &'static str,
}

/// The two radii on `(1 + r^2) cos(theta) = 2 r`, defined for `cos(theta) > 0`;
/// their product is 1.
#[derive(Debug, Serialize)]
pub struct SectionRow {
    pub theta: f64,
    pub r_inner: f64,
    pub r_outer: f64,
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    schema: u32,
    path: &'a [TraceRow],
    section: &'a [SectionRow],
}

/// Angles at cell midpoints of `(-pi/2, pi/2)`, reported in `[0, 2 pi)`.
pub fn section_curve(samples: usize) -> Vec<SectionRow> {
    (0..samples)
        .map(|j| {
            let phi = -FRAC_PI_2 + PI * (j as f64 + 0.5) / samples as f64;
            let (s, c) = phi.sin_cos();
            SectionRow { theta: phi.rem_euclid(TAU), r_inner: c / (1.0 + s.abs()), r_outer: (1.0 + s.abs()) / c }
        })
        .collect()
}

pub fn run(args: &Args) -> Result<(), Exit> {
    let name = args.family.family.ok_or_else(|| Exit::new(2, "--family is required"))?;
    if args.samples < 1 || args.section_samples < 1 {
        return Err(Exit::new(2, "--samples and --section-samples must be positive"));
    }
    let fam = args.family.build(name)?;
    if let Some(w) = lattice_warning(&fam) {
        eprintln!("warning: {w}");
    }
    let mut rows = Vec::with_capacity(args.samples + 1);
    for i in 0..=args.samples {
        let t = fam.t_end * i as f64 / args.samples as f64;
        let m = fam.evaluate(t)?;
        let c = to_cyl(&SymplecticMatrix::new(m.clone())?)?;
        rows.push(TraceRow {
            t,
            m11: m[(0, 0)],
            m12: m[(0, 1)],
            m21: m[(1, 0)],
            m22: m[(1, 1)],
            r: c.r,
            theta: c.theta,
            z: c.z,
            indicator: det_indicator(&m),
            region: classify_region(&m, TOL_SYMP).label(),
        });
    }
    let section = section_curve(args.section_samples);
    let bytes = match args.format {
        Format::Csv => {
            let mut out = csv_table(&rows, &PATH_HEADER)?;
            out.push(b'\n');
            out.extend(csv_table(&section, &SECTION_HEADER)?);
            out
        }
        Format::Json => json(&JsonTrace { schema: 1, path: &rows, section: &section })?,
    };
    emit(args.output.as_ref(), &bytes)
}
