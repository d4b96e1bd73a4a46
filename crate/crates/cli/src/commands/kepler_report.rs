use std::path::PathBuf;

use clap::ValueEnum;

use sympath::kepler::{elements_from, monodromy_and_stability, Model, DEFAULT_STEPS};

use crate::output::{emit, json};
use crate::Exit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    /// Linearization of the polar Hamiltonian (symplectic for every eccentricity).
    Hamiltonian,
    /// The 4x4 matrix with rows (0,0,2h,0), (-s th',0,-s mu th'',0), (1/mu,0,0,0), (0,1/(mu r_s),0,0).
    Literal,
}

impl From<ModelChoice> for Model {
    fn from(m: ModelChoice) -> Self {
        match m {
            ModelChoice::Hamiltonian => Model::Hamiltonian,
            ModelChoice::Literal => Model::Literal,
        }
    }
}

/// Orbit and integrator flags shared by `kepler-report` and `sweep`.
#[derive(Debug, Clone, clap::Args)]
pub struct OrbitArgs {
    /// Semi-major axis.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Reduced mass.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
    /// Gravitational coupling G m1 m2.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m: f64,
    /// RK4 steps per period (at least 1000; doubled until the monodromy settles).
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ModelChoice::Hamiltonian)]
    pub model: ModelChoice,
}

impl OrbitArgs {
    pub fn validate(&self) -> Result<(), Exit> {
        for (name, v) in [("a", self.a), ("mu", self.mu), ("m", self.m)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Exit::new(2, format!("--{name} must be positive, got {v}")));
            }
        }
        if self.steps < 1000 {
            return Err(Exit::new(2, format!("--steps must be at least 1000, got {}", self.steps)));
        }
        Ok(())
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Eccentricity in [0, 1).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ecc: f64,
    /// Largest iterate k for the Morse indices over [0, k Tcal].
    #[arg(long, default_value_t = 3)]
    pub kmax: usize,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &Args) -> Result<(), Exit> {
    args.orbit.validate()?;
    if args.kmax == 0 {
        return Err(Exit::new(2, "--kmax must be at least 1"));
    }
    let el = elements_from(args.orbit.a, args.ecc, args.orbit.mu, args.orbit.m)?;
    let report = monodromy_and_stability(&el, args.kmax, args.orbit.steps, args.orbit.model.into())?;
    emit(args.output.as_ref(), &json(&report)?)?;
    if !report.certified {
        return Err(Exit::new(1, "UNCERTIFIED: a Morse index changed under epsilon halving or grid doubling"));
    }
    Ok(())
}
