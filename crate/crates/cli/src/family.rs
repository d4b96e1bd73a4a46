use clap::{Args, ValueEnum};

use sympath::analytic::PathFamily;

use crate::Exit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Rbeta,
    Sbeta,
    Expjs,
    Shear,
}

/// Closed-form family flags shared by `index` and `trace`.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Closed-form path family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// First diagonal entry of the generator (rbeta, sbeta, expjs).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a1: f64,
    /// Second diagonal entry of the generator (rbeta, sbeta, expjs).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a2: f64,
    /// Shear direction, or the definiteness sign of the generator for expjs: +1 or -1.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub fsign: f64,
    /// Length T of the parameter interval [0, T].
    #[arg(long = "T", value_name = "T", default_value_t = std::f64::consts::TAU, allow_negative_numbers = true)]
    pub t_end: f64,
}

impl FamilyArgs {
    pub fn build(&self, name: FamilyName) -> Result<PathFamily, Exit> {
        let f = match name {
            FamilyName::Rbeta => PathFamily::rotation_r(self.a1, self.a2, self.t_end),
            FamilyName::Sbeta => PathFamily::rotation_s(self.a1, self.a2, self.t_end),
            FamilyName::Expjs => PathFamily::exp_js(self.a1, self.a2, self.fsign, self.t_end),
            FamilyName::Shear => PathFamily::shear(self.fsign, self.t_end),
        };
        Ok(f?)
    }
}

/// Warning text when `T` sits where the closed-form branch changes.
pub fn lattice_warning(f: &PathFamily) -> Option<String> {
    f.near_lattice().then(|| {
        format!(
            "T = {} is within relative {:e} of the lattice (2 pi / beta) Z (T beta / 2 pi = {}); the index changes across it",
            f.t_end,
            sympath::analytic::LATTICE_WARN,
            f.turns()
        )
    })
}
