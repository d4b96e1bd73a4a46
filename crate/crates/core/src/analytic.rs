//! Closed-form path families with known indices. These serve as ground truth
//! for the numerical engines.

use std::f64::consts::TAU;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{expm, j_matrix, Mat};
use crate::path::{PathSource, SymplecticPath};

/// Relative tolerance for deciding `T in (2 pi / beta) Z`.
pub const LATTICE_RTOL: f64 = 1e-9;
/// Distance below which callers should warn about lattice proximity.
pub const LATTICE_WARN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// `[[cos bt, -(b/a1) sin bt], [(b/a2) sin bt, cos bt]]`, i.e. `exp(tJS)` with `S = diag(a1, a2)`.
    RotationR,
    /// `[[cos bt, (b/a1) sin bt], [-(b/a2) sin bt, cos bt]]`, i.e. `exp(tJS)` with `S = -diag(a1, a2)`.
    RotationS,
    /// `exp(tJS)` evaluated as a matrix exponential; `S = sign * diag(a1, a2)`.
    ExpJs,
    /// `[[1, f t], [0, 1]]` with `f = +1` or `-1`.
    Shear,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::RotationR => "rbeta",
            FamilyKind::RotationS => "sbeta",
            FamilyKind::ExpJs => "expjs",
            FamilyKind::Shear => "shear",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathFamily {
    pub kind: FamilyKind,
    pub a1: f64,
    pub a2: f64,
    /// Shear direction, or definiteness sign of `S` for `ExpJs`.
    pub sign: f64,
    pub t_end: f64,
}

impl PathFamily {
    pub fn rotation_r(a1: f64, a2: f64, t_end: f64) -> Result<Self> {
        Self { kind: FamilyKind::RotationR, a1, a2, sign: 1.0, t_end }.validated()
    }

    pub fn rotation_s(a1: f64, a2: f64, t_end: f64) -> Result<Self> {
        Self { kind: FamilyKind::RotationS, a1, a2, sign: -1.0, t_end }.validated()
    }

    pub fn exp_js(a1: f64, a2: f64, sign: f64, t_end: f64) -> Result<Self> {
        Self { kind: FamilyKind::ExpJs, a1, a2, sign, t_end }.validated()
    }

    pub fn shear(f_sign: f64, t_end: f64) -> Result<Self> {
        Self { kind: FamilyKind::Shear, a1: 0.0, a2: 0.0, sign: f_sign, t_end }.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::Domain(format!("T must be positive, got {}", self.t_end)));
        }
        if self.sign != 1.0 && self.sign != -1.0 {
            return Err(Error::Domain(format!("sign must be +1 or -1, got {}", self.sign)));
        }
        if self.kind != FamilyKind::Shear && !(self.a1 > 0.0 && self.a2 > 0.0) {
            return Err(Error::Domain(format!("a1, a2 must be positive, got {}, {}", self.a1, self.a2)));
        }
        Ok(self)
    }

    pub fn beta(&self) -> f64 {
        (self.a1 * self.a2).sqrt()
    }

    /// Definiteness sign of the generator `S`: +1 for R-type, -1 for S-type.
    fn generator_sign(&self) -> f64 {
        match self.kind {
            FamilyKind::RotationR => 1.0,
            FamilyKind::RotationS => -1.0,
            FamilyKind::ExpJs => self.sign,
            FamilyKind::Shear => 0.0,
        }
    }

    fn matrix_at(&self, t: f64) -> Mat {
        match self.kind {
            FamilyKind::Shear => Mat::from_row_slice(2, 2, &[1.0, self.sign * t, 0.0, 1.0]),
            FamilyKind::ExpJs => expm(&(self.generator() * t)),
            _ => {
                let b = self.beta();
                let sg = self.generator_sign();
                let (s, c) = (b * t).sin_cos();
                Mat::from_row_slice(2, 2, &[c, -sg * b / self.a1 * s, sg * b / self.a2 * s, c])
            }
        }
    }

    /// `J S` for the exponential families.
    pub fn generator(&self) -> Mat {
        let sg = self.generator_sign();
        j_matrix(1) * Mat::from_row_slice(2, 2, &[sg * self.a1, 0.0, 0.0, sg * self.a2])
    }

    fn deriv_at(&self, t: f64) -> Mat {
        match self.kind {
            FamilyKind::Shear => Mat::from_row_slice(2, 2, &[0.0, self.sign, 0.0, 0.0]),
            _ => self.generator() * self.matrix_at(t),
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<Mat> {
        if !(0.0..=self.t_end).contains(&t) {
            return Err(Error::Domain(format!("t = {t} outside [0, {}]", self.t_end)));
        }
        Ok(self.matrix_at(t))
    }

    pub fn path(&self) -> SymplecticPath {
        let (a, b) = (*self, *self);
        SymplecticPath::new(2, self.t_end, PathSource::ClosedForm, move |t| a.matrix_at(t), move |t| b.deriv_at(t))
            .expect("validated family")
    }

    /// `T beta / 2 pi`.
    pub fn turns(&self) -> f64 {
        self.t_end * self.beta() / TAU
    }

    pub fn on_lattice(&self) -> bool {
        self.kind != FamilyKind::Shear && lattice_distance(self.turns()) <= LATTICE_RTOL * self.turns().max(1.0)
    }

    /// True when `T` is within `LATTICE_WARN` (relative) of a lattice point,
    /// where the floor formulas switch branch.
    pub fn near_lattice(&self) -> bool {
        self.kind != FamilyKind::Shear && lattice_distance(self.turns()) <= LATTICE_WARN * self.turns().max(1.0)
    }
}

fn lattice_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn lattice_floor(x: f64, on_lattice: bool) -> i64 {
    if on_lattice {
        x.round() as i64
    } else {
        x.floor() as i64
    }
}

/// Maslov index of the graph against the diagonal, in closed form.
///
/// Positive definite generator: `2 floor(x)` on the lattice, `2 (floor(x) + 1)`
/// off it, with `x = T beta / 2 pi`. Negative definite generator: `-2 floor(x)`
/// in both cases, because the endpoint crossing at a lattice point contributes
/// `-index = -2` and takes the place of the missing interior crossing.
/// Shears: 0 for `f(t) = t`, 1 for `f(t) = -t`.
pub fn analytic_clm(family: &PathFamily) -> i64 {
    if family.kind == FamilyKind::Shear {
        return if family.sign > 0.0 { 0 } else { 1 };
    }
    let lat = family.on_lattice();
    let fl = lattice_floor(family.turns(), lat);
    if family.generator_sign() > 0.0 {
        if lat {
            2 * fl
        } else {
            2 * (fl + 1)
        }
    } else {
        -2 * fl
    }
}

/// `analytic_clm - 1`; shears give -1 (`f(t) = t`) and 0 (`f(t) = -t`).
pub fn analytic_cz(family: &PathFamily) -> i64 {
    analytic_clm(family) - 1
}

/// `exp(tJS)` for a symmetric definite 2x2 `S`, with its index computed from
/// the eigenvalues of `S`.
#[derive(Debug, Clone)]
pub struct ExpJsPath {
    pub s: Mat,
    pub t_end: f64,
}

impl ExpJsPath {
    pub fn new(s: Mat, t_end: f64) -> Result<Self> {
        if s.shape() != (2, 2) || (s[(0, 1)] - s[(1, 0)]).abs() > 1e-14 {
            return Err(Error::Domain("S must be a symmetric 2x2 matrix".into()));
        }
        let eig = s.clone().symmetric_eigenvalues();
        if eig[0] * eig[1] <= 0.0 {
            return Err(Error::Domain("S must be definite".into()));
        }
        Ok(Self { s, t_end })
    }

    /// `exp(tJS) = cos(bt) I + sin(bt)/b JS` with `b = sqrt(det S)`, since
    /// `(JS)^2 = -det(S) I`.
    pub fn path(&self) -> SymplecticPath {
        let a = j_matrix(1) * &self.s;
        let b = crate::linalg::det(&self.s).sqrt();
        let at = move |t: f64| Mat::identity(2, 2) * (b * t).cos() + &a * ((b * t).sin() / b);
        let a2 = j_matrix(1) * &self.s;
        let at2 = at.clone();
        SymplecticPath::new(2, self.t_end, PathSource::ClosedForm, at, move |t| &a2 * at2(t)).expect("valid interval")
    }

    /// Equivalent diagonal family: `S` is conjugate by a rotation to
    /// `sign * diag(|a1|, |a2|)`.
    pub fn family(&self) -> PathFamily {
        let eig = self.s.clone().symmetric_eigenvalues();
        let sign = if eig[0] > 0.0 { 1.0 } else { -1.0 };
        PathFamily::exp_js(eig[0].abs(), eig[1].abs(), sign, self.t_end).expect("definite S")
    }
}
