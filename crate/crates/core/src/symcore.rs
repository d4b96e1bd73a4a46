//! Symplectic matrices in dimensions 2 and 4, the determinant indicator
//! `I(M) = (-1)^(n-1) det(M - I)`, the symplectic sum, and the cylindrical
//! chart of Sp(2).

use std::f64::consts::TAU;

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{adjugate, det, j_matrix, sup_norm, Mat};

pub const TOL_SYMP: f64 = 1e-10;
pub const TOL_SYMP_INTEGRATED: f64 = 1e-8;

fn check_dim(m: &Mat) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c || (r != 2 && r != 4) {
        return Err(Error::Dimension { rows: r, cols: c });
    }
    Ok(r / 2)
}

/// `||M^T J M - J||_inf`.
pub fn symplectic_residual(m: &Mat) -> f64 {
    let j = j_matrix(m.nrows() / 2);
    sup_norm(&(m.transpose() * &j * m - j))
}

pub fn is_symplectic(m: &Mat, tol: f64) -> Result<bool> {
    check_dim(m)?;
    Ok(symplectic_residual(m) <= tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    m: Mat,
}

impl SymplecticMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        Self::with_tol(m, TOL_SYMP)
    }

    pub fn with_tol(m: Mat, tol: f64) -> Result<Self> {
        check_dim(&m)?;
        let residual = symplectic_residual(&m);
        let det_gap = (det(&m) - 1.0).abs();
        if residual > tol || det_gap > tol {
            return Err(Error::NotSymplectic { residual: residual.max(det_gap), tol });
        }
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: Mat::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn into_inner(self) -> Mat {
        self.m
    }

    pub fn det_indicator(&self) -> f64 {
        det_indicator(&self.m)
    }
}

/// `I(M) = (-1)^(n-1) det(M - I)` for a `2n x 2n` matrix.
pub fn det_indicator(m: &Mat) -> f64 {
    let n = m.nrows() / 2;
    let d = det(&(m - Mat::identity(2 * n, 2 * n)));
    if n % 2 == 1 {
        d
    } else {
        -d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    SpPlus,
    SpMinus,
    SpZero,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::SpPlus => "Sp+",
            Region::SpMinus => "Sp-",
            Region::SpZero => "Sp0",
        }
    }
}

/// Sp+ is `I(M) < 0`, Sp- is `I(M) > 0`.
pub fn classify_region(m: &Mat, tol: f64) -> Region {
    let i = det_indicator(m);
    if i.abs() <= tol {
        Region::SpZero
    } else if i < 0.0 {
        Region::SpPlus
    } else {
        Region::SpMinus
    }
}

/// Interleaved block sum of two 2x2 matrices into a 4x4 one, so that the
/// `(p1, p2, q1, q2)` coordinates of the result split as `(p1, q1)`, `(p2, q2)`.
pub fn diamond(m1: &Mat, m2: &Mat) -> Result<Mat> {
    for m in [m1, m2] {
        if m.shape() != (2, 2) {
            return Err(Error::Dimension { rows: m.nrows(), cols: m.ncols() });
        }
    }
    let mut out = Mat::zeros(4, 4);
    for (off, m) in [(0, m1), (1, m2)] {
        out[(off, off)] = m[(0, 0)];
        out[(off, off + 2)] = m[(0, 1)];
        out[(off + 2, off)] = m[(1, 0)];
        out[(off + 2, off + 2)] = m[(1, 1)];
    }
    Ok(out)
}

pub fn symplectic_sum(m1: &SymplecticMatrix, m2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    Ok(SymplecticMatrix { m: diamond(&m1.m, &m2.m)? })
}

/// Sign of `d/ds I(M e^{sJ})` at `s = 0`, i.e. the sign of
/// `(-1)^(n-1) tr(adj(M - I) M J)`. This fixes the co-orientation of the
/// singular hypersurface used when counting intersections. Returns 0 when the
/// derivative vanishes (kernel of `M - I` of dimension two or more).
pub fn orientation_sign(m: &Mat) -> f64 {
    let n = m.nrows() / 2;
    let a = m - Mat::identity(2 * n, 2 * n);
    let mut d = (adjugate(&a) * m * j_matrix(n)).trace();
    if n.is_multiple_of(2) {
        d = -d;
    }
    if d > 0.0 {
        1.0
    } else if d < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylCoords {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

fn rotation(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Polar decomposition `M = P O` with `P = sqrt(M M^T) = [[r, z], [z, (1+z^2)/r]]`
/// and `O` the counterclockwise rotation by `theta` in `[0, 2 pi)`.
pub fn to_cyl(m: &SymplecticMatrix) -> Result<CylCoords> {
    if m.dim() != 2 {
        return Err(Error::Dimension { rows: m.dim(), cols: m.dim() });
    }
    let a = &m.m * m.m.transpose();
    // sqrt(det(M M^T)) = |det M|, without the cancellation of forming det(M M^T).
    let sd = det(&m.m).abs();
    let p = (&a + Mat::identity(2, 2) * sd) / (a.trace() + 2.0 * sd).sqrt();
    // P has unit determinant, so its inverse is the adjugate.
    let o = adjugate(&p) * &m.m;
    let mut theta = o[(1, 0)].atan2(o[(0, 0)]);
    if theta < 0.0 {
        theta += TAU;
    }
    if theta >= TAU {
        theta -= TAU;
    }
    Ok(CylCoords { r: p[(0, 0)], theta, z: 0.5 * (p[(0, 1)] + p[(1, 0)]) })
}

pub fn from_cyl(c: &CylCoords) -> Result<SymplecticMatrix> {
    if !(c.r > 0.0) {
        return Err(Error::Domain(format!("cylindrical radius must be positive, got {}", c.r)));
    }
    let p = Mat::from_row_slice(2, 2, &[c.r, c.z, c.z, (1.0 + c.z * c.z) / c.r]);
    Ok(SymplecticMatrix { m: p * rotation(c.theta) })
}

/// `I(M)` for `M in Sp(2)` expressed in cylindrical coordinates.
pub fn det_indicator_cyl(c: &CylCoords) -> f64 {
    2.0 - (c.r + (1.0 + c.z * c.z) / c.r) * c.theta.cos()
}

/// Eigenvalues of `M in Sp(2)` from its cylindrical coordinates:
/// `(1/2r) [(1+r^2+z^2) cos(theta) +- sqrt((1+r^2+z^2)^2 cos^2(theta) - 4 r^2)]`.
pub fn eig_sp2(m: &SymplecticMatrix) -> Result<(Complex<f64>, Complex<f64>)> {
    let c = to_cyl(m)?;
    let b = (1.0 + c.r * c.r + c.z * c.z) * c.theta.cos();
    let disc = Complex::new(b * b - 4.0 * c.r * c.r, 0.0).sqrt();
    let two_r = 2.0 * c.r;
    Ok(((Complex::new(b, 0.0) + disc) / two_r, (Complex::new(b, 0.0) - disc) / two_r))
}
