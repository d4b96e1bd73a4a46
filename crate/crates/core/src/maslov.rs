//! Crossing detection, crossing forms and the two index engines:
//!
//! * `clm_index`: Maslov index of `t -> Gr(psi(t))` against the diagonal,
//!   summed from crossing-form signatures;
//! * `cz_index_intersection`: Conley-Zehnder index as a signed count of
//!   intersections of the perturbed, `xi`-extended path with the singular
//!   hypersurface `{det(M - I) = 0}`.
//!
//! Both engines push the path off the singular set with `exp(-eps J)` and, to
//! make every remaining intersection transverse, compose it on the right with
//! a fixed generic symplectic matrix `G = exp(delta K)`. The two short
//! segments that switch `G` on and off keep the endpoints fixed, so the count
//! is unchanged.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det, expm, inertia, j_matrix, kernel, sup_norm, svd_sorted, symmetrize, weakest_direction, Mat};
use crate::path::SymplecticPath;
use crate::roots::{find_zeros, golden_min, refined_unit_grid, uniform_grid, ZeroKind};
use crate::symcore::{det_indicator, orientation_sign};

/// Kernel threshold for crossings of an unperturbed path.
pub const KERNEL_RTOL: f64 = 1e-8;
/// Kernel threshold on perturbed paths, where crossings are refined by bisection.
const KERNEL_RTOL_FINE: f64 = 1e-9;
pub const TOL_D: f64 = 1e-8;
pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_DELTA: f64 = 0.2;

const GENERIC_A: [f64; 16] = [
    0.83, -0.41, 0.27, 0.66, //
    -0.41, -0.52, 0.91, -0.18, //
    0.27, 0.91, 0.35, -0.74, //
    0.66, -0.18, -0.74, -0.29,
];
const GENERIC_B: [f64; 16] = [
    -0.37, 0.58, -0.62, 0.21, //
    0.58, 0.94, 0.13, -0.47, //
    -0.62, 0.13, -0.71, 0.36, //
    0.21, -0.47, 0.36, 0.48,
];

/// Hamiltonian generator `J S` with `S` the leading `2n x 2n` block of a fixed
/// symmetric matrix.
fn generic_generator(n: usize, entries: &[f64; 16]) -> Mat {
    let full = Mat::from_row_slice(4, 4, entries);
    let s = if n == 2 {
        full
    } else {
        Mat::from_row_slice(2, 2, &[full[(0, 0)], full[(0, 1)], full[(1, 0)], full[(1, 1)]])
    };
    j_matrix(n) * s
}

// ---------------------------------------------------------------------------
// Lagrangian frames

/// A Lagrangian subspace of `(R^{2n} x R^{2n}, omega_J)` with
/// `omega_J = (-omega) (+) omega`, stored as a basis of columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    basis: Mat,
}

fn form_matrix(n: usize) -> Mat {
    let j = j_matrix(n);
    let mut big = Mat::zeros(4 * n, 4 * n);
    big.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&(-&j));
    big.view_mut((2 * n, 2 * n), (2 * n, 2 * n)).copy_from(&j);
    big
}

impl LagrangianFrame {
    pub fn from_basis(basis: Mat) -> Result<Self> {
        let (r, c) = basis.shape();
        if (r != 4 && r != 8) || c * 2 != r {
            return Err(Error::Dimension { rows: r, cols: c });
        }
        Ok(Self { basis })
    }

    /// The diagonal `{(x, x)}` in `R^{2n} x R^{2n}`.
    pub fn diagonal(n: usize) -> Self {
        graph_of(&Mat::identity(2 * n, 2 * n))
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Largest `|omega_J(v_i, v_j)|` over basis pairs.
    pub fn isotropy_residual(&self) -> f64 {
        let n = self.ambient_dim() / 4;
        sup_norm(&(self.basis.transpose() * form_matrix(n) * &self.basis))
    }

    /// Smallest singular value of the column-normalized basis.
    pub fn independence(&self) -> f64 {
        let mut b = self.basis.clone();
        for mut col in b.column_iter_mut() {
            let norm = col.norm();
            col /= norm;
        }
        let (sv, _) = svd_sorted(&b);
        *sv.last().unwrap()
    }

    pub fn is_lagrangian(&self, tol: f64) -> bool {
        self.isotropy_residual() <= tol && self.independence() > tol
    }
}

/// `Gr(M) = {(x, Mx)}` with basis columns `(e_i, M e_i)`.
pub fn graph_of(m: &Mat) -> LagrangianFrame {
    let d = m.nrows();
    let mut basis = Mat::zeros(2 * d, d);
    basis.view_mut((0, 0), (d, d)).copy_from(&Mat::identity(d, d));
    basis.view_mut((d, 0), (d, d)).copy_from(m);
    LagrangianFrame { basis }
}

/// `dim(L1 cap L2)` as the numerical nullity of `[B1 | -B2]`, with singular
/// values below `tol * sigma_max` counted as zero.
pub fn intersection_dim(l1: &LagrangianFrame, l2: &LagrangianFrame, tol: f64) -> Result<usize> {
    if l1.ambient_dim() != l2.ambient_dim() {
        return Err(Error::Dimension { rows: l1.ambient_dim(), cols: l2.ambient_dim() });
    }
    let k = l1.basis.ncols();
    let mut stacked = Mat::zeros(l1.ambient_dim(), 2 * k);
    stacked.view_mut((0, 0), (l1.ambient_dim(), k)).copy_from(&l1.basis);
    stacked.view_mut((0, k), (l1.ambient_dim(), k)).copy_from(&(-&l2.basis));
    let (sv, _) = svd_sorted(&stacked);
    let cut = tol * sv[0];
    Ok(sv.iter().filter(|&&s| s <= cut).count())
}

// ---------------------------------------------------------------------------
// Crossings

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    /// Crossing of the path itself.
    Main,
    /// Crossing on the segment switching the generic deformation on.
    Open,
    /// Crossing on the segment switching the generic deformation off.
    Close,
    /// Crossing on the `xi` extension.
    Xi,
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub t: f64,
    pub kernel_dim: usize,
    pub index: usize,
    pub coindex: usize,
    pub nullity: usize,
    pub segment: Segment,
    #[serde(skip)]
    pub form: Mat,
    #[serde(skip)]
    pub regular: bool,
}

impl Crossing {
    fn from_form(t: f64, form: Mat, segment: Segment) -> Self {
        let scale = sup_norm(&form);
        let (index, coindex, nullity) = inertia(&form, 1e-9 * scale.max(1e-300));
        let nullity = if scale == 0.0 { form.nrows() } else { nullity };
        let (index, coindex) = if scale == 0.0 { (0, 0) } else { (index, coindex) };
        Crossing { t, kernel_dim: form.nrows(), index, coindex, nullity, segment, form, regular: nullity == 0 }
    }

    pub fn signature(&self) -> i64 {
        self.coindex as i64 - self.index as i64
    }
}

#[derive(Debug, Clone, Default)]
pub struct CrossingScan {
    /// Crossing instants in increasing order, endpoints included.
    pub instants: Vec<f64>,
    /// `det(psi(t) - I)` vanishes on the whole grid.
    pub degenerate_everywhere: bool,
    /// Instants where `|det|` dips below tolerance without a sign change.
    pub tangent_suspected: Vec<f64>,
}

fn minus_identity(m: &Mat) -> Mat {
    m - Mat::identity(m.nrows(), m.ncols())
}

fn det_minus_identity(m: &Mat) -> f64 {
    det(&minus_identity(m))
}

fn smallest_singular(m: &Mat) -> f64 {
    let (sv, _) = svd_sorted(m);
    *sv.last().unwrap()
}

/// Instants where `det(psi(t) - I) = 0`: sign changes on a uniform grid of
/// `grid` cells refined by bisection, tangential dips refined by minimizing the
/// smallest singular value of `psi(t) - I`, and endpoints with `|det| < tol`.
pub fn find_crossings_on(path: &SymplecticPath, tol: f64, grid: usize) -> CrossingScan {
    let t_end = path.t_end();
    let f = |t: f64| det_minus_identity(&path.eval(t));
    let g = uniform_grid(0.0, t_end, grid);
    let vals: Vec<f64> = g.iter().map(|&t| f(t)).collect();
    let scale = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut scan = CrossingScan::default();
    if scale <= tol {
        scan.degenerate_everywhere = true;
        return scan;
    }
    if vals[0].abs() < tol {
        scan.instants.push(0.0);
    }
    let h = t_end / grid as f64;
    for z in find_zeros(&f, &g, 1e-10 * (1.0 + scale)) {
        if z.t <= 1e-12 * t_end || z.t >= t_end * (1.0 - 1e-12) {
            continue;
        }
        match z.kind {
            ZeroKind::Touch => {
                let s = |t: f64| smallest_singular(&minus_identity(&path.eval(t)));
                let t = golden_min(&s, (z.t - h).max(0.0), (z.t + h).min(t_end), 120);
                scan.tangent_suspected.push(t);
                scan.instants.push(t);
            }
            _ => scan.instants.push(z.t),
        }
    }
    if vals[grid].abs() < tol {
        scan.instants.push(t_end);
    }
    scan
}

pub fn find_crossings(path: &SymplecticPath, tol: f64) -> CrossingScan {
    find_crossings_on(path, tol, DEFAULT_GRID)
}

/// Crossing form of `Gr(psi)` against the diagonal at `t` for a path in Sp(2),
/// written through the entries `a, b, c, d` of `psi` and their derivatives:
/// `Gamma(v) = -x0 eta' - y0 xi'` with
/// `xi' = a' x0 + b' y0 - (b/d)(c' x0 + d' y0)` and `eta' = -(c' x0 + d' y0)/d`,
/// restricted to `ker(psi(t) - I)`.
pub fn crossing_form_graph(path: &SymplecticPath, t: f64) -> Result<Crossing> {
    if path.dim() != 2 {
        return Err(Error::Dimension { rows: path.dim(), cols: path.dim() });
    }
    let m = path.eval(t);
    let dm = path.deriv(t);
    let (b, d) = (m[(0, 1)], m[(1, 1)]);
    if d.abs() <= TOL_D {
        return Err(Error::DNearZero { value: d });
    }
    let (da, db, dc, dd) = (dm[(0, 0)], dm[(0, 1)], dm[(1, 0)], dm[(1, 1)]);
    // Gamma(x0, y0) = x0 (c' x0 + d' y0)/d - y0 (a' x0 + b' y0) + (b/d) y0 (c' x0 + d' y0)
    let q = Mat::from_row_slice(2, 2, &[dc / d, dd / d, -da + b * dc / d, -db + b * dd / d]);
    let ker = crossing_kernel(&m, KERNEL_RTOL);
    let form = ker.transpose() * symmetrize(&q) * &ker;
    Ok(Crossing::from_form(t, form, Segment::Main))
}

fn crossing_kernel(m: &Mat, rtol: f64) -> Mat {
    let a = minus_identity(m);
    let k = kernel(&a, rtol);
    if k.ncols() == 0 {
        weakest_direction(&a)
    } else {
        k
    }
}

/// Crossing form in any dimension: the quadratic form of
/// `S = -J psi' psi^{-1}` (symmetrized) on `ker(psi(t) - I)`.
pub fn crossing_form_general(m: &Mat, dm: &Mat, t: f64, rtol: f64, segment: Segment) -> Crossing {
    let n = m.nrows() / 2;
    let inv = m.clone().try_inverse().unwrap_or_else(|| -j_matrix(n) * m.transpose() * j_matrix(n));
    let s = symmetrize(&(-j_matrix(n) * dm * inv));
    let ker = crossing_kernel(m, rtol);
    Crossing::from_form(t, ker.transpose() * s * &ker, segment)
}

// ---------------------------------------------------------------------------
// Results

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    CrossingForms,
    IntersectionCount,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexResult {
    pub value: i64,
    pub method: Method,
    pub epsilon_used: f64,
    pub certified: bool,
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, Copy)]
pub struct IndexOptions {
    pub epsilon: f64,
    pub grid: usize,
    pub delta: f64,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self { epsilon: DEFAULT_EPSILON, grid: DEFAULT_GRID, delta: DEFAULT_DELTA }
    }
}

struct Piece<'a> {
    eval: Box<dyn Fn(f64) -> Mat + 'a>,
    deriv: Box<dyn Fn(f64) -> Mat + 'a>,
    grid: Vec<f64>,
    segment: Segment,
}

fn check_off_singular(m: &Mat, eps: f64) -> Result<()> {
    let (sv, _) = svd_sorted(&minus_identity(m));
    if *sv.last().unwrap() <= 1e-12 * (1.0 + sv[0]) {
        return Err(Error::EpsilonTooLarge { epsilon: eps });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Crossing-form engine

/// Maslov index by summing crossing forms of the unperturbed path. Returns
/// `None` when some crossing is not regular or the path is degenerate.
fn clm_direct(path: &SymplecticPath, grid: usize) -> Option<(i64, Vec<Crossing>)> {
    let scan = find_crossings_on(path, 1e-12, grid);
    if scan.degenerate_everywhere {
        return None;
    }
    let t_end = path.t_end();
    let mut total = 0;
    let mut crossings = Vec::new();
    for &t in &scan.instants {
        let m = path.eval(t);
        if kernel(&minus_identity(&m), KERNEL_RTOL).ncols() == 0 {
            return None;
        }
        let c = if path.dim() == 2 {
            match crossing_form_graph(path, t) {
                Ok(c) => c,
                Err(_) => return None,
            }
        } else {
            crossing_form_general(&m, &path.deriv(t), t, KERNEL_RTOL, Segment::Main)
        };
        if !c.regular {
            return None;
        }
        total += if t == 0.0 {
            c.coindex as i64
        } else if t == t_end {
            -(c.index as i64)
        } else {
            c.signature()
        };
        crossings.push(c);
    }
    Some((total, crossings))
}

/// Maslov index of the perturbed path with the generic deformation switched on
/// and off at the ends. Every crossing is interior and generically regular.
fn clm_perturbed(path: &SymplecticPath, eps: f64, grid: usize, delta: f64) -> Result<(i64, Vec<Crossing>)> {
    let n = path.half_dim();
    let r = crate::linalg::exp_neg_eps_j(n, eps);
    let k = generic_generator(n, &GENERIC_B) * delta;
    let g = expm(&k);
    let x = &r * path.end();
    check_off_singular(&r, eps)?;
    check_off_singular(&(&r * path.start() * &g), eps)?;
    check_off_singular(&x, eps)?;
    let t_end = path.t_end();
    let pieces = [
        Piece {
            eval: Box::new(|s| &r * expm(&(&k * s))),
            deriv: Box::new(|s| &r * &k * expm(&(&k * s))),
            grid: refined_unit_grid(128, true, true),
            segment: Segment::Open,
        },
        Piece {
            eval: Box::new(|t| &r * path.eval(t) * &g),
            deriv: Box::new(|t| &r * path.deriv(t) * &g),
            grid: uniform_grid(0.0, t_end, grid),
            segment: Segment::Main,
        },
        Piece {
            eval: Box::new(|s| &x * expm(&(&k * (1.0 - s)))),
            deriv: Box::new(|s| -(&x * &k * expm(&(&k * (1.0 - s))))),
            grid: refined_unit_grid(128, true, true),
            segment: Segment::Close,
        },
    ];
    let mut total = 0;
    let mut crossings = Vec::new();
    for piece in &pieces {
        let f = |u: f64| det_minus_identity(&(piece.eval)(u));
        let scale = piece.grid.iter().fold(0.0_f64, |a, &u| a.max(f(u).abs()));
        for z in find_zeros(&f, &piece.grid, 1e-13 * (1.0 + scale)) {
            let m = (piece.eval)(z.t);
            let mut c = crossing_form_general(&m, &(piece.deriv)(z.t), z.t, KERNEL_RTOL_FINE, piece.segment);
            if z.kind == ZeroKind::Touch {
                c.regular = false;
            } else {
                total += c.signature();
            }
            crossings.push(c);
        }
    }
    Ok((total, crossings))
}

/// Maslov index of `t -> Gr(psi(t))` relative to the diagonal.
///
/// When every crossing of the path is regular the index is the sum of
/// crossing-form signatures (coindex at `t = 0`, signature inside, minus index
/// at `t = T`). Otherwise the value comes from the perturbed path. The result
/// is certified when the computation is reproduced with `eps / 2` and a
/// doubled grid (and, for the direct route, by the perturbed route too).
pub fn clm_index(path: &SymplecticPath, opts: &IndexOptions) -> Result<IndexResult> {
    let (v1, c1) = clm_perturbed(path, opts.epsilon, opts.grid, opts.delta)?;
    let (v2, _) = clm_perturbed(path, opts.epsilon / 2.0, 2 * opts.grid, opts.delta)?;
    if let Some((v, crossings)) = clm_direct(path, opts.grid) {
        let again = clm_direct(path, 2 * opts.grid).map(|(w, _)| w);
        return Ok(IndexResult {
            value: v,
            method: Method::CrossingForms,
            epsilon_used: 0.0,
            certified: again == Some(v) && v1 == v && v2 == v,
            crossings,
        });
    }
    Ok(IndexResult {
        value: v1,
        method: Method::CrossingForms,
        epsilon_used: opts.epsilon,
        certified: v1 == v2,
        crossings: c1,
    })
}

/// Conley-Zehnder index from the Maslov index of the graph: `CLM - n`.
pub fn cz_from_clm(path: &SymplecticPath, opts: &IndexOptions) -> Result<IndexResult> {
    path.require_identity_start(1e-8)?;
    let mut r = clm_index(path, opts)?;
    r.value -= path.half_dim() as i64;
    Ok(r)
}

/// Robbin-Salamon index as a numerator over 2:
/// `RS = CLM - (h(0) - h(T)) / 2` with `h(t) = dim ker(psi(t) - I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HalfInteger {
    pub twice: i64,
}

impl HalfInteger {
    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

pub fn rs_index(path: &SymplecticPath, opts: &IndexOptions) -> Result<HalfInteger> {
    let clm = clm_index(path, opts)?;
    let h = |m: Mat| kernel(&minus_identity(&m), KERNEL_RTOL).ncols() as i64;
    let (h0, h1) = (h(path.start()), h(path.end()));
    Ok(HalfInteger { twice: 2 * clm.value - (h0 - h1) })
}

// ---------------------------------------------------------------------------
// Intersection-count engine

/// One signed intersection count with fixed `eps` and grid.
pub fn cz_intersection_raw(path: &SymplecticPath, eps: f64, grid: usize, delta: f64) -> Result<(i64, Vec<Crossing>)> {
    path.require_identity_start(1e-8)?;
    let n = path.half_dim();
    let dim = 2 * n;
    let r = crate::linalg::exp_neg_eps_j(n, eps);
    let k = generic_generator(n, &GENERIC_A) * delta;
    let g = expm(&k);
    let xi = |u: f64| {
        let mut m = Mat::zeros(dim, dim);
        for i in 0..n {
            m[(i, i)] = 2.0 - u;
            m[(n + i, n + i)] = 1.0 / (2.0 - u);
        }
        m
    };
    let xi0 = &r * xi(0.0);
    let x = &r * path.end();
    check_off_singular(&xi0, eps)?;
    check_off_singular(&(&r * &g), eps)?;
    check_off_singular(&x, eps)?;
    let t_end = path.t_end();
    let zero = Mat::zeros(dim, dim);
    let pieces = [
        Piece {
            eval: Box::new(|s| &xi0 * expm(&(&k * s))),
            deriv: Box::new(|_| zero.clone()),
            grid: uniform_grid(0.0, 1.0, 128),
            segment: Segment::Open,
        },
        Piece {
            eval: Box::new(|u| &r * xi(u) * &g),
            deriv: Box::new(|_| zero.clone()),
            grid: uniform_grid(0.0, 1.0, 256),
            segment: Segment::Xi,
        },
        Piece {
            eval: Box::new(|t| &r * path.eval(t) * &g),
            deriv: Box::new(|_| zero.clone()),
            grid: uniform_grid(0.0, t_end, grid),
            segment: Segment::Main,
        },
        Piece {
            eval: Box::new(|s| &x * expm(&(&k * (1.0 - s)))),
            deriv: Box::new(|_| zero.clone()),
            grid: refined_unit_grid(100, false, true),
            segment: Segment::Close,
        },
    ];
    let mut total = 0;
    let mut crossings = Vec::new();
    for piece in &pieces {
        let f = |u: f64| det_indicator(&(piece.eval)(u));
        let scale = piece.grid.iter().fold(0.0_f64, |a, &u| a.max(f(u).abs()));
        for z in find_zeros(&f, &piece.grid, 1e-13 * (1.0 + scale)) {
            let m = (piece.eval)(z.t);
            let kernel_dim = kernel(&minus_identity(&m), KERNEL_RTOL_FINE).ncols().max(1);
            let dir = match z.kind {
                ZeroKind::Rising => 1.0,
                ZeroKind::Falling => -1.0,
                ZeroKind::Touch => 0.0,
            };
            let orient = orientation_sign(&m);
            if dir != 0.0 && orient == 0.0 {
                return Err(Error::Nontransverse { t: z.t });
            }
            let sign = (dir * orient) as i64;
            total += sign;
            crossings.push(Crossing {
                t: z.t,
                kernel_dim,
                index: (sign < 0) as usize,
                coindex: (sign > 0) as usize,
                nullity: (sign == 0) as usize,
                segment: piece.segment,
                form: Mat::from_element(1, 1, sign as f64),
                regular: sign != 0,
            });
        }
    }
    Ok((total, crossings))
}

/// Conley-Zehnder index by signed intersection counting. Certified when the
/// count is unchanged under `eps -> eps / 2` and under grid doubling.
pub fn cz_index_intersection(path: &SymplecticPath, opts: &IndexOptions) -> Result<IndexResult> {
    let (v, crossings) = cz_intersection_raw(path, opts.epsilon, opts.grid, opts.delta)?;
    let (v_eps, _) = cz_intersection_raw(path, opts.epsilon / 2.0, opts.grid, opts.delta)?;
    let (v_grid, _) = cz_intersection_raw(path, opts.epsilon, 2 * opts.grid, opts.delta)?;
    Ok(IndexResult {
        value: v,
        method: Method::IntersectionCount,
        epsilon_used: opts.epsilon,
        certified: v == v_eps && v == v_grid,
        crossings,
    })
}
