//! Keplerian ellipses in eccentric-anomaly time, the linearized flow along
//! them, monodromy and stability analysis, and Morse indices of iterates.
//!
//! Time is the eccentric-anomaly parameter `tau` with `dt = r dtau`, so
//! `E = omega tau`, `r(tau) = a (1 - e cos(omega tau))` and the orbit has
//! period `Tcal = 2 pi / omega` in `tau`.
//!
//! The default linearization is the Hamiltonian one, in canonical polar
//! coordinates `(p_r, p_theta, r, theta)` (momenta first, matching
//! `J = [[0, -I], [I, 0]]`), rescaled by `dt = r dtau`:
//! `H(tau) = r J Hess(H)`. The homotopy parameter `s` deforms the eccentricity
//! `e -> s e` at fixed `a`, `mu`, `m`; this moves the radius profile linearly
//! from `r == a` (circular orbit) to the true profile, keeps the period fixed
//! and stays Hamiltonian for every `s`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix, Matrix4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{char_poly, Mat};
use crate::maslov::{cz_index_intersection, IndexOptions, IndexResult};
use crate::path::{PathSource, SymplecticPath};
use crate::symcore::symplectic_residual;

pub const KEPLER_TOL: f64 = 1e-14;
pub const KEPLER_MAX_ITER: usize = 50;
pub const MONODROMY_CHANGE_CAP: f64 = 1e-9;
pub const MAX_DOUBLINGS: usize = 3;
pub const NULLITY_RTOL: f64 = 1e-6;
pub const MULTIPLIER_TOL: f64 = 1e-6;
pub const DEFAULT_STEPS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitalElements {
    pub mu: f64,
    pub m: f64,
    pub a: f64,
    pub ecc: f64,
    /// Energy.
    pub h: f64,
    /// Angular momentum modulus.
    pub k: f64,
    /// Physical period.
    pub period: f64,
    /// Period in eccentric-anomaly time.
    pub tcal: f64,
    pub omega: f64,
}

pub fn elements_from(a: f64, ecc: f64, mu: f64, m: f64) -> Result<OrbitalElements> {
    for (name, v) in [("a", a), ("mu", mu), ("m", m)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    if ecc >= 1.0 {
        return Err(Error::ParabolicOrHyperbolic { ecc });
    }
    if !(ecc >= 0.0) {
        return Err(Error::Domain(format!("eccentricity must be non-negative, got {ecc}")));
    }
    let h = -m / (2.0 * a);
    let omega = (2.0 * h.abs() / mu).sqrt();
    let k = (mu * m * a * (1.0 - ecc * ecc)).sqrt();
    if k == 0.0 {
        return Err(Error::Collision);
    }
    Ok(OrbitalElements { mu, m, a, ecc, h, k, period: TAU * (mu * a * a * a / m).sqrt(), tcal: TAU / omega, omega })
}

impl OrbitalElements {
    /// Same orbit shape parameters with a different eccentricity.
    pub fn with_ecc(&self, ecc: f64) -> Result<OrbitalElements> {
        elements_from(self.a, ecc, self.mu, self.m)
    }
}

/// Newton solve of `E - e sin E = M`, started at `E0 = M + e sin M`. The mean
/// anomaly is reduced to `(-pi, pi]` first and the multiple of `2 pi` added
/// back, so that `E(M + 2 pi) = E(M) + 2 pi`.
pub fn solve_eccentric_anomaly(mean_anomaly: f64, ecc: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&ecc) {
        return Err(Error::ParabolicOrHyperbolic { ecc });
    }
    let turns = (mean_anomaly / TAU).round();
    let m = mean_anomaly - turns * TAU;
    let mut e = m + ecc * m.sin();
    for _ in 0..KEPLER_MAX_ITER {
        let f = e - ecc * e.sin() - m;
        if f.abs() <= tol {
            // One polishing step; Newton is quadratic here, so this lands at
            // rounding level unless it makes things worse.
            let e1 = e - f / (1.0 - ecc * e.cos());
            let f1 = e1 - ecc * e1.sin() - m;
            let e = if f1.abs() <= f.abs() { e1 } else { e };
            return Ok(e + turns * TAU);
        }
        e -= f / (1.0 - ecc * e.cos());
    }
    let f = e - ecc * e.sin() - m;
    if f.abs() <= tol {
        return Ok(e + turns * TAU);
    }
    Err(Error::MaxIter(KEPLER_MAX_ITER))
}

/// `r(tau)` and `dr/dtau`.
pub fn radius(el: &OrbitalElements, tau: f64) -> (f64, f64) {
    let (s, c) = (el.omega * tau).sin_cos();
    (el.a * (1.0 - el.ecc * c), el.a * el.ecc * el.omega * s)
}

pub fn effective_potential(el: &OrbitalElements, r: f64) -> f64 {
    el.k * el.k / (2.0 * el.mu * r * r) - el.m / r
}

/// True anomaly as a continuous function of the eccentric anomaly.
pub fn true_anomaly(ecc: f64, e: f64) -> f64 {
    let beta = ecc / (1.0 + (1.0 - ecc * ecc).sqrt());
    e + 2.0 * (beta * e.sin() / (1.0 - beta * e.cos())).atan()
}

/// `d theta / dE` from the true-anomaly relation.
pub fn true_anomaly_rate(ecc: f64, e: f64) -> f64 {
    (1.0 - ecc * ecc).sqrt() / (1.0 - ecc * e.cos())
}

/// Physical time elapsed at eccentric-anomaly time `tau`:
/// `t = (a / omega)(E - e sin E)`.
pub fn physical_time(el: &OrbitalElements, tau: f64) -> f64 {
    let e = el.omega * tau;
    el.a / el.omega * (e - el.ecc * e.sin())
}

/// Largest relative residuals of energy conservation
/// `mu^2 r'^2 + k^2 - 2 m mu r - 2 mu r^2 h` and of the constancy of
/// `mu r^2 dtheta/dt`, over `samples` points of one period.
pub fn conservation_residuals(el: &OrbitalElements, samples: usize) -> (f64, f64) {
    let mut energy = 0.0_f64;
    let mut angular = 0.0_f64;
    for i in 0..samples {
        let tau = el.tcal * i as f64 / samples as f64;
        let (r, dr) = radius(el, tau);
        let lhs = el.mu * el.mu * dr * dr + el.k * el.k - 2.0 * el.m * el.mu * r;
        let rhs = 2.0 * el.mu * r * r * el.h;
        let scale = el.k * el.k + 2.0 * el.m * el.mu * r;
        energy = energy.max((lhs - rhs).abs() / scale);
        let e = el.omega * tau;
        let dtheta_dt = true_anomaly_rate(el.ecc, e) * el.omega / r;
        angular = angular.max((el.mu * r * r * dtheta_dt - el.k).abs() / el.k);
    }
    (energy, angular)
}

// ---------------------------------------------------------------------------
// Linearized system

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `r J Hess(H)` in canonical polar coordinates, eccentricity homotopy.
    Hamiltonian,
    /// Rows `(0, 0, 2h, 0)`, `(-s th', 0, -s mu th'', 0)`, `(1/mu, 0, 0, 0)`,
    /// `(0, 1/(mu r_s), 0, 0)` with `r_s = (1 - s) a + s r`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedSystem {
    pub elements: OrbitalElements,
    pub s: f64,
    pub model: Model,
}

impl LinearizedSystem {
    pub fn new(elements: OrbitalElements, s: f64, model: Model) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!("homotopy parameter must lie in [0, 1], got {s}")));
        }
        Ok(Self { elements, s, model })
    }

    pub fn hamiltonian(elements: OrbitalElements) -> Self {
        Self { elements, s: 1.0, model: Model::Hamiltonian }
    }

    fn h4(&self, tau: f64) -> Matrix4<f64> {
        let el = &self.elements;
        let (mu, m) = (el.mu, el.m);
        match self.model {
            Model::Hamiltonian => {
                let es = self.s * el.ecc;
                let r = el.a * (1.0 - es * (el.omega * tau).cos());
                let k = (mu * m * el.a * (1.0 - es * es)).sqrt();
                let r2 = r * r;
                Matrix4::new(
                    0.0,
                    2.0 * k / (mu * r2),
                    -(3.0 * k * k / (mu * r2 * r) - 2.0 * m / r2),
                    0.0, //
                    0.0,
                    0.0,
                    0.0,
                    0.0, //
                    r / mu,
                    0.0,
                    0.0,
                    0.0, //
                    0.0,
                    1.0 / (mu * r),
                    -2.0 * k / (mu * r2),
                    0.0,
                )
            }
            Model::Literal => {
                let (r, dr) = radius(el, tau);
                let rs = (1.0 - self.s) * el.a + self.s * r;
                let th1 = el.k / (mu * r);
                let th2 = -el.k * dr / (mu * r * r);
                Matrix4::new(
                    0.0,
                    0.0,
                    2.0 * el.h,
                    0.0, //
                    -self.s * th1,
                    0.0,
                    -self.s * mu * th2,
                    0.0, //
                    1.0 / mu,
                    0.0,
                    0.0,
                    0.0, //
                    0.0,
                    1.0 / (mu * rs),
                    0.0,
                    0.0,
                )
            }
        }
    }

    pub fn build_h(&self, tau: f64) -> Mat {
        to_dmatrix(&self.h4(tau))
    }
}

fn to_dmatrix(m: &Matrix4<f64>) -> Mat {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

/// Coefficients `[1, c1, c2, c3, c4]` of the characteristic polynomial of `H(tau)`.
pub fn h_char_poly(sys: &LinearizedSystem, tau: f64) -> Vec<f64> {
    char_poly(&sys.build_h(tau))
}

// ---------------------------------------------------------------------------
// Integration

fn rk4_step(sys: &LinearizedSystem, tau: f64, h: f64, y: &Matrix4<f64>) -> Matrix4<f64> {
    let a = sys.h4(tau);
    let b = sys.h4(tau + 0.5 * h);
    let c = sys.h4(tau + h);
    let k1 = a * y;
    let k2 = b * (y + k1 * (0.5 * h));
    let k3 = b * (y + k2 * (0.5 * h));
    let k4 = c * (y + k3 * h);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn integrate_period(sys: &LinearizedSystem, steps: usize) -> Vec<Matrix4<f64>> {
    let h = sys.elements.tcal / steps as f64;
    let mut nodes = Vec::with_capacity(steps + 1);
    let mut y = Matrix4::identity();
    nodes.push(y);
    for i in 0..steps {
        y = rk4_step(sys, i as f64 * h, h, &y);
        nodes.push(y);
    }
    nodes
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorInfo {
    pub steps: usize,
    pub drift: f64,
    /// Largest monodromy entry change at the last doubling.
    pub change: f64,
}

/// Fundamental solution over one period in eccentric-anomaly time.
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    pub path: SymplecticPath,
    pub monodromy: Mat,
    pub info: IntegratorInfo,
}

/// Integrates `psi' = H(tau) psi`, `psi(0) = I`, over `[0, Tcal]` with fixed-step
/// RK4, doubling the step count until the monodromy entries change by less
/// than `1e-9`. Evaluation between nodes takes one RK4 step from the previous
/// node.
pub fn fundamental_solution(sys: &LinearizedSystem, steps_per_period: usize) -> Result<FundamentalSolution> {
    if steps_per_period < 1000 {
        return Err(Error::Domain(format!("at least 1000 steps per period required, got {steps_per_period}")));
    }
    let mut steps = steps_per_period;
    let mut nodes = integrate_period(sys, steps);
    let mut change = f64::INFINITY;
    for _ in 0..=MAX_DOUBLINGS {
        let finer = integrate_period(sys, 2 * steps);
        change = (finer[2 * steps] - nodes[steps]).amax();
        if change < MONODROMY_CHANGE_CAP {
            break;
        }
        steps *= 2;
        nodes = finer;
    }
    if change >= MONODROMY_CHANGE_CAP {
        return Err(Error::NonConverged { doublings: MAX_DOUBLINGS, change });
    }
    let drift = nodes.iter().map(|y| symplectic_residual(&to_dmatrix(y))).fold(0.0, f64::max);
    let monodromy = to_dmatrix(&nodes[steps]);
    let h = sys.elements.tcal / steps as f64;
    let nodes = std::sync::Arc::new(nodes);
    let sys_e = *sys;
    let sys_d = *sys;
    let nodes_d = nodes.clone();
    let eval_at = move |sys: &LinearizedSystem, nodes: &[Matrix4<f64>], tau: f64| -> Matrix4<f64> {
        let j = ((tau / h).floor() as usize).min(steps - 1);
        let dt = tau - j as f64 * h;
        if dt == 0.0 {
            nodes[j]
        } else {
            rk4_step(sys, j as f64 * h, dt, &nodes[j])
        }
    };
    let path = SymplecticPath::new(
        4,
        sys.elements.tcal,
        PathSource::Integrated,
        move |tau| to_dmatrix(&eval_at(&sys_e, &nodes, tau)),
        move |tau| to_dmatrix(&(sys_d.h4(tau) * eval_at(&sys_d, &nodes_d, tau))),
    )?;
    Ok(FundamentalSolution { path, monodromy, info: IntegratorInfo { steps, drift, change } })
}

// ---------------------------------------------------------------------------
// Stability

fn complex_nullity(m: &DMatrix<Complex<f64>>, rtol: f64) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    sv.iter().filter(|&&s| s <= rtol * max.max(1e-300)).count()
}

#[derive(Debug, Clone)]
pub struct MonodromyAnalysis {
    pub multipliers: Vec<Complex<f64>>,
    pub nullity: usize,
    pub rank_m_minus_i: usize,
    pub max_dist_to_one: f64,
    /// `max |lambda - 1|` over the eigenvalues of the monodromy computed by a
    /// dense eigensolver without deflation.
    pub raw_max_dist_to_one: f64,
    pub elliptic: bool,
    pub spectrally_stable: bool,
    pub linearly_stable: bool,
}

fn sort_complex(v: &mut [Complex<f64>]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Floquet data of a monodromy matrix.
///
/// Multipliers equal to 1 are typically defective here, and a dense
/// eigensolver perturbs them by roughly `sqrt(eps_mach * |M|^2)`. Instead,
/// `M - I` is factored by SVD as `U_r S_r V_r^T` at its numerical rank `r`;
/// the nonzero eigenvalues of `M - I` are those of the `r x r` matrix
/// `S_r V_r^T U_r`, and the remaining `4 - r` multipliers are exactly 1.
pub fn analyze_monodromy(mono: &Mat) -> MonodromyAnalysis {
    let dim = mono.nrows();
    let id = Mat::identity(dim, dim);
    let a = mono - &id;
    let svd = a.clone().svd(true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let sv = &svd.singular_values;
    let smax = sv.iter().fold(0.0_f64, |x, &s| x.max(s));
    let kept: Vec<usize> = (0..sv.len()).filter(|&i| smax > 0.0 && sv[i] > NULLITY_RTOL * smax).collect();
    let rank = kept.len();
    let nullity = dim - rank;

    let mut multipliers = vec![Complex::new(1.0, 0.0); nullity];
    if rank > 0 {
        let c = Mat::from_fn(rank, rank, |i, j| {
            let (ki, kj) = (kept[i], kept[j]);
            sv[ki] * v_t.row(ki).dot(&u.column(kj).transpose())
        });
        multipliers.extend(c.complex_eigenvalues().iter().map(|l| l + 1.0));
    }
    sort_complex(&mut multipliers);
    let mut raw: Vec<Complex<f64>> = mono.clone().complex_eigenvalues().iter().copied().collect();
    sort_complex(&mut raw);

    let dist = |v: &[Complex<f64>]| v.iter().map(|l| (l - 1.0).norm()).fold(0.0, f64::max);
    let elliptic = multipliers.iter().all(|l| (l.norm() - 1.0).abs() <= MULTIPLIER_TOL);
    // Diagonalizable iff every cluster of multipliers has full geometric multiplicity.
    let cluster_tol = 1e-4;
    let mut diagonalizable = true;
    let mut seen = vec![false; multipliers.len()];
    for i in 0..multipliers.len() {
        if seen[i] {
            continue;
        }
        let members: Vec<usize> =
            (0..multipliers.len()).filter(|&j| (multipliers[j] - multipliers[i]).norm() <= cluster_tol).collect();
        let centre = members.iter().map(|&j| multipliers[j]).sum::<Complex<f64>>() / members.len() as f64;
        for &j in &members {
            seen[j] = true;
        }
        let geometric = if (centre - 1.0).norm() <= cluster_tol {
            nullity
        } else {
            let shifted = mono.map(|x| Complex::new(x, 0.0)) - DMatrix::<Complex<f64>>::identity(dim, dim) * centre;
            complex_nullity(&shifted, NULLITY_RTOL)
        };
        if geometric < members.len() {
            diagonalizable = false;
        }
    }
    MonodromyAnalysis {
        max_dist_to_one: dist(&multipliers),
        raw_max_dist_to_one: dist(&raw),
        multipliers,
        nullity,
        rank_m_minus_i: rank,
        elliptic,
        spectrally_stable: elliptic,
        linearly_stable: elliptic && diagonalizable,
    }
}

/// Conley-Zehnder index of the fundamental solution over `[0, k Tcal]`,
/// computed by intersection counting on the `k`-fold iterate.
pub fn morse_index_iterate(sol: &FundamentalSolution, k: usize, opts: &IndexOptions) -> Result<IndexResult> {
    let p = sol.path.iterate(k)?;
    cz_index_intersection(&p, &IndexOptions { grid: opts.grid * k.max(1), ..*opts })
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub schema: u32,
    pub elements: OrbitalElements,
    pub model: Model,
    pub monodromy: Vec<Vec<f64>>,
    pub multipliers: Vec<[f64; 2]>,
    pub max_dist_to_one: f64,
    pub raw_max_dist_to_one: f64,
    pub nullity: usize,
    pub rank_m_minus_i: usize,
    pub elliptic: bool,
    pub spectrally_stable: bool,
    pub linearly_stable: bool,
    pub morse_indices: BTreeMap<usize, i64>,
    pub certified: bool,
    pub integrator: IntegratorInfo,
}

fn rows_of(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn monodromy_and_stability(
    el: &OrbitalElements,
    k_max: usize,
    steps_per_period: usize,
    model: Model,
) -> Result<StabilityReport> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let sys = LinearizedSystem::new(*el, 1.0, model)?;
    let sol = fundamental_solution(&sys, steps_per_period)?;
    let an = analyze_monodromy(&sol.monodromy);
    let opts = IndexOptions::default();
    let mut morse_indices = BTreeMap::new();
    let mut certified = true;
    for k in 1..=k_max {
        let r = morse_index_iterate(&sol, k, &opts)?;
        certified &= r.certified;
        morse_indices.insert(k, r.value);
    }
    Ok(StabilityReport {
        schema: 1,
        elements: *el,
        model,
        monodromy: rows_of(&sol.monodromy),
        multipliers: an.multipliers.iter().map(|l| [l.re, l.im]).collect(),
        max_dist_to_one: an.max_dist_to_one,
        raw_max_dist_to_one: an.raw_max_dist_to_one,
        nullity: an.nullity,
        rank_m_minus_i: an.rank_m_minus_i,
        elliptic: an.elliptic,
        spectrally_stable: an.spectrally_stable,
        linearly_stable: an.linearly_stable,
        morse_indices,
        certified,
        integrator: sol.info,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyRow {
    pub s: f64,
    pub index: i64,
    pub certified: bool,
    pub nullity: usize,
    pub multipliers: Vec<[f64; 2]>,
    pub drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyCheck {
    pub consistent: bool,
    pub offending: Vec<f64>,
    pub rows: Vec<HomotopyRow>,
}

/// Checks that the multipliers, the nullity of `M - I` and the certified
/// one-period index do not depend on the homotopy parameter.
pub fn homotopy_invariance_check(
    el: &OrbitalElements,
    s_grid: &[f64],
    steps_per_period: usize,
) -> Result<HomotopyCheck> {
    if !s_grid.contains(&0.0) || !s_grid.contains(&1.0) {
        return Err(Error::Domain("the homotopy grid must contain 0 and 1".into()));
    }
    let opts = IndexOptions::default();
    let mut rows = Vec::new();
    let mut mults = Vec::new();
    for &s in s_grid {
        let sys = LinearizedSystem::new(*el, s, Model::Hamiltonian)?;
        let sol = fundamental_solution(&sys, steps_per_period)?;
        let an = analyze_monodromy(&sol.monodromy);
        let r = morse_index_iterate(&sol, 1, &opts)?;
        mults.push(an.multipliers.clone());
        rows.push(HomotopyRow {
            s,
            index: r.value,
            certified: r.certified,
            nullity: an.nullity,
            multipliers: an.multipliers.iter().map(|l| [l.re, l.im]).collect(),
            drift: sol.info.drift,
        });
    }
    let mut offending = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let same_mults = mults[i].iter().zip(&mults[0]).all(|(a, b)| (a - b).norm() <= MULTIPLIER_TOL);
        if !row.certified || row.index != rows[0].index || row.nullity != rows[0].nullity || !same_mults {
            offending.push(row.s);
        }
    }
    Ok(HomotopyCheck { consistent: offending.is_empty(), offending, rows })
}

// ---------------------------------------------------------------------------
// Winding

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Direct,
    Retrograde,
}

/// Position at physical time `t`.
pub fn position(el: &OrbitalElements, sense: Sense, t: f64) -> Result<(f64, f64)> {
    let mean = TAU * t / el.period;
    let e = solve_eccentric_anomaly(mean, el.ecc, KEPLER_TOL)?;
    let r = el.a * (1.0 - el.ecc * e.cos());
    let mut theta = true_anomaly(el.ecc, e);
    if sense == Sense::Retrograde {
        theta = -theta;
    }
    Ok((r * theta.cos(), r * theta.sin()))
}

/// Winding number about the origin of the orbit over one physical period,
/// from summed angle increments between consecutive samples.
pub fn winding_number(el: &OrbitalElements, sense: Sense, samples: usize) -> Result<i64> {
    if samples < 64 {
        return Err(Error::Domain(format!("at least 64 samples required, got {samples}")));
    }
    let pts: Vec<(f64, f64)> =
        (0..=samples).map(|i| position(el, sense, el.period * i as f64 / samples as f64)).collect::<Result<_>>()?;
    let closest = pts.iter().map(|p| p.0.hypot(p.1)).fold(f64::INFINITY, f64::min);
    if closest < 1e-9 * el.a {
        return Err(Error::NearOrigin { distance: closest });
    }
    let total: f64 = pts
        .windows(2)
        .map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1)
        })
        .sum();
    Ok((total / TAU).round() as i64)
}
