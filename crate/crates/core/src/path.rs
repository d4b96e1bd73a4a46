//! Paths `[0, T] -> Sp(2n)` and the operations used to build index arguments:
//! concatenation, iteration, perturbation by `exp(-eps J)`, symplectic sums,
//! rescaling and sampled paths read from CSV.

use std::io::Read;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{exp_neg_eps_j, sup_norm, Mat};
use crate::symcore::{diamond, symplectic_residual, TOL_SYMP};

type MatFn = Arc<dyn Fn(f64) -> Mat + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathSource {
    ClosedForm,
    Sampled,
    Integrated,
}

/// A differentiable path in Sp(2) or Sp(4) on `[0, t_end]`.
///
/// `eval` and `deriv` are exact for closed forms, dense-output accurate for
/// integrated flows and piecewise linear (with finite-difference derivative)
/// for sampled paths.
#[derive(Clone)]
pub struct SymplecticPath {
    dim: usize,
    t_end: f64,
    source: PathSource,
    eval: MatFn,
    deriv: MatFn,
}

impl std::fmt::Debug for SymplecticPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymplecticPath")
            .field("dim", &self.dim)
            .field("t_end", &self.t_end)
            .field("source", &self.source)
            .finish()
    }
}

impl SymplecticPath {
    pub fn new<F, G>(dim: usize, t_end: f64, source: PathSource, eval: F, deriv: G) -> Result<Self>
    where
        F: Fn(f64) -> Mat + Send + Sync + 'static,
        G: Fn(f64) -> Mat + Send + Sync + 'static,
    {
        if dim != 2 && dim != 4 {
            return Err(Error::Dimension { rows: dim, cols: dim });
        }
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::Domain(format!("path length must be positive, got {t_end}")));
        }
        Ok(Self { dim, t_end, source, eval: Arc::new(eval), deriv: Arc::new(deriv) })
    }

    /// Constant path at the identity.
    pub fn constant_identity(dim: usize, t_end: f64) -> Result<Self> {
        Self::new(dim, t_end, PathSource::ClosedForm, move |_| Mat::identity(dim, dim), move |_| Mat::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_dim(&self) -> usize {
        self.dim / 2
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn source(&self) -> PathSource {
        self.source
    }

    pub fn eval(&self, t: f64) -> Mat {
        (self.eval)(t.clamp(0.0, self.t_end))
    }

    pub fn deriv(&self, t: f64) -> Mat {
        (self.deriv)(t.clamp(0.0, self.t_end))
    }

    pub fn start(&self) -> Mat {
        self.eval(0.0)
    }

    pub fn end(&self) -> Mat {
        self.eval(self.t_end)
    }

    pub fn identity_gap(&self) -> f64 {
        sup_norm(&(self.start() - Mat::identity(self.dim, self.dim)))
    }

    pub fn starts_at_identity(&self, tol: f64) -> bool {
        self.identity_gap() <= tol
    }

    pub fn require_identity_start(&self, tol: f64) -> Result<()> {
        let deviation = self.identity_gap();
        if deviation > tol {
            return Err(Error::NonIdentityStart { deviation });
        }
        Ok(())
    }

    /// Largest symplecticity residual over `samples + 1` uniformly spaced points.
    pub fn max_residual(&self, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| symplectic_residual(&self.eval(self.t_end * i as f64 / samples as f64)))
            .fold(0.0, f64::max)
    }

    /// `self` followed by `other`, on `[0, T1 + T2]`.
    pub fn concat(&self, other: &SymplecticPath) -> Result<SymplecticPath> {
        if self.dim != other.dim {
            return Err(Error::Dimension { rows: other.dim, cols: other.dim });
        }
        let gap = sup_norm(&(self.end() - other.start()));
        if gap > TOL_SYMP {
            return Err(Error::EndpointMismatch { gap });
        }
        let t1 = self.t_end;
        let (a, b) = (self.clone(), other.clone());
        let (da, db) = (self.clone(), other.clone());
        Self::new(
            self.dim,
            t1 + other.t_end,
            self.source,
            move |t| if t <= t1 { a.eval(t) } else { b.eval(t - t1) },
            move |t| if t <= t1 { da.deriv(t) } else { db.deriv(t - t1) },
        )
    }

    /// `m`-fold iterate: `psi(t - jT) psi(T)^j` on `[jT, (j+1)T]`.
    pub fn iterate(&self, m: usize) -> Result<SymplecticPath> {
        if m == 0 {
            return Err(Error::Domain("iteration count must be positive".into()));
        }
        self.require_identity_start(TOL_SYMP.max(1e-8))?;
        let t1 = self.t_end;
        let mono = self.end();
        let mut powers = vec![Mat::identity(self.dim, self.dim)];
        for j in 1..m {
            let next = &powers[j - 1] * &mono;
            powers.push(next);
        }
        let powers = Arc::new(powers);
        let split = move |t: f64| -> (f64, usize) {
            let j = ((t / t1).floor() as usize).min(m - 1);
            (t - j as f64 * t1, j)
        };
        let (p, dp, pw, dpw) = (self.clone(), self.clone(), powers.clone(), powers);
        Self::new(
            self.dim,
            m as f64 * t1,
            self.source,
            move |t| {
                let (s, j) = split(t);
                p.eval(s) * &pw[j]
            },
            move |t| {
                let (s, j) = split(t);
                dp.deriv(s) * &dpw[j]
            },
        )
    }

    /// Pointwise `exp(-eps J) psi(t)`.
    pub fn perturb(&self, eps: f64) -> SymplecticPath {
        let r = exp_neg_eps_j(self.half_dim(), eps);
        let r2 = r.clone();
        let (p, dp) = (self.clone(), self.clone());
        Self::new(self.dim, self.t_end, self.source, move |t| &r * p.eval(t), move |t| &r2 * dp.deriv(t))
            .expect("same shape as a valid path")
    }

    /// Pointwise symplectic sum of two paths in Sp(2) over the same interval.
    pub fn diamond(&self, other: &SymplecticPath) -> Result<SymplecticPath> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::Dimension { rows: self.dim.max(other.dim), cols: 2 });
        }
        if (self.t_end - other.t_end).abs() > 1e-12 * self.t_end.max(1.0) {
            return Err(Error::Domain("summands must share the same time interval".into()));
        }
        let (a, b, da, db) = (self.clone(), other.clone(), self.clone(), other.clone());
        Self::new(
            4,
            self.t_end,
            self.source,
            move |t| diamond(&a.eval(t), &b.eval(t)).expect("2x2 inputs"),
            move |t| diamond(&da.deriv(t), &db.deriv(t)).expect("2x2 inputs"),
        )
    }

    /// `t -> psi(k t)` on `[0, T / k]`.
    pub fn rescale(&self, k: f64) -> Result<SymplecticPath> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!("scale factor must be positive, got {k}")));
        }
        let (p, dp) = (self.clone(), self.clone());
        Self::new(self.dim, self.t_end / k, self.source, move |t| p.eval(k * t), move |t| dp.deriv(k * t) * k)
    }

    /// Restriction to `[a, b]`, reparametrized to start at 0.
    pub fn restrict(&self, a: f64, b: f64) -> Result<SymplecticPath> {
        if !(0.0 <= a && a < b && b <= self.t_end) {
            return Err(Error::Domain(format!("[{a}, {b}] is not inside [0, {}]", self.t_end)));
        }
        let (p, dp) = (self.clone(), self.clone());
        Self::new(self.dim, b - a, self.source, move |t| p.eval(a + t), move |t| dp.deriv(a + t))
    }

    /// Piecewise linear path through the given samples. Derivatives are
    /// central differences over one grid step, second order one-sided at the
    /// ends.
    pub fn sampled(times: Vec<f64>, mats: Vec<Mat>) -> Result<SymplecticPath> {
        if times.len() < 2 || times.len() != mats.len() {
            return Err(Error::MalformedCsv("need at least two samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::MalformedCsv(format!("first time must be 0, got {}", times[0])));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::MalformedCsv("times must be strictly increasing".into()));
        }
        let dim = mats[0].nrows();
        if mats.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::MalformedCsv("inconsistent matrix shapes".into()));
        }
        let t_end = *times.last().unwrap();
        let data = Arc::new((times, mats));
        let d1 = data.clone();
        let eval = move |t: f64| interp(&d1.0, &d1.1, t);
        let d2 = data;
        let deriv = move |t: f64| {
            let (ts, ms) = (&d2.0, &d2.1);
            let n = ts.len();
            let i = locate(ts, t);
            let h = ts[i + 1] - ts[i];
            let at = |s: f64| interp(ts, ms, s);
            if n < 3 {
                return (&ms[1] - &ms[0]) / h;
            }
            if t - h < 0.0 {
                (at(t) * -3.0 + at(t + h) * 4.0 - at(t + 2.0 * h)) / (2.0 * h)
            } else if t + h > t_end {
                (at(t) * 3.0 - at(t - h) * 4.0 + at(t - 2.0 * h)) / (2.0 * h)
            } else {
                (at(t + h) - at(t - h)) / (2.0 * h)
            }
        };
        Self::new(dim, t_end, PathSource::Sampled, eval, deriv)
    }
}

fn locate(ts: &[f64], t: f64) -> usize {
    match ts.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(i) => i.min(ts.len() - 2),
        Err(i) => i.saturating_sub(1).min(ts.len() - 2),
    }
}

fn interp(ts: &[f64], ms: &[Mat], t: f64) -> Mat {
    let i = locate(ts, t);
    let w = ((t - ts[i]) / (ts[i + 1] - ts[i])).clamp(0.0, 1.0);
    &ms[i] * (1.0 - w) + &ms[i + 1] * w
}

/// `xi(t) = diag((2 - t/T) I_n, (2 - t/T)^{-1} I_n)`, from `D(2)^{diamond n}` to the identity.
pub fn xi_path(n: usize, t_end: f64) -> Result<SymplecticPath> {
    let dim = 2 * n;
    let diag = move |t: f64, deriv: bool| {
        let u = 2.0 - t / t_end;
        let mut m = Mat::zeros(dim, dim);
        for i in 0..n {
            if deriv {
                m[(i, i)] = -1.0 / t_end;
                m[(n + i, n + i)] = 1.0 / (t_end * u * u);
            } else {
                m[(i, i)] = u;
                m[(n + i, n + i)] = 1.0 / u;
            }
        }
        m
    };
    SymplecticPath::new(dim, t_end, PathSource::ClosedForm, move |t| diag(t, false), move |t| diag(t, true))
}

pub fn xi2_path(t_end: f64) -> Result<SymplecticPath> {
    xi_path(2, t_end)
}

/// Reads a sampled path: header `t,m11,m12,...` with 4 or 16 row-major
/// entries per row.
pub fn read_path_csv<R: Read>(reader: R) -> Result<SymplecticPath> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::MalformedCsv(e.to_string()))?.clone();
    let entries = headers.len().saturating_sub(1);
    let dim = match entries {
        4 => 2,
        16 => 4,
        _ => return Err(Error::Dimension { rows: entries, cols: 1 }),
    };
    if headers.get(0) != Some("t") {
        return Err(Error::MalformedCsv("first column must be named t".into()));
    }
    for (k, h) in headers.iter().skip(1).enumerate() {
        let want = format!("m{}{}", k / dim + 1, k % dim + 1);
        if h != want {
            return Err(Error::MalformedCsv(format!("column {} should be {want}, found {h}", k + 1)));
        }
    }
    let mut times = Vec::new();
    let mut mats = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::MalformedCsv(e.to_string()))?;
        let vals: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| Error::MalformedCsv(format!("row {}: {e}", line + 1)))?;
        if vals.len() != entries + 1 || vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedCsv(format!("row {}: bad field count or value", line + 1)));
        }
        times.push(vals[0]);
        mats.push(Mat::from_row_slice(dim, dim, &vals[1..]));
    }
    SymplecticPath::sampled(times, mats)
}
