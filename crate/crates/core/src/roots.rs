//! Zero location for scalar functions sampled on a grid: sign changes are
//! bisected, and grid-level local minima of `|f|` are probed with a
//! golden-section search so that pairs of nearby zeros and tangencies are not
//! lost between grid nodes.

const GOLD: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroKind {
    /// `f` goes from negative to positive.
    Rising,
    /// `f` goes from positive to negative.
    Falling,
    /// `|f|` has a minimum below the touch tolerance without changing sign.
    Touch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub t: f64,
    pub kind: ZeroKind,
}

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisection on `[a, b]` where `f(a)` has sign `sa != 0` and `f(b)` does not.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, sa: i8) -> f64 {
    let width_tol = 1e-15 * a.abs().max(b.abs()).max(1.0);
    for _ in 0..200 {
        if b - a <= width_tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if sgn(f(m)) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimizer of `g` on `[a, b]`.
pub fn golden_min(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let mut c = b - GOLD * (b - a);
    let mut d = a + GOLD * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..iters {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - GOLD * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + GOLD * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// All zeros of `f` detectable on `grid` (strictly increasing). Zeros at the
/// grid endpoints are not reported; callers handle endpoints themselves.
pub fn find_zeros(f: &dyn Fn(f64) -> f64, grid: &[f64], touch_tol: f64) -> Vec<Zero> {
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let mut out = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (s0, s1) = (sgn(vals[i]), sgn(vals[i + 1]));
        if s0 != 0 && s0 != s1 {
            let t = bisect(f, grid[i], grid[i + 1], s0);
            let kind = if s0 < 0 { ZeroKind::Rising } else { ZeroKind::Falling };
            out.push(Zero { t, kind });
        }
    }
    for i in 1..grid.len().saturating_sub(1) {
        let (sl, s, sr) = (sgn(vals[i - 1]), sgn(vals[i]), sgn(vals[i + 1]));
        let is_min = vals[i].abs() <= vals[i - 1].abs() && vals[i].abs() <= vals[i + 1].abs();
        if !(s != 0 && sl == s && sr == s && is_min) {
            continue;
        }
        let sf = s as f64;
        let g = |t: f64| sf * f(t);
        let tm = golden_min(&g, grid[i - 1], grid[i + 1], 90);
        let fm = f(tm);
        if sgn(fm) != s {
            if sgn(fm) == 0 {
                out.push(Zero { t: tm, kind: ZeroKind::Touch });
                continue;
            }
            let left = bisect(f, grid[i - 1], tm, s);
            let right = bisect(f, tm, grid[i + 1], -s);
            let (k1, k2) =
                if s > 0 { (ZeroKind::Falling, ZeroKind::Rising) } else { (ZeroKind::Rising, ZeroKind::Falling) };
            out.push(Zero { t: left, kind: k1 });
            out.push(Zero { t: right, kind: k2 });
        } else if fm.abs() <= touch_tol {
            out.push(Zero { t: tm, kind: ZeroKind::Touch });
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    out
}

pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Grid on `[0, 1]` with logarithmic refinement towards the requested ends,
/// down to a distance of `1e-9`.
pub fn refined_unit_grid(n: usize, refine_start: bool, refine_end: bool) -> Vec<f64> {
    let mut g = uniform_grid(0.0, 1.0, n);
    let layers = 120;
    for i in 0..layers {
        let d = 10f64.powf(-2.0 - 7.0 * i as f64 / (layers - 1) as f64);
        if refine_start {
            g.push(d);
        }
        if refine_end {
            g.push(1.0 - d);
        }
    }
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    g
}
