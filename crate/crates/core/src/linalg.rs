//! Small dense helpers shared by the index engines. Matrices here are at most
//! 8x8, so everything uses `DMatrix` and favors clarity over speed.

use nalgebra::DMatrix;

pub type Mat = DMatrix<f64>;

/// Standard symplectic form `J = [[0, -I], [I, 0]]` of size `2n`.
pub fn j_matrix(n: usize) -> Mat {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// `exp(-eps J) = cos(eps) I - sin(eps) J`.
pub fn exp_neg_eps_j(n: usize, eps: f64) -> Mat {
    Mat::identity(2 * n, 2 * n) * eps.cos() - j_matrix(n) * eps.sin()
}

pub fn expm(m: &Mat) -> Mat {
    m.clone().exp()
}

/// Largest absolute entry.
pub fn sup_norm(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn det(m: &Mat) -> f64 {
    match m.nrows() {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().lu().determinant(),
    }
}

fn minor(m: &Mat, row: usize, col: usize) -> Mat {
    m.clone().remove_row(row).remove_column(col)
}

/// Classical adjugate, `adj(A) A = det(A) I`. Well defined even when `A` is singular.
pub fn adjugate(a: &Mat) -> Mat {
    let n = a.nrows();
    if n == 1 {
        return Mat::identity(1, 1);
    }
    Mat::from_fn(n, n, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * det(&minor(a, j, i))
    })
}

/// Singular values in descending order together with the matching right
/// singular vectors (as columns).
pub fn svd_sorted(m: &Mat) -> (Vec<f64>, Mat) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = Mat::from_fn(m.ncols(), order.len(), |r, c| v_t[(order[c], r)]);
    (sv, v)
}

/// Orthonormal basis (columns) of the numerical kernel: right singular vectors
/// whose singular value is below `rtol * (1 + sigma_max)`.
pub fn kernel(m: &Mat, rtol: f64) -> Mat {
    let (sv, v) = svd_sorted(m);
    let cut = rtol * (1.0 + sv[0]);
    let cols: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] < cut).collect();
    Mat::from_fn(m.ncols(), cols.len(), |r, c| v[(r, cols[c])])
}

/// Right singular vector of the smallest singular value, as a one-column matrix.
pub fn weakest_direction(m: &Mat) -> Mat {
    let (sv, v) = svd_sorted(m);
    let last = sv.len() - 1;
    v.columns(last, 1).into_owned()
}

/// Inertia `(index, coindex, nullity)` of a symmetric matrix. Eigenvalues with
/// magnitude at most `tol` count as zero.
pub fn inertia(sym: &Mat, tol: f64) -> (usize, usize, usize) {
    if sym.nrows() == 0 {
        return (0, 0, 0);
    }
    let eig = sym.clone().symmetric_eigenvalues();
    let mut out = (0, 0, 0);
    for &l in eig.iter() {
        if l < -tol {
            out.0 += 1;
        } else if l > tol {
            out.1 += 1;
        } else {
            out.2 += 1;
        }
    }
    out
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Characteristic polynomial coefficients `[1, c1, ..., cn]` of
/// `det(lambda I - A)`, by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &Mat) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut m = Mat::zeros(n, n);
    let id = Mat::identity(n, n);
    for k in 1..=n {
        m = a * &m + &id * coeffs[k - 1];
        let c = -(a * &m).trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}
