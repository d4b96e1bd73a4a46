use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use sympath::analytic::{analytic_cz, ExpJsPath, PathFamily};
use sympath::error::Error;
use sympath::linalg::{expm, j_matrix, sup_norm, Mat};
use sympath::maslov::{
    clm_index, crossing_form_general, crossing_form_graph, cz_from_clm, cz_index_intersection, cz_intersection_raw,
    find_crossings, graph_of, rs_index, IndexOptions, Segment, DEFAULT_DELTA, DEFAULT_EPSILON, DEFAULT_GRID,
};
use sympath::path::{PathSource, SymplecticPath};

fn opts() -> IndexOptions {
    IndexOptions::default()
}

fn r_beta(a1: f64, a2: f64, t_end: f64) -> SymplecticPath {
    PathFamily::rotation_r(a1, a2, t_end).unwrap().path()
}

fn close(xs: &[f64], want: &[f64]) -> bool {
    xs.len() == want.len() && xs.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-9)
}

/// `K form K^T` for an orthonormal kernel basis spanning the whole plane gives
/// the form in standard coordinates.
fn full_form(path: &SymplecticPath, t: f64) -> (Mat, sympath::maslov::Crossing) {
    let c = crossing_form_graph(path, t).unwrap();
    let m = path.eval(t) - Mat::identity(2, 2);
    let ker = sympath::linalg::kernel(&m, 1e-8);
    assert_eq!(ker.ncols(), 2);
    (&ker * &c.form * ker.transpose(), c)
}

#[test]
fn crossing_instants_of_rotations() {
    let scan = find_crossings(&r_beta(1.0, 1.0, TAU), 1e-10);
    assert!(close(&scan.instants, &[0.0, TAU]), "{:?}", scan.instants);
    let p = ExpJsPath::new(Mat::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]), TAU).unwrap().path();
    let scan = find_crossings(&p, 1e-10);
    assert!(close(&scan.instants, &[0.0, PI, TAU]), "{:?}", scan.instants);
    // det(psi - I) = 2 - 2 cos 2t touches zero at pi without changing sign; the
    // kernel there is two-dimensional, and the scan reports the tangency.
    assert!(close(&scan.tangent_suspected, &[PI]), "{:?}", scan.tangent_suspected);
}

#[test]
fn shear_is_degenerate_everywhere() {
    let scan = find_crossings(&PathFamily::shear(1.0, 3.0).unwrap().path(), 1e-10);
    assert!(scan.degenerate_everywhere);
    assert!(scan.instants.is_empty());
}

#[test]
fn rotation_crossing_form_is_the_generator() {
    // Oracle: on the kernel, psi v = v, so the form is v^T S v with S the generator.
    let (a1, a2) = (2.0, 0.5);
    let p = r_beta(a1, a2, TAU);
    let (q, c) = full_form(&p, TAU);
    assert!(sup_norm(&(q - Mat::from_row_slice(2, 2, &[a1, 0.0, 0.0, a2]))) < 1e-9);
    assert_eq!((c.coindex, c.index, c.nullity, c.signature()), (2, 0, 0, 2));
}

#[test]
fn sign_flipped_rotation_form_is_negative() {
    let (a1, a2) = (2.0, 0.5);
    let p = PathFamily::rotation_s(a1, a2, TAU).unwrap().path();
    let (q, c) = full_form(&p, TAU);
    assert!(sup_norm(&(q + Mat::from_row_slice(2, 2, &[a1, 0.0, 0.0, a2]))) < 1e-9);
    assert_eq!(c.signature(), -2);
}

#[test]
fn shear_form_at_start() {
    let p = PathFamily::shear(-1.0, 2.0).unwrap().path();
    let (q, c) = full_form(&p, 0.0);
    assert!(sup_norm(&(q - Mat::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]))) < 1e-12);
    assert_eq!((c.kernel_dim, c.coindex, c.index, c.nullity), (2, 1, 0, 1));
    assert!(!c.regular);
}

#[test]
fn form_rejects_vanishing_corner() {
    // cos(pi/2) vanishes in the lower-right entry.
    let p = r_beta(1.0, 1.0, TAU);
    assert!(matches!(crossing_form_graph(&p, PI / 2.0), Err(Error::DNearZero { .. })));
}

#[test]
fn clm_examples() {
    assert_eq!(clm_index(&r_beta(1.0, 1.0, TAU), &opts()).unwrap().value, 2);
    assert_eq!(clm_index(&r_beta(1.0, 1.0, 3.0 * PI), &opts()).unwrap().value, 4);
    assert_eq!(clm_index(&PathFamily::shear(-1.0, 1.0).unwrap().path(), &opts()).unwrap().value, 1);
    assert_eq!(clm_index(&PathFamily::shear(1.0, 1.0).unwrap().path(), &opts()).unwrap().value, 0);
    let cz = cz_from_clm(&r_beta(1.0, 1.0, TAU), &opts()).unwrap();
    assert_eq!(cz.value, 1);
    assert!(cz.certified);
}

#[test]
fn crossings_have_consistent_inertia() {
    for p in [r_beta(1.0, 2.0, 7.0), PathFamily::shear(1.0, 2.0).unwrap().path(), r_beta(0.5, 3.0, 3.0 * PI)] {
        let r = clm_index(&p, &opts()).unwrap();
        assert!(!r.crossings.is_empty());
        for c in &r.crossings {
            assert_eq!(c.index + c.coindex + c.nullity, c.kernel_dim);
        }
    }
}

#[test]
fn path_without_crossings_has_zero_index() {
    // Strictly inside one turn, away from both ends.
    let p = r_beta(1.0, 1.0, TAU).restrict(0.3, TAU - 0.3).unwrap();
    assert!(find_crossings(&p, 1e-10).instants.is_empty());
    assert_eq!(clm_index(&p, &opts()).unwrap().value, 0);
}

#[test]
fn robbin_salamon_half_integers() {
    assert_eq!(rs_index(&PathFamily::shear(-1.0, 1.0).unwrap().path(), &opts()).unwrap().twice, 1);
    assert_eq!(rs_index(&PathFamily::shear(1.0, 1.0).unwrap().path(), &opts()).unwrap().twice, -1);
    let p = r_beta(1.0, 1.0, 3.0 * PI).restrict(0.4, 3.0 * PI - 0.4).unwrap();
    let clm = clm_index(&p, &opts()).unwrap().value;
    assert_eq!(rs_index(&p, &opts()).unwrap().twice, 2 * clm);
    assert_eq!(clm, 2);
}

#[test]
fn constant_identity_gives_minus_n() {
    for (dim, want) in [(2, -1), (4, -2)] {
        let p = SymplecticPath::constant_identity(dim, 1.0).unwrap();
        let a = cz_index_intersection(&p, &opts()).unwrap();
        let b = cz_from_clm(&p, &opts()).unwrap();
        assert_eq!((a.value, b.value), (want, want));
        assert!(a.certified && b.certified);
    }
}

#[test]
fn intersection_count_is_stable_in_epsilon() {
    let paths = [
        r_beta(1.0, 2.0, 5.0),
        PathFamily::rotation_s(3.0, 0.5, 7.0).unwrap().path(),
        PathFamily::shear(1.0, 4.0).unwrap().path(),
        r_beta(1.0, 2.0, 5.0).diamond(&PathFamily::shear(-1.0, 5.0).unwrap().path()).unwrap(),
    ];
    for p in &paths {
        let vals: Vec<i64> = [1.0, 0.5, 0.25]
            .iter()
            .map(|f| cz_intersection_raw(p, DEFAULT_EPSILON * f, DEFAULT_GRID, DEFAULT_DELTA).unwrap().0)
            .collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]), "{vals:?}");
    }
}

#[test]
fn homotopy_in_the_generator() {
    // beta T / 2 pi stays inside (0.47, 0.82) along the segment, so the endpoint
    // never becomes degenerate.
    let s0 = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
    let s1 = Mat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.5]);
    let mut vals = Vec::new();
    for l in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let s = &s0 * (1.0 - l) + &s1 * l;
        let p = ExpJsPath::new(s, 3.0).unwrap().path();
        let r = cz_index_intersection(&p, &opts()).unwrap();
        assert!(r.certified);
        vals.push(r.value);
    }
    assert_eq!(vals, vec![1; 5]);
}

#[test]
fn errors_are_reported() {
    let moved = r_beta(1.0, 1.0, TAU).restrict(0.5, 2.0).unwrap();
    assert!(matches!(cz_from_clm(&moved, &opts()), Err(Error::NonIdentityStart { .. })));
    assert!(matches!(cz_index_intersection(&moved, &opts()), Err(Error::NonIdentityStart { .. })));

    // Ends exactly at exp(eps J), which the perturbation maps back to the identity.
    let eps = DEFAULT_EPSILON;
    let j = j_matrix(1);
    let (j1, j2) = (j.clone(), j.clone());
    let p =
        SymplecticPath::new(2, eps, PathSource::ClosedForm, move |t| expm(&(&j1 * t)), move |t| &j2 * expm(&(&j2 * t)))
            .unwrap();
    assert!(matches!(cz_intersection_raw(&p, eps, 64, DEFAULT_DELTA), Err(Error::EpsilonTooLarge { .. })));
}

fn sp2(theta: f64, log_d: f64, u: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    let d = log_d.exp();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
        * Mat::from_row_slice(2, 2, &[d, 0.0, 0.0, 1.0 / d])
        * Mat::from_row_slice(2, 2, &[1.0, u, 0.0, 1.0])
}

fn family_strategy() -> impl Strategy<Value = PathFamily> {
    (0usize..4, 0.3..3.0f64, 0.3..3.0f64, 0.5..8.0f64, any::<bool>())
        .prop_map(|(kind, a1, a2, t, flip)| {
            let sign = if flip { -1.0 } else { 1.0 };
            match kind {
                0 => PathFamily::rotation_r(a1, a2, t),
                1 => PathFamily::rotation_s(a1, a2, t),
                2 => PathFamily::exp_js(a1, a2, sign, t),
                _ => PathFamily::shear(sign, t),
            }
            .unwrap()
        })
        .prop_filter("endpoint away from the lattice", |f| {
            let x = f.turns();
            f.kind == sympath::analytic::FamilyKind::Shear || (x - x.round()).abs() > 0.02
        })
}

proptest! {
    #[test]
    fn graphs_are_lagrangian(theta in -PI..PI, d in -1.5..1.5f64, u in -2.0..2.0f64) {
        let g = graph_of(&sp2(theta, d, u));
        prop_assert!(g.isotropy_residual() < 1e-12);
        prop_assert!(g.is_lagrangian(1e-10));
    }

    #[test]
    fn lemma_form_matches_general_form(kind in 0usize..2, a1 in 0.3..3.0f64, a2 in 0.3..3.0f64, turns in 1usize..4) {
        let fam = if kind == 0 {
            PathFamily::rotation_r(a1, a2, 10.0)
        } else {
            PathFamily::rotation_s(a1, a2, 10.0)
        }.unwrap();
        let t = TAU * turns as f64 / fam.beta();
        prop_assume!(t <= 10.0);
        let p = fam.path();
        let lemma = crossing_form_graph(&p, t).unwrap();
        let general = crossing_form_general(&p.eval(t), &p.deriv(t), t, 1e-8, Segment::Main);
        prop_assert_eq!((lemma.index, lemma.coindex, lemma.nullity), (general.index, general.coindex, general.nullity));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn methods_agree_with_closed_form(fam in family_strategy()) {
        let p = fam.path();
        let a = cz_index_intersection(&p, &opts()).unwrap();
        let b = cz_from_clm(&p, &opts()).unwrap();
        prop_assert!(a.certified && b.certified);
        prop_assert_eq!(a.value, analytic_cz(&fam));
        prop_assert_eq!(b.value, analytic_cz(&fam));
    }

    #[test]
    fn affine_rescaling_preserves_the_index(fam in family_strategy(), half in any::<bool>()) {
        let k = if half { 0.5 } else { 2.0 };
        let base = cz_index_intersection(&fam.path(), &opts()).unwrap();
        let scaled = cz_index_intersection(&fam.path().rescale(k).unwrap(), &opts()).unwrap();
        prop_assert_eq!(base.value, scaled.value);
    }

    #[test]
    fn diamond_is_additive(f1 in family_strategy(), f2 in family_strategy()) {
        let t = f1.t_end.min(f2.t_end);
        let p1 = f1.path().restrict(0.0, t).unwrap();
        let p2 = f2.path().restrict(0.0, t).unwrap();
        let parts = cz_index_intersection(&p1, &opts()).unwrap();
        let parts2 = cz_index_intersection(&p2, &opts()).unwrap();
        prop_assume!(parts.certified && parts2.certified);
        let sum = cz_from_clm(&p1.diamond(&p2).unwrap(), &opts()).unwrap();
        prop_assert!(sum.certified);
        prop_assert_eq!(sum.value, parts.value + parts2.value);
    }
}
