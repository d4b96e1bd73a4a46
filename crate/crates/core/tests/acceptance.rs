//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sympath::analytic::{analytic_clm, ExpJsPath, FamilyKind, PathFamily};
use sympath::kepler::{
    conservation_residuals, elements_from, homotopy_invariance_check, monodromy_and_stability, solve_eccentric_anomaly,
    Model, StabilityReport, DEFAULT_STEPS, KEPLER_TOL,
};
use sympath::linalg::{sup_norm, Mat};
use sympath::maslov::{clm_index, cz_from_clm, cz_index_intersection, IndexOptions};
use sympath::symcore::{from_cyl, to_cyl, CylCoords, SymplecticMatrix};
use sympath::SymplecticPath;

const ECCS: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];
const K_MAX: usize = 5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, budget: Option<Duration>, elapsed: Duration, out: Outcome) -> bool {
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let pass = out.pass && in_time;
    let budget_note = match budget {
        Some(b) if !in_time => format!(", over budget {:.0?}", b),
        _ => String::new(),
    };
    println!("{} [{id}] {name}: {} ({:.2?}{budget_note})", if pass { "PASS" } else { "FAIL" }, out.detail, elapsed);
    pass
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed())
}

/// Both CZ routes on a path: (intersection value, crossing-form value, both certified).
fn cz_both(p: &SymplecticPath, opts: &IndexOptions) -> Option<(i64, i64, bool)> {
    let a = cz_index_intersection(p, opts).ok()?;
    let b = cz_from_clm(p, opts).ok()?;
    Some((a.value, b.value, a.certified && b.certified))
}

fn shears() -> Outcome {
    let opts = IndexOptions::default();
    let mut bad = Vec::new();
    for t_end in [1.0, PI, 10.0] {
        for (f, cz, clm) in [(1.0, -1, 0), (-1.0, 0, 1)] {
            let p = PathFamily::shear(f, t_end).unwrap().path();
            let ok = match (cz_both(&p, &opts), clm_index(&p, &opts)) {
                (Some((a, b, cert)), Ok(c)) => a == cz && b == cz && c.value == clm && cert && c.certified,
                _ => false,
            };
            if !ok {
                bad.push(format!("f={f} T={t_end}"));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("6 cases, failures {bad:?}") }
}

fn rotation_grid() -> Outcome {
    let opts = IndexOptions::default();
    let vals = [0.5, 1.0, 2.0, 3.0];
    let ts = [PI / 2.0, PI, TAU, 3.0 * PI, 7.0];
    let mut cases = 0;
    let mut bad = Vec::new();
    for a1 in vals {
        for a2 in vals {
            for t_end in ts {
                for fam in
                    [PathFamily::rotation_r(a1, a2, t_end).unwrap(), PathFamily::rotation_s(a1, a2, t_end).unwrap()]
                {
                    cases += 1;
                    let p = fam.path();
                    let want = analytic_clm(&fam);
                    let ok = match (clm_index(&p, &opts), cz_index_intersection(&p, &opts)) {
                        (Ok(c), Ok(z)) => c.value == want && z.value + 1 == want && c.certified && z.certified,
                        _ => false,
                    };
                    if !ok {
                        bad.push(format!("{} a1={a1} a2={a2} T={t_end:.4}", fam.kind));
                    }
                }
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{cases} cases, {} mismatches {bad:?}", bad.len()) }
}

fn kepler_reports() -> Vec<(f64, Result<StabilityReport, String>)> {
    ECCS.iter()
        .map(|&e| {
            let r = elements_from(1.0, e, 1.0, 1.0)
                .and_then(|el| monodromy_and_stability(&el, K_MAX, DEFAULT_STEPS, Model::Hamiltonian))
                .map_err(|err| err.to_string());
            (e, r)
        })
        .collect()
}

fn kepler_indices(reports: &[(f64, Result<StabilityReport, String>)]) -> Outcome {
    let mut bad = Vec::new();
    for (e, r) in reports {
        match r {
            Ok(rep) => {
                for k in 1..=K_MAX {
                    let want = 2 * (k as i64 - 1);
                    if rep.morse_indices.get(&k) != Some(&want) {
                        bad.push(format!("e={e} k={k} got {:?}", rep.morse_indices.get(&k)));
                    }
                }
                if !rep.certified {
                    bad.push(format!("e={e} uncertified"));
                }
            }
            Err(err) => bad.push(format!("e={e}: {err}")),
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{} (ecc, k) points, failures {bad:?}", ECCS.len() * K_MAX) }
}

fn monodromy_degeneracy(reports: &[(f64, Result<StabilityReport, String>)]) -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    for (e, r) in reports {
        let Ok(rep) = r else {
            bad.push(format!("e={e} missing report"));
            continue;
        };
        let dist = rep.multipliers.iter().map(|l| (l[0] - 1.0).hypot(l[1])).fold(0.0, f64::max);
        worst = worst.max(dist);
        let ok = rep.multipliers.len() == 4
            && dist <= 1e-6
            && rep.nullity == 3
            && rep.rank_m_minus_i == 1
            && rep.elliptic
            && rep.spectrally_stable
            && !rep.linearly_stable;
        if !ok {
            bad.push(format!(
                "e={e} dist={dist:.2e} nullity={} rank={} flags=({}, {}, {})",
                rep.nullity, rep.rank_m_minus_i, rep.elliptic, rep.spectrally_stable, rep.linearly_stable
            ));
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("max |lambda-1| = {worst:.2e}, failures {bad:?}") }
}

fn homotopy() -> Outcome {
    let el = elements_from(1.0, 0.3, 1.0, 1.0).unwrap();
    match homotopy_invariance_check(&el, &[0.0, 0.25, 0.5, 0.75, 1.0], DEFAULT_STEPS) {
        Ok(h) => {
            let idx: Vec<i64> = h.rows.iter().map(|r| r.index).collect();
            let nul: Vec<usize> = h.rows.iter().map(|r| r.nullity).collect();
            Outcome {
                pass: h.consistent,
                detail: format!("indices {idx:?}, nullities {nul:?}, offending {:?}", h.offending),
            }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

/// A random analytic family with `T` kept away from the lattice; `T` is drawn
/// unless given.
fn random_family(rng: &mut ChaCha8Rng, t_end: Option<f64>) -> PathFamily {
    loop {
        let a1 = rng.gen_range(0.3..3.0);
        let a2 = rng.gen_range(0.3..3.0);
        let t_end = t_end.unwrap_or_else(|| rng.gen_range(0.5..8.0));
        let fam = match rng.gen_range(0..4) {
            0 => PathFamily::rotation_r(a1, a2, t_end),
            1 => PathFamily::rotation_s(a1, a2, t_end),
            2 => PathFamily::exp_js(a1, a2, if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, t_end),
            _ => PathFamily::shear(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, t_end),
        }
        .unwrap();
        if fam.kind == FamilyKind::Shear || fam.turns().fract().min(1.0 - fam.turns().fract()) > 0.02 {
            return fam;
        }
    }
}

fn additivity_and_scaling() -> Outcome {
    let opts = IndexOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    for i in 0..50 {
        let f1 = random_family(&mut rng, None);
        let f2 = random_family(&mut rng, Some(f1.t_end));
        let p = f1.path().diamond(&f2.path()).unwrap();
        let want = cz_of(&f1.path(), &opts).zip(cz_of(&f2.path(), &opts)).map(|(a, b)| a + b);
        match (cz_both(&p, &opts), want) {
            (Some((a, b, true)), Some(w)) if a == w && b == w => {}
            (got, w) => bad.push(format!("pair {i}: {} x {} got {got:?} want {w:?}", f1.kind, f2.kind)),
        }
    }
    let mut scale_cases = 0;
    for i in 0..20 {
        let fam = random_family(&mut rng, None);
        let base = cz_of(&fam.path(), &opts);
        for k in [2.0, 0.5] {
            scale_cases += 1;
            let scaled = fam.path().rescale(k).ok().and_then(|p| cz_of(&p, &opts));
            if base.is_none() || scaled != base {
                bad.push(format!("scale {i} k={k}: {} base {base:?} scaled {scaled:?}", fam.kind));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("50 pairs, {scale_cases} rescalings, failures {bad:?}") }
}

/// Certified intersection-method CZ index.
fn cz_of(p: &SymplecticPath, opts: &IndexOptions) -> Option<i64> {
    cz_index_intersection(p, opts).ok().filter(|r| r.certified).map(|r| r.value)
}

fn oracle_equivalence() -> Outcome {
    let opts = IndexOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    let mut n = 0;
    while n < 100 {
        let (l1, l2) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let th: f64 = rng.gen_range(0.0..PI);
        let (s, c) = th.sin_cos();
        let q = Mat::from_row_slice(2, 2, &[c, -s, s, c]);
        let smat = &q * Mat::from_row_slice(2, 2, &[sign * l1, 0.0, 0.0, sign * l2]) * q.transpose();
        let smat = (&smat + smat.transpose()) * 0.5;
        let t_end = rng.gen_range(0.5..10.0);
        let x = t_end * (l1 * l2).sqrt() / TAU;
        if (x - x.round()).abs() < 1e-3 {
            continue;
        }
        n += 1;
        let path = ExpJsPath::new(smat, t_end).unwrap().path();
        match (cz_index_intersection(&path, &opts), clm_index(&path, &opts)) {
            (Ok(a), Ok(b)) if a.certified && b.certified && a.value == b.value - 1 => {}
            (a, b) => bad.push(format!(
                "case {n}: intersection {:?} crossing forms {:?}",
                a.map(|r| (r.value, r.certified)),
                b.map(|r| (r.value, r.certified))
            )),
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{n} paths, {} mismatches {bad:?}", bad.len()) }
}

fn random_sp2(rng: &mut ChaCha8Rng) -> Mat {
    let th: f64 = rng.gen_range(-PI..PI);
    let d: f64 = rng.gen_range(-1.5f64..1.5).exp();
    let u: f64 = rng.gen_range(-2.0..2.0);
    let (s, c) = th.sin_cos();
    let rot = Mat::from_row_slice(2, 2, &[c, -s, s, c]);
    let diag = Mat::from_row_slice(2, 2, &[d, 0.0, 0.0, 1.0 / d]);
    let shear = Mat::from_row_slice(2, 2, &[1.0, u, 0.0, 1.0]);
    rot * diag * shear
}

fn hygiene(reports: &[(f64, Result<StabilityReport, String>)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let drift = reports.iter().filter_map(|(_, r)| r.as_ref().ok()).map(|r| r.integrator.drift).fold(0.0, f64::max);
    let drift_ok = reports.iter().all(|(_, r)| r.is_ok()) && drift <= 1e-8;

    let mut conservation = 0.0_f64;
    for e in [0.0, 0.2, 0.4, 0.6, 0.8, 0.9] {
        let el = elements_from(1.3, e, 0.7, 2.0).unwrap();
        let (en, am) = conservation_residuals(&el, 256);
        conservation = conservation.max(en).max(am);
    }

    let mut solver = 0.0_f64;
    let mut solver_ok = true;
    for _ in 0..2000 {
        let m: f64 = rng.gen_range(-20.0..20.0);
        let e: f64 = rng.gen_range(0.0..0.99);
        match solve_eccentric_anomaly(m, e, KEPLER_TOL) {
            Ok(ea) => solver = solver.max((ea - e * ea.sin() - m).abs()),
            Err(_) => solver_ok = false,
        }
    }

    let mut cyl = 0.0_f64;
    for _ in 0..2000 {
        let m = random_sp2(&mut rng);
        let sm = SymplecticMatrix::new(m.clone()).unwrap();
        let c = to_cyl(&sm).unwrap();
        cyl = cyl.max(sup_norm(&(from_cyl(&c).unwrap().into_inner() - &m)) / sup_norm(&m));
        let c0 = CylCoords { r: rng.gen_range(0.1..5.0), theta: rng.gen_range(0.0..TAU), z: rng.gen_range(-3.0..3.0) };
        let back = to_cyl(&from_cyl(&c0).unwrap()).unwrap();
        let dth = (back.theta - c0.theta).abs();
        let dth = dth.min(TAU - dth);
        cyl = cyl.max((back.r - c0.r).abs()).max(dth).max((back.z - c0.z).abs());
    }

    let pass = drift_ok && conservation <= 1e-9 && solver_ok && solver <= 1e-14 && cyl <= 1e-12;
    Outcome {
        pass,
        detail: format!(
            "drift {drift:.2e}, conservation {conservation:.2e}, kepler residual {solver:.2e}, cylindrical {cyl:.2e}"
        ),
    }
}

fn main() -> ExitCode {
    let mut all = true;

    let (o, dt) = timed(shears);
    all &= report(1, "shear indices", Some(Duration::from_secs(1)), dt, o);

    let (o, dt) = timed(rotation_grid);
    all &= report(2, "rotation floor formulas", Some(Duration::from_secs(10)), dt, o);

    let (reports, dt_kepler) = timed(kepler_reports);
    let (o, dt) = timed(|| kepler_indices(&reports));
    all &= report(3, "kepler morse indices", Some(Duration::from_secs(60)), dt_kepler + dt, o);

    let (o, dt) = timed(|| monodromy_degeneracy(&reports));
    all &= report(4, "monodromy degeneracy", None, dt, o);

    let (o, dt) = timed(homotopy);
    all &= report(5, "homotopy invariance", Some(Duration::from_secs(30)), dt, o);

    let (o, dt) = timed(additivity_and_scaling);
    all &= report(6, "diamond additivity and scale invariance", Some(Duration::from_secs(20)), dt, o);

    let (o, dt) = timed(oracle_equivalence);
    all &= report(7, "intersection vs crossing-form oracle", Some(Duration::from_secs(30)), dt, o);

    let (o, dt) = timed(|| hygiene(&reports));
    all &= report(8, "numerical hygiene", None, dt, o);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
