//! Acceptance gate. Every check is an exact equality; prints one line per
//! criterion and exits nonzero if any fails.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wallcross::algebra::{rat, Laurent, LinearMap};
use wallcross::kgit::{
    assemble_kp, assemble_pk, full_report, ic_criterion, iota_maps, parity_check, spherical_data,
    structure_maps, Side, WallModel,
};
use wallcross::perverse::{GgmDiagram, KsDiagram};
use wallcross::selfcheck::{
    example_families, random_invertible, random_valid_ggm, random_weights, run_self_check,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn m(rows: usize, cols: usize, data: &[i64]) -> LinearMap {
    LinearMap::from_ints(rows, cols, data).unwrap()
}

fn flop_weights(d: usize) -> Vec<i64> {
    let mut w = vec![1; d];
    w.extend(vec![-1; d]);
    w
}

fn podd_weights(n: usize) -> Vec<i64> {
    let mut w = vec![1; 2 * n];
    w.push(-2 * n as i64);
    w
}

/// Hand oracle for local P^1: the two congruences used to reduce into the
/// windows, each certified by an explicit multiple of the modulus, and the
/// twist assembled from them on the basis {1, t} of K(X//+).
fn local_p1_oracle() -> Check {
    let t = |k| Laurent::t_pow(k);
    let q_minus = &Laurent::from_terms([(0, 1), (1, -1)]) * &Laurent::from_terms([(0, 1), (1, -1)]);
    let q_plus = Laurent::from_terms([(0, 1), (-2, -1)]);
    // t ≡ 2 - t^-1 (mod (1-t)^2)
    let lhs = &t(1) - &Laurent::from_terms([(0, 2), (-1, -1)]);
    ensure!(
        lhs == &t(-1) * &q_minus,
        "t - (2 - t^-1) is not t^-1 (1-t)^2"
    );
    // t^-1 ≡ t (mod 1 - t^-2)
    let lhs = &t(-1) - &t(1);
    ensure!(lhs == &(-&t(1)) * &q_plus, "t^-1 - t is not -t (1 - t^-2)");
    // flop-flop on {1, t}: 1 stays; t -> 2 - t^-1 -> 2 - t
    let oracle = m(2, 2, &[1, 2, 0, -1]);
    let s =
        spherical_data(&WallModel::new(vec![1, 1, -2], -1).unwrap()).map_err(|e| e.to_string())?;
    ensure!(
        s.m_plus.same_matrix(&oracle),
        "engine m+ {:?} != oracle",
        s.m_plus.row_vectors()
    );
    Ok(())
}

fn criterion_1() -> Check {
    local_p1_oracle()?;
    let model = WallModel::new(vec![1, 1, -2], -1).map_err(|e| e.to_string())?;
    ensure!(model.eta() == 2, "eta = {}", model.eta());
    let b = model.bases();
    ensure!(b.c_basis.len() == 3, "dim K(C) = {}", b.c_basis.len());
    ensure!(
        b.g_minus_basis.len() == 2 && b.g_plus_basis.len() == 2,
        "dim K(X//±) wrong"
    );
    ensure!(b.c_basis == vec![-1, 0, 1], "c basis {:?}", b.c_basis);
    let iota = iota_maps(&model).map_err(|e| e.to_string())?;
    ensure!(
        iota.iota_minus.same_matrix(&m(3, 1, &[1, -2, 1])),
        "ι-(1) wrong"
    );
    ensure!(
        iota.iota_plus.same_matrix(&m(3, 1, &[-1, 0, 1])),
        "ι+(1) wrong"
    );
    let r = full_report(&model).map_err(|e| e.to_string())?;
    ensure!(
        r.bases.g_plus_basis == vec![0, 1],
        "K(X//+) basis {:?}",
        r.bases.g_plus_basis
    );
    ensure!(r.m_plus.same_matrix(&m(2, 2, &[1, 2, 0, -1])), "m+ wrong");
    ensure!(r.ic_primary.rank == 1, "rk(m-1) = {}", r.ic_primary.rank);
    ensure!(
        r.ic_primary.saturated && r.defect == 0,
        "not saturated / IC"
    );
    Ok(())
}

fn criterion_2() -> Check {
    let model = WallModel::new(vec![1, 1, -1, -1], -1).map_err(|e| e.to_string())?;
    let r = full_report(&model).map_err(|e| e.to_string())?;
    ensure!(r.m_plus.is_identity(), "m+ is not the identity");
    ensure!(r.matrices.k_s.is_zero(), "K(S) != 0");
    ensure!(!r.ic_primary.saturated, "conifold reported IC");
    ensure!(r.defect == 1, "defect = {}", r.defect);
    Ok(())
}

fn criterion_3() -> Check {
    for n in 1..=3 {
        let model = WallModel::new(podd_weights(n), 0).map_err(|e| e.to_string())?;
        ensure!(
            parity_check(&model).prediction,
            "n = {n}: parity predicts nothing"
        );
        let v = ic_criterion(&model).map_err(|e| e.to_string())?;
        ensure!(
            v.saturated,
            "n = {n}: not saturated ({} < {})",
            v.rank,
            v.bound
        );
    }
    Ok(())
}

fn criterion_4() -> Check {
    for d in 1..=4usize {
        let model = WallModel::new(flop_weights(d), 0).map_err(|e| e.to_string())?;
        let s = spherical_data(&model).map_err(|e| e.to_string())?;
        ensure!(s.k_s.is_zero(), "d = {d}: K(S) != 0");
        let v = ic_criterion(&model).map_err(|e| e.to_string())?;
        ensure!(!v.saturated, "d = {d}: saturated");
        let sign = if d % 2 == 0 { 1 } else { -1 };
        let lhs = model.koszul_class(Side::Minus, 0);
        let rhs = &Laurent::monomial(d as i64, rat(sign)) * &model.koszul_class(Side::Plus, 0);
        ensure!(lhs == rhs, "d = {d}: {lhs} != {rhs}");
    }
    Ok(())
}

fn criterion_5() -> Check {
    let report = run_self_check(200, 7);
    ensure!(report.trials == 200, "ran {} trials", report.trials);
    let failed: Vec<String> = report
        .families
        .iter()
        .filter(|f| !f.passed())
        .map(|f| format!("{}: {:?}", f.name, f.failures))
        .collect();
    ensure!(failed.is_empty(), "{}", failed.join("; "));
    Ok(())
}

fn conjugacy(k: &KsDiagram) -> bool {
    let Ok((mm, mp)) = k.monodromies() else {
        return false;
    };
    let psi = k.transfer_plus_to_minus();
    psi.compose(&mp)
        .unwrap()
        .same_matrix(&mm.compose(&psi).unwrap())
}

fn criterion_6() -> Check {
    let sky = GgmDiagram::skyscraper()
        .defect_report()
        .map_err(|e| e.to_string())?;
    ensure!(
        sky.skyscraper_count == 1,
        "skyscraper defect {}",
        sky.skyscraper_count
    );

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let mono = random_invertible(&mut rng);
        let g = GgmDiagram::from_monodromy(&mono).map_err(|e| e.to_string())?;
        let d = g.defect_report().map_err(|e| e.to_string())?;
        ensure!(
            d.skyscraper_count == 0,
            "monodromy #{i}: defect {}",
            d.skyscraper_count
        );
    }

    for i in 0..50 {
        let a = random_valid_ggm(&mut rng);
        let b = random_valid_ggm(&mut rng);
        let sum = a
            .direct_sum(&b)
            .map_err(|e| e.to_string())?
            .defect_report()
            .map_err(|e| e.to_string())?;
        let parts = a.defect_report().unwrap() + b.defect_report().unwrap();
        ensure!(sum == parts, "pair #{i}: {sum:?} != {parts:?}");
    }

    let mut walls: Vec<(Vec<i64>, i64)> = example_families()
        .into_iter()
        .map(|(_, w, k)| (w, k))
        .collect();
    walls.extend((0..50).map(|_| (random_weights(&mut rng), 0)));
    for (w, k0) in walls {
        let model = WallModel::new(w.clone(), k0).map_err(|e| e.to_string())?;
        let kp = assemble_kp(&model).map_err(|e| e.to_string())?;
        let pk = assemble_pk(&model).map_err(|e| e.to_string())?;
        ensure!(
            conjugacy(&kp) && conjugacy(&pk),
            "conjugacy fails for {w:?}"
        );
        // the K(X//±) structure maps are the arrows of the first diagram
        let res = structure_maps(&model).map_err(|e| e.to_string())?;
        ensure!(
            kp.g_plus() == &res.res_plus,
            "diagram arrows drifted for {w:?}"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 local P^1 matrices and IC verdict", criterion_1),
        ("2 resolved conifold is not IC", criterion_2),
        ("3 local P^odd family saturates", criterion_3),
        (
            "4 standard flops: K(S) = 0 and Koszul sign identity",
            criterion_4,
        ),
        ("5 self-check, 200 random walls, seed 7", criterion_5),
        (
            "6 perverse-disk defects and monodromy conjugacy",
            criterion_6,
        ),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS  criterion {name} ({ms} ms)"),
            Err(msg) => {
                failures += 1;
                println!("FAIL  criterion {name} ({ms} ms): {msg}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
