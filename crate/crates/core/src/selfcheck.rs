//! Randomised invariant suites over all three layers, with a fixed seed.
//!
//! Inputs for every trial are drawn up front from a single seeded stream,
//! then evaluated through [`crate::batch::map`], so results do not depend on
//! scheduling.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{rat, window_reduce, Laurent, LinearMap};
use crate::batch;
use crate::kgit::{check_invariants, InvariantFamily, WallComputation, WallModel};
use crate::perverse::GgmDiagram;

/// Named weight vectors from the worked examples: local P^1, the resolved
/// conifold, the local P^odd orbifold family and standard flops.
pub fn example_families() -> Vec<(String, Vec<i64>, i64)> {
    let mut out = vec![
        ("local_p1".to_string(), vec![1, 1, -2], -1),
        ("conifold".to_string(), vec![1, 1, -1, -1], -1),
    ];
    for n in 1..=3 {
        let mut w = vec![1; 2 * n];
        w.push(-2 * n as i64);
        out.push((format!("local_podd_n{n}"), w, 0));
    }
    for d in 1..=4 {
        let mut w = vec![1; d];
        w.extend(vec![-1; d]);
        out.push((format!("standard_flop_d{d}"), w, 0));
    }
    out
}

/// A weight vector with `2 <= n <= 8` entries in `[-4, 4]`, summing to zero
/// with at least one entry of each sign.
pub fn random_weights<R: Rng>(rng: &mut R) -> Vec<i64> {
    loop {
        let n = rng.random_range(2..=8);
        let w: Vec<i64> = (0..n).map(|_| rng.random_range(-4..=4)).collect();
        if w.iter().sum::<i64>() == 0 && w.iter().any(|&a| a > 0) && w.iter().any(|&a| a < 0) {
            return w;
        }
    }
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> LinearMap {
    let data: Vec<i64> = (0..rows * cols)
        .map(|_| rng.random_range(-bound..=bound))
        .collect();
    LinearMap::from_ints(rows, cols, &data).expect("sized data")
}

/// Random quiver data with `d0, d1 <= 3`; not necessarily valid.
pub fn random_ggm<R: Rng>(rng: &mut R) -> GgmDiagram {
    let d0 = rng.random_range(0..=3);
    let d1 = rng.random_range(0..=3);
    let u = random_matrix(rng, d0, d1, 2);
    let v = random_matrix(rng, d1, d0, 2);
    GgmDiagram::new(d0, d1, u, v).expect("sized maps")
}

pub fn random_valid_ggm<R: Rng>(rng: &mut R) -> GgmDiagram {
    loop {
        let g = random_ggm(rng);
        if g.validate() {
            return g;
        }
    }
}

/// Random invertible integer matrix of size `1..=5`.
pub fn random_invertible<R: Rng>(rng: &mut R) -> LinearMap {
    let n = rng.random_range(1..=5);
    loop {
        let m = random_matrix(rng, n, n, 3);
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_laurent<R: Rng>(rng: &mut R) -> Laurent {
    let terms = rng.random_range(0..=6);
    Laurent::from_terms((0..terms).map(|_| (rng.random_range(-8..=8), rng.random_range(-5..=5))))
}

/// Koszul modulus `∏ (1 - t^a)` for a few random weights of one sign.
fn random_modulus<R: Rng>(rng: &mut R) -> (Laurent, i64) {
    let k = rng.random_range(1..=3);
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    let mut q = Laurent::one();
    let mut width = 0;
    for _ in 0..k {
        let a: i64 = rng.random_range(1..=4);
        q = &q * &Laurent::from_terms([(0, 1), (sign * a, -1)]);
        width += a;
    }
    (q, width)
}

struct Trial {
    weights: Vec<i64>,
    window_base: i64,
    alt_base: i64,
    permuted: Vec<i64>,
    p: Laurent,
    p2: Laurent,
    scale: i64,
    modulus: (Laurent, i64),
    lo: i64,
    square: LinearMap,
    ggm_any: GgmDiagram,
    ggm_a: GgmDiagram,
    ggm_b: GgmDiagram,
    monodromy: LinearMap,
}

impl Trial {
    fn draw<R: Rng>(rng: &mut R, weights: Vec<i64>, window_base: i64) -> Self {
        let alt_base = rng.random_range(-3..=3);
        let mut permuted = weights.clone();
        permuted.shuffle(rng);
        let n = rng.random_range(1..=5);
        Self {
            weights,
            window_base,
            alt_base,
            permuted,
            p: random_laurent(rng),
            p2: random_laurent(rng),
            scale: rng.random_range(-3..=3),
            modulus: random_modulus(rng),
            lo: rng.random_range(-5..=5),
            square: random_matrix(rng, n, n, 3),
            ggm_any: random_ggm(rng),
            ggm_a: random_valid_ggm(rng),
            ggm_b: random_valid_ggm(rng),
            monodromy: random_invertible(rng),
        }
    }
}

pub const ALGEBRA_FAMILIES: [&str; 3] = [
    "algebra.window_reduce_divisibility",
    "algebra.window_reduce_linear_idempotent",
    "algebra.rank_inverse_consistency",
];

pub const PERVERSE_FAMILIES: [&str; 4] = [
    "perverse.ggm_validity_symmetry",
    "perverse.ggm_ks_round_trip",
    "perverse.defect_additivity",
    "perverse.ic_from_monodromy",
];

pub const CROSS_MODEL_FAMILIES: [&str; 2] = [
    "kgit.window_base_independence",
    "kgit.permutation_invariance",
];

/// Every family name, in report order.
pub fn family_names() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = ALGEBRA_FAMILIES.to_vec();
    out.extend(PERVERSE_FAMILIES);
    out.extend(InvariantFamily::ALL.iter().map(|f| f.name()));
    out.extend(CROSS_MODEL_FAMILIES);
    out
}

type Findings = Vec<(&'static str, String)>;

fn check_algebra(t: &Trial, out: &mut Findings) {
    let (q, width) = &t.modulus;
    let reduce = |p: &Laurent| window_reduce(p, q, t.lo, *width);
    match reduce(&t.p) {
        Ok(r) => {
            let inside = r.supported_in(t.lo, t.lo + width - 1);
            let divisible = (&t.p - &r).div_exact(q).is_some();
            if !inside || !divisible {
                out.push((
                    ALGEBRA_FAMILIES[0],
                    format!("p = {}, q = {q}, lo = {}: r = {r}", t.p, t.lo),
                ));
            }
            let combo = &t.p + &t.p2.scale(&rat(t.scale));
            let linear = match (reduce(&t.p2), reduce(&combo)) {
                (Ok(r2), Ok(rc)) => rc == &r + &r2.scale(&rat(t.scale)),
                _ => false,
            };
            let idempotent = reduce(&r).map(|rr| rr == r).unwrap_or(false);
            if !linear || !idempotent {
                out.push((
                    ALGEBRA_FAMILIES[1],
                    format!("p = {}, p2 = {}, q = {q}, lo = {}", t.p, t.p2, t.lo),
                ));
            }
        }
        Err(e) => out.push((ALGEBRA_FAMILIES[0], format!("q = {q}: {e}"))),
    }

    let m = &t.square;
    let n = m.rows();
    let rank_full = m.rank() == n;
    let kernel_empty = m.kernel_basis().is_empty();
    let inverse_ok = match m.invert() {
        Ok(inv) => inv.compose(m).map(|p| p.is_identity()).unwrap_or(false),
        Err(_) => false,
    };
    let rank_nullity = m.rank() + m.kernel_basis().len() == n;
    if rank_full != kernel_empty || rank_full != inverse_ok || !rank_nullity {
        out.push((ALGEBRA_FAMILIES[2], format!("matrix {:?}", m.row_vectors())));
    }
}

fn check_perverse(t: &Trial, out: &mut Findings) {
    let g = &t.ggm_any;
    if g.validate() != g.variation_monodromy().is_invertible() {
        out.push((
            PERVERSE_FAMILIES[0],
            format!("u = {:?}, v = {:?}", g.u(), g.v()),
        ));
    }

    for g in [&t.ggm_a, &t.ggm_b] {
        let ok = g
            .to_ks()
            .and_then(|k| {
                let valid = k.validate();
                let (back, _) = k.to_ggm()?;
                let (mm, mp) = k.monodromies()?;
                let psi = k.transfer_plus_to_minus();
                let conj = psi.compose(&mp)?.same_matrix(&mm.compose(&psi)?);
                Ok(valid && conj && back == *g)
            })
            .unwrap_or(false);
        if !ok {
            out.push((
                PERVERSE_FAMILIES[1],
                format!("u = {:?}, v = {:?}", g.u(), g.v()),
            ));
        }
    }

    let additive = (|| {
        let sum = t.ggm_a.direct_sum(&t.ggm_b)?;
        let lhs = sum.defect_report()?;
        let rhs = t.ggm_a.defect_report()? + t.ggm_b.defect_report()?;
        Ok::<_, crate::Error>(lhs == rhs && sum.validate())
    })()
    .unwrap_or(false);
    if !additive {
        out.push((
            PERVERSE_FAMILIES[2],
            "defect not additive on a random pair".to_string(),
        ));
    }

    let ic = GgmDiagram::from_monodromy(&t.monodromy)
        .and_then(|g| {
            let r = g.defect_report()?;
            Ok(r.skyscraper_count == 0 && g.monodromy().same_matrix(&t.monodromy))
        })
        .unwrap_or(false);
    if !ic {
        out.push((
            PERVERSE_FAMILIES[3],
            format!("m = {:?}", t.monodromy.row_vectors()),
        ));
    }
}

fn check_kgit(t: &Trial, out: &mut Findings) {
    let ctx = format!("weights {:?}, k0 = {}", t.weights, t.window_base);
    let model = match WallModel::new(t.weights.clone(), t.window_base) {
        Ok(m) => m,
        Err(e) => {
            out.push((
                "kgit.dimension_ledger",
                format!("{ctx}: model rejected: {e}"),
            ));
            return;
        }
    };
    let base = match WallComputation::new(&model) {
        Ok(comp) => {
            for v in check_invariants(&model, &comp) {
                out.push((v.family.name(), format!("{ctx}: {}", v.detail)));
            }
            Ok(comp.into_report(&model))
        }
        Err(e) => {
            out.push(("kgit.dimension_ledger", format!("{ctx}: {e}")));
            Err(e)
        }
    };

    // the variants only need to agree with the checked base report
    let unchecked = |w: Vec<i64>, k0: i64| {
        WallModel::new(w, k0).and_then(|m| Ok(WallComputation::new(&m)?.into_report(&m)))
    };
    let shifted = unchecked(t.weights.clone(), t.alt_base);
    let permuted = unchecked(t.permuted.clone(), t.window_base);
    match (&base, &shifted) {
        (Ok(a), Ok(b)) => {
            let same = a.ic_primary == b.ic_primary
                && a.ic_dual == b.ic_dual
                && a.parity == b.parity
                && a.defect == b.defect
                && a.m_prime == b.m_prime
                && a.m_plus.same_matrix(&b.m_plus)
                && a.matrices.k_s.same_matrix(&b.matrices.k_s);
            if !same {
                out.push((
                    CROSS_MODEL_FAMILIES[0],
                    format!("{ctx} vs k0 = {}", t.alt_base),
                ));
            }
        }
        _ => out.push((CROSS_MODEL_FAMILIES[0], format!("{ctx}: report failed"))),
    }
    match (&base, &permuted) {
        (Ok(a), Ok(b)) => {
            let mut b = b.clone();
            b.weights = a.weights.clone();
            if *a != b {
                out.push((
                    CROSS_MODEL_FAMILIES[1],
                    format!("{ctx} vs {:?}", t.permuted),
                ));
            }
        }
        _ => out.push((CROSS_MODEL_FAMILIES[1], format!("{ctx}: report failed"))),
    }
}

fn run_trial(t: &Trial) -> Findings {
    let mut out = Vec::new();
    check_algebra(t, &mut out);
    check_perverse(t, &mut out);
    check_kgit(t, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl FamilyOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub trials: usize,
    pub seed: u64,
    pub families: Vec<FamilyOutcome>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyOutcome::passed)
    }

    pub fn render_text(&self) -> String {
        let mut s = format!(
            "self-check: {} random trials, seed {}\n",
            self.trials, self.seed
        );
        for f in &self.families {
            let tag = if f.passed() { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} {} ({} cases)\n", f.name, f.cases));
            for msg in &f.failures {
                s.push_str(&format!("  violation: {msg}\n"));
            }
        }
        let failed = self.families.iter().filter(|f| !f.passed()).count();
        if failed == 0 {
            s.push_str(&format!(
                "all {} invariant families passed\n",
                self.families.len()
            ));
        } else {
            s.push_str(&format!("{failed} invariant families FAILED\n"));
        }
        s
    }
}

/// Runs every invariant family on the bundled example walls plus `trials`
/// random ones drawn from `seed`.
pub fn run_self_check(trials: usize, seed: u64) -> SelfCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs: Vec<Trial> = example_families()
        .into_iter()
        .map(|(_, w, k0)| Trial::draw(&mut rng, w, k0))
        .collect();
    for _ in 0..trials {
        let w = random_weights(&mut rng);
        let k0 = rng.random_range(-3..=3);
        inputs.push(Trial::draw(&mut rng, w, k0));
    }

    let findings = batch::map(&inputs, run_trial);
    let mut by_family: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (name, msg) in findings.into_iter().flatten() {
        by_family.entry(name).or_default().push(msg);
    }
    let cases = inputs.len();
    let families = family_names()
        .into_iter()
        .map(|name| FamilyOutcome {
            name: name.to_string(),
            cases,
            failures: by_family.remove(name).unwrap_or_default(),
        })
        .collect();
    SelfCheckReport {
        trials,
        seed,
        families,
    }
}
