use proptest::prelude::*;

use wallcross::algebra::{rat, window_reduce, Laurent, LinearMap};
use wallcross::kgit::{check_invariants, full_report, WallComputation, WallModel};
use wallcross::perverse::GgmDiagram;

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-8i64..=8, -5i64..=5), 0..7).prop_map(Laurent::from_terms)
}

/// `∏ (1 - t^a)` for weights of a single sign, with its degree span.
fn koszul_modulus() -> impl Strategy<Value = (Laurent, i64)> {
    (prop::collection::vec(1i64..=4, 1..4), any::<bool>()).prop_map(|(ws, neg)| {
        let s = if neg { -1 } else { 1 };
        let q = ws.iter().fold(Laurent::one(), |acc, &a| {
            &acc * &Laurent::from_terms([(0, 1), (s * a, -1)])
        });
        (q, ws.iter().sum())
    })
}

fn square_matrix() -> impl Strategy<Value = LinearMap> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * n)
            .prop_map(move |d| LinearMap::from_ints(n, n, &d).unwrap())
    })
}

fn ggm() -> impl Strategy<Value = GgmDiagram> {
    (0usize..=3, 0usize..=3).prop_flat_map(|(d0, d1)| {
        (
            prop::collection::vec(-2i64..=2, d0 * d1),
            prop::collection::vec(-2i64..=2, d0 * d1),
        )
            .prop_map(move |(u, v)| {
                GgmDiagram::new(
                    d0,
                    d1,
                    LinearMap::from_ints(d0, d1, &u).unwrap(),
                    LinearMap::from_ints(d1, d0, &v).unwrap(),
                )
                .unwrap()
            })
    })
}

fn valid_ggm() -> impl Strategy<Value = GgmDiagram> {
    ggm().prop_filter("vu + 1 invertible", GgmDiagram::validate)
}

/// Zero-sum weight vectors with both signs present, `n <= 8`, `|a| <= 4`.
fn wall_weights() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 2..=8).prop_filter("simple balanced wall", |w| {
        w.iter().sum::<i64>() == 0 && w.iter().any(|&a| a > 0) && w.iter().any(|&a| a < 0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn window_reduce_leaves_multiple_of_modulus(p in laurent(), (q, w) in koszul_modulus(), lo in -5i64..=5) {
        let r = window_reduce(&p, &q, lo, w).unwrap();
        prop_assert!(r.supported_in(lo, lo + w - 1));
        prop_assert!((&p - &r).div_exact(&q).is_some());
    }

    #[test]
    fn window_reduce_linear_and_idempotent(
        p in laurent(), p2 in laurent(), c in -3i64..=3, (q, w) in koszul_modulus(), lo in -5i64..=5
    ) {
        let r = window_reduce(&p, &q, lo, w).unwrap();
        let r2 = window_reduce(&p2, &q, lo, w).unwrap();
        let combo = &p + &p2.scale(&rat(c));
        prop_assert_eq!(window_reduce(&combo, &q, lo, w).unwrap(), &r + &r2.scale(&rat(c)));
        prop_assert_eq!(window_reduce(&r, &q, lo, w).unwrap(), r);
    }

    #[test]
    fn invertibility_rank_and_kernel_agree(m in square_matrix()) {
        let n = m.rows();
        let full = m.rank() == n;
        prop_assert_eq!(full, m.kernel_basis().is_empty());
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), n);
        match m.invert() {
            Ok(inv) => {
                prop_assert!(full);
                prop_assert!(inv.compose(&m).unwrap().is_identity());
            }
            Err(_) => prop_assert!(!full),
        }
    }

    #[test]
    fn vu_and_uv_invertibility_agree(g in ggm()) {
        prop_assert_eq!(g.validate(), g.variation_monodromy().is_invertible());
    }

    #[test]
    fn quiver_skeleton_round_trip(g in valid_ggm()) {
        let k = g.to_ks().unwrap();
        prop_assert!(k.validate());
        let (back, cert) = k.to_ggm().unwrap();
        prop_assert_eq!(&back, &g);
        cert.verify(&k, &back.to_ks().unwrap()).unwrap();
        let (mm, mp) = k.monodromies().unwrap();
        let psi = k.transfer_plus_to_minus();
        prop_assert!(psi.compose(&mp).unwrap().same_matrix(&mm.compose(&psi).unwrap()));
        prop_assert!(mm.same_matrix(&g.monodromy()));
    }

    #[test]
    fn defect_is_additive(a in valid_ggm(), b in valid_ggm()) {
        let sum = a.direct_sum(&b).unwrap();
        let lhs = sum.defect_report().unwrap();
        let ra = a.defect_report().unwrap();
        let rb = b.defect_report().unwrap();
        prop_assert_eq!(lhs.vanishing_dim, ra.vanishing_dim + rb.vanishing_dim);
        prop_assert_eq!(lhs.nearby_rank_drop, ra.nearby_rank_drop + rb.nearby_rank_drop);
        prop_assert_eq!(lhs.skyscraper_count, ra.skyscraper_count + rb.skyscraper_count);
        prop_assert!(ra.nearby_rank_drop <= a.d0());
    }

    #[test]
    fn walls_satisfy_all_invariants(w in wall_weights(), k0 in -3i64..=3) {
        let model = WallModel::new(w, k0).unwrap();
        let comp = WallComputation::new(&model).unwrap();
        prop_assert_eq!(check_invariants(&model, &comp), vec![]);
    }

    #[test]
    fn report_ignores_order_and_window_base(w in wall_weights(), k0 in -3i64..=3, k1 in -3i64..=3, seed in any::<u64>()) {
        let base = full_report(&WallModel::new(w.clone(), k0).unwrap()).unwrap();
        let mut perm = w.clone();
        // cheap deterministic shuffle
        let len = perm.len();
        for i in 0..len {
            let j = (seed.rotate_left(i as u32) as usize) % len;
            perm.swap(i, j);
        }
        let mut permuted = full_report(&WallModel::new(perm, k0).unwrap()).unwrap();
        permuted.weights = base.weights.clone();
        prop_assert_eq!(&permuted, &base);

        let shifted = full_report(&WallModel::new(w, k1).unwrap()).unwrap();
        prop_assert_eq!(shifted.ic_primary, base.ic_primary);
        prop_assert_eq!(shifted.ic_dual, base.ic_dual);
        prop_assert_eq!(shifted.defect, base.defect);
        prop_assert!(shifted.m_plus.same_matrix(&base.m_plus));
    }
}

#[test]
fn fifty_random_monodromies_give_ic_sheaves() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let m = wallcross::selfcheck::random_invertible(&mut rng);
        let g = GgmDiagram::from_monodromy(&m).unwrap();
        assert!(g.validate());
        assert!(g.monodromy().same_matrix(&m));
        assert_eq!(g.defect_report().unwrap().skyscraper_count, 0);
    }
}
