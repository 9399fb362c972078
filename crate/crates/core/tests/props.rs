//! Property tests for the algebraic invariants: skewness and independence
//! preservation, the group law, classification symmetry, projection
//! idempotence, rank-nullity and float/exact rank agreement.

use nilsoliton_core::kernel::{self, expm::expm, SubspaceBasis};
use nilsoliton_core::mat::{vecops, Mat};
use nilsoliton_core::scalar::{Rational, Scalar};
use nilsoliton_core::tuple::{
    classify_type, group_act, lie_act, sample_gaussian, valid_type, SkewTuple,
};
use proptest::prelude::*;

fn small_mat(n: usize) -> impl Strategy<Value = Mat<f64>> {
    prop::collection::vec(-1.5f64..1.5, n * n)
        .prop_map(move |data| Mat::from_vec(n, n, data))
}

/// Invertible matrices via the exponential map.
fn invertible_mat(n: usize) -> impl Strategy<Value = Mat<f64>> {
    small_mat(n).prop_map(|m| expm(&m.scale(&0.5)))
}

fn orthogonal_mat(n: usize) -> impl Strategy<Value = Mat<f64>> {
    small_mat(n).prop_map(|m| expm(&m.sub(&m.transpose()).scale(&0.5)))
}

fn tuple_2_4() -> impl Strategy<Value = SkewTuple<f64>> {
    any::<u64>().prop_map(|seed| sample_gaussian::<f64>(2, 4, seed, 1e-10).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_act_preserves_skewness_and_independence(
        c in tuple_2_4(),
        g in invertible_mat(4),
        h in invertible_mat(2),
    ) {
        let moved = group_act(&g, &h, &c, 1e-10).unwrap();
        prop_assert!(moved.skewness_residual() <= 1e-12 * (1.0 + moved.norm()));
        prop_assert_eq!(moved.independent(), c.independent());
    }

    #[test]
    fn group_action_composes(
        c in tuple_2_4(),
        g1 in invertible_mat(4),
        h1 in invertible_mat(2),
        g2 in invertible_mat(4),
        h2 in invertible_mat(2),
    ) {
        let twice = group_act(&g1, &h1, &group_act(&g2, &h2, &c, 1e-10).unwrap(), 1e-10).unwrap();
        let once = group_act(&g1.matmul(&g2), &h1.matmul(&h2), &c, 1e-10).unwrap();
        let scale = once.norm().max(1.0);
        prop_assert!(twice.distance(&once) <= 1e-10 * scale);
    }

    #[test]
    fn lie_act_output_is_skew_and_linear(
        c in tuple_2_4(),
        x in small_mat(4),
        y in small_mat(2),
        lambda in -2.0f64..2.0,
    ) {
        let out = lie_act(&x, &y, &c).unwrap();
        for m in &out {
            prop_assert!(m.add(&m.transpose()).frob() < 1e-12 * (1.0 + m.frob()));
        }
        let scaled = lie_act(&x.scale(&lambda), &y.scale(&lambda), &c).unwrap();
        for (a, b) in scaled.iter().zip(&out) {
            prop_assert!(a.sub(&b.scale(&lambda)).frob() < 1e-10);
        }
    }

    #[test]
    fn classification_is_complement_symmetric(q in 2usize..=10, p_raw in 1usize..=45) {
        let dim = q * (q - 1) / 2;
        prop_assume!(p_raw <= dim);
        let p = p_raw;
        let comp = dim - p;
        prop_assume!(comp >= 1);
        prop_assert!(valid_type(p, q));
        let a = classify_type(p, q).unwrap();
        let b = classify_type(comp, q).unwrap();
        prop_assert_eq!(a.exceptional, b.exceptional);
    }

    #[test]
    fn float_nullspace_vectors_are_annihilated(
        rows in 1usize..6,
        cols in 1usize..6,
        seed in any::<u32>(),
    ) {
        // random low-ish rank matrix: outer product structure plus noise-free
        let data: Vec<f64> = (0..rows * cols)
            .map(|k| {
                let mixed = (seed as u64)
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add((k as u64).wrapping_mul(1442695040888963407));
                (mixed >> 33) as f64 / 2f64.powi(31) - 0.5
            })
            .collect();
        let a = Mat::from_vec(rows, cols, data);
        let ns = kernel::nullspace(&a, 1e-10);
        let a_norm = a.frob().max(1.0);
        for v in ns.vectors() {
            let av = a.matvec(v);
            prop_assert!(vecops::norm_f64(&av) <= 1e-10 * a_norm);
        }
        prop_assert_eq!(kernel::rank(&a, 1e-10) + ns.rank(), cols);
    }

    #[test]
    fn exact_rank_nullity_and_mode_agreement(
        rows in 1usize..5,
        cols in 1usize..5,
        entries in prop::collection::vec(-6i64..=6, 25),
    ) {
        let take = rows * cols;
        prop_assume!(entries.len() >= take);
        let rat = Mat::from_vec(
            rows,
            cols,
            entries[..take].iter().map(|&e| Rational::from_ratio(e, 3)).collect(),
        );
        let exact_ns = kernel::nullspace(&rat, 0.0);
        let exact_rank = kernel::rank(&rat, 0.0);
        prop_assert_eq!(exact_rank + exact_ns.rank(), cols);
        for v in exact_ns.vectors() {
            let av = rat.matvec(v);
            prop_assert!(av.iter().all(|e| e.negligible(0.0)));
        }
        // float companion sees the same rank
        let fl = rat.map(|v| v.approx_f64());
        prop_assert_eq!(kernel::rank(&fl, 1e-10), exact_rank);
    }

    #[test]
    fn projection_is_idempotent_and_shrinking(
        span in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 5), 1..4),
        v in prop::collection::vec(-2.0f64..2.0, 5),
    ) {
        let b = SubspaceBasis::from_spanning(5, &span, 1e-10);
        let (proj, res) = b.project(&v).unwrap();
        prop_assert!(res <= vecops::norm_f64(&v) + 1e-12);
        let (proj2, res2) = b.project(&proj).unwrap();
        prop_assert!(res2 <= 1e-12 * (1.0 + vecops::norm_f64(&proj)));
        prop_assert!(vecops::norm_f64(&vecops::sub(&proj, &proj2)) <= 1e-10);
    }

    #[test]
    fn moment_map_is_orthogonally_equivariant(
        c in tuple_2_4(),
        k in orthogonal_mat(4),
        l in orthogonal_mat(2),
    ) {
        use nilsoliton_core::flow::moment_map;
        prop_assume!(c.norm() > 1e-3);
        let (mq, mp) = moment_map(&c).unwrap();
        let moved = group_act(&k, &l, &c, 1e-10).unwrap();
        let (mq2, mp2) = moment_map(&moved).unwrap();
        let expect_q = k.matmul(&mq).matmul(&k.transpose());
        let expect_p = l.matmul(&mp).matmul(&l.transpose());
        let scale = 1.0 + c.norm_sq();
        prop_assert!(mq2.sub(&expect_q).frob() <= 1e-9 * scale);
        prop_assert!(mp2.sub(&expect_p).frob() <= 1e-9 * scale);
    }
}
