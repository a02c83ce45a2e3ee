//! Property tests for the structural invariants: eigendecomposition
//! round-trips, solve residuals, covariance positivity, shrinkage monotonics.

use autoreg_core::autoreg::effective_params;
use autoreg_core::estimation::{build_stats, zero_prehistory};
use autoreg_core::experiments::{misalignment, mismatch_floor_db, ImpulseResponse};
use autoreg_core::linalg::{solve_regularized, sym_eig, SymmetricMatrix};
use autoreg_core::wiener::{to_eigen_domain, w_norm_sq};
use proptest::prelude::*;

fn psd_matrix(order: usize) -> impl Strategy<Value = SymmetricMatrix> {
    prop::collection::vec(-1.0f64..1.0, order * order).prop_map(move |g| {
        SymmetricMatrix::from_fn(order, |i, j| {
            (0..order)
                .map(|k| g[i * order + k] * g[j * order + k])
                .sum()
        })
        .unwrap()
    })
}

proptest! {
    #[test]
    fn eigen_reconstructs_psd_input(
        order in 1usize..8,
        seed_entries in prop::collection::vec(-1.0f64..1.0, 64),
    ) {
        let a = SymmetricMatrix::from_fn(order, |i, j| {
            (0..order)
                .map(|k| seed_entries[i * 8 + k] * seed_entries[j * 8 + k])
                .sum()
        })
        .unwrap();
        let eig = sym_eig(&a).unwrap();
        prop_assert!(eig.orthonormality_defect() <= 1e-10);
        let lambda = eig.eigenvalues();
        for w in lambda.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(lambda.iter().all(|&l| l >= 0.0));
        let rec = eig.reconstruct();
        let scale = a.max_abs().max(1.0);
        for i in 0..order {
            for j in 0..order {
                prop_assert!((rec.get(i, j) - a.get(i, j)).abs() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn regularized_solve_meets_residual_contract(
        a in psd_matrix(6),
        b in prop::collection::vec(-2.0f64..2.0, 6),
        alpha in 1e-6f64..10.0,
    ) {
        let x = solve_regularized(&a, alpha, &b).unwrap();
        let ax = a.mul_vec(&x);
        let res: f64 = (0..6)
            .map(|i| {
                let r = b[i] - ax[i] - alpha * x[i];
                r * r
            })
            .sum::<f64>()
            .sqrt();
        let b_norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(res <= 1e-10 * b_norm.max(1e-300));
    }

    #[test]
    fn sample_covariance_is_psd(
        x in prop::collection::vec(-3.0f64..3.0, 24),
        d in prop::collection::vec(-3.0f64..3.0, 24),
        l in 1usize..6,
        probe in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let stats = build_stats(&zero_prehistory(x, d, l).unwrap()).unwrap();
        let v = &probe[..l];
        prop_assert!(stats.r_x().quadratic_form(v) >= -1e-12);
    }

    #[test]
    fn effective_params_bounded_and_monotone(
        lambda in prop::collection::vec(0.0f64..10.0, 1..8),
        alpha_lo in 1e-6f64..1.0,
        ratio in 1.0f64..1e4,
    ) {
        let alpha_hi = alpha_lo * ratio;
        let g_lo = effective_params(&lambda, alpha_lo);
        let g_hi = effective_params(&lambda, alpha_hi);
        prop_assert!(g_lo >= 0.0 && g_lo <= lambda.len() as f64);
        prop_assert!(g_hi <= g_lo + 1e-12);
    }

    #[test]
    fn filter_norm_shrinks_with_alpha(
        x in prop::collection::vec(-1.0f64..1.0, 32),
        d in prop::collection::vec(-1.0f64..1.0, 32),
        alpha_lo in 1e-5f64..1.0,
        ratio in 1.0f64..1e3,
    ) {
        let stats = build_stats(&zero_prehistory(x, d, 4).unwrap()).unwrap();
        let es = to_eigen_domain(&stats).unwrap();
        let lo = w_norm_sq(&es, alpha_lo).unwrap();
        let hi = w_norm_sq(&es, alpha_lo * ratio).unwrap();
        prop_assert!(hi <= lo + 1e-12 * lo.max(1.0));
    }

    #[test]
    fn misplaced_energy_floors_short_filters(
        h_taps in prop::collection::vec(-1.0f64..1.0, 5),
        w in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        prop_assume!(h_taps.iter().any(|&v| v != 0.0));
        let h = ImpulseResponse::new(h_taps).unwrap();
        let floor = mismatch_floor_db(&h, 3);
        let m = misalignment(&w, &h).unwrap();
        prop_assert!(m >= floor - 1e-9);
    }
}
