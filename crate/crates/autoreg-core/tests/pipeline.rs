//! End-to-end flows across modules: simulate a system, estimate the
//! regularization, and check that every piece agrees with its slower twin.

use autoreg_core::autoreg::{gm_step_matrix, log_evidence, variance_updates};
use autoreg_core::estimation::build_stats;
use autoreg_core::experiments::{
    misalignment, simulate, synth_impulse, ARConfig, ScenarioConfig,
};
use autoreg_core::wiener::{posterior_covariance, solve_wiener, to_eigen_domain};
use autoreg_core::autoreg::estimate_alpha;

fn scenario(n: usize, snr_db: f64) -> ScenarioConfig {
    let l_star = 24usize;
    ScenarioConfig {
        n,
        l: l_star,
        impulse: synth_impulse(l_star, l_star as f64 / 4.0, 31).unwrap(),
        snr_db,
        realizations: 1,
        alpha0: 0.5,
        iters: 5,
        seed: 2024,
        ar: ARConfig::new(0.9, 0).unwrap(),
    }
}

#[test]
fn matched_identification_end_to_end() {
    let scn = scenario(1024, 20.0);
    let sig = simulate(&scn).unwrap();
    let stats = build_stats(&sig).unwrap();
    let es = to_eigen_domain(&stats).unwrap();

    let trace = estimate_alpha(&es, scn.alpha0, scn.iters, 1e-6).unwrap();
    assert!(trace.final_alpha > 0.0 && trace.final_alpha.is_finite());
    for state in &trace.steps {
        assert!(state.alpha > 0.0);
        assert!(state.gamma > 0.0 && state.gamma < scn.l as f64);
        assert!(state.v_e > 0.0 && state.v_w > 0.0);
    }

    let sol = solve_wiener(&es, trace.final_alpha).unwrap();
    let m = misalignment(&sol.w_hat, &scn.impulse).unwrap();
    assert!(m < -10.0, "matched estimate misaligned at {m} dB");
}

#[test]
fn iteration_forms_agree_on_simulated_data() {
    let scn = scenario(512, 10.0);
    let sig = simulate(&scn).unwrap();
    let stats = build_stats(&sig).unwrap();
    let es = to_eigen_domain(&stats).unwrap();

    let mut a_eigen = scn.alpha0;
    let mut a_matrix = scn.alpha0;
    for _ in 0..10 {
        let (ne, se) = autoreg_core::autoreg::gm_step_eigen(&es, a_eigen).unwrap();
        let (nm, sm) = gm_step_matrix(&stats, a_matrix).unwrap();
        assert!((ne - nm).abs() <= 1e-8 * ne.max(nm));
        assert!((se.gamma - sm.gamma).abs() <= 1e-8 * se.gamma);
        a_eigen = ne;
        a_matrix = nm;
    }
}

#[test]
fn converged_variances_locally_maximize_evidence() {
    let scn = scenario(1024, 20.0);
    let sig = simulate(&scn).unwrap();
    let stats = build_stats(&sig).unwrap();
    let es = to_eigen_domain(&stats).unwrap();

    let trace = estimate_alpha(&es, scn.alpha0, 400, 1e-14).unwrap();
    let star = trace.final_alpha;
    let w = solve_wiener(&es, star).unwrap();
    let hp = variance_updates(&es, star, &w.w_hat).unwrap();
    let at = log_evidence(&es, hp.v_e, hp.v_w).unwrap();
    for scale in [0.9, 1.1] {
        assert!(log_evidence(&es, hp.v_e * scale, hp.v_w).unwrap() <= at);
        assert!(log_evidence(&es, hp.v_e, hp.v_w * scale).unwrap() <= at);
    }
}

#[test]
fn posterior_shrinks_with_data_volume() {
    let small = scenario(256, 20.0);
    let large = scenario(2048, 20.0);
    let v_e = 0.05;
    let alpha = 0.1;
    let trace_of = |scn: &ScenarioConfig| {
        let stats = build_stats(&simulate(scn).unwrap()).unwrap();
        posterior_covariance(&stats, alpha, v_e).unwrap().k.trace()
    };
    let t_small = trace_of(&small);
    let t_large = trace_of(&large);
    assert!(t_small > 0.0 && t_large > 0.0);
    // Same noise level, eight times the data: posterior mass shrinks.
    assert!(t_large < t_small);
}
