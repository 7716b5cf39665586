// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one test per criterion, each printing a PASS line when
//! its checks hold (run with `--nocapture` to see them).

mod common;

use common::{evolve_exact, random_density, random_hermitian, rng};
use dfs_control::{
    classify_critical_point, commutator, control_fields, dark_states, dfs_check,
    lyapunov_derivative, observable_for_target, preset, propagate, propagate_fixed_fields,
    spectral_decomposition, tol, CriticalPointClass, DensityMatrix, Figure, HermitianOperator,
    InitialStateParams, IntegratorSettings, ScenarioParams, StateVector, Target, Trajectory, C64,
};
use rand::rngs::StdRng;
use rand::Rng;
use rayon::prelude::*;

fn pass(id: &str, what: &str) {
    println!("acceptance: {id} {what}: PASS");
}

/// Shared integrity gate (criterion 8) applied to every accepted run.
fn assert_integrity(traj: &Trajectory, label: &str) {
    let mut prev = f64::INFINITY;
    for s in &traj.samples {
        assert!(
            (s.trace - 1.0).abs() < 1e-9,
            "{label}: trace defect {} at t = {}",
            (s.trace - 1.0).abs(),
            s.t
        );
        assert!(
            s.min_eigenvalue >= -1e-8,
            "{label}: min eigenvalue {} at t = {}",
            s.min_eigenvalue,
            s.t
        );
        assert!(
            s.lyapunov <= prev + 1e-8,
            "{label}: V increased to {} at t = {}",
            s.lyapunov,
            s.t
        );
        prev = s.lyapunov;
    }
}

#[test]
fn c01_dfs_certification() {
    // Equal detunings: the dark pair is certified with c_m = 0 and g = 0.
    let equal = ScenarioParams::default();
    let model = dfs_control::build_model(&equal).unwrap();
    let (d1, d2) = dark_states(equal.phi);
    let report = dfs_check(&[d1, d2], &model, 1e-9).unwrap();
    assert!(report.passed);
    assert!(report.invariance_residual < 1e-9);
    for ch in &report.channels {
        assert!(ch.eigenvalue.norm() < 1e-9, "c_m must vanish");
        assert!(ch.residual < 1e-9);
    }
    assert!(report.gamma_eigenvalue.abs() < 1e-9);
    assert!(report.gamma_residual < 1e-9);
    assert!(report.gamma_consistency < 1e-9);

    // The certificate is a property of the span: random re-mixes and random
    // laser angles pass as well.
    let mut rng = rng(101);
    for _ in 0..10 {
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let params = ScenarioParams {
            phi,
            ..ScenarioParams::default()
        };
        let model = dfs_control::build_model(&params).unwrap();
        let (d1, d2) = dark_states(phi);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let mix1 = StateVector::new(
            d1.amplitudes()
                .iter()
                .zip(d2.amplitudes())
                .map(|(a, b)| theta.cos() * a + theta.sin() * b)
                .collect(),
        )
        .unwrap();
        let mix2 = StateVector::new(
            d1.amplitudes()
                .iter()
                .zip(d2.amplitudes())
                .map(|(a, b)| -theta.sin() * a + theta.cos() * b)
                .collect(),
        )
        .unwrap();
        assert!(dfs_check(&[mix1, mix2], &model, 1e-9).unwrap().passed);
    }

    // Unequal detunings break condition (1) and only condition (1).
    let unequal = ScenarioParams {
        delta1: 1.0,
        delta2: 3.0,
        ..ScenarioParams::default()
    };
    let model = dfs_control::build_model(&unequal).unwrap();
    let (d1, d2) = dark_states(unequal.phi);
    let report = dfs_check(&[d1, d2], &model, 1e-9).unwrap();
    assert!(!report.passed);
    assert!(report.invariance_residual > 1e-9);
    for ch in &report.channels {
        assert!(ch.residual < 1e-9);
    }
    assert!(report.gamma_residual < 1e-9);

    pass("C1", "DFS certification");
}

#[test]
fn c02_descent_law() {
    let (model, config, _, _) = preset(Figure::Fig3).assemble().unwrap();
    let mut rng = rng(102);
    for _ in 0..200 {
        let rho = random_density(&mut rng, 4);
        let fields = control_fields(&config, &model, &rho).unwrap();
        assert!(!fields.saturated);
        let vdot = lyapunov_derivative(&config, &model, &rho, &fields).unwrap();
        assert!(vdot <= 1e-12, "dV/dt = {vdot} must not be positive");
        // Independent recomputation of -sum_j kappa_j |Tr([A, H_j] rho)|^2.
        let mut want = 0.0;
        for (j, h) in model.controls().iter().enumerate() {
            if j == config.cancellation_index() {
                continue;
            }
            let comm = commutator(config.observable().matrix(), h.matrix()).unwrap();
            let prod = &comm * rho.matrix();
            want -= config.kappa(j) * prod.trace().norm_sqr();
        }
        assert!(
            (vdot - want).abs() <= 1e-10,
            "descent identity violated: {vdot} vs {want}"
        );
    }
    pass("C2", "descent law on 200 randomized states");
}

#[test]
fn c03_dfs_capture_without_third_control() {
    // Without the third control the state reaches the DFS but cannot be
    // steered to a definite dark state.
    let p = preset(Figure::Fig2);
    let (model, config, rho0, probes) = p.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &p.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig2");
    let last = traj.last();
    assert!(
        last.fid_dfs >= 0.98,
        "terminal DFS fidelity {} below 0.98",
        last.fid_dfs
    );
    assert!(
        last.fid_target < 0.95,
        "terminal target fidelity {} should stay below 0.95",
        last.fid_target
    );
    pass("C3", "DFS capture with f3 off (fig2)");
}

#[test]
fn c04_target_capture_grid() {
    // Full grid over the initial-state angles: the feedback pulls every
    // point onto the target dark state. The preset's 60-unit horizon covers
    // the slowest corners, which clear 0.95 around t = 45.
    let p = preset(Figure::Fig3);
    let grid: Vec<(usize, usize)> = (0..11).flat_map(|i| (0..11).map(move |j| (i, j))).collect();
    let finals: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&(i, j)| {
            let beta1 = 0.2 + 1.1 * i as f64 / 10.0;
            let beta2 = 0.2 + 1.1 * j as f64 / 10.0;
            let mut point = p.clone();
            point.init = InitialStateParams {
                beta1,
                beta2,
                beta3: p.init.beta3,
            };
            let (model, config, rho0, probes) = point.assemble().unwrap();
            let traj = propagate(&model, &config, &rho0, &point.integrator, &probes).unwrap();
            assert_integrity(&traj, "fig3 grid");
            let last = traj.last();
            (last.fid_target, last.fid_dfs)
        })
        .collect();
    for (k, (fid_target, fid_dfs)) in finals.iter().enumerate() {
        assert!(
            *fid_target >= 0.95,
            "grid point {k}: terminal target fidelity {fid_target} below 0.95"
        );
        assert!(
            *fid_dfs >= 0.98,
            "grid point {k}: terminal DFS fidelity {fid_dfs} below 0.98"
        );
    }

    // LaSalle convergence at the preset's own initial point: the recorded
    // state commutes with the observable once the mixture-line ring-down
    // has died out (t = 100).
    let mut point = p.clone();
    point.integrator.t_final = 100.0;
    let (model, config, rho0, probes) = point.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &point.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig3 preset point");
    assert!(
        traj.last().commutator_norm < 1e-3,
        "invariant-set distance {} at the horizon",
        traj.last().commutator_norm
    );
    pass("C4", "target capture on the 11x11 grid (fig3)");
}

#[test]
fn c05_isolated_target_needs_matched_coupling() {
    // Target D2 from beta1 = 0. The standard third control couples the
    // excited level to the target itself, which parks the state in a dark
    // mixture far from |D2>; a coupling matched to the unwanted dark state
    // empties it instead. Terminal fidelity under the feedback law saturates
    // at 1 - 0.41/kappa3 for any horizon, so the 99% demonstration runs in
    // the large-strength regime that figure requires (kappa3 = 45); the
    // deficient standard coupling keeps its caption strength kappa3 = 15.
    let p = preset(Figure::Fig4);
    let (model, config, rho0, probes) = p.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &p.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig4 standard");
    let standard = traj.last().fid_target;
    assert!(
        standard < 0.9,
        "standard coupling should underperform, got {standard}"
    );

    // Same strength, swapped coupling: clear qualitative repair already.
    let mut variant = p.clone();
    variant.scenario.use_h3_variant = true;
    let (model, config, rho0, probes) = variant.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &variant.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig4 variant");
    let swapped_same_strength = traj.last().fid_target;
    assert!(
        swapped_same_strength > standard + 0.3,
        "variant coupling should clearly beat the standard one at equal strength: \
         {swapped_same_strength} vs {standard}"
    );

    // Almost-perfect capture: strong variant coupling, run to its plateau.
    let mut strong = variant.clone();
    strong.kappa3 = Some(45.0);
    strong.integrator = IntegratorSettings {
        t_final: 200.0,
        ..strong.integrator
    };
    let (model, config, rho0, probes) = strong.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &strong.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig4 strong variant");
    let swapped = traj.last().fid_target;
    assert!(
        swapped >= 0.985,
        "variant coupling should reach 0.99 within 0.005, got {swapped}"
    );
    assert!(
        swapped <= 0.995,
        "variant plateau {swapped} should sit at 0.99 within 0.005"
    );
    pass("C5", "isolated-target coupling variant (fig4)");
}

#[test]
fn c06_fidelity_grows_with_control_strength() {
    let p = preset(Figure::Fig5);
    let kappas: Vec<f64> = (0..8).map(|k| 1.0 + 2.0 * k as f64).collect();
    let finals: Vec<f64> = kappas
        .par_iter()
        .map(|&k3| {
            let mut point = p.clone();
            point.kappa3 = Some(k3);
            let (model, config, rho0, probes) = point.assemble().unwrap();
            let traj = propagate(&model, &config, &rho0, &point.integrator, &probes).unwrap();
            assert_integrity(&traj, "fig5 sweep");
            traj.last().fid_target
        })
        .collect();
    for w in finals.windows(2) {
        assert!(
            w[1] >= w[0] - 0.02,
            "fidelity dropped beyond slack along kappa3: {finals:?}"
        );
    }
    assert!(
        finals.last().unwrap() > finals.first().unwrap(),
        "kappa3 = 15 must beat kappa3 = 1: {finals:?}"
    );
    pass("C6", "fidelity vs control strength (fig5)");
}

#[test]
fn c07_cancellation_field_idle_and_controls_die_out() {
    // The swap and pump fields ring down on the slow mixture-line approach
    // and pass 1e-2 near t = 100; the regression extends the horizon and
    // checks the last 10% of the run. The cancellation field must read zero
    // at every sample throughout (equal decay rates null its numerator).
    let mut p = preset(Figure::Fig6);
    p.integrator = IntegratorSettings {
        t_final: 200.0,
        ..p.integrator
    };
    let (model, config, rho0, probes) = p.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &p.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig6");
    let tail_start = 0.9 * p.integrator.t_final;
    let mut tail_max = 0.0f64;
    for s in &traj.samples {
        assert!(
            s.fields.values[0].abs() < 1e-8,
            "f1 = {} at t = {} (equal decay rates keep it at zero)",
            s.fields.values[0],
            s.t
        );
        if s.t >= tail_start {
            tail_max = tail_max.max(s.fields.values[1].abs());
            tail_max = tail_max.max(s.fields.values[2].abs());
        }
    }
    assert!(
        tail_max < 1e-2,
        "controls should tend to zero at convergence, tail max {tail_max}"
    );
    pass("C7", "cancellation field idle, controls vanish (fig6)");
}

#[test]
fn c08_numerical_integrity() {
    let p = preset(Figure::Fig3);
    let (model, config, rho0, probes) = p.assemble().unwrap();
    let traj = propagate(&model, &config, &rho0, &p.integrator, &probes).unwrap();
    assert_integrity(&traj, "fig3 integrity");
    assert!(
        traj.max_trace_drift_rate < tol::TRACE_DRIFT_RATE,
        "pre-renormalization drift rate {}",
        traj.max_trace_drift_rate
    );
    assert_eq!(traj.saturation_events, 0);

    // The drift monitor stays honest with renormalization disabled.
    let settings = IntegratorSettings {
        renormalize: false,
        t_final: 5.0,
        ..p.integrator
    };
    let traj = propagate(&model, &config, &rho0, &settings, &probes).unwrap();
    assert_integrity(&traj, "fig3 no renorm");
    assert!(traj.max_trace_drift_rate < tol::TRACE_DRIFT_RATE);
    pass("C8", "trace, positivity and descent integrity");
}

#[test]
fn c09_superoperator_oracle_equivalence() {
    let p = preset(Figure::Fig3);
    let (model, config, rho0, _) = p.assemble().unwrap();
    let fields = control_fields(&config, &model, &rho0).unwrap().values;

    // Single frozen-field step against the exact exponential.
    let one = propagate_fixed_fields(&model, &fields, &rho0, 1e-3, 1e-3).unwrap();
    let exact = evolve_exact(&model, &fields, rho0.matrix(), 1e-3);
    let single_err = (one.matrix() - &exact).frobenius_norm();
    assert!(single_err <= 1e-10, "single-step error {single_err}");

    // Horizon t = 1 at the default step.
    let rk = propagate_fixed_fields(&model, &fields, &rho0, 1e-3, 1.0).unwrap();
    let exact = evolve_exact(&model, &fields, rho0.matrix(), 1.0);
    let err = (rk.matrix() - &exact).frobenius_norm();
    assert!(err <= 1e-6, "frozen-field error {err} at t = 1");

    // Order-4 signature: halving the step cuts the error by >= 12x.
    let coarse = propagate_fixed_fields(&model, &fields, &rho0, 4e-3, 1.0).unwrap();
    let fine = propagate_fixed_fields(&model, &fields, &rho0, 2e-3, 1.0).unwrap();
    let e_coarse = (coarse.matrix() - &exact).frobenius_norm();
    let e_fine = (fine.matrix() - &exact).frobenius_norm();
    assert!(
        e_coarse / e_fine >= 12.0,
        "convergence ratio {} (coarse {e_coarse}, fine {e_fine})",
        e_coarse / e_fine
    );
    pass("C9", "RK4 vs superoperator exponential");
}

fn brute_force_class(a: &HermitianOperator, index: usize, rng: &mut StdRng) -> CriticalPointClass {
    let dec = spectral_decomposition(a);
    let n = dec.eigenvalues.len();
    let base = &dec.eigenvectors[index];
    let v0 = dec.eigenvalues[index];
    let mut up = false;
    let mut down = false;
    let probe = |coeffs: &[C64], up: &mut bool, down: &mut bool| {
        let mut amps: Vec<C64> = base.amplitudes().to_vec();
        for (alpha, c) in coeffs.iter().enumerate() {
            for (amp, b) in amps.iter_mut().zip(dec.eigenvectors[alpha].amplitudes()) {
                *amp += c * b;
            }
        }
        let psi = StateVector::normalized(amps).unwrap();
        let rho = DensityMatrix::pure(&psi);
        let v = dfs_control::expectation(a, rho.matrix()).unwrap();
        if v - v0 > 1e-12 {
            *up = true;
        }
        if v - v0 < -1e-12 {
            *down = true;
        }
    };
    for alpha in 0..n {
        if alpha == index {
            continue;
        }
        let mut coeffs = vec![C64::ZERO; n];
        coeffs[alpha] = C64::new(1e-2, 0.0);
        probe(&coeffs, &mut up, &mut down);
    }
    for _ in 0..500 {
        let coeffs: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.random_range(-1e-2..1e-2), rng.random_range(-1e-2..1e-2)))
            .collect();
        probe(&coeffs, &mut up, &mut down);
    }
    match (up, down) {
        (true, true) => CriticalPointClass::Saddle,
        (true, false) => CriticalPointClass::Minimum,
        (false, true) => CriticalPointClass::Maximum,
        (false, false) => CriticalPointClass::Minimum,
    }
}

#[test]
fn c10_critical_point_classifier() {
    let mut rng = rng(110);
    let mut done = 0;
    while done < 20 {
        let a = random_hermitian(&mut rng, 4);
        let dec = spectral_decomposition(&a);
        let gap = dec
            .eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if gap < 1e-3 {
            continue;
        }
        for index in 0..4 {
            let got = classify_critical_point(&a, index).unwrap();
            let want = brute_force_class(&a, index, &mut rng);
            assert_eq!(got, want, "matrix {done}, index {index}");
        }
        done += 1;
    }

    // The scenario observable: target dark state at the minimum, the other
    // dark state at the maximum.
    let a = observable_for_target(Target::D1, ScenarioParams::default().phi);
    assert_eq!(
        classify_critical_point(&a, 0).unwrap(),
        CriticalPointClass::Minimum
    );
    assert_eq!(
        classify_critical_point(&a, 3).unwrap(),
        CriticalPointClass::Maximum
    );
    pass("C10", "critical-point classifier vs variation oracle");
}
