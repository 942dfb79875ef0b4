use std::f64::consts::FRAC_PI_2;

use mhd_couette::linear::{
    mode_rhs, p1_sign_coefficient, solve_mode, solve_mode_with, strong_viscosity_reference,
    strong_viscosity_reference_with, sweep_growth, LinearModel, ModeIndex, ModeState, PhysParams,
    ResistiveReading, SolveOptions, TEndRule,
};
use mhd_couette::oracle::{integrate, rk4_mode};
use mhd_couette::Error;
use proptest::prelude::*;

fn params(nu: f64, kappa: f64, alpha: f64) -> PhysParams<f64> {
    PhysParams::new(nu, kappa, alpha).unwrap()
}

fn mode(k: i64, xi: f64) -> ModeIndex<f64> {
    ModeIndex::new(k, xi).unwrap()
}

#[test]
fn zero_mode_index_is_rejected_with_constraint_name() {
    let err = ModeIndex::new(0, 1.0_f64).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(ref m) if m.contains("k ≠ 0")));
}

#[test]
fn rhs_examples() {
    let p = params(0.3, 0.2, 1.7);
    assert_eq!(
        mode_rhs(&ModeState::new(0.0, 0.0, 4.0), &mode(3, 1.0), &p),
        (0.0, 0.0)
    );

    // only coupling survives at s = 0 without dissipation
    let (d1, d2) = mode_rhs(
        &ModeState::new(1.0, 0.0, 2.5),
        &mode(1, 2.5),
        &params(0.0, 0.0, 1.0),
    );
    assert!(d1.abs() < 1e-16 && (d2 - 1.0).abs() < 1e-16);

    let alpha = 1.3;
    let (d1, d2) = mode_rhs(
        &ModeState::new(1.0, 1.0, 2.0),
        &mode(1, 0.0),
        &params(0.1, 0.01, alpha),
    );
    assert!((d1 - (-0.4 - alpha - 0.5)).abs() < 1e-14);
    assert!((d2 - (0.4 + alpha - 0.05)).abs() < 1e-14);
}

#[test]
fn circular_movement_rotates_by_alpha_k_t() {
    let opts = SolveOptions {
        model: LinearModel::CircularMovement,
        ..SolveOptions::with_tol(1e-10)
    };
    let r = solve_mode_with(
        &mode(1, 0.0),
        &params(0.0, 0.0, 1.0),
        &ModeState::new(1.0, 0.0, 0.0),
        FRAC_PI_2,
        &opts,
    )
    .unwrap();
    assert!(r.final_state.p1.abs() < 1e-10);
    assert!((r.final_state.p2 - 1.0).abs() < 1e-10);

    // angle αkt with k = 3, α = 0.7
    let (alpha, k, t) = (0.7, 3, 2.0);
    let r = solve_mode_with(
        &mode(k, 5.0),
        &params(0.0, 0.0, alpha),
        &ModeState::new(0.6, 0.8, 0.0),
        t,
        &opts,
    )
    .unwrap();
    let th = alpha * k as f64 * t;
    let expect = (0.6 * th.cos() - 0.8 * th.sin(), 0.6 * th.sin() + 0.8 * th.cos());
    assert!((r.final_state.p1 - expect.0).abs() < 1e-9);
    assert!((r.final_state.p2 - expect.1).abs() < 1e-9);
}

#[test]
fn zero_data_is_invariant() {
    let r = solve_mode(
        &mode(2, -3.0),
        &params(1e-2, 1e-6, 1.0),
        &ModeState::new(0.0, 0.0, 0.0),
        100.0,
        1e-8,
    )
    .unwrap();
    assert_eq!(r.final_state.norm(), 0.0);
    assert_eq!(r.growth_factor, 1.0);
}

#[test]
fn growth_factor_is_at_least_one() {
    for &(k, xi) in &[(1, 0.0), (2, 30.0), (-3, 4.0), (5, -50.0)] {
        let r = solve_mode(
            &mode(k, xi),
            &params(1e-2, 1e-5, 1.0),
            &ModeState::new(0.3, -0.9, 0.0),
            300.0,
            1e-8,
        )
        .unwrap();
        assert!(r.growth_factor >= 1.0);
        assert!(r.t_peak >= 0.0 && r.t_peak <= 300.0);
    }
}

#[test]
fn matches_fixed_step_rk4_reference() {
    let (m, p) = (mode(1, 0.0), params(1e-2, 1e-8, 2.0));
    let p_in = ModeState::new(1.0, 0.0, 0.0);
    // RK4 at h = 1e-4 stays stable while h·νk²(1+s²) ≲ 2.78, i.e. up to s ≈ 1.7e3
    let t_end = 1500.0;
    let ours = solve_mode(&m, &p, &p_in, t_end, 1e-8).unwrap();
    let reference = rk4_mode(&m, &p, p_in, t_end, 1e-4);
    let rel = (ours.growth_factor - reference.sup_norm).abs() / reference.sup_norm;
    assert!(
        rel <= 1e-5,
        "growth {} vs {} (rel {rel:e})",
        ours.growth_factor,
        reference.sup_norm
    );
    let end = (ours.final_state.p1 - reference.final_state.p1)
        .hypot(ours.final_state.p2 - reference.final_state.p2);
    assert!(end <= 1e-5 * reference.final_state.norm().max(1e-300) + 1e-12);
}

#[test]
fn matches_rk4_on_off_resonant_modes() {
    for &(k, xi, nu, kappa, alpha) in &[
        (2, 10.0, 1e-2, 1e-4, 1.0),
        (-1, 7.0, 5e-3, 5e-3, 0.8),
        (3, -9.0, 1e-2, 1e-7, 1.5),
    ] {
        let (m, p) = (mode(k, xi), params(nu, kappa, alpha));
        let p_in = ModeState::new(0.6, 0.8, 0.0);
        let ours = solve_mode(&m, &p, &p_in, 60.0, 1e-9).unwrap();
        let reference = rk4_mode(&m, &p, p_in, 60.0, 2e-4);
        let rel = (ours.growth_factor - reference.sup_norm).abs() / reference.sup_norm;
        assert!(rel <= 1e-6, "k={k} xi={xi}: rel {rel:e}");
    }
}

#[test]
fn strong_viscosity_closed_form_examples() {
    assert_eq!(strong_viscosity_reference(3.0, 3.0, 1e-4, 2.5), 2.5);
    let v = strong_viscosity_reference(1.0, 10.0, 0.0, 1.0);
    assert!((v - 101f64.sqrt() / 2f64.sqrt()).abs() < 1e-14);
    // the alternative reading differs once t ≠ t₀
    let a = strong_viscosity_reference_with(ResistiveReading::Tau, 10.0, 50.0, 1e-6, 1.0);
    let b = strong_viscosity_reference_with(ResistiveReading::TauMinusT, 10.0, 50.0, 1e-6, 1.0);
    assert!(a != b);
}

#[test]
fn strong_viscosity_closed_form_matches_quadrature_and_ode() {
    let (kappa, t0) = (1e-6, 10.0);
    // the closed form must equal exp(∫ (τ/(1+τ²) - κ(1+τ²)) dτ)
    for &t in &[20.0, 80.0, 150.0, 400.0] {
        let exponent = integrate(
            |tau| tau / (1.0 + tau * tau) - kappa * (1.0 + tau * tau),
            t0,
            t,
            &[],
            1e-14,
        );
        let closed = strong_viscosity_reference(t0, t, kappa, 1.0);
        assert!((closed - exponent.exp()).abs() <= 1e-12 * closed);
    }
    // maximiser of the closed form solves t/(1+t²) = κ(1+t²); bisection on [t0, κ^{-1/3}·10]
    let g = |t: f64| t / (1.0 + t * t) - kappa * (1.0 + t * t);
    let (mut lo, mut hi) = (t0, 10.0 * kappa.powf(-1.0 / 3.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let peak = strong_viscosity_reference(t0, 0.5 * (lo + hi), kappa, 1.0);

    let opts = SolveOptions {
        model: LinearModel::StrongViscosity,
        ..SolveOptions::with_tol(1e-10)
    };
    let r = solve_mode_with(
        &mode(1, 0.0),
        &params(1.0, kappa, 1.0),
        &ModeState::new(0.0, 1.0, t0),
        1000.0,
        &opts,
    )
    .unwrap();
    assert!(
        (r.growth_factor - peak).abs() <= 1e-8 * peak,
        "{} vs {peak}",
        r.growth_factor
    );
    assert!((r.t_peak - 0.5 * (lo + hi)).abs() < 1.0);
    let end = strong_viscosity_reference(t0, 1000.0, kappa, 1.0);
    assert!((r.final_state.p2 - end).abs() <= 1e-7 * end);
}

#[test]
fn tilde_channel_rescales_by_resistive_exponent() {
    let (m, p) = (mode(1, 0.0), params(1e-2, 1e-4, 1.0));
    let opts = SolveOptions {
        record_trace: true,
        record_tilde: true,
        ..SolveOptions::with_tol(1e-8)
    };
    let r = solve_mode_with(&m, &p, &ModeState::new(1.0, 0.0, 0.0), 40.0, &opts).unwrap();
    let trace = r.trace.unwrap();
    assert!(trace.len() > 10);
    for smp in &trace {
        let s = smp.state.t;
        let factor = (0.5 * p.kappa * (s + s * s * s / 3.0)).exp();
        let (a, b) = smp.tilde.unwrap();
        assert!((a - factor * smp.state.p1).abs() <= 1e-12 * (1.0 + a.abs()));
        assert!((b - factor * smp.state.p2).abs() <= 1e-12 * (1.0 + b.abs()));
    }
}

#[test]
fn p1_coefficient_is_non_positive_past_viscous_time() {
    let p = params(1e-2, 1e-3, 1.0);
    let opts = SolveOptions {
        record_trace: true,
        ..SolveOptions::with_tol(1e-8)
    };
    for &(k, xi) in &[(1, 0.0), (2, -40.0), (-1, 3.0)] {
        let m = mode(k, xi);
        let r = solve_mode_with(&m, &p, &ModeState::new(1.0, 1.0, 0.0), 400.0, &opts).unwrap();
        let mut checked = 0;
        for smp in r.trace.unwrap() {
            let s = m.s(smp.state.t);
            if s.abs() >= 1.0 / p.nu {
                assert!(p1_sign_coefficient(s, k, &p) <= 0.0, "s = {s}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn singleton_sweep_reproduces_solve_mode() {
    let p = params(1e-2, 1e-7, 1.0);
    let m = mode(1, 0.0);
    let p_in = ModeState::new(1.0, 0.0, 0.0);
    let opts = SolveOptions::with_tol(1e-8);
    let rows = sweep_growth(&[p], &[m], p_in, TEndRule::default(), &opts).unwrap();
    assert_eq!(rows.len(), 1);
    let direct = solve_mode(&m, &p, &p_in, rows[0].t_end, 1e-8).unwrap();
    let row = rows[0].result.as_ref().unwrap();
    assert_eq!(row.growth_factor, direct.growth_factor);
    assert_eq!(row.final_state, direct.final_state);
}

#[test]
fn sweep_isolates_failures_and_keeps_order() {
    let good = params(1e-2, 1e-4, 1.0);
    let zero_kappa = params(1e-2, 0.0, 1.0);
    let modes = [mode(1, 0.0), mode(2, 5.0)];
    let rows = sweep_growth(
        &[good, zero_kappa, good],
        &modes,
        ModeState::new(1.0, 0.0, 0.0),
        TEndRule::ResistiveScale(2.0),
        &SolveOptions::default(),
    )
    .unwrap();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.mode, modes[i % 2]);
        assert_eq!(row.result.is_ok(), i / 2 != 1);
    }
    assert!(sweep_growth(
        &[],
        &modes,
        ModeState::new(1.0, 0.0, 0.0),
        TEndRule::default(),
        &SolveOptions::default()
    )
    .is_err());
}

#[test]
fn single_precision_solve() {
    let m = ModeIndex::new(1, 0.0_f32).unwrap();
    let p = PhysParams::new(1e-2_f32, 1e-4, 1.0).unwrap();
    let r = solve_mode(&m, &p, &ModeState::new(1.0, 0.0, 0.0), 100.0, 1e-5).unwrap();
    let r64 = solve_mode(
        &mode(1, 0.0),
        &params(1e-2, 1e-4, 1.0),
        &ModeState::new(1.0, 0.0, 0.0),
        100.0,
        1e-8,
    )
    .unwrap();
    assert!(((r.growth_factor as f64) - r64.growth_factor).abs() < 1e-3 * r64.growth_factor);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solution_is_linear_in_initial_data(
        lambda in -5.0..5.0_f64, p1 in -1.0..1.0_f64, p2 in -1.0..1.0_f64,
        k in 1..4_i64, xi in -10.0..10.0_f64,
    ) {
        prop_assume!(p1.hypot(p2) > 1e-3 && lambda.abs() > 1e-3);
        let (m, p) = (mode(k, xi), params(1e-2, 1e-5, 1.0));
        let base = solve_mode(&m, &p, &ModeState::new(p1, p2, 0.0), 80.0, 1e-10).unwrap();
        let scaled = solve_mode(&m, &p, &ModeState::new(lambda * p1, lambda * p2, 0.0), 80.0, 1e-10).unwrap();
        let tol = 1e-7 * lambda.abs() * base.growth_factor * p1.hypot(p2);
        prop_assert!((scaled.final_state.p1 - lambda * base.final_state.p1).abs() <= tol);
        prop_assert!((scaled.final_state.p2 - lambda * base.final_state.p2).abs() <= tol);
        prop_assert!((scaled.growth_factor - base.growth_factor).abs() <= 1e-7 * base.growth_factor);
    }

    #[test]
    fn envelope_ratio_is_bounded(
        k in 1..8_i64, xi in -20.0..20.0_f64, lnu in -4.0..-2.0_f64, gap in 0.0..4.0_f64, angle in 0.0..6.3_f64,
    ) {
        let nu = 10f64.powf(lnu);
        let p = params(nu, nu * 10f64.powf(-gap), 1.0);
        let m = mode(k, xi);
        let t_end = 10.0 * (p.kappa * (k * k) as f64).powf(-1.0 / 3.0);
        let r = solve_mode(&m, &p, &ModeState::new(angle.cos(), angle.sin(), 0.0), t_end, 1e-8).unwrap();
        prop_assert!(r.envelope_ratio.is_finite() && r.envelope_ratio > 0.0);
        prop_assert!(r.envelope_ratio <= 20.0, "ratio {}", r.envelope_ratio);
    }
}
