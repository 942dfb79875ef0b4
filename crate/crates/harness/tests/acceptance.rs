//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use mhd_couette::linear::{solve_mode, solve_mode_weighted, SolveOptions};
use mhd_couette::nonlinear::{compute_pvars, random_initial_state, InitialData, SimOptions, Simulation};
use mhd_couette::oracle::integrate;
use mhd_couette::spectral::Transform;
use mhd_couette::weights::{check_lemma_bounds, LemmaSampler};
use mhd_couette::{GridSpec, ModeIndex, ModeState, PhysParams, PhysicalField, State, WeightParams};
use mhd_couette_harness::fit::ls_slope;
use mhd_couette_harness::linear::run_sweep;
use mhd_couette_harness::parse_config;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn params(nu: f64, kappa: f64, alpha: f64) -> PhysParams {
    PhysParams::new(nu, kappa, alpha).unwrap()
}

/// Growth slope of the single group of a harness sweep.
fn sweep_slope(cfg_text: &str) -> (f64, f64) {
    let cfg = parse_config(cfg_text, &[]).unwrap();
    let out = run_sweep(&cfg, &cfg.sweep_grid().unwrap()).unwrap();
    assert_eq!(out.failures(), 0);
    let max_growth = out
        .rows
        .iter()
        .map(|r| r.result.as_ref().unwrap().growth_factor)
        .fold(0.0, f64::max);
    (out.fits[0].slope.expect("defined slope").0, max_growth)
}

fn norm_inflation() -> Verdict {
    let start = Instant::now();
    // p₁ is viscously slaved by t = 0.3/ν; the run then lasts 10κ^{-1/3}
    let (slope, _) = sweep_slope(
        r#"
        [params]
        nu = 1e-2
        kappa = 1e-8
        alpha = 0.55
        [linear]
        modes = [[1, 0.0]]
        p_in = [0.0, 1.0]
        t_in = 30.0
        [sweep]
        kappas = [1e-9, 3.1622776601683795e-9, 1e-8, 3.1622776601683795e-8, 1e-7]
        bootstrap = 0
        "#,
    );
    let secs = start.elapsed().as_secs_f64();
    verdict(
        (-0.38..=-0.28).contains(&slope) && secs <= 300.0,
        format!("slope {slope:.4} in [-0.38, -0.28], {secs:.1} s"),
    )
}

fn no_inflation() -> Verdict {
    let (slope, max_growth) = sweep_slope(
        r#"
        [params]
        nu = 1e-3
        kappa = 1e-3
        alpha = 0.55
        [linear]
        modes = [[1, 0.0]]
        p_in = [1.0, 0.0]
        [sweep]
        nus = [1e-3, 3.1622776601683794e-4, 1e-4]
        kappa_equals_nu = true
        bootstrap = 0
        "#,
    );
    verdict(
        slope.abs() <= 0.05 && max_growth <= 10.0,
        format!("slope {slope:.4} in [-0.05, 0.05], max growth {max_growth:.3} <= 10"),
    )
}

fn envelope() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ratios = Vec::new();
    for _ in 0..200 {
        let k = rng.random_range(1..=8_i64);
        let xi = rng.random_range(-20.0..20.0);
        let nu = 10f64.powf(rng.random_range(-4.0..-2.0));
        let kappa = nu * 10f64.powf(rng.random_range(-5.0..0.0));
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let p = params(nu, kappa, 1.0);
        let t_end = 10.0 / (kappa * (k * k) as f64).cbrt();
        let res = solve_mode(
            &ModeIndex::new(k, xi).unwrap(),
            &p,
            &ModeState::new(theta.cos(), theta.sin(), 0.0),
            t_end,
            1e-8,
        );
        match res {
            Ok(r) => ratios.push(r.envelope_ratio),
            Err(e) => return verdict(false, format!("solve failed: {e}")),
        }
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median = 0.5 * (sorted[99] + sorted[100]);
    let finite = ratios.iter().all(|r| r.is_finite());
    verdict(
        finite && max / median <= 50.0,
        format!("200 samples, max/median {:.3} <= 50 (max {max:.3})", max / median),
    )
}

fn weight_closed_forms() -> Verdict {
    let w = WeightParams::new(&params(1e-2, 1e-6, 1.0), 5).unwrap();
    let t_max = 3.0 * w.ml_window_end(1);
    let start = Instant::now();
    type Pair = (
        &'static str,
        fn(&WeightParams, f64, i64, f64) -> f64,
        fn(&WeightParams, f64, i64, f64) -> f64,
    );
    let factors: [Pair; 5] = [
        ("M_L", WeightParams::rate_ml, WeightParams::eval_ml),
        ("M_1", WeightParams::rate_m1, WeightParams::eval_m1),
        ("M_nu", WeightParams::rate_mnu, WeightParams::eval_mnu),
        ("M_kappa", WeightParams::rate_mkappa, WeightParams::eval_mkappa),
        ("M_nu3", WeightParams::rate_mnu3, WeightParams::eval_mnu3),
    ];
    let mut worst = 0.0_f64;
    for (i, (_, rate, closed)) in factors.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + i as u64);
        for _ in 0..10_000 {
            let t = 10f64.powf(rng.random_range(-2.0..t_max.log10()));
            let k = rng.random_range(1..=16_i64) * if rng.random_bool(0.5) { -1 } else { 1 };
            let xi = rng.random_range(-200.0..200.0);
            let kf = k as f64;
            let shift = xi / kf;
            let hi = w.ml_window_end(k);
            let mut breaks = vec![shift, shift + 1.0 / w.nu, shift + hi];
            for width in [
                1.0 / kf.abs(),
                w.nu.powf(-1.0 / 3.0),
                w.kappa.powf(-1.0 / 3.0),
                1.0 / w.nu,
            ] {
                breaks.extend([
                    shift - width,
                    shift + width,
                    shift - 10.0 * width,
                    shift + 10.0 * width,
                ]);
            }
            let exact = (-integrate(|tau| rate(&w, tau, k, xi), 0.0, t, &breaks, 1e-14)).exp();
            worst = worst.max((closed(&w, t, k, xi) - exact).abs() / exact);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= 1e-8 && secs <= 30.0,
        format!("worst rel. error {worst:.2e} <= 1e-8 over 5 x 1e4 tuples, {secs:.1} s"),
    )
}

fn lemma_suite() -> Verdict {
    let w = WeightParams::new(&params(1e-2, 1e-6, 1.0), 5).unwrap();
    let report = check_lemma_bounds(&w, &LemmaSampler::new(11, &w).take(100_000));
    let required: Vec<_> = report.checks.iter().filter(|c| c.required).collect();
    let violations: usize = required.iter().map(|c| c.violations).sum();
    verdict(
        report.passed() && violations == 0,
        format!(
            "{} inequalities, 1e5 samples, {violations} violations",
            required.len()
        ),
    )
}

fn flux_identity() -> Verdict {
    let g = GridSpec::new(32, 32, GridSpec::default_ly(1e-2)).unwrap();
    let data = InitialData {
        eps: 0.05,
        eps_tilde: 0.05,
        band_k: 4,
        band_m: 4,
        n: 5,
        seed: 1,
    };
    let opts = SimOptions {
        t_end: 20.0,
        diag_interval: 0.5,
        ..SimOptions::default()
    };
    let sim = Simulation::new(g, params(1e-2, 1e-3, 1.0), opts).unwrap();
    let (mut worst, mut samples) = (0.0_f64, 0);
    let res = sim.run_observed(random_initial_state(g, &data).unwrap(), |_, rec| {
        worst = worst.max(rec.nonlinear_flux.abs() / rec.flux_scale);
        samples += 1;
    });
    if let Err(e) = res {
        return verdict(false, format!("run failed: {e}"));
    }
    verdict(
        worst <= 1e-10,
        format!("max |flux|/scale {worst:.2e} <= 1e-10 over {samples} samples"),
    )
}

fn linear_nonlinear_consistency() -> Verdict {
    let (nu, kappa, alpha) = (1e-2, 1e-3, 1.0);
    let p = params(nu, kappa, alpha);
    let g = GridSpec::new(16, 16, GridSpec::default_ly(nu)).unwrap();
    let (k, m) = (1, 2);
    let xi = g.xi_of(g.slot_m(m));
    let (eps, a, b) = (1e-6, 0.6, 0.8);
    let lam = ((k * k) as f64 + xi * xi).sqrt();
    let mirror = |c: Complex<f64>| {
        let mut f = mhd_couette::SpectralField::zeros(g);
        f.set_coeff(k, m, c);
        f.set_coeff(-k, -m, c.conj());
        f
    };
    // p̂₁ = -i a ε, p̂₂ = b ε, and p = -Λψ
    let i = Complex::new(0.0, 1.0);
    let init = State::from_potentials(
        &mirror(i * a * eps / lam),
        &mirror(Complex::new(-b * eps / lam, 0.0)),
        0.0,
    )
    .unwrap();
    let opts = SimOptions {
        t_end: 50.0,
        dt_max: Some(0.02),
        diag_interval: 0.5,
        ..SimOptions::default()
    };
    let sim = Simulation::new(g, p, opts).unwrap();
    let mode = ModeIndex::new(k, xi).unwrap();
    let mut worst = 0.0_f64;
    let res = sim.run_observed(init, |state, _| {
        let pv = compute_pvars(state);
        let got = ((i * pv.p1.coeff(k, m)).re / eps, pv.p2.coeff(k, m).re / eps);
        let want = if state.t == 0.0 {
            (a, b)
        } else {
            let f = solve_mode(&mode, &p, &ModeState::new(a, b, 0.0), state.t, 1e-10)
                .unwrap()
                .final_state;
            (f.p1, f.p2)
        };
        worst = worst.max((got.0 - want.0).hypot(got.1 - want.1) / want.0.hypot(want.1));
    });
    if let Err(e) = res {
        return verdict(false, format!("run failed: {e}"));
    }
    verdict(
        worst <= 1e-3,
        format!("max rel. error {worst:.2e} <= 1e-3 on t in [0, 50]"),
    )
}

fn spectral_convergence() -> Verdict {
    let ly = std::f64::consts::TAU;
    let run = |n: usize| {
        let g = GridSpec::new(n, n, ly).unwrap();
        let tr = Transform::new(g);
        let potential = |f: fn(f64, f64) -> f64| tr.forward(&PhysicalField::from_fn(g, f)).unwrap().dealias();
        let psi_v = potential(|x, y| 0.1 * (0.8 * x.cos() + 0.6 * y.sin()).exp());
        let psi_b = potential(|x, y| 0.1 * (0.5 * x.sin() + 0.7 * y.cos()).exp());
        let init = State::from_potentials(&psi_v, &psi_b, 0.0).unwrap();
        let opts = SimOptions {
            t_end: 1.0,
            dt_max: Some(2e-3),
            diag_interval: 1.0,
            overflow_threshold: None,
            ..SimOptions::default()
        };
        Simulation::new(g, params(1e-2, 1e-2, 1.0), opts)
            .unwrap()
            .run(init)
            .unwrap()
            .final_state
    };
    let reference = run(128);
    let error = |s: &State| {
        let rg = *reference.grid();
        let sg = *s.grid();
        let mut e2 = 0.0_f64;
        for (fr, fs) in reference.fields().iter().zip(s.fields()) {
            for ii in 0..rg.nx {
                for jj in 0..rg.ny {
                    let (k, m) = (rg.k_of(ii), rg.m_of(jj));
                    let inside = 2 * k.unsigned_abs() as usize <= sg.nx - 2
                        && 2 * m.unsigned_abs() as usize <= sg.ny - 2;
                    let c = if inside {
                        fs.coeff(k, m)
                    } else {
                        Complex::new(0.0, 0.0)
                    };
                    e2 += (fr.coeffs()[rg.idx(ii, jj)] - c).norm_sqr();
                }
            }
        }
        e2.sqrt()
    };
    let (e16, e32) = (error(&run(16)), error(&run(32)));
    let ratio = e16 / e32;
    verdict(
        ratio >= 100.0,
        format!("error 16 -> 32: {e16:.2e} -> {e32:.2e}, ratio {ratio:.0} >= 100"),
    )
}

fn enhanced_dissipation() -> Verdict {
    // post-resonance mode: s starts at 10
    let (k, xi, alpha) = (1, -10.0, 2.0);
    let mode = ModeIndex::new(k, xi).unwrap();
    let (mut lx, mut l1, mut l2) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..7 {
        let nu = 10f64.powf(-5.0 - 0.25 * i as f64);
        let p = params(nu, nu, alpha);
        let w = WeightParams::new(&p, 5).unwrap();
        let t_end = 20.0 / nu.cbrt();
        let r = solve_mode_weighted(
            &mode,
            &p,
            &ModeState::new(1.0, 0.0, 0.0),
            t_end,
            &SolveOptions::with_tol(1e-8),
            |t| w.eval_a(t, k, xi),
        );
        let r = match r {
            Ok(r) => r,
            Err(e) => return verdict(false, format!("solve failed: {e}")),
        };
        lx.push(nu.ln());
        l1.push(r.time_l2.0.ln());
        l2.push(r.time_l2.1.ln());
    }
    let (s1, s2) = (ls_slope(&lx, &l1).unwrap(), ls_slope(&lx, &l2).unwrap());
    let ok = |s: f64| (s + 1.0 / 6.0).abs() <= 0.1;
    verdict(
        ok(s1) && ok(s2),
        format!("exponents Ap1 vs nu {s1:.4}, Ap2 vs kappa {s2:.4}, target -1/6 +- 0.1 over 1.5 decades"),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"
        eps = 1e-2
        t_end = 5.0
        rng_seed = 42
        [params]
        nu = 1e-2
        kappa = 1e-4
        alpha = 1.0
        [grid]
        nx = 32
        ny = 32
        [linear]
        modes = [[1, 0.0], [2, 5.0], [-3, 1.5]]
        [sweep]
        kappas = [1e-6, 1e-5, 1e-4]
        bootstrap = 100
    "#;
    std::fs::write(dir.path().join("run.toml"), cfg).unwrap();
    let run = |cmd: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_mhdc"))
            .current_dir(dir.path())
            .args([cmd, "-c", "run.toml", "-o", out])
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
    };
    let mut ok = true;
    for out in ["a", "b"] {
        ok &= run("linear-sweep", out) && run("simulate", out);
    }
    let same = |f: &str| {
        let read = |d: &str| std::fs::read(Path::new(dir.path()).join(d).join(f)).unwrap_or_default();
        let a = read("a");
        !a.is_empty() && a == read("b")
    };
    let files = ["mode_sweep.csv", "sweep_fit.csv", "sim_diag.csv"];
    let identical = files.iter().all(|f| same(f));
    verdict(
        ok && identical,
        format!("{} byte-identical across two runs: {identical}", files.join(", ")),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        ("linear norm-inflation scaling", norm_inflation),
        ("no-inflation regime", no_inflation),
        ("envelope ratio bound", envelope),
        ("weight closed forms vs quadrature", weight_closed_forms),
        ("weight lemma suite", lemma_suite),
        ("nonlinear flux identity", flux_identity),
        ("linear/nonlinear consistency", linear_nonlinear_consistency),
        ("spectral convergence", spectral_convergence),
        ("enhanced dissipation exponents", enhanced_dissipation),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {name}: {} [{:.1} s]",
            v.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
