//! Acceptance gate: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use fdstates::analytic::{fd_coherent_state, fd_squeezed_vacuum, hermite_roots, three_level_amplitudes, two_level_amplitudes};
use fdstates::dynamics::{
    damped_kerr_step, evolve_continuous, kicked_states, lindblad_oracle, ode_oracle_with, KickSchedule, Propagator,
    Tolerances,
};
use fdstates::model::{drive_hamiltonian, DriveEnvelope, DriveKind, KerrModel};
use fdstates::operators::{fidelity, matrix_exponential, matrix_exponential_series, DensityMatrix, Operator, StateVector};
use fdstates::scenario::{preset, run_scenario, simulate, ScenarioConfig};
use fdstates::Complex64;
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const EPS: f64 = PI / 50.0;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn continuous_grid(duration: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|i| duration * i as f64 / (samples - 1) as f64).collect()
}

fn linear_model(dim: usize, order: usize, eps: f64) -> KerrModel {
    KerrModel::new(dim, order, 1.0, eps, DriveKind::Linear, DriveEnvelope::Constant).unwrap()
}

fn rabi() -> Outcome {
    let start = Instant::now();
    let model = linear_model(6, 2, EPS);
    let times = continuous_grid(2.0 * PI / EPS, 2001);
    let states = evolve_continuous(&model, &StateVector::vacuum(6).unwrap(), &times).unwrap();
    let (mut d0, mut d1) = (0.0f64, 0.0f64);
    for (psi, &t) in states.iter().zip(&times) {
        let p = psi.probabilities();
        let closed = two_level_amplitudes(EPS * t).probabilities();
        d0 = d0.max((p[0] - closed[0]).abs());
        d1 = d1.max((p[1] - closed[1]).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        d0 <= 1e-2 && d1 <= 1e-2 && secs < 1.0,
        format!("max|dP0| = {d0:.3e}, max|dP1| = {d1:.3e} (bound 1e-2), runtime {secs:.3} s"),
    )
}

fn three_level_run() -> (Vec<f64>, Vec<Vec<f64>>) {
    let model = linear_model(7, 3, EPS);
    let times = continuous_grid(2.0 * PI / EPS, 2001);
    let states = evolve_continuous(&model, &StateVector::vacuum(7).unwrap(), &times).unwrap();
    (times, states.iter().map(StateVector::probabilities).collect())
}

fn three_level() -> Outcome {
    let (times, probs) = three_level_run();
    let mut dev = 0.0f64;
    let mut p1_max = 0.0f64;
    for (p, &t) in probs.iter().zip(&times) {
        let closed = three_level_amplitudes(EPS, t).probabilities();
        for n in 0..3 {
            dev = dev.max((p[n] - closed[n]).abs());
        }
        p1_max = p1_max.max(p[1]);
    }
    outcome(
        dev <= 1e-2 && (p1_max - 1.0 / 3.0).abs() <= 0.02,
        format!("max|dP_n<3| = {dev:.3e} (bound 1e-2), max P1 = {p1_max:.4} (1/3 +- 0.02)"),
    )
}

fn leakage() -> Outcome {
    let (_, probs) = three_level_run();
    let p3 = probs.iter().map(|p| p[3]).fold(0.0, f64::max);
    outcome(
        (0.6e-3..=2.0e-3).contains(&p3),
        format!("max P3 = {p3:.3e} (window [6.0e-4, 2.0e-3])"),
    )
}

fn hermite_duality() -> Outcome {
    let mut worst = 0.0f64;
    for order in 2..=8 {
        let roots = hermite_roots(order).unwrap();
        let h = drive_hamiltonian(DriveKind::Linear, 1.0, order).unwrap();
        let (mut spectrum, _) = h.hermitian_eigen();
        spectrum.sort_by(f64::total_cmp);
        for (r, e) in roots.iter().zip(&spectrum) {
            worst = worst.max((r - e).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max |root - eigenvalue| over N = 2..8: {worst:.3e} (bound 1e-10)"))
}

fn kicked_infidelity(order: usize, dim: usize, period: f64, eps: f64, pulses: usize) -> f64 {
    let model = KerrModel::new(dim, order, 1.0, eps, DriveKind::Linear, DriveEnvelope::DeltaTrain { period }).unwrap();
    let schedule = KickSchedule::from_model(&model, pulses).unwrap();
    let states = kicked_states(&model, &StateVector::vacuum(dim).unwrap(), &schedule).unwrap();
    states
        .iter()
        .enumerate()
        .map(|(k, psi)| {
            let target = fd_coherent_state(Complex64::new(0.0, -(k as f64) * eps), order - 1).unwrap();
            1.0 - fidelity(&target, psi).unwrap()
        })
        .fold(0.0, f64::max)
}

fn coherent_fidelity() -> Outcome {
    // N = 2 with chi T = 4 pi: the free step is the identity on the resonant pair.
    let inf2 = kicked_infidelity(2, 2, 4.0 * PI, EPS, 20);
    // N = 3 at the default period pi / (chi (N-1)!).
    let inf3 = kicked_infidelity(3, 6, PI / 2.0, EPS, 20);
    let fid_ok = inf2 <= 0.01 && inf3 <= 0.01;

    // Same pulse area with half the kick strength.
    let ratio2 = kicked_infidelity(2, 5, PI, EPS, 20) / kicked_infidelity(2, 5, PI, EPS / 2.0, 40);
    let ratio3 = kicked_infidelity(3, 6, PI / 2.0, EPS, 20) / kicked_infidelity(3, 6, PI / 2.0, EPS / 2.0, 40);
    let ratio_ok = (2.5..=6.0).contains(&ratio2) && (2.5..=6.0).contains(&ratio3);
    outcome(
        fid_ok && ratio_ok,
        format!(
            "min F: N=2 {:.6}, N=3 {:.6} (>= 0.99); 1-F ratio under eps/2: N=2 {ratio2:.3}, N=3 {ratio3:.3} (in [2.5, 6])",
            1.0 - inf2,
            1.0 - inf3
        ),
    )
}

fn fig4_run(gamma: f64) -> (f64, f64) {
    let mut cfg = preset("fig4").unwrap().unwrap();
    cfg.gamma = Some(gamma);
    let result = simulate(&cfg).unwrap();
    (result.peak(1), result.trough(1))
}

fn dissipative_behavior() -> Outcome {
    let (peak0, trough0) = fig4_run(0.0);
    let (peak_weak, _) = fig4_run(0.01);
    let (peak_strong, trough_strong) = fig4_run(0.1);
    let weak_ratio = peak_weak / peak0;
    let strong_ratio = (peak_strong - trough_strong) / (peak0 - trough0);
    outcome(
        weak_ratio >= 0.75 && strong_ratio <= 0.35,
        format!("gamma=0.01 peak ratio {weak_ratio:.4} (>= 0.75); gamma=0.1 amplitude ratio {strong_ratio:.4} (<= 0.35)"),
    )
}

fn random_density(dim: usize, rng: &mut StdRng) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr).unwrap()
}

fn dissipative_map() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let dim = 8;
    let period = PI;
    let tol = Tolerances { rtol: 1e-11, atol: 1e-13 };
    let mut agree = 0.0f64;
    let mut drift = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for &gamma in &[0.01, 0.1, 1.0] {
        let rho0 = random_density(dim, &mut rng);
        let mapped = damped_kerr_step(&rho0, 1.0, gamma, period).unwrap();
        let oracle = lindblad_oracle(&rho0, 1.0, gamma, period, tol).unwrap();
        agree = agree.max((mapped.matrix() - oracle).iter().map(|z| z.norm()).fold(0.0, f64::max));

        let mut rho = rho0;
        for _ in 0..1000 {
            let next = damped_kerr_step(&rho, 1.0, gamma, period).unwrap();
            drift = drift.max((next.trace() - rho.trace()).norm());
            min_eig = min_eig.min(next.min_eigenvalue());
            rho = next;
        }
    }
    outcome(
        agree <= 1e-7 && drift <= 1e-10 && min_eig >= -1e-8,
        format!("map vs master equation {agree:.3e} (<= 1e-7); trace drift/step {drift:.3e} (<= 1e-10); min eigenvalue {min_eig:.3e} (>= -1e-8)"),
    )
}

fn squeezed_fidelity() -> Outcome {
    let mut min_f = f64::INFINITY;
    let mut odd = 0.0f64;
    for s in [2usize, 4] {
        let dim = s + 4;
        let model = KerrModel::new(dim, s + 1, 1.0, EPS, DriveKind::Parametric, DriveEnvelope::Constant).unwrap();
        let times = continuous_grid(PI / 2.0 / EPS, 201);
        let states = evolve_continuous(&model, &StateVector::vacuum(dim).unwrap(), &times).unwrap();
        for (psi, &t) in states.iter().zip(&times) {
            let target = fd_squeezed_vacuum(Complex64::new(0.0, -2.0 * EPS * t), s).unwrap();
            min_f = min_f.min(fidelity(&target, psi).unwrap());
            let p = psi.probabilities();
            odd = odd.max(p.iter().skip(1).step_by(2).sum());
        }
    }
    outcome(
        min_f >= 0.99 && odd <= 1e-12,
        format!("min F over s = 2, 4 and eps t <= pi/2: {min_f:.6} (>= 0.99); odd-level population {odd:.3e} (<= 1e-12)"),
    )
}

fn oracle_equivalences() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let mut expm = 0.0f64;
    for dim in 1..=16 {
        let g = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let h = Operator::from_matrix((&g + g.adjoint()) * Complex64::new(0.5, 0.0)).unwrap();
        let scale = Complex64::new(0.0, -rng.gen_range(0.1..3.0));
        let a = matrix_exponential(&h, scale).unwrap();
        let b = matrix_exponential_series(&h, scale).unwrap();
        expm = expm.max((a.matrix() - b.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }

    let tol = Tolerances { rtol: 1e-12, atol: 1e-14 };
    let mut ode = 0.0f64;
    for (order, drive) in [(2, DriveKind::Linear), (3, DriveKind::Linear), (3, DriveKind::Parametric)] {
        let model = KerrModel::with_default_dim(order, 1.0, EPS, drive, DriveEnvelope::Constant).unwrap();
        let psi0 = StateVector::vacuum(model.dim).unwrap();
        let prop = Propagator::new(&model).unwrap();
        for &t in &[5.0, 25.0, 60.0] {
            let exact = prop.evolve(&psi0, t).unwrap();
            let oracle = ode_oracle_with(&model, &psi0, t, model.dim, tol).unwrap();
            ode = ode.max((exact.amplitudes() - &oracle.amplitudes).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }

    let mut closure = 0.0f64;
    for order in [2usize, 3] {
        let small = linear_model(order + 3, order, EPS);
        let big = linear_model(20, order, EPS);
        let times = continuous_grid(2.0 * PI / EPS, 401);
        let a = evolve_continuous(&small, &StateVector::vacuum(small.dim).unwrap(), &times).unwrap();
        let b = evolve_continuous(&big, &StateVector::vacuum(20).unwrap(), &times).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let (px, py) = (x.probabilities(), y.probabilities());
            for n in 0..order {
                closure = closure.max((px[n] - py[n]).abs());
            }
        }
    }
    outcome(
        expm <= 1e-8 && ode <= 1e-8 && closure <= 1e-5,
        format!("eigen vs series {expm:.3e} (<= 1e-8); propagator vs ODE {ode:.3e} (<= 1e-8); dim 20 vs N+3 {closure:.3e} (<= 1e-5)"),
    )
}

fn determinism() -> Outcome {
    let cfg: ScenarioConfig = preset("fig1").unwrap().unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_scenario(&cfg, a.path()).unwrap();
    let rb = run_scenario(&cfg, b.path()).unwrap();
    let same = std::fs::read(&ra.csv_path).unwrap() == std::fs::read(&rb.csv_path).unwrap();
    outcome(same, format!("fig1 CSV byte-identical across runs: {same}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Rabi reproduction", rabi),
        ("three-level reproduction", three_level),
        ("leakage bound", leakage),
        ("Hermite duality", hermite_duality),
        ("coherent-state fidelity", coherent_fidelity),
        ("dissipative behavior", dissipative_behavior),
        ("dissipative-map correctness", dissipative_map),
        ("squeezed-vacuum fidelity", squeezed_fidelity),
        ("oracle equivalences", oracle_equivalences),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2} {name}: {}", i + 1, result.detail);
        if !result.passed {
            failures += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
