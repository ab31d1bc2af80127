use num_complex::Complex64;
use rydberg_gate::lindblad::*;
use rydberg_gate::*;

fn mixed_input() -> Vec<Complex64> {
    let mut psi = vec![Complex64::default(); DIM];
    for &k in &COMPUTATIONAL {
        psi[k] = Complex64::new(0.5, 0.0);
    }
    psi
}

fn diag(rho: &[Complex64]) -> Vec<f64> {
    (0..DIM).map(|i| rho[i * DIM + i].re).collect()
}

#[test]
fn gate_time_at_strong_blockade() {
    let cal = calibrate_pulse(1.0, 1e3, StepControl::default()).unwrap();
    assert!((cal.gate_time_omega() - 8.586).abs() < 0.05, "{}", cal.gate_time_omega());
    assert!(cal.infidelity < 1e-8);
}

#[test]
fn perfect_blockade_gate_is_exact() {
    let p = blockade_limit_parameters();
    let fine = StepControl { courant: 0.3, resolution: 0.005 };
    let err = pulse_infidelity(p, 1.0, f64::INFINITY, fine).unwrap();
    assert!(err < 1e-6, "{err:e}");
}

#[test]
fn idle_state_is_untouched() {
    let cfg = GatePhysicsConfig::from_gamma_tg(1e-2, 1e6);
    let cal = calibrate_pulse(cfg.omega, cfg.v_rr, StepControl::default()).unwrap();
    let rho0 = pure_density(&basis_state(index(Level::Zero, Level::Zero)));
    let out = evolve(&cal.pulse, &cfg, &rho0, StepControl::default()).unwrap();
    for (a, b) in out.rho.iter().zip(&rho0) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn product_superposition_picks_up_cz_phase() {
    let cfg = GatePhysicsConfig { gamma: 0.0, ..GatePhysicsConfig::from_gamma_tg(2e-3, 1e6) };
    let control = StepControl::default();
    let cal = calibrate_pulse(cfg.omega, cfg.v_rr, control).unwrap();
    let phi = ComputationalMap::from_block(&unitary_block(&cal.pulse, &cfg, control).unwrap()).best_fidelity().0;
    let mut psi = mixed_input();
    lindblad::evolve_pure(&cal.pulse, &cfg, &mut psi, control, |_| {}).unwrap();
    // Ideal output: (|00> + e^{iφ}|01> + e^{iφ}|10> - e^{2iφ}|11>) / 2.
    let e = Complex64::from_polar(1.0, phi);
    let ideal = [Complex64::new(1.0, 0.0), e, e, -e * e];
    let overlap: Complex64 = COMPUTATIONAL.iter().zip(ideal).map(|(&k, t)| 0.5 * t.conj() * psi[k]).sum();
    assert!(overlap.norm_sqr() > 1.0 - 1e-4, "{}", overlap.norm_sqr());
}

#[test]
fn rydberg_population_returns_to_zero() {
    let cfg = GatePhysicsConfig::default();
    let control = StepControl::default();
    let cal = calibrate_pulse(cfg.omega, cfg.v_rr, control).unwrap();
    let traj = noiseless_trajectory(&cal.pulse, &cfg, control).unwrap();
    let peak = traj.psi_r.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    assert!(peak > 0.5 && peak <= 1.0, "{peak}");
    assert!(traj.psi_r.last().unwrap().norm_sqr() < 1e-4);
    assert!(traj.psi_w.last().unwrap().norm_sqr() < 1e-4);

    let bound = cfg.omega.powi(2) / (2.0 * cfg.v_rr.powi(2));
    let rr = traj.psi_rr.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    assert!(rr <= 1.1 * bound, "{rr:e} vs {bound:e}");
}

#[test]
fn halving_the_step_leaves_populations_unchanged() {
    let cfg = GatePhysicsConfig::default();
    let control = StepControl::default();
    let cal = calibrate_pulse(cfg.omega, cfg.v_rr, control).unwrap();
    let rho0 = pure_density(&basis_state(index(Level::One, Level::One)));
    let a = evolve(&cal.pulse, &cfg, &rho0, control).unwrap();
    let b = evolve(&cal.pulse, &cfg, &rho0, control.halved()).unwrap();
    for (x, y) in diag(&a.rho).iter().zip(diag(&b.rho)) {
        assert!((x - y).abs() < 1e-8, "{x} {y}");
    }
}

#[test]
fn trace_and_positivity_hold() {
    let cfg = GatePhysicsConfig::from_gamma_tg(1e-2, 1e6);
    let control = StepControl::default();
    let cal = calibrate_pulse(cfg.omega, cfg.v_rr, control).unwrap();
    let out = evolve(&cal.pulse, &cfg, &pure_density(&mixed_input()), control).unwrap();
    assert!((out.trace - 1.0).abs() < 1e-6);
    assert!(diag(&out.rho).iter().all(|&p| p >= -1e-9));
    for i in 0..DIM {
        for j in 0..DIM {
            assert!((out.rho[i * DIM + j] - out.rho[j * DIM + i].conj()).norm() < 1e-12);
        }
    }
    assert!((out.populations.total() - 1.0).abs() < 1e-6);
}

#[test]
fn noiseless_evolution_is_unitary() {
    let cfg = GatePhysicsConfig { gamma: 0.0, ..GatePhysicsConfig::from_gamma_tg(2e-3, 1e6) };
    let control = StepControl::default();
    let cal = calibrate_pulse(cfg.omega, cfg.v_rr, control).unwrap();
    let out = evolve(&cal.pulse, &cfg, &pure_density(&mixed_input()), control).unwrap();
    let mut purity = 0.0;
    for &i in &COMPUTATIONAL {
        for &j in &COMPUTATIONAL {
            purity += out.rho[i * DIM + j].norm_sqr();
        }
    }
    assert!((purity - 1.0).abs() < 1e-6, "{purity}");
}

#[test]
fn atoms_are_interchangeable() {
    let pt = gate_at(2e-3, 1e6, BranchingFractions::default(), StepControl::default()).unwrap();
    let [_, a, b, _] = pt.outcome.per_state;
    for (x, y) in [(a.qq, b.qq), (a.qr, b.qr), (a.qb, b.qb), (a.rb, b.rb), (a.rr, b.rr), (a.bb, b.bb)] {
        assert!((x - y).abs() < 1e-9, "{x} {y}");
    }
}

/// Master equation and closed-form channels on the same calibrated pulse.
fn check_oracle(gamma_tg: f64) {
    let pt = gate_at(gamma_tg, 1e6, BranchingFractions::default(), StepControl::default()).unwrap();
    let (o, a) = (&pt.outcome, &pt.analytic);
    for (name, num, ana) in [("QR", o.populations.qr, a.p_qr), ("QB", o.populations.qb, a.p_qb), ("RB", o.populations.rb, a.p_rb)] {
        assert!((num / ana - 1.0).abs() < 0.05, "{name} at {gamma_tg}: {num:e} vs {ana:e}");
    }
    assert!(o.p_f / o.p_e < 1e-4, "p_f/p_e = {:e}", o.p_f / o.p_e);
    let ratio = o.conditional_infidelity() / o.infidelity();
    assert!((0.01..=0.04).contains(&ratio), "{ratio}");
    assert!((o.erasure_fraction() - a.r_e).abs() < 0.01);
}

#[test]
fn master_equation_matches_closed_form_short_gate() {
    check_oracle(1e-3);
}

#[test]
fn master_equation_matches_closed_form_long_gate() {
    check_oracle(1e-2);
}

#[test]
fn decays_back_to_qubit_are_not_heralded() {
    let q = BranchingFractions { b: 0.0, r: 0.0, q: 1.0 };
    let pt = gate_at(2e-3, 1e6, q, StepControl::default()).unwrap();
    let p = pt.outcome.populations;
    assert!(p.qr == 0.0 && p.rb == 0.0 && p.rr == 0.0);
    let default = gate_at(2e-3, 1e6, BranchingFractions::default(), StepControl::default()).unwrap();
    assert!(pt.outcome.erasure_fraction() < default.outcome.erasure_fraction() - 0.3);
}

#[test]
fn infidelity_grows_linearly_with_gate_time() {
    let pts: Vec<ScanPoint> = sweep_gate_error(&[1e-3, 1e-2], 1e6, BranchingFractions::default(), StepControl::default())
        .into_iter()
        .map(|r| r.unwrap())
        .collect();
    let slope = (pts[1].infidelity() / pts[0].infidelity()).log10();
    assert!((slope - 1.0).abs() < 0.05, "{slope}");
}
