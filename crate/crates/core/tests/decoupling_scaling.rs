//! Empirical decay exponents of decoupled evolution under a static GUE Hamiltonian.

mod common;

use qstab::decouple::{mean_fidelity_trace, run_schedule, DecouplingSchedule, DecouplingSet, ScheduleKind};
use qstab::perturb::GuePerturbation;
use qstab::qcore::linalg::{identity, is_unitary, Operator};
use qstab::rng::seeded;
use qstab::PauliString;

fn gue(n_qubits: usize, strength: f64, seed: u64) -> Operator {
    GuePerturbation::sample(1 << n_qubits, strength, &mut seeded(seed)).unwrap().delta_h()
}

/// Log-log slope of `1 - F` at the requested step numbers (1-based).
fn infidelity_exponent(fidelity: &[f64], times: &[f64], steps: &[usize]) -> f64 {
    let x: Vec<f64> = steps.iter().map(|&s| times[s - 1].ln()).collect();
    let y: Vec<f64> = steps.iter().map(|&s| (1.0 - fidelity[s - 1]).ln()).collect();
    common::linear_fit(&x, &y).0
}

#[test]
fn random_decoupling_with_annihilator_decays_linearly() {
    let h0 = gue(4, 0.01, 11);
    let set = DecouplingSet::pauli_group(4).unwrap();
    let schedule = DecouplingSchedule::new(ScheduleKind::Nrd, 1.0, set).with_seed(5);
    let (times, mean) = mean_fidelity_trace(&h0, &schedule, 500.0, 64).unwrap();
    let slope = infidelity_exponent(&mean, &times, &[10, 20, 50, 100, 200, 500]);
    assert!((slope - 1.0).abs() < 0.15, "exponent {slope}");
    let bound = qstab::analytics::memory_bound(500.0, 1.0, &h0);
    assert!(mean[499] > bound - 0.01, "{} vs {bound}", mean[499]);
}

#[test]
fn periodic_decoupling_without_annihilator_decays_quadratically() {
    let h0 = gue(4, 0.005, 12);
    let set = DecouplingSet::from_paulis(4, vec![PauliString::identity(4), "XXXX".parse().unwrap()]).unwrap();
    let schedule = DecouplingSchedule::new(ScheduleKind::Pdd, 1.0, set);
    let run = run_schedule(&h0, &schedule, 16.0, &mut seeded(0)).unwrap();
    let slope = infidelity_exponent(&run.fidelity, &run.times, &[2, 4, 8, 16]);
    assert!((slope - 2.0).abs() < 0.2, "exponent {slope}");
}

#[test]
fn every_schedule_keeps_the_toggled_propagator_unitary() {
    let h0 = gue(3, 0.2, 13);
    let set = DecouplingSet::pauli_group(3).unwrap();
    let outer = DecouplingSet::from_paulis(3, vec![PauliString::identity(3), "ZZZ".parse().unwrap()]).unwrap();
    let kinds = [ScheduleKind::Pdd, ScheduleKind::Sdd, ScheduleKind::Nrd, ScheduleKind::RandomPath];
    let mut schedules: Vec<DecouplingSchedule> =
        kinds.iter().map(|&k| DecouplingSchedule::new(k, 0.5, set.clone())).collect();
    for k in [ScheduleKind::Emd, ScheduleKind::Semd] {
        schedules.push(DecouplingSchedule::embedded(k, 0.5, set.clone(), outer.clone()));
    }
    for s in &schedules {
        let run = run_schedule(&h0, s, 200.0, &mut seeded(1)).unwrap();
        assert!(is_unitary(&run.toggled, 1e-9), "{:?}", s.kind);
        assert!(run.fidelity.iter().all(|f| (0.0..=1.0 + 1e-12).contains(f)));
    }
    let zero = Operator::zeros(8, 8);
    let run = run_schedule(&zero, &schedules[2], 10.0, &mut seeded(2)).unwrap();
    assert!((&run.toggled - identity(8)).iter().all(|z| z.norm() < 1e-12));
}
