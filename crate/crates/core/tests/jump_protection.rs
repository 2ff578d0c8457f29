//! Swap-decoupled code-space memory against the permutation-averaged coupling constants.

use qstab::analytics::f_coherent;
use qstab::jumpcode::{apply_jump, build_code, code_constants, permuted_energy_moments, recover, CodeVariant};
use qstab::perturb::sample_uniform_chain;
use qstab::rng::seeded;
use qstab::trajectory::{run_ensemble, EnsembleConfig, LindbladModel, ProtocolSchedule, TrajectoryOptions};
use qstab::{StateVector, C64};

fn random_logical(n: usize, seed: u64) -> StateVector {
    StateVector::random(n, &mut seeded(seed)).unwrap()
}

#[test]
fn swap_decoupled_decay_rate_matches_constants() {
    let code = build_code(3, 0.0, CodeVariant::Tensor).unwrap();
    let dt = 4.0;
    let total = 2000.0;
    for seed in 0..3u64 {
        let chain = sample_uniform_chain(8, 1e-3, false, &mut seeded(100 + seed)).unwrap();
        let initial = code.encode(&random_logical(3, 200 + seed)).unwrap();
        let k = code_constants(&chain, &code).unwrap();
        let moments = permuted_energy_moments(&chain, &initial).unwrap();
        let rate = dt * (k.c2 - moments.c3);
        let result = run_ensemble(&EnsembleConfig {
            model: LindbladModel::uniform(8, chain.hamiltonian().unwrap(), 0.0).unwrap(),
            protocol: ProtocolSchedule::flip_swap(dt / 2.0, 2, None).unwrap(),
            initial,
            total_time: total,
            options: TrajectoryOptions::new(100.0),
            trajectories: 200,
            master_seed: 300 + seed,
            keep_records: false,
        })
        .unwrap();
        // Least-squares slope of -ln F through the origin.
        let (num, den) = result
            .times
            .iter()
            .zip(&result.fidelity_mean)
            .fold((0.0, 0.0), |(n, d), (t, f)| (n - t * f.ln(), d + t * t));
        let fitted = num / den;
        assert!((fitted / rate - 1.0).abs() < 0.1, "chain {seed}: fitted {fitted:e}, predicted {rate:e}");
        let predicted_final = f_coherent(total, dt, k.c2, moments.c3);
        assert!(predicted_final < 0.97, "decay too weak to test: {predicted_final}");
    }
}

#[test]
fn permuted_energy_has_no_quadratic_term_on_code_states() {
    let code = build_code(2, 0.0, CodeVariant::Tensor).unwrap();
    for seed in 0..5u64 {
        let chain = sample_uniform_chain(6, 1e-2, false, &mut seeded(seed)).unwrap();
        let state = code.encode(&random_logical(2, 50 + seed)).unwrap();
        let m = permuted_energy_moments(&chain, &state).unwrap();
        let k = code_constants(&chain, &code).unwrap();
        assert!(m.quadratic_coefficient().abs() < 1e-12 * m.mean_square.max(1e-300) + 1e-18);
        assert!(m.c3 >= k.c3_lower - 1e-15 && m.c3 <= k.c3_upper + 1e-15, "c3 {} outside bounds", m.c3);
        assert!((m.linear_coefficient() - (k.c2 - m.c3)).abs() < 1e-12 * k.c2);
    }
}

#[test]
fn four_qubit_code_recovers_every_jump() {
    let code = build_code(0, 0.0, CodeVariant::FourQubit).unwrap();
    let amps = [C64::new(0.5, 0.1), C64::new(-0.3, 0.6), C64::new(0.2, -0.4)];
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let psi = code.encode_amplitudes(&amps.map(|a| a / norm)).unwrap();
    for q in 0..4 {
        let out = recover(&apply_jump(&psi, q).unwrap(), q).unwrap();
        let overlap = psi.amplitudes().dotc(out.amplitudes()).norm_sqr();
        assert!((overlap - 1.0).abs() < 1e-10, "qubit {q}: {overlap}");
    }
}
