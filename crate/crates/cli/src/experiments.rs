//! One function per named experiment.

use anyhow::{ensure, Result};
use rand::{Rng, RngCore};
use serde_json::json;

use qstab::algos::{
    build_qft, correlation_matrix_gue_average, parec_correlation_average, parec_mean_fidelity_trace,
    static_error_fidelity_trace, CorrelationMatrix, Normalization,
};
use qstab::analytics::{
    bound_scalings, curves_to_csv, f_coherent, f_combined, f_jumpcode, memory_bound, p_no_decay, parec_bound,
    PredictionCurve,
};
use qstab::decouple::{mean_fidelity_trace, DecouplingSchedule, ScheduleKind};
use qstab::jumpcode::{
    apply_jump, build_code, code_constants, flip_preserves_code, permutation_average, permuted_energy_moments,
    recover, zzzz_bias,
};
use qstab::perturb::{sample_uniform_chain, GuePerturbation};
use qstab::qcore::linalg::expm_hermitian;
use qstab::rng::stream;
use qstab::trajectory::{figure5, recovery_duration};
use qstab::C64;

use crate::artifacts::ArtifactWriter;
use crate::config::{decoupling_set, ExperimentConfig};

/// Independent sub-seed `k` of the run's master seed.
fn sub_seed(config: &ExperimentConfig, k: u64) -> u64 {
    stream(config.seed, k).next_u64()
}

fn matrix_rows(c: &CorrelationMatrix) -> Vec<(usize, usize, f64)> {
    c.rows(Normalization::Normalized)
}

pub fn correlation_matrix(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.circuit;
    let seq = build_qft(p.n_qubits)?;
    let header = ["j", "k", "value"];
    if p.parec {
        let set = decoupling_set(p.n_qubits, &p.pauli_set)?;
        let avg = parec_correlation_average(&seq, p.delta, p.samples, &set, &mut stream(config.seed, 0))?;
        let summary = json!({
            "normalization": "C/delta^2 + 1/N^2",
            "layout": "rewritten, pulse and conjugated gate per step",
            "samples": avg.samples,
            "fidelity_monte_carlo": avg.mean.fidelity(),
            "fidelity_expected": avg.expected_fidelity,
            "fidelity_bound": avg.fidelity_bound,
        });
        out.write_csv("correlation.csv", &header, &matrix_rows(&avg.mean), summary.clone())?;
        out.write_csv("correlation_expected.csv", &header, &matrix_rows(&avg.expected), summary)?;
    } else {
        let c = correlation_matrix_gue_average(&seq, p.delta);
        let summary = json!({
            "normalization": "C/delta^2 + 1/N^2",
            "n_gates": seq.len(),
            "second_order_fidelity": c.fidelity(),
        });
        out.write_csv("correlation.csv", &header, &matrix_rows(&c), summary)?;
    }
    Ok(())
}

pub fn parec_fidelity(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.circuit;
    let seq = build_qft(p.n_qubits)?;
    let set = decoupling_set(p.n_qubits, &p.pauli_set)?;
    let dh = GuePerturbation::sample(seq.dim(), p.delta, &mut stream(config.seed, 0))?.delta_h();
    let error = expm_hermitian(&dh, 1.0);
    let off = static_error_fidelity_trace(&seq, &error, p.iterations);
    let (on, stderr) = parec_mean_fidelity_trace(&seq, &error, p.iterations, &set, p.samples, sub_seed(config, 1))?;
    let mut rows = Vec::with_capacity(3 * p.iterations);
    for (i, f) in off.iter().enumerate() {
        rows.push((i + 1, *f, 0.0, "parec_off"));
    }
    for (i, (f, s)) in on.iter().zip(&stderr).enumerate() {
        rows.push((i + 1, *f, *s, "parec_on"));
    }
    let mut violations = 0;
    for (i, f) in on.iter().enumerate() {
        let b = parec_bound((i + 1) as f64, seq.len(), &dh);
        if *f + 3.0 * stderr[i] < b {
            violations += 1;
        }
        rows.push((i + 1, b, 0.0, "bound"));
    }
    let summary = json!({
        "n_gates": seq.len(),
        "final_fidelity_off": off.last(),
        "final_fidelity_on": on.last(),
        "bound_violations_beyond_3_sigma": violations,
    });
    out.write_csv("parec_fidelity.csv", &["iteration", "fidelity", "stderr", "curve"], &rows, summary)
}

fn gue_idle_hamiltonian(config: &ExperimentConfig) -> Result<qstab::Operator> {
    let p = &config.decoupling;
    Ok(GuePerturbation::sample(1 << p.n_qubits, p.strength, &mut stream(config.seed, 0))?.delta_h())
}

fn schedule_for(config: &ExperimentConfig, kind: ScheduleKind) -> Result<DecouplingSchedule> {
    let p = &config.decoupling;
    let set = decoupling_set(p.n_qubits, &p.set)?;
    let schedule = if kind.is_embedded() {
        DecouplingSchedule::embedded(kind, p.dt, set, decoupling_set(p.n_qubits, &p.outer_set)?)
    } else {
        DecouplingSchedule::new(kind, p.dt, set)
    };
    Ok(schedule.with_seed(sub_seed(config, 1)))
}

pub fn nrd_memory(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.decoupling;
    let h0 = gue_idle_hamiltonian(config)?;
    let schedule = schedule_for(config, ScheduleKind::Nrd)?;
    let (times, mean) = mean_fidelity_trace(&h0, &schedule, p.total_time, p.realizations)?;
    let rows: Vec<(usize, f64, f64)> = times.iter().zip(&mean).enumerate().map(|(i, (t, f))| (i + 1, *t, *f)).collect();
    let bound: Vec<(usize, f64, f64)> =
        times.iter().enumerate().map(|(i, &t)| (i + 1, t, memory_bound(t, p.dt, &h0))).collect();
    let header = ["step", "time", "fidelity"];
    let summary = json!({
        "final_fidelity": mean.last(),
        "final_bound": bound.last().map(|r| r.2),
    });
    out.write_csv("nrd_memory.csv", &header, &rows, summary.clone())?;
    out.write_csv("memory_bound.csv", &header, &bound, summary)
}

/// Least-squares slope of `ln(1 - F)` against `ln t` at completed cycles, where the
/// infidelity is resolvable.
fn decay_exponent(times: &[f64], fidelity: &[f64], period: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(fidelity)
        .skip(period - 1)
        .step_by(period)
        .filter(|(_, f)| 1.0 - **f > 1e-13)
        .map(|(t, f)| (t.ln(), (1.0 - f).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn schedule_name(kind: ScheduleKind) -> String {
    serde_json::to_value(kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

pub fn decouple_scaling(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.decoupling;
    ensure!(!p.schedules.is_empty(), "decoupling.schedules is empty");
    let h0 = gue_idle_hamiltonian(config)?;
    let mut traces = Vec::new();
    let mut exponents = Vec::new();
    for &kind in &p.schedules {
        let schedule = schedule_for(config, kind)?;
        let (times, mean) = mean_fidelity_trace(&h0, &schedule, p.total_time, p.realizations)?;
        let name = schedule_name(kind);
        for (i, (t, f)) in times.iter().zip(&mean).enumerate() {
            traces.push((i + 1, *t, *f, name.clone()));
        }
        let predicted = bound_scalings(kind).ok().map(|s| s.time_power);
        exponents.push((name, decay_exponent(&times, &mean, schedule.outer_period()), predicted));
    }
    let summary = json!({ "schedules": p.schedules.iter().map(|&k| schedule_name(k)).collect::<Vec<_>>() });
    out.write_csv("decouple_traces.csv", &["step", "time", "fidelity", "schedule"], &traces, summary.clone())?;
    out.write_csv(
        "decay_exponents.csv",
        &["schedule", "fitted_time_power", "bound_time_power"],
        &exponents,
        summary,
    )
}

pub fn jumpcode_recovery(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.jumpcode;
    let code = build_code(p.n_logical, p.phase, p.variant)?;
    let n = code.n_physical();
    let k = code.codewords().len();
    let mut rows = Vec::with_capacity(p.states * n);
    let mut worst = f64::INFINITY;
    for s in 0..p.states {
        let mut rng = stream(config.seed, s as u64);
        let raw: Vec<C64> = (0..k).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let psi = code.encode_amplitudes(&raw.iter().map(|a| a / norm).collect::<Vec<_>>())?;
        for q in 0..n {
            let back = recover(&apply_jump(&psi, q)?, q)?;
            let f = psi.amplitudes().dotc(back.amplitudes()).norm_sqr();
            worst = worst.min(f);
            rows.push((s, q, f));
        }
    }
    let summary = json!({
        "n_physical": n,
        "codewords": k,
        "min_fidelity": worst,
        "flip_preserves_code": flip_preserves_code(&code)?,
    });
    out.write_csv("jumpcode_recovery.csv", &["state", "qubit", "fidelity"], &rows, summary.clone())?;
    let words: Vec<_> = (0..k).map(|i| json!({ "codeword": i, "entries": code.codeword_entries(i) })).collect();
    out.write_json("codewords.json", &words, summary)
}

pub fn combined_figure5(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let r = figure5(&config.figure5, config.seed)?;
    let summary = json!({
        "encoded_chain": r.encoded_chain,
        "unencoded_chain": r.unencoded_chain,
        "constants": r.constants,
        "c3": r.c3,
        "recovery_time": r.recovery_time,
        "final_fidelity": r.curves().iter().map(|(n, e)| (n.to_string(), e.final_fidelity())).collect::<Vec<_>>(),
    });
    for (name, e) in r.curves() {
        out.write(&format!("{name}.csv"), e.to_csv().as_bytes(), summary.clone())?;
    }
    let params: Vec<_> = r.analytic.iter().map(|c| json!({ "model": c.model, "parameters": c.parameters })).collect();
    let mut analytic_summary = summary;
    analytic_summary["models"] = json!(params);
    out.write("analytic.csv", curves_to_csv(&r.analytic).as_bytes(), analytic_summary)
}

pub fn analytic_curves(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.analytic;
    let n = p.n_physical;
    let t_rec = match p.recovery_time {
        Some(t) => t,
        None => recovery_duration(n)?,
    };
    let e2 = p.epsilon * p.epsilon;
    let c2 = p.c2.unwrap_or((2 * n - 1) as f64 * e2);
    let c3 = p.c3.unwrap_or(e2 / (n - 1) as f64);
    ensure!(c3 <= c2, "c3 = {c3} exceeds c2 = {c2}");
    let times: Vec<f64> = (0..p.points).map(|i| p.total_time * i as f64 / (p.points - 1) as f64).collect();
    let par = |v: &[(&str, f64)]| v.iter().map(|(k, x)| (k.to_string(), *x)).collect::<Vec<_>>();
    let (kappa, dt) = (p.kappa, p.dt);
    let curves = vec![
        PredictionCurve::sample("no_decay", par(&[("kappa", kappa)]), &times, |t| {
            p_no_decay(n as f64 / 2.0, kappa, t)
        }),
        PredictionCurve::sample("jumpcode", par(&[("kappa", kappa), ("t_rec", t_rec)]), &times, |t| {
            f_jumpcode(n, kappa, t_rec, t).fidelity
        }),
        PredictionCurve::sample("coherent", par(&[("dt", dt), ("c2", c2), ("c3", c3)]), &times, |t| {
            f_coherent(t, dt, c2, c3)
        }),
        PredictionCurve::sample(
            "combined",
            par(&[("kappa", kappa), ("t_rec", t_rec), ("dt", dt), ("c2", c2), ("c3", c3)]),
            &times,
            |t| f_combined(n, kappa, t_rec, dt, c2, c3, t),
        ),
    ];
    let summary = json!({ "recovery_time": t_rec, "c2": c2, "c3": c3 });
    out.write("analytic.csv", curves_to_csv(&curves).as_bytes(), summary)
}

/// `p'_+ - p'_-` of `Z Z Z Z` on the first four qubits, counted over half-filled words.
fn counted_zzzz_bias(n: usize) -> f64 {
    let (mut plus, mut total) = (0usize, 0usize);
    for b in 0..1usize << n {
        if b.count_ones() as usize * 2 == n {
            total += 1;
            if (b >> (n - 4) & 0xf).count_ones() % 2 == 0 {
                plus += 1;
            }
        }
    }
    (2 * plus) as f64 / total as f64 - 1.0
}

pub fn constants_check(config: &ExperimentConfig, out: &mut ArtifactWriter) -> Result<()> {
    let p = &config.constants;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut c3_in_bounds = true;
    for &n_l in &p.n_logical {
        let code = build_code(n_l, 0.0, qstab::jumpcode::CodeVariant::Tensor)?;
        let n = code.n_physical();
        let closed = zzzz_bias(n);
        let counted = counted_zzzz_bias(n);
        rows.push((n, 0, "zzzz_bias", closed, counted, (closed - counted).abs()));
        for draw in 0..p.draws {
            let chain = sample_uniform_chain(n, p.epsilon, false, &mut stream(config.seed, (n * 10_000 + draw) as u64))?;
            let k = code_constants(&chain, &code)?;
            let psi = &code.codewords()[0];
            let avg = permutation_average(&chain.hamiltonian()?)?;
            let c1 = psi.amplitudes().dotc(&(&avg * psi.amplitudes())).re;
            let m = permuted_energy_moments(&chain, psi)?;
            for (q, a, b) in [("c1", k.c1, c1), ("c2", k.c2, m.mean_square)] {
                worst = worst.max((a - b).abs());
                rows.push((n, draw, q, a, b, (a - b).abs()));
            }
            c3_in_bounds &= m.c3 >= k.c3_lower - 1e-15 && m.c3 <= k.c3_upper + 1e-15;
        }
    }
    let summary = json!({ "max_abs_error": worst, "c3_within_bounds": c3_in_bounds });
    out.write_csv(
        "constants.csv",
        &["n_physical", "draw", "quantity", "closed_form", "enumerated", "abs_error"],
        &rows,
        summary,
    )
}
