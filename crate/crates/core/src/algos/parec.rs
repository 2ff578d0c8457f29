//! Pauli-random rewriting of an iterated gate sequence.
//!
//! Before gate `U_i` of iteration `tau` the pulse `r_i r_{i-1}^dagger` is applied and the
//! gate itself is replaced by `r_i U_i r_i^dagger`; a final `r_{n_g}^dagger` closes the
//! circuit, so the ideal product is unchanged.

use rand::Rng;
use rayon::prelude::*;

use super::circuit::{Gate, GateOp, GateSequence};
use crate::decouple::{DecouplingSet, Element};
use crate::error::{Error, Result};
use crate::qcore::linalg::{hs_inner, identity, Operator};
use crate::rng::stream;

#[derive(Clone, Debug)]
pub struct ParecCircuit {
    /// `2 n_g t` gates: pulse, conjugated gate, pulse, ...
    pub body: GateSequence,
    /// `r_{n_g}^{(t) dagger}`, applied after the body.
    pub final_pulse: Element,
    pub iterations: usize,
    pub gates_per_iteration: usize,
    /// Drawn `r_i^{(tau)}`, iteration-major.
    pub draws: Vec<Element>,
}

impl ParecCircuit {
    /// Body followed by the final pulse, as one sequence.
    pub fn full_sequence(&self) -> GateSequence {
        let mut s = self.body.clone();
        s.push_unchecked(element_gate("r_final^dag", &self.final_pulse));
        s
    }

    pub fn product(&self) -> Operator {
        let mut m = self.body.product();
        self.final_pulse.left_apply(&mut m);
        m
    }
}

fn element_gate(label: &str, e: &Element) -> Gate {
    match e {
        Element::Pauli(p) => Gate::pauli(label, p.clone()),
        Element::Dense(m) => Gate::full(label, m.clone()),
    }
}

/// `r G r^dagger`; a Pauli `r` only touches the gate's own targets.
fn conjugate_gate(gate: &Gate, r: &Element, n_qubits: usize) -> Result<Gate> {
    let label = format!("r{}r^dag", gate.label);
    Ok(match (r, &gate.op) {
        (Element::Pauli(p), GateOp::Local { op, targets }) => {
            let local = p.restrict(targets).to_operator();
            Gate::local(label, &local * op * local.adjoint(), targets.clone())
        }
        (Element::Pauli(p), GateOp::Pauli(q)) => Gate::pauli(label, p.mul(q)?.mul(&p.adjoint())?),
        _ => {
            let rm = r.to_operator();
            Gate::full(label, &rm * gate.matrix(n_qubits) * rm.adjoint())
        }
    })
}

/// Rewrites `t` iterations of `seq` with random pulses drawn uniformly from `set`.
pub fn parec_transform<R: Rng + ?Sized>(
    seq: &GateSequence,
    iterations: usize,
    set: &DecouplingSet,
    rng: &mut R,
) -> Result<ParecCircuit> {
    if set.n_qubits() != seq.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: seq.n_qubits(),
            found: set.n_qubits(),
        });
    }
    let n = seq.n_qubits();
    let mut body = GateSequence::new(n)?;
    let mut prev = Element::identity(n);
    let mut draws = Vec::with_capacity(iterations * seq.len());
    for tau in 1..=iterations {
        for (i, gate) in seq.gates().iter().enumerate() {
            let r = set.random_element(rng);
            let pulse = r.compose(&prev.adjoint())?;
            body.push_unchecked(element_gate(&format!("r{}^{tau}r{i}^dag", i + 1), &pulse));
            body.push_unchecked(conjugate_gate(gate, &r, n)?);
            draws.push(r.clone());
            prev = r;
        }
    }
    Ok(ParecCircuit {
        body,
        final_pulse: prev.adjoint(),
        iterations,
        gates_per_iteration: seq.len(),
        draws,
    })
}

/// `F_e(U^t, prod_j E U_j)` after every iteration `t = 1..=t_max`, with the static error
/// propagator `E` following each gate.
pub fn static_error_fidelity_trace(seq: &GateSequence, error: &Operator, t_max: usize) -> Vec<f64> {
    let n = seq.n_qubits();
    let u = seq.product();
    let mut ideal = identity(seq.dim());
    let mut actual = identity(seq.dim());
    let mut out = Vec::with_capacity(t_max);
    for _ in 0..t_max {
        for g in seq.gates() {
            g.left_apply(&mut actual, n);
            actual = error * &actual;
        }
        ideal = &u * &ideal;
        out.push((hs_inner(&ideal, &actual) / seq.dim() as f64).norm_sqr());
    }
    out
}

/// Same as [`static_error_fidelity_trace`] for one random rewriting; the error follows every
/// body gate (pulses included) and the closing pulse is ideal.
pub fn parec_static_error_fidelity_trace<R: Rng + ?Sized>(
    seq: &GateSequence,
    error: &Operator,
    t_max: usize,
    set: &DecouplingSet,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let circuit = parec_transform(seq, t_max, set, rng)?;
    let n = seq.n_qubits();
    let dim = seq.dim();
    let u = seq.product();
    let per_iter = 2 * seq.len();
    let mut ideal = identity(dim);
    let mut actual = identity(dim);
    let mut out = Vec::with_capacity(t_max);
    for (k, g) in circuit.body.gates().iter().enumerate() {
        g.left_apply(&mut actual, n);
        actual = error * &actual;
        if (k + 1) % per_iter == 0 {
            let tau = (k + 1) / per_iter;
            ideal = &u * &ideal;
            let mut closed = actual.clone();
            circuit.draws[tau * seq.len() - 1].adjoint().left_apply(&mut closed);
            out.push((hs_inner(&ideal, &closed) / dim as f64).norm_sqr());
        }
    }
    Ok(out)
}

/// Mean and standard error of the rewritten fidelity trace over `draws` rewritings,
/// one RNG stream per rewriting.
pub fn parec_mean_fidelity_trace(
    seq: &GateSequence,
    error: &Operator,
    t_max: usize,
    set: &DecouplingSet,
    draws: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if draws == 0 {
        return Err(Error::InvalidParameter("draws must be >= 1".into()));
    }
    let traces: Vec<Vec<f64>> = (0..draws as u64)
        .into_par_iter()
        .map(|k| parec_static_error_fidelity_trace(seq, error, t_max, set, &mut stream(seed, k)))
        .collect::<Result<_>>()?;
    let m = draws as f64;
    let mut mean = vec![0.0; t_max];
    let mut sq = vec![0.0; t_max];
    for tr in &traces {
        for (i, f) in tr.iter().enumerate() {
            mean[i] += f;
            sq[i] += f * f;
        }
    }
    let stderr = mean
        .iter_mut()
        .zip(&sq)
        .map(|(mu, s)| {
            *mu /= m;
            let var = if draws > 1 { (s / m - *mu * *mu).max(0.0) * m / (m - 1.0) } else { 0.0 };
            (var / m).sqrt()
        })
        .collect();
    Ok((mean, stderr))
}
