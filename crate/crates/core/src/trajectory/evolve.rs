//! Jump unraveling of a single trajectory under the combined protocol.

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use super::model::LindbladModel;
use super::schedule::{in_window, pulse_grid, Event, EventKind, ProtocolSchedule, PulseProtocol, TIME_EPS};
use crate::algos::GateSequence;
use crate::error::{Error, Result};
use crate::jumpcode::{flip_operator, recovery_sequence, Permutation, PermutationTracker};
use crate::qcore::linalg::{bit_position, expm, expm_multiply, Operator, C64, ZERO};
use crate::qcore::{PauliString, StateVector};
use crate::tol;

/// Cached dense propagators are kept for at most this many distinct step lengths.
const PROPAGATOR_CACHE: usize = 8;
const BISECTION_STEPS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryOptions {
    /// Spacing of the fidelity grid.
    pub sample_interval: f64,
    /// Keep the normalized lab-frame state at every sample.
    pub record_states: bool,
}

impl TrajectoryOptions {
    pub fn new(sample_interval: f64) -> Self {
        Self {
            sample_interval,
            record_states: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JumpEvent {
    pub time: f64,
    pub qubit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelitySample {
    pub time: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    /// `(master seed, trajectory index)` when run from an ensemble.
    pub seed: Option<(u64, u64)>,
    pub jumps: Vec<JumpEvent>,
    pub samples: Vec<FidelitySample>,
    /// Executed pulses, jumps, recovery completions and the terminating failure, in order.
    pub events: Vec<Event>,
    pub swap_layers: Vec<Vec<(usize, usize)>>,
    pub pauli_pulses: Vec<PauliString>,
    pub permutation: Permutation,
    pub uncorrectable_at: Option<f64>,
    #[serde(skip)]
    pub states: Vec<StateVector>,
}

impl TrajectoryRecord {
    pub fn jumps_until(&self, t: f64) -> usize {
        self.jumps.iter().filter(|j| j.time <= t + TIME_EPS).count()
    }

    /// Time of the first jump, if any.
    pub fn first_jump(&self) -> Option<f64> {
        self.jumps.first().map(|j| j.time)
    }
}

/// `exp(-i H_eff dt)` acting on state vectors.
enum Drift {
    Diagonal(Vec<C64>),
    Dense {
        generator: Operator,
        cache: Vec<(u64, Operator)>,
    },
}

impl Drift {
    fn new(model: &LindbladModel) -> Self {
        let heff = model.effective_hamiltonian();
        let generator = heff * C64::new(0.0, -1.0);
        let diagonal = generator
            .iter()
            .enumerate()
            .all(|(k, v)| k % generator.nrows() == k / generator.nrows() || *v == ZERO);
        if diagonal {
            Drift::Diagonal(generator.diagonal().iter().copied().collect())
        } else {
            Drift::Dense {
                generator,
                cache: Vec::new(),
            }
        }
    }

    fn probe(&self, v: &DVector<C64>, dt: f64) -> DVector<C64> {
        match self {
            Drift::Diagonal(g) => DVector::from_iterator(v.len(), v.iter().zip(g).map(|(a, g)| a * (g * dt).exp())),
            Drift::Dense { generator, .. } => expm_multiply(generator, v, dt),
        }
    }

    fn advance(&mut self, v: &DVector<C64>, dt: f64) -> DVector<C64> {
        if let Drift::Dense { generator, cache } = self {
            let key = dt.to_bits();
            if let Some((_, u)) = cache.iter().find(|(k, _)| *k == key) {
                return u * v;
            }
            if cache.len() < PROPAGATOR_CACHE {
                let u = expm(&(&*generator * C64::from(dt)));
                let out = &u * v;
                cache.push((key, u));
                return out;
            }
        }
        self.probe(v, dt)
    }
}

fn permute_amplitudes(p: &Permutation, amps: &mut DVector<C64>) {
    let old = amps.clone();
    for (b, a) in old.iter().enumerate() {
        amps[p.apply_index(b)] = *a;
    }
}

fn normalized(psi: &StateVector) -> StateVector {
    let mut s = psi.clone();
    // Squared norm stays above zero: jumps are only drawn from states with nonzero weight.
    let _ = s.normalize();
    s
}

fn draw_qubit<R: Rng + ?Sized>(model: &LindbladModel, psi: &StateVector, rng: &mut R) -> Result<usize> {
    let n = model.n_qubits();
    let weights: Vec<f64> = (0..n)
        .map(|q| model.rates()[q] * psi.excitation_probability(q))
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Numerical("jump drawn from a state with no decay channel".into()));
    }
    let mut r = rng.random::<f64>() * total;
    for (q, w) in weights.iter().enumerate() {
        if r < *w {
            return Ok(q);
        }
        r -= w;
    }
    Ok(weights.iter().rposition(|&w| w > 0.0).unwrap_or(n - 1))
}

fn lower_in_place(psi: &mut StateVector, qubit: usize) {
    let n = psi.n_qubits();
    let bit = 1usize << bit_position(qubit, n);
    let amps = psi.amplitudes_mut();
    for b in 0..amps.len() {
        if b & bit == 0 {
            amps[b] = amps[b | bit];
            amps[b | bit] = ZERO;
        }
    }
}

/// Simulates one trajectory. Between jumps the state follows `H_eff` exactly; a jump fires
/// when the squared norm reaches a uniform threshold. Fidelity is taken against `psi0`
/// carried through the same pulses, so decoupling itself costs no fidelity.
pub fn evolve_trajectory<R: Rng + ?Sized>(
    model: &LindbladModel,
    protocol: &ProtocolSchedule,
    psi0: &StateVector,
    total_time: f64,
    options: &TrajectoryOptions,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    protocol.validate()?;
    let n = model.n_qubits();
    if psi0.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi0.n_qubits(),
        });
    }
    if !psi0.is_normalized() {
        return Err(Error::NotNormalized(psi0.norm_sqr()));
    }
    if !(total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::InvalidParameter(format!("total time must be > 0, got {total_time}")));
    }
    if !(options.sample_interval > 0.0) {
        return Err(Error::InvalidParameter("sample interval must be > 0".into()));
    }
    if protocol.recovery_time.is_some() && !model.has_equal_rates() {
        return Err(Error::InvalidParameter("jump correction requires equal decay rates".into()));
    }
    let flip = match protocol.pulses {
        PulseProtocol::FlipSwap { .. } => Some(flip_operator(n)?),
        _ => None,
    };
    let recoveries: Vec<GateSequence> = if protocol.recovery_time.is_some() {
        (0..n).map(|q| recovery_sequence(n, q)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let grid = pulse_grid(protocol, total_time);
    let n_samples = (total_time / options.sample_interval + TIME_EPS).floor() as usize + 1;
    let sample_time = |k: usize| k as f64 * options.sample_interval;

    let mut drift = Drift::new(model);
    let mut psi = psi0.clone();
    let mut reference = psi0.clone();
    let mut tracker = PermutationTracker::new(n);
    let mut record = TrajectoryRecord {
        seed: None,
        jumps: Vec::new(),
        samples: Vec::with_capacity(n_samples),
        events: Vec::new(),
        swap_layers: Vec::new(),
        pauli_pulses: Vec::new(),
        permutation: Permutation::identity(n),
        uncorrectable_at: None,
        states: Vec::new(),
    };
    let mut window: Option<(f64, f64, usize)> = None;
    let mut threshold: f64 = rng.random();
    let mut t = 0.0;
    let (mut g, mut s) = (0usize, 0usize);

    loop {
        // Events due at `t`: recovery completion, then pulses, then fidelity samples.
        if let Some((_, end, q)) = window {
            if end <= t + TIME_EPS {
                recoveries[q].apply_to_state(&mut psi)?;
                record.events.push(Event {
                    time: end,
                    kind: EventKind::RecoveryEnd,
                });
                window = None;
            }
        }
        while g < grid.len() && grid[g].time <= t + TIME_EPS {
            let e = grid[g];
            g += 1;
            if window.is_some_and(|(start, end, _)| in_window(e.time, start, end)) {
                continue;
            }
            match e.kind {
                EventKind::Flip => {
                    let f = flip.as_ref().expect("flip pulses imply an even register");
                    f.apply(psi.amplitudes_mut().as_mut_slice());
                    f.apply(reference.amplitudes_mut().as_mut_slice());
                }
                EventKind::Swap => {
                    let p = tracker.random_layer(rng);
                    permute_amplitudes(&p, psi.amplitudes_mut());
                    permute_amplitudes(&p, reference.amplitudes_mut());
                }
                EventKind::Pauli => {
                    let p = PauliString::random(n, rng);
                    p.apply(psi.amplitudes_mut().as_mut_slice());
                    p.apply(reference.amplitudes_mut().as_mut_slice());
                    record.pauli_pulses.push(p);
                }
                _ => unreachable!("grid holds pulses only"),
            }
            record.events.push(e);
        }
        while s < n_samples && sample_time(s) <= t + TIME_EPS {
            let mut now = normalized(&psi);
            if record.states.len() < n_samples && options.record_states {
                record.states.push(now.clone());
            }
            if let Some((_, _, q)) = window {
                recoveries[q].apply_to_state(&mut now)?;
            }
            record.samples.push(FidelitySample {
                time: sample_time(s),
                fidelity: reference.fidelity(&now).clamp(0.0, 1.0),
            });
            s += 1;
        }
        if t >= total_time - TIME_EPS {
            break;
        }

        let mut next = total_time;
        if let Some(e) = grid.get(g) {
            next = next.min(e.time);
        }
        if s < n_samples {
            next = next.min(sample_time(s));
        }
        if let Some((_, end, _)) = window {
            next = next.min(end);
        }
        let dt = (next - t).max(0.0);
        let moved = drift.advance(psi.amplitudes(), dt);
        if moved.norm_squared() > threshold {
            *psi.amplitudes_mut() = moved;
            t = next;
            continue;
        }

        let (mut lo, mut hi) = (0.0, dt);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if drift.probe(psi.amplitudes(), mid).norm_squared() > threshold {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * dt.max(1.0) {
                break;
            }
        }
        *psi.amplitudes_mut() = drift.probe(psi.amplitudes(), hi);
        t += hi;
        let q = draw_qubit(model, &psi, rng)?;
        lower_in_place(&mut psi, q);
        psi.normalize()?;
        threshold = rng.random();
        record.jumps.push(JumpEvent { time: t, qubit: q });
        if let Some(d) = protocol.recovery_time {
            if window.is_some() {
                record.events.push(Event {
                    time: t,
                    kind: EventKind::Uncorrectable,
                });
                record.uncorrectable_at = Some(t);
                while s < n_samples {
                    record.samples.push(FidelitySample {
                        time: sample_time(s),
                        fidelity: 0.0,
                    });
                    s += 1;
                }
                break;
            }
            window = Some((t, t + d, q));
        }
        record.events.push(Event {
            time: t,
            kind: EventKind::Jump,
        });
    }
    if psi.norm_sqr() > 1.0 + tol::NORM {
        return Err(Error::Numerical(format!("norm drift: |psi|^2 = {}", psi.norm_sqr())));
    }
    record.permutation = tracker.current().clone();
    record.swap_layers = tracker.history().to_vec();
    Ok(record)
}
