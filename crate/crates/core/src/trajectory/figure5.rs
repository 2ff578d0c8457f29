//! Four-curve memory comparison: unprotected, decoupled, jump-coded, and combined.

use serde::{Deserialize, Serialize};

use super::ensemble::{run_ensemble, EnsembleConfig, EnsembleResult};
use super::evolve::TrajectoryOptions;
use super::model::LindbladModel;
use super::schedule::{recovery_duration, ProtocolSchedule, PulseProtocol};
use crate::analytics::{f_combined, f_jumpcode, p_no_decay, PredictionCurve};
use crate::error::{Error, Result};
use crate::jumpcode::{build_code, c3_for_state, code_constants, CodeConstants, CodeVariant};
use crate::perturb::{sample_uniform_chain, ChainModel};
use crate::qcore::linalg::C64;
use crate::qcore::StateVector;
use crate::rng::stream;

/// Streams reserved for drawing the chains; trajectory ensembles use streams `0..M`.
const CHAIN_STREAM: u64 = u64::MAX;
const UNENCODED_CHAIN_STREAM: u64 = u64::MAX - 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Figure5Params {
    pub n_logical: usize,
    pub kappa: f64,
    pub epsilon: f64,
    /// Swap interval `dt`; also the pulse interval of the unencoded decoupled memory.
    pub swap_interval: f64,
    /// Flips per swap interval, `m`.
    pub flips_per_swap: usize,
    pub trajectories: usize,
    pub total_time: f64,
    pub sample_interval: f64,
    pub phase: f64,
    /// Draw X and Y couplings as well as Z couplings.
    pub full_heisenberg: bool,
}

impl Default for Figure5Params {
    fn default() -> Self {
        Self {
            n_logical: 3,
            kappa: 1e-3,
            epsilon: 1e-4,
            swap_interval: 4.0,
            flips_per_swap: 2,
            trajectories: 100,
            total_time: 2000.0,
            sample_interval: 20.0,
            phase: 0.0,
            full_heisenberg: false,
        }
    }
}

impl Figure5Params {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.flips_per_swap == 0 || self.flips_per_swap % 2 != 0 {
            return Err(Error::InvalidParameter("flips per swap must be a positive even integer".into()));
        }
        if self.trajectories == 0 {
            return Err(Error::InvalidParameter("need at least one trajectory".into()));
        }
        if !(self.swap_interval > 0.0 && self.total_time > 0.0 && self.sample_interval > 0.0) {
            return Err(Error::InvalidParameter("times must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Figure5Result {
    pub unprotected: EnsembleResult,
    pub decoupling_only: EnsembleResult,
    pub jumpcode_only: EnsembleResult,
    pub combined: EnsembleResult,
    pub encoded_chain: ChainModel,
    pub unencoded_chain: ChainModel,
    pub constants: CodeConstants,
    /// `c3` of the encoded initial state, by enumeration.
    pub c3: f64,
    pub recovery_time: f64,
    /// Analytic overlays: unprotected, decoupling-only, jumpcode-only, combined (`c3` and `c1^2`).
    pub analytic: Vec<PredictionCurve>,
}

impl Figure5Result {
    pub fn curves(&self) -> [(&'static str, &EnsembleResult); 4] {
        [
            ("unprotected", &self.unprotected),
            ("decoupling_only", &self.decoupling_only),
            ("jumpcode_only", &self.jumpcode_only),
            ("combined", &self.combined),
        ]
    }
}

fn plus_state(n: usize) -> Result<StateVector> {
    let amp = C64::from((1.0 / (1usize << n) as f64).sqrt());
    StateVector::from_amplitudes(n, vec![amp; 1 << n])
}

fn variance(h: &crate::qcore::Operator, psi: &StateVector) -> f64 {
    let v = psi.amplitudes();
    let hv = h * v;
    let mean = v.dotc(&hv).re;
    hv.norm_squared() - mean * mean
}

/// Runs the four ensembles from one master seed. The chains are drawn once per run, and
/// the initial state is `|+...+>` on the logical (or the bare) register.
pub fn figure5(params: &Figure5Params, master_seed: u64) -> Result<Figure5Result> {
    params.validate()?;
    let code = build_code(params.n_logical, params.phase, CodeVariant::Tensor)?;
    let n_p = code.n_physical();
    let n_u = params.n_logical;
    let encoded_chain = sample_uniform_chain(
        n_p,
        params.epsilon,
        params.full_heisenberg,
        &mut stream(master_seed, CHAIN_STREAM),
    )?;
    let unencoded_chain = sample_uniform_chain(
        n_u,
        params.epsilon,
        params.full_heisenberg,
        &mut stream(master_seed, UNENCODED_CHAIN_STREAM),
    )?;
    let h_p = encoded_chain.hamiltonian()?;
    let h_u = unencoded_chain.hamiltonian()?;
    let t_rec = recovery_duration(n_p)?;
    let logical_plus = plus_state(n_u)?;
    let encoded_plus = code.encode(&logical_plus)?;
    let options = TrajectoryOptions::new(params.sample_interval);
    let tau = params.swap_interval / params.flips_per_swap as f64;

    let ensemble = |model: LindbladModel, protocol: ProtocolSchedule, initial: StateVector| {
        run_ensemble(&EnsembleConfig {
            model,
            protocol,
            initial,
            total_time: params.total_time,
            options: options.clone(),
            trajectories: params.trajectories,
            master_seed,
            keep_records: false,
        })
    };
    let unprotected = ensemble(
        LindbladModel::uniform(n_u, h_u.clone(), params.kappa)?,
        ProtocolSchedule::idle(),
        logical_plus.clone(),
    )?;
    let decoupling_only = ensemble(
        LindbladModel::uniform(n_u, h_u.clone(), params.kappa)?,
        ProtocolSchedule {
            pulses: PulseProtocol::RandomPauli {
                interval: params.swap_interval,
            },
            recovery_time: None,
        },
        logical_plus.clone(),
    )?;
    let jumpcode_only = ensemble(
        LindbladModel::uniform(n_p, h_p.clone(), params.kappa)?,
        ProtocolSchedule {
            pulses: PulseProtocol::None,
            recovery_time: Some(t_rec),
        },
        encoded_plus.clone(),
    )?;
    let combined = ensemble(
        LindbladModel::uniform(n_p, h_p.clone(), params.kappa)?,
        ProtocolSchedule::flip_swap(tau, params.flips_per_swap, Some(t_rec))?,
        encoded_plus.clone(),
    )?;

    let constants = code_constants(&encoded_chain, &code)?;
    let c3 = c3_for_state(&encoded_chain.ising_part(), &encoded_plus)?;
    let times = combined.times.clone();
    let (kappa, dt) = (params.kappa, params.swap_interval);
    let var_u = variance(&h_u, &logical_plus);
    let var_p = variance(&h_p, &encoded_plus);
    let tr_u = crate::analytics::normalized_square_trace(&h_u);
    let n_half = n_u as f64 / 2.0;
    let analytic = vec![
        PredictionCurve::sample("unprotected", vec![("n1".into(), n_half)], &times, |t| {
            p_no_decay(n_half, kappa, t) * (-var_u * t * t).exp()
        }),
        PredictionCurve::sample("decoupling_only", vec![("dt".into(), dt)], &times, |t| {
            p_no_decay(n_half, kappa, t) * (-t * dt * tr_u).exp()
        }),
        PredictionCurve::sample("jumpcode_only", vec![("t_rec".into(), t_rec)], &times, |t| {
            f_jumpcode(n_p, kappa, t_rec, t).fidelity * (-var_p * t * t).exp()
        }),
        PredictionCurve::sample("combined_c3", vec![("c2".into(), constants.c2), ("c3".into(), c3)], &times, |t| {
            f_combined(n_p, kappa, t_rec, dt, constants.c2, c3, t)
        }),
        PredictionCurve::sample(
            "combined_c1sq",
            vec![("c2".into(), constants.c2), ("c1".into(), constants.c1)],
            &times,
            |t| f_combined(n_p, kappa, t_rec, dt, constants.c2, constants.c3_lower, t),
        ),
    ];
    Ok(Figure5Result {
        unprotected,
        decoupling_only,
        jumpcode_only,
        combined,
        encoded_chain,
        unencoded_chain,
        constants,
        c3,
        recovery_time: t_rec,
        analytic,
    })
}
