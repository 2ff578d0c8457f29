//! Closed-form fidelity predictions and reference scaling laws.

use serde::{Deserialize, Serialize};

use crate::decouple::ScheduleKind;
use crate::error::{Error, Result};
use crate::qcore::linalg::{trace, Operator};

/// Sampled prediction `(time, fidelity)` of a named model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionCurve {
    pub model: String,
    pub parameters: Vec<(String, f64)>,
    pub points: Vec<(f64, f64)>,
}

impl PredictionCurve {
    pub fn sample(
        model: impl Into<String>,
        parameters: Vec<(String, f64)>,
        times: &[f64],
        f: impl Fn(f64) -> f64,
    ) -> Self {
        Self {
            model: model.into(),
            parameters,
            points: times.iter().map(|&t| (t, f(t))).collect(),
        }
    }

    /// `time,fidelity,model` rows without header.
    pub fn csv_rows(&self) -> String {
        self.points
            .iter()
            .map(|(t, f)| format!("{t},{f},{}\n", self.model))
            .collect()
    }
}

/// `time,fidelity,model` table of several curves.
pub fn curves_to_csv(curves: &[PredictionCurve]) -> String {
    let mut out = String::from("time,fidelity,model\n");
    for c in curves {
        out.push_str(&c.csv_rows());
    }
    out
}

/// Probability that none of `n1` excited qubits has decayed.
pub fn p_no_decay(n1: f64, kappa: f64, t: f64) -> f64 {
    (-n1 * kappa * t).exp()
}

/// Mean number `(n_q/2) kappa t` of decay events on a half-filled register.
pub fn mean_decay_events(n_q: usize, kappa: f64, t: f64) -> f64 {
    n_q as f64 / 2.0 * kappa * t
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JumpCodeFidelity {
    pub fidelity: f64,
    pub mean_decays: f64,
}

/// `exp(-(n_q kappa / 2)^2 t_rec t)`: loss from a second decay during a recovery.
pub fn f_jumpcode(n_q: usize, kappa: f64, t_rec: f64, t: f64) -> JumpCodeFidelity {
    let rate = n_q as f64 * kappa / 2.0;
    JumpCodeFidelity {
        fidelity: (-rate * rate * t_rec * t).exp(),
        mean_decays: mean_decay_events(n_q, kappa, t),
    }
}

/// `exp(-t dt (c2 - s))` with `s = c1^2` or a value of `c3`.
pub fn f_coherent(t: f64, dt: f64, c2: f64, subtrahend: f64) -> f64 {
    (-t * dt * (c2 - subtrahend)).exp()
}

/// Expected memory fidelity under swap decoupling and detected-jump correction.
pub fn f_combined(n_q: usize, kappa: f64, t_rec: f64, dt: f64, c2: f64, c3: f64, t: f64) -> f64 {
    let exposure = 1.0 + kappa * t_rec * n_q as f64 / 2.0;
    (-(c2 - c3) * t * dt * exposure).exp() * f_jumpcode(n_q, kappa, t_rec, t).fidelity
}

/// `exp(-t/t_c - 2 t^2 / (sigma t_c N))`.
pub fn frahm_decay(t: f64, t_c: f64, sigma: f64, dim: f64) -> f64 {
    (-t / t_c - 2.0 * t * t / (sigma * t_c * dim)).exp()
}

/// `1/t_c = n_g^2 tr(H0^2) dt^2 / N`.
pub fn frahm_inverse_time(n_g: usize, h0: &Operator, dt: f64) -> f64 {
    (n_g * n_g) as f64 * normalized_square_trace(h0) * dt * dt
}

/// `tr(A^2) / N`.
pub fn normalized_square_trace(a: &Operator) -> f64 {
    trace(&(a * a)).re / a.nrows() as f64
}

/// `1 - 4 t n_g tr(dH^2)/N`.
pub fn parec_bound(t: f64, n_g: usize, delta_h: &Operator) -> f64 {
    1.0 - 4.0 * t * n_g as f64 * normalized_square_trace(delta_h)
}

/// `1 - T dt tr(H0^2)/N` for a decoupled memory with total interaction time `T`.
pub fn memory_bound(total_time: f64, dt: f64, h0: &Operator) -> f64 {
    1.0 - total_time * dt * normalized_square_trace(h0)
}

/// `1 - t tr(H0^2)/N sum_j (dt_j + dt_bb)^2` for gate-dependent idle times.
pub fn parec_bound_unequal(t: f64, intervals: &[f64], dt_bb: f64, h0: &Operator) -> f64 {
    let s: f64 = intervals.iter().map(|d| (d + dt_bb).powi(2)).sum();
    1.0 - t * normalized_square_trace(h0) * s
}

/// `1 - t (n_g + 1)^2 tr(dH^2)/N` with one random pulse per iteration.
pub fn parec_bound_per_iteration(t: f64, n_g: usize, delta_h: &Operator) -> f64 {
    let m = (n_g + 1) as f64;
    1.0 - t * m * m * normalized_square_trace(delta_h)
}

/// Monomial `T^a x^b kappa^c` describing the infidelity scaling of a decoupling schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingLaw {
    pub time_power: u32,
    pub interval_power: u32,
    pub strength_power: u32,
}

impl ScalingLaw {
    pub fn evaluate(&self, total_time: f64, interval: f64, strength: f64) -> f64 {
        total_time.powi(self.time_power as i32)
            * interval.powi(self.interval_power as i32)
            * strength.powi(self.strength_power as i32)
    }
}

/// Reference scaling of the infidelity bound; `interval` is `T_c` or `dt` as appropriate.
pub fn bound_scalings(kind: ScheduleKind) -> Result<ScalingLaw> {
    let (a, b, c) = match kind {
        ScheduleKind::Pdd => (2, 2, 4),
        ScheduleKind::Sdd => (2, 4, 6),
        ScheduleKind::Nrd => (1, 1, 2),
        ScheduleKind::Emd => (1, 3, 4),
        ScheduleKind::Semd => (1, 5, 6),
        ScheduleKind::RandomPath => {
            return Err(Error::InvalidParameter("no reference scaling for the random-path schedule".into()))
        }
    };
    Ok(ScalingLaw {
        time_power: a,
        interval_power: b,
        strength_power: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturb::GuePerturbation;
    use crate::rng::seeded;

    #[test]
    fn decay_values() {
        assert_eq!(p_no_decay(4.0, 0.1, 0.0), 1.0);
        assert!((p_no_decay(4.0, 0.25, 1.0) - (-1f64).exp()).abs() < 1e-15);
        let j = f_jumpcode(8, 1e-3, 12.5, 2000.0);
        assert!((j.fidelity - (-0.4f64).exp()).abs() < 1e-12);
        assert!((j.mean_decays - 8.0).abs() < 1e-12);
    }

    #[test]
    fn combined_limits() {
        for t in [0.0, 10.0, 500.0] {
            let a = f_combined(8, 0.0, 12.5, 4.0, 3e-8, 1e-8, t);
            assert!((a - f_coherent(t, 4.0, 3e-8, 1e-8)).abs() < 1e-15);
            let b = f_combined(8, 1e-3, 12.5, 4.0, 2e-8, 2e-8, t);
            assert!((b - f_jumpcode(8, 1e-3, 12.5, t).fidelity).abs() < 1e-15);
        }
        assert_eq!(f_coherent(100.0, 4.0, 1e-3, 1e-3), 1.0);
    }

    #[test]
    fn frahm_limits() {
        assert_eq!(frahm_decay(0.0, 5.0, 0.3, 16.0), 1.0);
        assert!((frahm_decay(3.0, 5.0, f64::INFINITY, 16.0) - (-0.6f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gue_bound_at_one_iteration() {
        let mut rng = seeded(1);
        let p = GuePerturbation::sample(16, 1e-2, &mut rng).unwrap();
        let dh = p.delta_h();
        let b = parec_bound(1.0, 12, &dh);
        assert!((1.0 - b - 48.0 * normalized_square_trace(&dh)).abs() < 1e-15);
        let dt = 0.5;
        let h0 = dh.clone() / nalgebra::Complex::from(dt);
        let n = 6;
        let m = memory_bound(n as f64 * dt, dt, &h0);
        let via_parec = 1.0 - 4.0 * n as f64 * normalized_square_trace(&h0) * (dt / 2.0).powi(2);
        assert!((m - via_parec).abs() < 1e-15);
        assert!(parec_bound_per_iteration(1.0, 12, &dh) < b);
        assert!((parec_bound_unequal(1.0, &[1.0; 3], 0.0, &dh) - (1.0 - 3.0 * normalized_square_trace(&dh))).abs() < 1e-15);
    }

    #[test]
    fn scaling_monomials() {
        let nrd = bound_scalings(ScheduleKind::Nrd).unwrap();
        assert_eq!(nrd.time_power, 1);
        assert_eq!(bound_scalings(ScheduleKind::Pdd).unwrap().time_power, 2);
        let emd = bound_scalings(ScheduleKind::Emd).unwrap();
        let r = emd.evaluate(10.0, 1.0, 0.1) / emd.evaluate(10.0, 0.5, 0.1);
        assert!((r - 8.0).abs() < 1e-12);
        assert!(bound_scalings(ScheduleKind::RandomPath).is_err());
    }

    #[test]
    fn curves_csv() {
        let c = PredictionCurve::sample("p", vec![], &[0.0, 1.0], |t| p_no_decay(1.0, 1.0, t));
        let csv = curves_to_csv(&[c]);
        assert!(csv.starts_with("time,fidelity,model\n0,1,p\n"));
    }
}
