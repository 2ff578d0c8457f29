//! Flip, swap and random-Pauli pulse grids merged with jumps and recovery windows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Times closer than this are treated as simultaneous.
pub const TIME_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PulseProtocol {
    None,
    /// Flip every `flip_interval`; swap layer after every `swap_every`-th flip.
    FlipSwap { flip_interval: f64, swap_every: usize },
    /// Uniformly random Pauli string every `interval`.
    RandomPauli { interval: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSchedule {
    pub pulses: PulseProtocol,
    /// Recovery duration after a detected jump; `None` disables correction.
    pub recovery_time: Option<f64>,
}

impl ProtocolSchedule {
    pub fn idle() -> Self {
        Self {
            pulses: PulseProtocol::None,
            recovery_time: None,
        }
    }

    pub fn flip_swap(flip_interval: f64, swap_every: usize, recovery_time: Option<f64>) -> Result<Self> {
        let s = Self {
            pulses: PulseProtocol::FlipSwap {
                flip_interval,
                swap_every,
            },
            recovery_time,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self.pulses {
            PulseProtocol::None => {}
            PulseProtocol::FlipSwap {
                flip_interval,
                swap_every,
            } => {
                if !(flip_interval > 0.0 && flip_interval.is_finite()) {
                    return Err(Error::InvalidParameter(format!("flip interval must be > 0, got {flip_interval}")));
                }
                if swap_every == 0 || swap_every % 2 != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "swap period in flips must be a positive even integer, got {swap_every}"
                    )));
                }
            }
            PulseProtocol::RandomPauli { interval } => {
                if !(interval > 0.0 && interval.is_finite()) {
                    return Err(Error::InvalidParameter(format!("pulse interval must be > 0, got {interval}")));
                }
            }
        }
        if let Some(t) = self.recovery_time {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("recovery time must be >= 0, got {t}")));
            }
        }
        Ok(())
    }

    /// `dt = m tau` for flip/swap decoupling.
    pub fn swap_interval(&self) -> Option<f64> {
        match self.pulses {
            PulseProtocol::FlipSwap {
                flip_interval,
                swap_every,
            } => Some(flip_interval * swap_every as f64),
            _ => None,
        }
    }
}

/// `(1.5 (n_P - 1) + 2) t0`: one Hadamard, `n_P - 1` CNOTs at 1.5 gate times, one `X`.
pub fn recovery_duration(n_physical: usize) -> Result<f64> {
    if n_physical < 2 {
        return Err(Error::InvalidParameter(format!("recovery needs >= 2 qubits, got {n_physical}")));
    }
    Ok(1.5 * (n_physical as f64 - 1.0) + 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Flip,
    Swap,
    Pauli,
    Jump,
    RecoveryEnd,
    Uncorrectable,
}

impl EventKind {
    pub fn is_pulse(self) -> bool {
        matches!(self, EventKind::Flip | EventKind::Swap | EventKind::Pauli)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
}

/// Nominal pulse grid up to and including `total_time`, before the halt rule.
pub fn pulse_grid(protocol: &ProtocolSchedule, total_time: f64) -> Vec<Event> {
    let mut out = Vec::new();
    match protocol.pulses {
        PulseProtocol::None => {}
        PulseProtocol::FlipSwap {
            flip_interval,
            swap_every,
        } => {
            let mut k = 1usize;
            loop {
                let t = k as f64 * flip_interval;
                if t > total_time + TIME_EPS {
                    break;
                }
                out.push(Event {
                    time: t,
                    kind: EventKind::Flip,
                });
                if k % swap_every == 0 {
                    out.push(Event {
                        time: t,
                        kind: EventKind::Swap,
                    });
                }
                k += 1;
            }
        }
        PulseProtocol::RandomPauli { interval } => {
            let mut k = 1usize;
            loop {
                let t = k as f64 * interval;
                if t > total_time + TIME_EPS {
                    break;
                }
                out.push(Event {
                    time: t,
                    kind: EventKind::Pauli,
                });
                k += 1;
            }
        }
    }
    out
}

/// Whether a grid pulse at `t` falls in the recovery window `[start, end)`.
pub fn in_window(t: f64, start: f64, end: f64) -> bool {
    t >= start - TIME_EPS && t < end - TIME_EPS
}

/// Merges the pulse grid with detected jumps. Pulses inside a recovery window are dropped,
/// a jump inside a window is uncorrectable and ends the schedule.
pub fn schedule_events(protocol: &ProtocolSchedule, total_time: f64, jump_times: &[f64]) -> Result<Vec<Event>> {
    protocol.validate()?;
    let grid = pulse_grid(protocol, total_time);
    let mut jumps: Vec<f64> = jump_times.iter().copied().filter(|&t| t <= total_time).collect();
    jumps.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut window: Option<(f64, f64)> = None;
    let (mut g, mut j) = (0usize, 0usize);
    loop {
        let next_grid = grid.get(g).map(|e| e.time);
        let next_jump = jumps.get(j).copied();
        let next_end = window.map(|(_, e)| e).filter(|&e| e <= total_time + TIME_EPS);
        // Ties: recovery end, then grid pulses, then jumps.
        let mut best = None::<(f64, u8)>;
        for (t, rank) in [(next_end, 0u8), (next_grid, 1), (next_jump, 2)] {
            if let Some(t) = t {
                if best.is_none_or(|(bt, br)| t < bt - TIME_EPS || (t <= bt + TIME_EPS && rank < br)) {
                    best = Some((t, rank));
                }
            }
        }
        let Some((t, rank)) = best else {
            break;
        };
        match rank {
            0 => {
                out.push(Event {
                    time: t,
                    kind: EventKind::RecoveryEnd,
                });
                window = None;
            }
            1 => {
                let e = grid[g];
                g += 1;
                if !window.is_some_and(|(s, end)| in_window(e.time, s, end)) {
                    out.push(e);
                }
            }
            _ => {
                j += 1;
                if window.is_some() {
                    out.push(Event {
                        time: t,
                        kind: EventKind::Uncorrectable,
                    });
                    break;
                }
                out.push(Event {
                    time: t,
                    kind: EventKind::Jump,
                });
                if let Some(d) = protocol.recovery_time {
                    window = Some((t, t + d));
                }
            }
        }
    }
    Ok(out)
}
