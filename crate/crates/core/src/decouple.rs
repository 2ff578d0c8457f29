//! Decoupling sets, selection rules and toggled-frame propagation under
//! instantaneous control pulses.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perturb::sample_gue_raw;
use crate::qcore::linalg::{expm_hermitian, identity, is_unitary, max_abs_diff, trace, Operator, C64};
use crate::qcore::PauliString;
use crate::tol;

/// One decoupling operation, kept symbolic when it is a Pauli string.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Pauli(PauliString),
    Dense(Operator),
}

impl Element {
    pub fn identity(n_qubits: usize) -> Self {
        Element::Pauli(PauliString::identity(n_qubits))
    }

    pub fn dim(&self) -> usize {
        match self {
            Element::Pauli(p) => 1 << p.n_qubits(),
            Element::Dense(m) => m.nrows(),
        }
    }

    pub fn to_operator(&self) -> Operator {
        match self {
            Element::Pauli(p) => p.to_operator(),
            Element::Dense(m) => m.clone(),
        }
    }

    pub fn adjoint(&self) -> Element {
        match self {
            Element::Pauli(p) => Element::Pauli(p.adjoint()),
            Element::Dense(m) => Element::Dense(m.adjoint()),
        }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Element) -> Result<Element> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(match (self, other) {
            (Element::Pauli(a), Element::Pauli(b)) => Element::Pauli(a.mul(b)?),
            _ => Element::Dense(self.to_operator() * other.to_operator()),
        })
    }

    /// `m <- self * m`.
    pub fn left_apply(&self, m: &mut Operator) {
        match self {
            Element::Pauli(p) => {
                for mut col in m.column_iter_mut() {
                    p.apply(col.as_mut_slice());
                }
            }
            Element::Dense(g) => {
                let out = g * &*m;
                *m = out;
            }
        }
    }

    /// `self^dagger * h * self`.
    pub fn conjugate(&self, h: &Operator) -> Operator {
        match self {
            Element::Pauli(p) => {
                let n = h.nrows();
                let act: Vec<(usize, C64)> = (0..n).map(|a| p.action(a)).collect();
                Operator::from_fn(n, n, |a, b| {
                    let (ja, ca) = act[a];
                    let (jb, cb) = act[b];
                    ca.conj() * cb * h[(ja, jb)]
                })
            }
            Element::Dense(g) => g.adjoint() * h * g,
        }
    }

    /// `tr(self^dagger * m)`.
    pub fn trace_against(&self, m: &Operator) -> C64 {
        match self {
            Element::Pauli(p) => (0..m.ncols())
                .map(|a| {
                    let (j, c) = p.action(a);
                    c.conj() * m[(j, a)]
                })
                .sum(),
            Element::Dense(g) => g.iter().zip(m.iter()).map(|(x, y)| x.conj() * y).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Members {
    PauliGroup,
    Explicit(Vec<Element>),
}

/// Ordered set of unitaries `g_1 .. g_{n_c}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecouplingSet {
    n_qubits: usize,
    members: Members,
}

impl DecouplingSet {
    /// All `4^n` Pauli strings, in base-4 index order with qubit 0 most significant.
    pub fn pauli_group(n_qubits: usize) -> Result<Self> {
        if n_qubits > tol::MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        Ok(Self {
            n_qubits,
            members: Members::PauliGroup,
        })
    }

    pub fn from_paulis(n_qubits: usize, paulis: Vec<PauliString>) -> Result<Self> {
        if paulis.is_empty() {
            return Err(Error::InvalidParameter("decoupling set is empty".into()));
        }
        for p in &paulis {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
        }
        Ok(Self {
            n_qubits,
            members: Members::Explicit(paulis.into_iter().map(Element::Pauli).collect()),
        })
    }

    pub fn from_operators(n_qubits: usize, ops: Vec<Operator>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidParameter("decoupling set is empty".into()));
        }
        let dim = 1usize << n_qubits;
        for op in &ops {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.nrows(),
                });
            }
            if !is_unitary(op, tol::UNITARITY) {
                return Err(Error::NotUnitary(crate::qcore::linalg::unitarity_defect(op)));
            }
        }
        Ok(Self {
            n_qubits,
            members: Members::Explicit(ops.into_iter().map(Element::Dense).collect()),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// `n_c`.
    pub fn len(&self) -> usize {
        match &self.members {
            Members::PauliGroup => 1 << (2 * self.n_qubits),
            Members::Explicit(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Element with 1-based index `i`.
    pub fn element(&self, i: usize) -> Element {
        assert!(i >= 1 && i <= self.len(), "element index {i} out of 1..={}", self.len());
        match &self.members {
            Members::PauliGroup => Element::Pauli(PauliString::from_index(self.n_qubits, i - 1)),
            Members::Explicit(v) => v[i - 1].clone(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (1..=self.len()).map(move |i| self.element(i))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.element(rng.random_range(1..=self.len()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScheduleKind {
    Pdd,
    Sdd,
    Nrd,
    Emd,
    Semd,
    RandomPath,
}

impl ScheduleKind {
    pub fn is_embedded(self) -> bool {
        matches!(self, ScheduleKind::Emd | ScheduleKind::Semd)
    }
}

/// Stateful selection rule `f(i)`, returning 1-based indices into a set of size `n_c`.
#[derive(Clone, Debug)]
pub struct Selector {
    kind: ScheduleKind,
    n_c: usize,
    step: usize,
    perm: Vec<usize>,
}

impl Selector {
    pub fn new(kind: ScheduleKind, n_c: usize) -> Self {
        assert!(n_c >= 1);
        Self {
            kind,
            n_c,
            step: 0,
            perm: (1..=n_c).collect(),
        }
    }

    /// Steps consumed so far.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Index for the next step `i = step() + 1`.
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        self.step += 1;
        let i = self.step;
        let n_c = self.n_c;
        match self.kind {
            ScheduleKind::Pdd | ScheduleKind::Emd => (i - 1) % n_c + 1,
            ScheduleKind::Sdd | ScheduleKind::Semd => {
                let p = (i - 1) % (2 * n_c);
                if p < n_c {
                    p + 1
                } else {
                    2 * n_c - p
                }
            }
            ScheduleKind::Nrd => rng.random_range(1..=n_c),
            ScheduleKind::RandomPath => {
                let pos = (i - 1) % n_c;
                if pos == 0 {
                    self.perm.shuffle(rng);
                }
                self.perm[pos]
            }
        }
    }
}

/// `f(i)` for a stateless rule (PDD, SDD, EMD, SEMD) or a fresh uniform draw (NRD).
/// Random-path selection depends on the permutation of the current cycle; use [`Selector`].
pub fn selection_index<R: Rng + ?Sized>(kind: ScheduleKind, i: usize, n_c: usize, rng: &mut R) -> Result<usize> {
    if i == 0 || n_c == 0 {
        return Err(Error::InvalidParameter("step and set size start at 1".into()));
    }
    match kind {
        ScheduleKind::RandomPath => Err(Error::InvalidParameter(
            "random-path selection needs per-cycle state; use Selector".into(),
        )),
        ScheduleKind::Nrd => Ok(rng.random_range(1..=n_c)),
        _ => {
            let mut s = Selector::new(kind, n_c);
            s.step = i - 1;
            Ok(s.next(rng))
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecouplingSchedule {
    pub kind: ScheduleKind,
    /// Pulse interval.
    pub dt: f64,
    pub set: DecouplingSet,
    /// Random outer set `G'` of the embedded schemes.
    pub annihilator: Option<DecouplingSet>,
    pub seed: u64,
}

impl DecouplingSchedule {
    pub fn new(kind: ScheduleKind, dt: f64, set: DecouplingSet) -> Self {
        Self {
            kind,
            dt,
            set,
            annihilator: None,
            seed: 0,
        }
    }

    pub fn embedded(kind: ScheduleKind, dt: f64, set: DecouplingSet, annihilator: DecouplingSet) -> Self {
        Self {
            kind,
            dt,
            set,
            annihilator: Some(annihilator),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n_c(&self) -> usize {
        self.set.len()
    }

    /// `T_c = n_c dt`.
    pub fn cycle_time(&self) -> f64 {
        self.n_c() as f64 * self.dt
    }

    /// Steps after which the embedded schemes draw a new outer element.
    pub fn outer_period(&self) -> usize {
        match self.kind {
            ScheduleKind::Semd | ScheduleKind::Sdd => 2 * self.n_c(),
            _ => self.n_c(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("pulse interval must be > 0, got {}", self.dt)));
        }
        match (&self.annihilator, self.kind.is_embedded()) {
            (None, true) => Err(Error::InvalidParameter("embedded schedules need an outer set".into())),
            (Some(a), true) if a.n_qubits() != self.set.n_qubits() => Err(Error::DimensionMismatch {
                expected: self.set.n_qubits(),
                found: a.n_qubits(),
            }),
            _ => Ok(()),
        }
    }

    /// Control operators `U_c` on steps `1..=n_steps`.
    pub fn controls<R: Rng + ?Sized>(&self, n_steps: usize, rng: &mut R) -> Result<Vec<Element>> {
        self.validate()?;
        let mut sel = Selector::new(self.kind, self.n_c());
        let period = self.outer_period();
        let mut outer = None;
        let mut out = Vec::with_capacity(n_steps);
        for i in 1..=n_steps {
            let g = self.set.element(sel.next(rng));
            let c = match &self.annihilator {
                Some(a) if self.kind.is_embedded() => {
                    if (i - 1) % period == 0 {
                        outer = Some(a.random_element(rng));
                    }
                    g.compose(outer.as_ref().expect("drawn at cycle start"))?
                }
                _ => g,
            };
            out.push(c);
        }
        Ok(out)
    }
}

/// `(1/n_c) sum_g g^dagger H0 g`.
pub fn zeroth_order_average(h0: &Operator, set: &DecouplingSet) -> Result<Operator> {
    if h0.nrows() != set.dim() || h0.ncols() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: h0.nrows(),
        });
    }
    let mut acc = Operator::zeros(set.dim(), set.dim());
    for g in set.elements() {
        acc += g.conjugate(h0);
    }
    Ok(acc / C64::from(set.len() as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorReport {
    pub passed: bool,
    /// Largest `max|avg - trH/N I|` over the trials.
    pub max_deviation: f64,
    /// `|G| >= N^2`.
    pub size_ok: bool,
}

/// Checks `(1/|G|) sum g^dagger H g = (trH/N) I` on random Hermitian `H`, together with `|G| >= N^2`.
pub fn verify_annihilator<R: Rng + ?Sized>(
    set: &DecouplingSet,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<AnnihilatorReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let n = set.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let h = sample_gue_raw(n, rng);
        let avg = zeroth_order_average(&h, set)?;
        let target = identity(n) * (trace(&h) / n as f64);
        worst = worst.max(max_abs_diff(&avg, &target));
    }
    let size_ok = set.len() >= n * n;
    Ok(AnnihilatorReport {
        passed: size_ok && worst <= tol,
        max_deviation: worst,
        size_ok,
    })
}

#[derive(Clone, Debug)]
pub struct ScheduleRun {
    /// `U_c^dagger(T) U(T)`.
    pub toggled: Operator,
    /// Lab-frame propagator including all pulses.
    pub lab: Operator,
    /// Times `i dt` for `i = 1..=n`.
    pub times: Vec<f64>,
    /// `F_e(I, U~(i dt))`.
    pub fidelity: Vec<f64>,
}

fn step_count(total_time: f64, dt: f64) -> Result<usize> {
    let n = (total_time / dt).round();
    if !(total_time >= 0.0) || (n * dt - total_time).abs() > 1e-9 * total_time.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "total time {total_time} is not a multiple of dt = {dt}"
        )));
    }
    Ok(n as usize)
}

/// Alternates `exp(-i H0 dt)` with instantaneous pulses `U_c(i) U_c(i-1)^dagger`.
pub fn run_schedule<R: Rng + ?Sized>(
    h0: &Operator,
    schedule: &DecouplingSchedule,
    total_time: f64,
    rng: &mut R,
) -> Result<ScheduleRun> {
    schedule.validate()?;
    let dim = schedule.set.dim();
    if h0.nrows() != dim || h0.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: h0.nrows(),
        });
    }
    let n_steps = step_count(total_time, schedule.dt)?;
    let controls = schedule.controls(n_steps, rng)?;
    let free = expm_hermitian(h0, schedule.dt);

    let mut lab = identity(dim);
    let mut prev = Element::identity(schedule.set.n_qubits());
    let mut times = Vec::with_capacity(n_steps);
    let mut fidelity = Vec::with_capacity(n_steps);
    for (i, c) in controls.iter().enumerate() {
        let pulse = c.compose(&prev.adjoint())?;
        pulse.left_apply(&mut lab);
        lab = &free * &lab;
        let amp = c.trace_against(&lab) / dim as f64;
        times.push((i + 1) as f64 * schedule.dt);
        fidelity.push(amp.norm_sqr());
        prev = c.clone();
    }
    let mut toggled = lab.clone();
    prev.adjoint().left_apply(&mut toggled);
    Ok(ScheduleRun {
        toggled,
        lab,
        times,
        fidelity,
    })
}

/// Toggled-frame Hamiltonians `U_c(i)^dagger H0 U_c(i)` for a control sequence.
pub fn toggled_hamiltonians(h0: &Operator, controls: &[Element]) -> Vec<Operator> {
    controls.iter().map(|c| c.conjugate(h0)).collect()
}

/// Mean of `run.fidelity` over independent realizations, one RNG stream each.
pub fn mean_fidelity_trace(
    h0: &Operator,
    schedule: &DecouplingSchedule,
    total_time: f64,
    realizations: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    use rayon::prelude::*;
    let runs: Vec<ScheduleRun> = (0..realizations as u64)
        .into_par_iter()
        .map(|k| run_schedule(h0, schedule, total_time, &mut crate::rng::stream(schedule.seed, k)))
        .collect::<Result<_>>()?;
    let n = runs.first().map_or(0, |r| r.fidelity.len());
    let mut mean = vec![0.0; n];
    for r in &runs {
        for (m, f) in mean.iter_mut().zip(&r.fidelity) {
            *m += f;
        }
    }
    let scale = 1.0 / realizations.max(1) as f64;
    mean.iter_mut().for_each(|m| *m *= scale);
    let times = runs.first().map_or_else(Vec::new, |r| r.times.clone());
    Ok((times, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{max_abs, unitarity_defect};
    use crate::qcore::Pauli;
    use crate::rng::seeded;

    fn zero_like(dim: usize) -> Operator {
        Operator::from_element(dim, dim, crate::qcore::linalg::ZERO)
    }

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn periodic_rule_wraps() {
        let mut rng = seeded(0);
        assert_eq!(selection_index(ScheduleKind::Pdd, 5, 4, &mut rng).unwrap(), 1);
        assert_eq!(selection_index(ScheduleKind::Pdd, 4, 4, &mut rng).unwrap(), 4);
    }

    #[test]
    fn symmetric_rule_is_palindrome() {
        let mut rng = seeded(0);
        let mut s = Selector::new(ScheduleKind::Sdd, 3);
        let seq: Vec<usize> = (0..12).map(|_| s.next(&mut rng)).collect();
        assert_eq!(seq, vec![1, 2, 3, 3, 2, 1, 1, 2, 3, 3, 2, 1]);
    }

    #[test]
    fn random_path_permutes_each_cycle() {
        let mut rng = seeded(8);
        let mut s = Selector::new(ScheduleKind::RandomPath, 5);
        for _ in 0..20 {
            let mut cycle: Vec<usize> = (0..5).map(|_| s.next(&mut rng)).collect();
            cycle.sort();
            assert_eq!(cycle, vec![1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn random_rule_frequencies() {
        let n_c = 6;
        let draws = 100_000;
        let mut rng = seeded(21);
        let mut counts = vec![0usize; n_c];
        let mut s = Selector::new(ScheduleKind::Nrd, n_c);
        for _ in 0..draws {
            counts[s.next(&mut rng) - 1] += 1;
        }
        let p = 1.0 / n_c as f64;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * p).abs() < 3.0 * sigma, "{c}");
        }
    }

    #[test]
    fn average_over_pauli_basis_kills_z() {
        let set = DecouplingSet::pauli_group(1).unwrap();
        let avg = zeroth_order_average(&p("Z").to_operator(), &set).unwrap();
        assert!(max_abs(&avg) < 1e-15);
    }

    #[test]
    fn trivial_set_leaves_hamiltonian() {
        let set = DecouplingSet::from_paulis(2, vec![p("II")]).unwrap();
        let h = p("XZ").to_operator() * C64::from(0.3);
        assert_eq!(zeroth_order_average(&h, &set).unwrap(), h);
    }

    #[test]
    fn two_element_average() {
        let set = DecouplingSet::from_paulis(2, vec![p("II"), p("ZI")]).unwrap();
        let xx = zeroth_order_average(&p("XX").to_operator(), &set).unwrap();
        assert!(max_abs(&xx) < 1e-15);
        let zz = p("ZZ").to_operator();
        assert!(max_abs_diff(&zeroth_order_average(&zz, &set).unwrap(), &zz) < 1e-15);
    }

    #[test]
    fn average_is_linear_and_idempotent() {
        let mut rng = seeded(4);
        let set = DecouplingSet::from_paulis(2, vec![p("II"), p("ZI"), p("IX"), p("ZX")]).unwrap();
        let a = sample_gue_raw(4, &mut rng);
        let b = sample_gue_raw(4, &mut rng);
        let lhs = zeroth_order_average(&(&a * C64::from(2.0) + &b), &set).unwrap();
        let rhs = zeroth_order_average(&a, &set).unwrap() * C64::from(2.0) + zeroth_order_average(&b, &set).unwrap();
        assert!(max_abs_diff(&lhs, &rhs) < 1e-13);
        let once = zeroth_order_average(&a, &set).unwrap();
        let twice = zeroth_order_average(&once, &set).unwrap();
        assert!(max_abs_diff(&once, &twice) < 1e-13);
    }

    #[test]
    fn pauli_conjugation_matches_dense() {
        let mut rng = seeded(12);
        let h = sample_gue_raw(8, &mut rng);
        for g in [p("XYZ"), p("-iZIX"), p("IYY")] {
            let dense = g.to_operator();
            let expect = dense.adjoint() * &h * &dense;
            assert!(max_abs_diff(&Element::Pauli(g).conjugate(&h), &expect) < 1e-14);
        }
    }

    #[test]
    fn annihilator_checks() {
        let mut rng = seeded(2);
        assert!(verify_annihilator(&DecouplingSet::pauli_group(1).unwrap(), 5, 1e-12, &mut rng).unwrap().passed);
        assert!(verify_annihilator(&DecouplingSet::pauli_group(2).unwrap(), 5, 1e-12, &mut rng).unwrap().passed);
        let broken = DecouplingSet::from_paulis(1, vec![p("I"), p("X")]).unwrap();
        let r = verify_annihilator(&broken, 5, 1e-12, &mut rng).unwrap();
        assert!(!r.passed && !r.size_ok);
        // X commutes with both members, so it survives the average.
        let avg = zeroth_order_average(&p("X").to_operator(), &broken).unwrap();
        assert!(max_abs_diff(&avg, &p("X").to_operator()) < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let set = DecouplingSet::pauli_group(2).unwrap();
        for kind in [ScheduleKind::Pdd, ScheduleKind::Sdd, ScheduleKind::Nrd, ScheduleKind::RandomPath] {
            let s = DecouplingSchedule::new(kind, 0.5, set.clone());
            let run = run_schedule(&zero_like(4), &s, 20.0, &mut seeded(1)).unwrap();
            assert!(max_abs_diff(&run.toggled, &identity(4)) < 1e-12);
            assert!(run.fidelity.iter().all(|&f| (f - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn toggled_propagator_stays_unitary() {
        let mut rng = seeded(30);
        let h = sample_gue_raw(8, &mut rng);
        let set = DecouplingSet::pauli_group(3).unwrap();
        let outer = DecouplingSet::pauli_group(3).unwrap();
        let inner = DecouplingSet::from_paulis(3, vec![p("III"), p("XXX"), p("ZZZ"), p("YYY")]).unwrap();
        let schedules = [
            DecouplingSchedule::new(ScheduleKind::Pdd, 0.1, set.clone()),
            DecouplingSchedule::new(ScheduleKind::Nrd, 0.1, set.clone()),
            DecouplingSchedule::new(ScheduleKind::RandomPath, 0.1, set),
            DecouplingSchedule::embedded(ScheduleKind::Emd, 0.1, inner.clone(), outer.clone()),
            DecouplingSchedule::embedded(ScheduleKind::Semd, 0.1, inner, outer),
        ];
        for s in &schedules {
            let run = run_schedule(&h, s, 100.0, &mut rng).unwrap();
            assert!(unitarity_defect(&run.toggled) < 1e-9, "{:?}", s.kind);
        }
    }

    #[test]
    fn toggled_frame_equals_product_of_conjugated_steps() {
        let mut rng = seeded(31);
        let h = sample_gue_raw(4, &mut rng);
        let inner = DecouplingSet::from_paulis(2, vec![p("II"), p("XX"), p("ZZ")]).unwrap();
        let s = DecouplingSchedule::embedded(ScheduleKind::Emd, 0.3, inner, DecouplingSet::pauli_group(2).unwrap());
        let run = run_schedule(&h, &s, 6.0, &mut seeded(5)).unwrap();
        let controls = s.controls(20, &mut seeded(5)).unwrap();
        let mut expect = identity(4);
        for ht in toggled_hamiltonians(&h, &controls) {
            expect = expm_hermitian(&ht, 0.3) * expect;
        }
        assert!(max_abs_diff(&run.toggled, &expect) < 1e-12);
    }

    #[test]
    fn embedded_outer_element_changes_only_on_cycle_boundaries() {
        let inner = DecouplingSet::from_paulis(1, vec![p("I"), p("X")]).unwrap();
        let s = DecouplingSchedule::embedded(ScheduleKind::Emd, 1.0, inner.clone(), DecouplingSet::pauli_group(1).unwrap());
        let c = s.controls(40, &mut seeded(9)).unwrap();
        for k in 0..20 {
            let r0 = inner.element(1).adjoint().compose(&c[2 * k]).unwrap();
            let r1 = inner.element(2).adjoint().compose(&c[2 * k + 1]).unwrap();
            assert_eq!(r0, r1);
        }
    }

    #[test]
    fn symmetric_cycle_is_time_symmetric() {
        let mut rng = seeded(6);
        let h = sample_gue_raw(4, &mut rng);
        let set = DecouplingSet::pauli_group(2).unwrap();
        let s = DecouplingSchedule::new(ScheduleKind::Sdd, 1.0, set);
        let period = 32;
        let ht = toggled_hamiltonians(&h, &s.controls(2 * period, &mut rng).unwrap());
        for i in 0..period {
            assert!(max_abs_diff(&ht[i], &ht[period - 1 - i]) < 1e-15);
            assert!(max_abs_diff(&ht[i], &ht[period + i]) < 1e-15);
        }
    }

    #[test]
    fn replay_is_bit_identical() {
        let h = sample_gue_raw(8, &mut seeded(3));
        let s = DecouplingSchedule::new(ScheduleKind::Nrd, 0.2, DecouplingSet::pauli_group(3).unwrap()).with_seed(77);
        let a = mean_fidelity_trace(&h, &s, 10.0, 8).unwrap();
        let b = mean_fidelity_trace(&h, &s, 10.0, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn embedded_needs_outer_set() {
        let s = DecouplingSchedule::new(ScheduleKind::Emd, 1.0, DecouplingSet::pauli_group(1).unwrap());
        assert!(run_schedule(&zero_like(2), &s, 1.0, &mut seeded(0)).is_err());
        let s = DecouplingSchedule::new(ScheduleKind::Pdd, 1.0, DecouplingSet::pauli_group(1).unwrap());
        assert!(run_schedule(&zero_like(2), &s, 1.5, &mut seeded(0)).is_err());
        assert!(run_schedule(&zero_like(4), &s, 1.0, &mut seeded(0)).is_err());
    }

    #[test]
    fn dense_and_pauli_sets_agree() {
        let words = vec![p("II"), p("XY"), p("ZI"), p("YZ")];
        let dense = DecouplingSet::from_operators(2, words.iter().map(|w| w.to_operator()).collect()).unwrap();
        let sym = DecouplingSet::from_paulis(2, words).unwrap();
        let h = sample_gue_raw(4, &mut seeded(44));
        let a = run_schedule(&h, &DecouplingSchedule::new(ScheduleKind::Pdd, 0.2, dense), 4.0, &mut seeded(1)).unwrap();
        let b = run_schedule(&h, &DecouplingSchedule::new(ScheduleKind::Pdd, 0.2, sym), 4.0, &mut seeded(1)).unwrap();
        assert!(max_abs_diff(&a.toggled, &b.toggled) < 1e-12);
        assert!(DecouplingSet::from_operators(1, vec![Pauli::X.matrix() * C64::from(2.0)]).is_err());
    }
}
