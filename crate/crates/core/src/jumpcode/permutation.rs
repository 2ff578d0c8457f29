//! Qubit permutations, random swap layers and permutation averages.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::linalg::{bit_position, Operator, C64, ZERO};
use crate::qcore::StateVector;

/// Largest register averaged exactly over all `n!` permutations.
pub const EXACT_AVERAGE_MAX_QUBITS: usize = 8;

/// Bijection of qubit labels; `map[q]` is the position that receives the content of `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            map: (0..n_qubits).collect(),
        }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || seen[m] {
                return Err(Error::InvalidParameter(format!("{map:?} is not a permutation")));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    pub fn transposition(n_qubits: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n_qubits || b >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: a.max(b),
                n_qubits,
            });
        }
        let mut p = Self::identity(n_qubits);
        p.map.swap(a, b);
        Ok(p)
    }

    /// Product of transpositions applied left to right.
    pub fn from_transpositions(n_qubits: usize, swaps: &[(usize, usize)]) -> Result<Self> {
        let mut p = Self::identity(n_qubits);
        for &(a, b) in swaps {
            p = Self::transposition(n_qubits, a, b)?.compose(&p);
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// `self o other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            map: other.map.iter().map(|&q| self.map[q]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (q, &m) in self.map.iter().enumerate() {
            inv[m] = q;
        }
        Self { map: inv }
    }

    /// Image of a computational basis index under the permutation operator.
    pub fn apply_index(&self, basis: usize) -> usize {
        let n = self.map.len();
        let mut out = 0usize;
        for (q, &m) in self.map.iter().enumerate() {
            if basis >> bit_position(q, n) & 1 == 1 {
                out |= 1 << bit_position(m, n);
            }
        }
        out
    }

    /// Basis-index table `b -> P(b)`.
    pub fn index_table(&self) -> Vec<usize> {
        (0..1usize << self.map.len()).map(|b| self.apply_index(b)).collect()
    }

    pub fn apply_to_state(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.map.len() {
            return Err(Error::DimensionMismatch {
                expected: self.map.len(),
                found: state.n_qubits(),
            });
        }
        let amps = state.amplitudes_mut();
        let old = amps.clone();
        for (b, a) in old.iter().enumerate() {
            amps[self.apply_index(b)] = *a;
        }
        Ok(())
    }

    pub fn operator(&self) -> Operator {
        let dim = 1usize << self.map.len();
        let mut p = Operator::from_element(dim, dim, ZERO);
        for b in 0..dim {
            p[(self.apply_index(b), b)] = C64::from(1.0);
        }
        p
    }

    /// `P^dag A P`.
    pub fn conjugate(&self, a: &Operator) -> Operator {
        let table = self.index_table();
        conjugate_with_table(a, &table)
    }
}

fn conjugate_with_table(a: &Operator, table: &[usize]) -> Operator {
    let dim = table.len();
    Operator::from_fn(dim, dim, |i, j| a[(table[i], table[j])])
}

/// Fisher-Yates draw of a uniform permutation as at most `n - 1` transpositions.
pub fn random_swap_layer<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut swaps = Vec::new();
    for i in (1..n_qubits).rev() {
        let j = rng.random_range(0..=i);
        if j != i {
            swaps.push((i, j));
        }
    }
    swaps
}

/// Accumulated permutation of the register and the layers that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationTracker {
    current: Permutation,
    history: Vec<Vec<(usize, usize)>>,
}

impl PermutationTracker {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            current: Permutation::identity(n_qubits),
            history: Vec::new(),
        }
    }

    pub fn current(&self) -> &Permutation {
        &self.current
    }

    pub fn history(&self) -> &[Vec<(usize, usize)>] {
        &self.history
    }

    /// Draws a layer, records it and returns its permutation.
    pub fn random_layer<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Permutation {
        let n = self.current.n_qubits();
        let swaps = random_swap_layer(n, rng);
        let p = Permutation::from_transpositions(n, &swaps).expect("layer indices are in range");
        self.current = p.compose(&self.current);
        self.history.push(swaps);
        p
    }
}

/// Visits every permutation of `n` labels (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&Permutation)) {
    let mut p = Permutation::identity(n);
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.map.swap(0, i);
            } else {
                p.map.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_exact(n_qubits: usize) -> Result<()> {
    if n_qubits > EXACT_AVERAGE_MAX_QUBITS {
        Err(Error::InvalidParameter(format!(
            "exact permutation average limited to {EXACT_AVERAGE_MAX_QUBITS} qubits, got {n_qubits}"
        )))
    } else {
        Ok(())
    }
}

fn n_qubits_of(a: &Operator) -> Result<usize> {
    let dim = a.nrows();
    if !dim.is_power_of_two() || a.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two(),
            found: dim,
        });
    }
    Ok(dim.trailing_zeros() as usize)
}

fn is_diagonal(a: &Operator) -> bool {
    a.iter().enumerate().all(|(k, v)| k % a.nrows() == k / a.nrows() || *v == ZERO)
}

/// `<P^dag A P>` over all `n!` qubit permutations.
pub fn permutation_average(a: &Operator) -> Result<Operator> {
    let n = n_qubits_of(a)?;
    check_exact(n)?;
    let dim = a.nrows();
    let norm = factorial(n);
    if is_diagonal(a) {
        let d = a.diagonal();
        let mut acc = vec![ZERO; dim];
        for_each_permutation(n, |p| {
            for (b, x) in acc.iter_mut().enumerate() {
                *x += d[p.apply_index(b)];
            }
        });
        return Ok(Operator::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            acc.into_iter().map(|x| x / norm),
        )));
    }
    let mut acc = Operator::from_element(dim, dim, ZERO);
    for_each_permutation(n, |p| {
        let table = p.index_table();
        for j in 0..dim {
            for i in 0..dim {
                acc[(i, j)] += a[(table[i], table[j])];
            }
        }
    });
    Ok(acc / C64::from(norm))
}

/// Monte-Carlo estimate of [`permutation_average`] from uniformly drawn permutations.
pub fn permutation_average_sampled<R: Rng + ?Sized>(a: &Operator, samples: usize, rng: &mut R) -> Result<Operator> {
    let n = n_qubits_of(a)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let dim = a.nrows();
    let mut acc = Operator::from_element(dim, dim, ZERO);
    for _ in 0..samples {
        let p = Permutation::from_transpositions(n, &random_swap_layer(n, rng))?;
        acc += conjugate_with_table(a, &p.index_table());
    }
    Ok(acc / C64::from(samples as f64))
}

/// Exact mean of a scalar functional over all permutations of `n` qubits.
pub fn permutation_mean(n_qubits: usize, mut f: impl FnMut(&Permutation) -> f64) -> Result<f64> {
    check_exact(n_qubits)?;
    let mut acc = 0.0;
    for_each_permutation(n_qubits, |p| acc += f(p));
    Ok(acc / factorial(n_qubits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturb::{build_chain_hamiltonian, ChainModel};
    use crate::qcore::linalg::max_abs_diff;
    use crate::rng::seeded;
    use std::collections::{HashMap, HashSet};

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut seen = HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.map().to_vec()));
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn operator_matches_index_map_and_is_unitary() {
        let p = Permutation::from_map(vec![2, 0, 1]).unwrap();
        let op = p.operator();
        assert!(crate::qcore::linalg::unitarity_defect(&op) < 1e-15);
        let mut s = StateVector::from_bits("100").unwrap();
        p.apply_to_state(&mut s).unwrap();
        assert_eq!(s, StateVector::from_bits("001").unwrap());
        assert!(Permutation::from_map(vec![0, 0]).is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let a = Permutation::from_map(vec![1, 2, 0, 3]).unwrap();
        let b = Permutation::transposition(4, 0, 3).unwrap();
        let ab = a.compose(&b);
        assert!(max_abs_diff(&ab.operator(), &(a.operator() * b.operator())) < 1e-15);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn conjugation_permutes_detunings() {
        let chain = ChainModel::ising(vec![0.1, 0.2, 0.3], vec![0.0, 0.0]);
        let h = build_chain_hamiltonian(&chain).unwrap();
        let p = Permutation::from_map(vec![1, 2, 0]).unwrap();
        // P^dag Z_q P = Z_{p^-1(q)}, so detuning d_q moves to p^-1(q).
        let mut moved = vec![0.0; 3];
        for q in 0..3 {
            moved[p.inverse().map()[q]] = chain.detunings[q];
        }
        let expect = build_chain_hamiltonian(&ChainModel::ising(moved, vec![0.0, 0.0])).unwrap();
        assert!(max_abs_diff(&p.conjugate(&h), &expect) < 1e-15);
        let direct = p.operator().adjoint() * &h * p.operator();
        assert!(max_abs_diff(&p.conjugate(&h), &direct) < 1e-15);
    }

    #[test]
    fn swap_layers_are_uniform() {
        let mut rng = seeded(2024);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        let draws = 24_000;
        for _ in 0..draws {
            let layer = random_swap_layer(4, &mut rng);
            assert!(layer.len() <= 3);
            let p = Permutation::from_transpositions(4, &layer).unwrap();
            *counts.entry(p.map().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 24);
        let e = draws as f64 / 24.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 0.1% upper quantile of chi-squared with 23 degrees of freedom.
        assert!(chi2 < 49.73, "chi2 = {chi2}");
    }

    #[test]
    fn tracker_accumulates_layers() {
        let mut rng = seeded(5);
        let mut t = PermutationTracker::new(5);
        let mut expect = Permutation::identity(5);
        for _ in 0..4 {
            let p = t.random_layer(&mut rng);
            expect = p.compose(&expect);
        }
        assert_eq!(t.current(), &expect);
        assert_eq!(t.history().len(), 4);
    }

    #[test]
    fn diagonal_and_dense_averages_agree() {
        let chain = ChainModel::ising(vec![0.1, -0.2, 0.3, 0.05], vec![0.4, -0.1, 0.2]);
        let h = build_chain_hamiltonian(&chain).unwrap();
        let fast = permutation_average(&h).unwrap();
        let mut perturbed = h.clone();
        perturbed[(0, 1)] = C64::from(1e-300);
        let dense = permutation_average(&perturbed).unwrap();
        assert!(max_abs_diff(&fast, &dense) < 1e-12);
        let mut rng = seeded(9);
        let mc = permutation_average_sampled(&h, 4000, &mut rng).unwrap();
        assert!(max_abs_diff(&mc, &fast) < 0.05);
    }

    #[test]
    fn exact_average_size_limit() {
        assert!(permutation_mean(9, |_| 0.0).is_err());
        assert!((permutation_mean(3, |p| p.map()[0] as f64).unwrap() - 1.0).abs() < 1e-15);
    }
}
