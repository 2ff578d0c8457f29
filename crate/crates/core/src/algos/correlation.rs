//! GUE-averaged gate correlation matrices, with and without Pauli-random rewriting.
//!
//! For perturbations `dH = V delta` following each gate, with `V` traceless GUE,
//! `<C(j,k)> = delta^2 (|tr(W_j W_k^dagger)/N|^2 - 1/N^2)` where `W_j = U_j ... U_1`.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use super::circuit::GateSequence;
use super::parec::parec_transform;
use crate::decouple::{DecouplingSet, Element};
use crate::error::{Error, Result};
use crate::qcore::linalg::{hs_inner, identity, Operator, C64};
use crate::rng::stream;

/// Above this many cached complex entries the closed form streams partial products.
pub const PREFIX_CACHE_LIMIT: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `C(j,k)`.
    Raw,
    /// `C(j,k) / delta^2`.
    OverDeltaSquared,
    /// `C(j,k) / delta^2 + 1/N^2`; unit diagonal for the GUE closed form.
    Normalized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    /// `C(j,k)` including the `delta^2` factor; `(0,0)` is gate 1.
    pub raw: DMatrix<f64>,
    pub delta: f64,
    pub dim: usize,
}

impl CorrelationMatrix {
    fn from_scaled(scaled: DMatrix<f64>, delta: f64, dim: usize) -> Self {
        Self {
            raw: scaled * (delta * delta),
            delta,
            dim,
        }
    }

    pub fn len(&self) -> usize {
        self.raw.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.nrows() == 0
    }

    pub fn values(&self, norm: Normalization) -> DMatrix<f64> {
        let d2 = self.delta * self.delta;
        let inv_n2 = 1.0 / (self.dim as f64).powi(2);
        match norm {
            Normalization::Raw => self.raw.clone(),
            Normalization::OverDeltaSquared => &self.raw / d2,
            Normalization::Normalized => self.raw.map(|c| c / d2 + inv_n2),
        }
    }

    /// `(j, k, value)` rows with 1-based gate positions, row-major.
    pub fn rows(&self, norm: Normalization) -> Vec<(usize, usize, f64)> {
        let v = self.values(norm);
        let n = v.nrows();
        (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).map(|(j, k)| (j + 1, k + 1, v[(j, k)])).collect()
    }

    /// Second-order fidelity `1 - sum_{j,k} C(j,k)`.
    pub fn fidelity(&self) -> f64 {
        1.0 - self.raw.sum()
    }
}

fn overlap_term(tr: C64, dim: usize) -> f64 {
    let n = dim as f64;
    (tr / n).norm_sqr() - 1.0 / (n * n)
}

fn closed_form_cached(seq: &GateSequence) -> DMatrix<f64> {
    let prefixes = seq.prefix_products();
    let w = &prefixes[1..];
    let n_g = w.len();
    let dim = seq.dim();
    let cols: Vec<Vec<f64>> = (0..n_g)
        .into_par_iter()
        .map(|k| (0..n_g).map(|j| overlap_term(hs_inner(&w[k], &w[j]), dim)).collect())
        .collect();
    DMatrix::from_fn(n_g, n_g, |j, k| cols[k][j])
}

fn closed_form_streaming(seq: &GateSequence) -> DMatrix<f64> {
    let n_g = seq.len();
    let n = seq.n_qubits();
    let dim = seq.dim();
    let cols: Vec<Vec<f64>> = (0..n_g)
        .into_par_iter()
        .map(|k| {
            let mut col = vec![0.0; n_g];
            col[k] = overlap_term(C64::from(dim as f64), dim);
            let mut partial = identity(dim);
            for j in (k + 1)..n_g {
                seq.gates()[j].left_apply(&mut partial, n);
                col[j] = overlap_term(partial.diagonal().iter().sum(), dim);
            }
            col
        })
        .collect();
    DMatrix::from_fn(n_g, n_g, |j, k| if j >= k { cols[k][j] } else { cols[j][k] })
}

/// Closed-form GUE average of `C(j,k)`; prefix products are cached when they fit in
/// [`PREFIX_CACHE_LIMIT`] entries, otherwise partial products `U_j ... U_{k+1}` are streamed.
pub fn correlation_matrix_gue_average(seq: &GateSequence, delta: f64) -> CorrelationMatrix {
    let dim = seq.dim();
    let scaled = if (seq.len() + 1) * dim * dim <= PREFIX_CACHE_LIMIT {
        closed_form_cached(seq)
    } else {
        closed_form_streaming(seq)
    };
    CorrelationMatrix::from_scaled(scaled, delta, dim)
}

#[doc(hidden)]
pub fn correlation_matrix_gue_average_streaming(seq: &GateSequence, delta: f64) -> CorrelationMatrix {
    CorrelationMatrix::from_scaled(closed_form_streaming(seq), delta, seq.dim())
}

/// `C(j,k) = tr(dH~(j) dH~(k))/N` for one fixed perturbation, `dH~(j) = W_j^dagger dH W_j`.
pub fn correlation_matrix_for(seq: &GateSequence, delta_h: &Operator) -> Result<DMatrix<f64>> {
    let dim = seq.dim();
    if delta_h.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: delta_h.nrows(),
        });
    }
    let toggled: Vec<Operator> = seq.prefix_products()[1..].iter().map(|w| w.adjoint() * delta_h * w).collect();
    let n_g = toggled.len();
    // tr(A B) = sum_{xy} A_xy B_yx = <A^dagger, B> for Hermitian A.
    Ok(DMatrix::from_fn(n_g, n_g, |j, k| hs_inner(&toggled[j], &toggled[k]).re / dim as f64))
}

/// `tr(P M)`.
fn pauli_trace(p: &crate::qcore::PauliString, m: &Operator) -> C64 {
    (0..m.ncols())
        .map(|y| {
            let (x, c) = p.action(y);
            c * m[(y, x)]
        })
        .sum()
}

/// Per-draw `|tr(W'_j W'_k^dagger)/N|^2 - 1/N^2` for the rewritten single iteration.
///
/// Pulses telescope, so position `j` (1-based, `2 n_g` positions) has prefix
/// `r_{ceil(j/2)} V_{floor(j/2)}` with `V_i` the original prefix products. With Pauli pulses
/// each entry is then an `O(N)` trace against a cached `V_b V_d^dagger`.
struct ParecSampler<'a> {
    seq: &'a GateSequence,
    set: &'a DecouplingSet,
    /// `V_b V_d^dagger`, `(n_g+1)^2` entries, when cached.
    overlaps: Option<Vec<Operator>>,
}

impl<'a> ParecSampler<'a> {
    fn new(seq: &'a GateSequence, set: &'a DecouplingSet) -> Self {
        let prefixes = seq.prefix_products();
        let m = prefixes.len();
        let dim = seq.dim();
        let pauli_set = matches!(set.element(1), Element::Pauli(_));
        let overlaps = (pauli_set && m * m * dim * dim <= 4 * PREFIX_CACHE_LIMIT).then(|| {
            (0..m * m)
                .into_par_iter()
                .map(|idx| &prefixes[idx / m] * prefixes[idx % m].adjoint())
                .collect()
        });
        Self { seq, set, overlaps }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DMatrix<f64>> {
        let dim = self.seq.dim();
        let n_g = self.seq.len();
        let len = 2 * n_g;
        let mut out = DMatrix::zeros(len, len);
        if let Some(cache) = &self.overlaps {
            // Same draws, in the same order, as `parec_transform` makes.
            let r: Vec<_> = (0..n_g)
                .map(|_| match self.set.random_element(rng) {
                    Element::Pauli(p) => p,
                    Element::Dense(_) => unreachable!("cache is only built for Pauli sets"),
                })
                .collect();
            let r_adj: Vec<_> = r.iter().map(|p| p.adjoint()).collect();
            let m = n_g + 1;
            for j in 1..=len {
                for k in 1..=j {
                    let (a, b) = ((j + 1) / 2, j / 2);
                    let (c, d) = ((k + 1) / 2, k / 2);
                    let q = r_adj[c - 1].mul(&r[a - 1])?;
                    let v = overlap_term(pauli_trace(&q, &cache[b * m + d]), dim);
                    out[(j - 1, k - 1)] = v;
                    out[(k - 1, j - 1)] = v;
                }
            }
            return Ok(out);
        }
        let circuit = parec_transform(self.seq, 1, self.set, rng)?;
        let w = &circuit.body.prefix_products()[1..];
        for j in 0..len {
            for k in 0..=j {
                let v = overlap_term(hs_inner(&w[k], &w[j]), dim);
                out[(j, k)] = v;
                out[(k, j)] = v;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ParecCorrelation {
    /// Monte-Carlo estimate of `E <C(j,k)>` over rewritings.
    pub mean: CorrelationMatrix,
    /// Standard error of each entry, `delta^2` scale.
    pub stderr: DMatrix<f64>,
    /// Closed-form expectation over rewritings.
    pub expected: CorrelationMatrix,
    /// `1 - 4 n_g delta^2 (1 - N^-2)`.
    pub fidelity_bound: f64,
    /// `1 - sum E<C(j,k)>` from the closed form.
    pub expected_fidelity: f64,
    pub samples: usize,
}

/// Closed-form `E <C(j,k)>` over uniform Pauli rewritings of one iteration (`2 n_g` positions):
/// `1 - 1/N^2` on the diagonal, `|tr U_i / N|^2 - 1/N^2` between the pulse and the gate of
/// step `i`, zero elsewhere.
pub fn parec_expected_pattern(seq: &GateSequence, delta: f64) -> CorrelationMatrix {
    let dim = seq.dim();
    let len = 2 * seq.len();
    let diag = overlap_term(C64::from(dim as f64), dim);
    let mut m = DMatrix::zeros(len, len);
    for j in 1..=len {
        m[(j - 1, j - 1)] = diag;
        if j % 2 == 0 {
            let v = overlap_term(seq.gates()[j / 2 - 1].trace(seq.n_qubits()), dim);
            m[(j - 1, j - 2)] = v;
            m[(j - 2, j - 1)] = v;
        }
    }
    CorrelationMatrix::from_scaled(m, delta, dim)
}

/// `1 - 4 n_g delta^2 (1 - N^-2)`.
pub fn parec_fidelity_bound(n_g: usize, delta: f64, dim: usize) -> f64 {
    1.0 - 4.0 * n_g as f64 * delta * delta * (1.0 - 1.0 / (dim as f64).powi(2))
}

/// Monte-Carlo average of the GUE correlation matrix over `samples` rewritings with
/// pulses from `set`, together with the closed-form pattern and fidelity bound.
pub fn parec_correlation_average<R: Rng + ?Sized>(
    seq: &GateSequence,
    delta: f64,
    samples: usize,
    set: &DecouplingSet,
    rng: &mut R,
) -> Result<ParecCorrelation> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let master = rng.next_u64();
    let sampler = ParecSampler::new(seq, set);
    let len = 2 * seq.len();
    let (sum, sq) = (0..samples as u64)
        .into_par_iter()
        .map(|s| sampler.sample(&mut stream(master, s)))
        .try_fold(
            || (DMatrix::<f64>::zeros(len, len), DMatrix::<f64>::zeros(len, len)),
            |(mut a, mut b), m| {
                let m = m?;
                b += m.component_mul(&m);
                a += m;
                Ok::<_, Error>((a, b))
            },
        )
        .try_reduce(
            || (DMatrix::zeros(len, len), DMatrix::zeros(len, len)),
            |(a1, b1), (a2, b2)| Ok((a1 + a2, b1 + b2)),
        )?;
    let m = samples as f64;
    let mean = &sum / m;
    let stderr = if samples > 1 {
        DMatrix::from_fn(len, len, |j, k| {
            let var = ((sq[(j, k)] / m - mean[(j, k)].powi(2)) * m / (m - 1.0)).max(0.0);
            (var / m).sqrt() * delta * delta
        })
    } else {
        DMatrix::zeros(len, len)
    };
    let expected = parec_expected_pattern(seq, delta);
    Ok(ParecCorrelation {
        expected_fidelity: expected.fidelity(),
        mean: CorrelationMatrix::from_scaled(mean, delta, seq.dim()),
        stderr,
        expected,
        fidelity_bound: parec_fidelity_bound(seq.len(), delta, seq.dim()),
        samples,
    })
}

/// `1 - 2 n_g delta^2 (1 - N^-2) - 2 delta^2 sum_j (|tr U_j/N|^2 - N^-2)`.
pub fn parec_expected_fidelity(seq: &GateSequence, delta: f64) -> f64 {
    let dim = seq.dim();
    let d2 = delta * delta;
    let inv_n2 = 1.0 / (dim as f64).powi(2);
    let gates: f64 = seq.gates().iter().map(|g| overlap_term(g.trace(seq.n_qubits()), dim)).sum();
    1.0 - 2.0 * seq.len() as f64 * d2 * (1.0 - inv_n2) - 2.0 * d2 * gates
}
