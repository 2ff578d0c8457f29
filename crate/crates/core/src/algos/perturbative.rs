//! Exact perturbed products and the second-order short-time fidelity amplitude.
//!
//! Gate `j` of iteration `tau` becomes `exp(-i L_j^tau) U_j exp(-i R_j^tau)`.

use super::circuit::GateSequence;
use crate::error::{Error, Result};
use crate::qcore::linalg::{expm_hermitian, hs_inner, identity, trace, Operator, C64};
use crate::tol;

/// Left and right perturbations of every gate in one iteration; `None` means zero.
#[derive(Clone, Debug, Default)]
pub struct IterationPerturbation {
    pub left: Vec<Option<Operator>>,
    pub right: Vec<Option<Operator>>,
}

impl IterationPerturbation {
    pub fn zero(n_g: usize) -> Self {
        Self {
            left: vec![None; n_g],
            right: vec![None; n_g],
        }
    }

    /// The same `dH` after every gate.
    pub fn static_left(n_g: usize, delta_h: &Operator) -> Self {
        Self {
            left: vec![Some(delta_h.clone()); n_g],
            right: vec![None; n_g],
        }
    }

    fn check(&self, seq: &GateSequence) -> Result<()> {
        for (what, v) in [("left perturbations", &self.left), ("right perturbations", &self.right)] {
            if v.len() != seq.len() {
                return Err(Error::LengthMismatch {
                    what,
                    expected: seq.len(),
                    found: v.len(),
                });
            }
            for h in v.iter().flatten() {
                if h.nrows() != seq.dim() || h.ncols() != seq.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: seq.dim(),
                        found: h.nrows(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// `prod_j exp(-i L_j) U_j exp(-i R_j)`, gate 1 acting first.
pub fn perturbed_product(
    seq: &GateSequence,
    left: &[Option<Operator>],
    right: &[Option<Operator>],
) -> Result<Operator> {
    let p = IterationPerturbation {
        left: left.to_vec(),
        right: right.to_vec(),
    };
    perturbed_iterated_product(seq, std::slice::from_ref(&p))
}

/// Product over all iterations, one [`IterationPerturbation`] per iteration.
pub fn perturbed_iterated_product(seq: &GateSequence, iterations: &[IterationPerturbation]) -> Result<Operator> {
    let n = seq.n_qubits();
    let mut m = identity(seq.dim());
    for it in iterations {
        it.check(seq)?;
        for (j, g) in seq.gates().iter().enumerate() {
            if let Some(r) = &it.right[j] {
                m = expm_hermitian(r, 1.0) * m;
            }
            g.left_apply(&mut m, n);
            if let Some(l) = &it.left[j] {
                m = expm_hermitian(l, 1.0) * m;
            }
        }
    }
    Ok(m)
}

/// `tr(U^{-t} U_actual)/N` for the exact perturbed product.
pub fn exact_amplitude(seq: &GateSequence, iterations: &[IterationPerturbation]) -> Result<C64> {
    let actual = perturbed_iterated_product(seq, iterations)?;
    let u = seq.product();
    let mut ut = identity(seq.dim());
    for _ in iterations {
        ut = &u * ut;
    }
    Ok(hs_inner(&ut, &actual) / seq.dim() as f64)
}

/// Every second-order contribution to `A(t)`, each stored with its sign so that
/// `A = 1 + sum of fields`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SecondOrderTerms {
    /// `-i sum tr(dH)/N`; zero for traceless input.
    pub linear: C64,
    /// `-1/2 sum tr(dH^2)/N` over all left and right perturbations.
    pub single: f64,
    /// Same iteration, `j > k`: left-left, left-right, right-left and right-right pairs.
    pub intra_ll: f64,
    pub intra_lr: f64,
    pub intra_rl: f64,
    pub intra_rr: f64,
    /// `-sum tr(U_j^dagger L_j U_j R_j)/N`.
    pub same_gate_lr: f64,
    /// Different iterations `tau_1 > tau_2`.
    pub inter_ll: f64,
    pub inter_lr: f64,
    pub inter_rl: f64,
    pub inter_rr: f64,
}

impl SecondOrderTerms {
    pub fn second_order_sum(&self) -> f64 {
        self.single
            + self.intra_ll
            + self.intra_lr
            + self.intra_rl
            + self.intra_rr
            + self.same_gate_lr
            + self.inter_ll
            + self.inter_lr
            + self.inter_rl
            + self.inter_rr
    }

    pub fn amplitude(&self) -> C64 {
        C64::from(1.0 + self.second_order_sum()) + self.linear
    }

    /// `|A|^2` to second order, `1 + 2 (A - 1)`.
    pub fn fidelity(&self) -> f64 {
        1.0 + 2.0 * self.second_order_sum()
    }
}

/// `V^dagger H V`.
fn toggle(h: &Operator, v: &Operator) -> Operator {
    v.adjoint() * h * v
}

/// `tr(A B)` for Hermitian `A`.
fn tr_prod(a: &Operator, b: &Operator) -> f64 {
    hs_inner(a, b).re
}

/// Summed toggled perturbations of one iteration.
struct ToggledIteration {
    sum_left: Operator,
    sum_right: Operator,
}

/// Second-order expansion of the fidelity amplitude after `iterations.len()` iterations.
/// All perturbations must be traceless.
pub fn fidelity_amplitude_second_order(
    seq: &GateSequence,
    iterations: &[IterationPerturbation],
) -> Result<SecondOrderTerms> {
    let dim = seq.dim();
    let nf = dim as f64;
    let prefixes = seq.prefix_products();
    let u = &prefixes[seq.len()];
    let mut terms = SecondOrderTerms::default();
    let mut toggled = Vec::with_capacity(iterations.len());
    for it in iterations {
        it.check(seq)?;
        for h in it.left.iter().chain(&it.right).flatten() {
            let tr = trace(h);
            if tr.norm() > tol::TRACELESS {
                return Err(Error::NotTraceless(tr.norm()));
            }
            terms.linear += C64::new(0.0, -1.0) * tr / nf;
            terms.single -= 0.5 * tr_prod(h, h) / nf;
        }
        // L_j acts after U_j, R_j before it.
        let left: Vec<Option<Operator>> =
            it.left.iter().enumerate().map(|(j, h)| h.as_ref().map(|h| toggle(h, &prefixes[j + 1]))).collect();
        let right: Vec<Option<Operator>> =
            it.right.iter().enumerate().map(|(j, h)| h.as_ref().map(|h| toggle(h, &prefixes[j]))).collect();

        // Running sums of earlier gates' toggled perturbations within this iteration.
        let mut acc_l = Operator::zeros(dim, dim);
        let mut acc_r = Operator::zeros(dim, dim);
        for j in 0..seq.len() {
            if let Some(x) = &left[j] {
                terms.intra_ll -= tr_prod(x, &acc_l) / nf;
                terms.intra_lr -= tr_prod(x, &acc_r) / nf;
            }
            if let Some(x) = &right[j] {
                terms.intra_rl -= tr_prod(x, &acc_l) / nf;
                terms.intra_rr -= tr_prod(x, &acc_r) / nf;
            }
            if let (Some(l), Some(r)) = (&left[j], &right[j]) {
                terms.same_gate_lr -= tr_prod(l, r) / nf;
            }
            if let Some(x) = &left[j] {
                acc_l += x;
            }
            if let Some(x) = &right[j] {
                acc_r += x;
            }
        }
        toggled.push(ToggledIteration {
            sum_left: acc_l,
            sum_right: acc_r,
        });
    }

    // U^k for the iteration offsets that occur.
    let t = iterations.len();
    let mut powers = vec![identity(dim)];
    for k in 1..t {
        powers.push(u * &powers[k - 1]);
    }
    for t1 in 0..t {
        for t2 in 0..t1 {
            let p = &powers[t1 - t2];
            // tr(U^{-d} X U^d Y) = tr(X~ Y) with X~ = U^{-d} X U^d.
            let later_l = toggle(&toggled[t1].sum_left, &p.adjoint());
            let later_r = toggle(&toggled[t1].sum_right, &p.adjoint());
            terms.inter_ll -= tr_prod(&later_l, &toggled[t2].sum_left) / nf;
            terms.inter_lr -= tr_prod(&later_l, &toggled[t2].sum_right) / nf;
            terms.inter_rl -= tr_prod(&later_r, &toggled[t2].sum_left) / nf;
            terms.inter_rr -= tr_prod(&later_r, &toggled[t2].sum_right) / nf;
        }
    }
    Ok(terms)
}

/// Second-order fidelity for one static `dH` after every gate:
/// `1 - t tr(D^2)/N - 2 sum_{tau=1}^{t-1} (t - tau) tr(U^{-tau} D U^tau D)/N`,
/// `D = sum_j V_j^dagger dH V_j`.
pub fn static_fidelity_second_order(seq: &GateSequence, delta_h: &Operator, t: usize) -> Result<f64> {
    let dim = seq.dim();
    if delta_h.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: delta_h.nrows(),
        });
    }
    let nf = dim as f64;
    let prefixes = seq.prefix_products();
    let mut d = Operator::zeros(dim, dim);
    for v in &prefixes[1..] {
        d += toggle(delta_h, v);
    }
    let u = &prefixes[seq.len()];
    let mut f = 1.0 - t as f64 * tr_prod(&d, &d) / nf;
    let mut p = identity(dim);
    for tau in 1..t {
        p = u * p;
        let shifted = toggle(&d, &p.adjoint());
        f -= 2.0 * (t - tau) as f64 * tr_prod(&shifted, &d) / nf;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algos::qft::build_qft;
    use crate::perturb::GuePerturbation;
    use crate::qcore::linalg::max_abs_diff;
    use crate::rng::seeded;

    #[test]
    fn zero_perturbation() {
        let qft = build_qft(3).unwrap();
        let its = vec![IterationPerturbation::zero(qft.len()); 2];
        let a = fidelity_amplitude_second_order(&qft, &its).unwrap();
        assert_eq!(a.amplitude(), C64::from(1.0));
        assert!((exact_amplitude(&qft, &its).unwrap() - C64::from(1.0)).norm() < 1e-12);
        let none = vec![None; qft.len()];
        assert!(max_abs_diff(&perturbed_product(&qft, &none, &none).unwrap(), &qft.product()) < 1e-14);
    }

    #[test]
    fn non_traceless_rejected() {
        let qft = build_qft(2).unwrap();
        let its = vec![IterationPerturbation::static_left(qft.len(), &identity(4))];
        assert!(matches!(fidelity_amplitude_second_order(&qft, &its), Err(Error::NotTraceless(_))));
    }

    #[test]
    fn length_mismatch_rejected() {
        let qft = build_qft(2).unwrap();
        assert!(perturbed_product(&qft, &[None], &[]).is_err());
    }

    #[test]
    fn static_left_matches_fstat_form() {
        let qft = build_qft(3).unwrap();
        let dh = GuePerturbation::sample(8, 1e-3, &mut seeded(4)).unwrap().delta_h();
        for t in 1..=4 {
            let its = vec![IterationPerturbation::static_left(qft.len(), &dh); t];
            let a = fidelity_amplitude_second_order(&qft, &its).unwrap();
            let f = static_fidelity_second_order(&qft, &dh, t).unwrap();
            assert!((a.fidelity() - f).abs() < 1e-15, "t = {t}");
        }
    }
}
