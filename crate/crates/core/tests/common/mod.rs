//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use qstab::perturb::ChainModel;
use qstab::qcore::linalg::{hermitian_eigen, trace};
use qstab::{Operator, C64};

/// `-i[H, rho] + sum_k (L rho L^dag - {L^dag L, rho}/2)`.
fn lindblad_rhs(h: &Operator, jumps: &[Operator], rho: &Operator) -> Operator {
    let mi = C64::new(0.0, -1.0);
    let mut out = (h * rho - rho * h) * mi;
    for l in jumps {
        let ld = l.adjoint();
        let ldl = &ld * l;
        out += l * rho * &ld - (&ldl * rho + rho * &ldl) * C64::from(0.5);
    }
    out
}

/// Classical fourth-order Runge-Kutta integration of the Lindblad equation, returning
/// `rho` at each requested time (ascending).
pub fn rk4_lindblad(h: &Operator, jumps: &[Operator], rho0: &Operator, times: &[f64], dt: f64) -> Vec<Operator> {
    let mut rho = rho0.clone();
    let mut t = 0.0;
    let mut out = Vec::new();
    for &target in times {
        while t < target - 1e-12 {
            let step = dt.min(target - t);
            let s = C64::from(step);
            let k1 = lindblad_rhs(h, jumps, &rho);
            let k2 = lindblad_rhs(h, jumps, &(&rho + &k1 * (s * 0.5)));
            let k3 = lindblad_rhs(h, jumps, &(&rho + &k2 * (s * 0.5)));
            let k4 = lindblad_rhs(h, jumps, &(&rho + &k3 * s));
            rho += (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * (s / 6.0);
            t += step;
        }
        out.push(rho.clone());
    }
    out
}

/// `||a - b||_1 / 2` for Hermitian arguments.
pub fn trace_distance(a: &Operator, b: &Operator) -> f64 {
    let d = a - b;
    let herm = (&d + d.adjoint()) * C64::from(0.5);
    let (vals, _) = hermitian_eigen(&herm);
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

pub fn is_density_matrix(rho: &Operator, tol: f64) -> bool {
    let n = rho.nrows();
    let herm = qstab::qcore::linalg::max_abs_diff(rho, &rho.adjoint()) < tol;
    let unit = (trace(rho) - C64::from(1.0)).norm() < tol;
    let (vals, _) = hermitian_eigen(&((rho + rho.adjoint()) * C64::from(0.5)));
    herm && unit && vals.iter().all(|&v| v > -tol) && n == rho.ncols()
}

/// `E[(-1)^(b_0 + ... + b_{k-1})]` over all `n`-bit words with `n/2` ones, by counting.
pub fn half_filling_parity_bias(n: usize, k: usize) -> f64 {
    let mut plus = 0u64;
    let mut minus = 0u64;
    for b in 0u64..1 << n {
        if 2 * b.count_ones() as usize != n {
            continue;
        }
        if (b & ((1 << k) - 1)).count_ones() % 2 == 0 {
            plus += 1;
        } else {
            minus += 1;
        }
    }
    (plus as f64 - minus as f64) / (plus + minus) as f64
}

/// Ising-chain energy of basis word `b` after relabelling qubit `q` as `perm[q]`.
pub fn permuted_chain_energy(chain: &ChainModel, perm: &[usize], b: usize) -> f64 {
    let n = chain.n_qubits;
    let z = |q: usize| if b >> (n - 1 - perm[q]) & 1 == 1 { -1.0 } else { 1.0 };
    let mut e = 0.0;
    for q in 0..n {
        e += chain.detunings[q] * z(q);
    }
    for j in 0..n - 1 {
        e += chain.jz[j] * z(j) * z(j + 1);
    }
    e
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub fn each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        f(&p);
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Least-squares `(a, b)` of `y = a t + b t^2`.
pub fn fit_linear_quadratic(t: &[f64], y: &[f64]) -> (f64, f64) {
    let s = |p: i32| t.iter().map(|x| x.powi(p)).sum::<f64>();
    let sy = |p: i32| t.iter().zip(y).map(|(x, v)| x.powi(p) * v).sum::<f64>();
    let (a11, a12, a22) = (s(2), s(3), s(4));
    let (b1, b2) = (sy(1), sy(2));
    let det = a11 * a22 - a12 * a12;
    ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det)
}
