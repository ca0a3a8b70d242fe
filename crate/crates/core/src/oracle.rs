//! Brute-force reference dynamics for tests.
//!
//! Block Hamiltonians are assembled by applying the interaction
//! `a·Σσ+ + a†·Σσ−` to product states, and amplitudes are propagated with a
//! fixed-step classical Runge–Kutta integrator. Nothing here touches the
//! closed-form evolution matrix.

use crate::error::Result;
use crate::numerics::{symmetric_eigen, ComplexMatrix, C64, ZERO};
use crate::reduced::PRODUCT_BASIS;

/// Block `n` of the interaction Hamiltonian (units of `g`).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHamiltonian {
    pub n: usize,
    /// Symmetric Dicke sector, basis `|D1⟩..|D4⟩`.
    pub h4: [[f64; 4]; 4],
    /// Full sector over the product states `|eee;n⟩ .. |ggg;n+3⟩`.
    pub h8: [[f64; 8]; 8],
}

pub fn block_hamiltonian(n: usize) -> BlockHamiltonian {
    let gamma = ((n + 1) as f64).sqrt();
    let beta = ((n + 2) as f64).sqrt();
    let eta = ((n + 3) as f64).sqrt();
    let s3 = 3f64.sqrt();
    let mut h4 = [[0.0; 4]; 4];
    for (k, w) in [s3 * gamma, 2.0 * beta, s3 * eta].into_iter().enumerate() {
        h4[k][k + 1] = w;
        h4[k + 1][k] = w;
    }

    let photons = |bits: &[usize; 3]| n + bits.iter().sum::<usize>();
    let mut h8 = [[0.0; 8]; 8];
    for (j, bits) in PRODUCT_BASIS.iter().enumerate() {
        for atom in 0..3 {
            if bits[atom] != 0 {
                continue;
            }
            // a† σ−: atom drops to g, one photon emitted
            let mut lowered = *bits;
            lowered[atom] = 1;
            let target = PRODUCT_BASIS.iter().position(|b| *b == lowered).unwrap();
            let amp = ((photons(bits) + 1) as f64).sqrt();
            h8[target][j] += amp;
            h8[j][target] += amp;
        }
    }
    BlockHamiltonian { n, h4, h8 }
}

/// Rows are `|D1⟩..|D8⟩` (symmetric, then mixed symmetry) in product order.
pub fn dicke_basis8() -> [[f64; 8]; 8] {
    let s2 = 1.0 / 2f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    // product order: eee eeg ege gee egg geg gge ggg
    [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, s3, s3, s3, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, s3, s3, s3, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, -s6, -s6, 2.0 * s6, 0.0, 0.0, 0.0, 0.0],
        [0.0, s2, -s2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -2.0 * s6, s6, s6, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -s2, s2, 0.0],
    ]
}

fn apply_minus_i_h(h: &[f64], x: &[C64]) -> Vec<C64> {
    let d = x.len();
    (0..d)
        .map(|i| {
            let hx: C64 = (0..d).map(|j| x[j] * h[i * d + j]).sum();
            C64::new(hx.im, -hx.re)
        })
        .collect()
}

/// Classical RK4 for `dX/dτ = −i·h·X` on a dense real symmetric `h`
/// (row-major), with the step shrunk to divide `tau` evenly.
pub fn rk4(h: &[f64], x0: &[C64], tau: f64, dt: f64) -> Vec<C64> {
    let d = x0.len();
    assert_eq!(h.len(), d * d, "rk4: hamiltonian/state dimension mismatch");
    if tau == 0.0 {
        return x0.to_vec();
    }
    let steps = (tau.abs() / dt).ceil().max(1.0) as usize;
    let step = tau / steps as f64;
    let axpy = |x: &[C64], k: &[C64], a: f64| -> Vec<C64> { x.iter().zip(k).map(|(x, k)| x + k * a).collect() };
    let mut x = x0.to_vec();
    for _ in 0..steps {
        let k1 = apply_minus_i_h(h, &x);
        let k2 = apply_minus_i_h(h, &axpy(&x, &k1, 0.5 * step));
        let k3 = apply_minus_i_h(h, &axpy(&x, &k2, 0.5 * step));
        let k4 = apply_minus_i_h(h, &axpy(&x, &k3, step));
        for i in 0..d {
            x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (step / 6.0);
        }
    }
    x
}

/// Stable step size for block `n`.
pub fn default_dt(n: usize) -> f64 {
    1e-3 / ((n + 3) as f64).sqrt()
}

/// Integrates a 4-vector (Dicke basis) or 8-vector (product basis) through
/// block `h`.
pub fn integrate_block(h: &BlockHamiltonian, x0: &[C64], tau: f64, dt: f64) -> Vec<C64> {
    match x0.len() {
        4 => rk4(&h.h4.concat(), x0, tau, dt),
        8 => rk4(&h.h8.concat(), x0, tau, dt),
        d => panic!("integrate_block: state must have 4 or 8 components, got {d}"),
    }
}

/// `exp(−i·h4·τ)` from the eigen-decomposition of `h4`.
pub fn exp_by_eigen(h: &BlockHamiltonian, tau: f64) -> Result<ComplexMatrix> {
    let (values, vectors) = symmetric_eigen(4, &h.h4.concat())?;
    Ok(ComplexMatrix::from_fn(4, |i, j| {
        (0..4).fold(ZERO, |acc, k| {
            acc + C64::from_polar(1.0, -values[k] * tau) * (vectors[i * 4 + k] * vectors[j * 4 + k])
        })
    }))
}
