//! Closed-form evolution of the fully symmetric Dicke sector.
//!
//! With the field in a coherent state and the atoms in a permutation-symmetric
//! state, the dynamics never leaves the four symmetric Dicke states. The
//! excitation number splits the problem into independent 4-level blocks
//! labelled by `n`, each spanned by
//!
//! ```text
//! |D1⟩ = |eee; n⟩,  |D2⟩ = W-like; n+1,  |D3⟩ = anti-W-like; n+2,  |D4⟩ = |ggg; n+3⟩
//! ```
//!
//! and driven by the real tridiagonal Hamiltonian with off-diagonals
//! `(√3·√(n+1), 2·√(n+2), √3·√(n+3))` in units of the coupling `g`. Time is
//! the scaled `τ = g·t` and `U = exp(-i H τ)`.

use crate::error::{Error, Result};
use crate::numerics::{CoherentTerms, ComplexMatrix, C64, ONE, ZERO};

/// Tolerance on `Σ|c|²` for atomic initial coefficients.
pub const ATOM_NORM_TOL: f64 = 1e-12;
/// Default truncation tolerance for the coherent photon ladder.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Rabi parameters of one excitation block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiBlockParams {
    pub n: usize,
    /// √(n+1)
    pub gamma: f64,
    /// √(n+2)
    pub beta: f64,
    /// √(n+3)
    pub eta: f64,
    /// 4β² + 3γ² + 3η²
    pub delta: f64,
    /// Larger squared Rabi frequency.
    pub mu1: f64,
    /// Smaller squared Rabi frequency.
    pub mu2: f64,
}

pub fn rabi_params(n: usize) -> RabiBlockParams {
    let gamma = ((n + 1) as f64).sqrt();
    let beta = ((n + 2) as f64).sqrt();
    let eta = ((n + 3) as f64).sqrt();
    let (g2, b2, e2) = (gamma * gamma, beta * beta, eta * eta);
    let delta = 4.0 * b2 + 3.0 * g2 + 3.0 * e2;
    let disc = (delta * delta - 36.0 * e2 * g2).sqrt();
    RabiBlockParams { n, gamma, beta, eta, delta, mu1: 0.5 * (delta + disc), mu2: 0.5 * (delta - disc) }
}

/// 4×4 evolution matrix of block `n` at scaled time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionBlock {
    pub n: usize,
    pub tau: f64,
    pub u: [[C64; 4]; 4],
}

impl EvolutionBlock {
    pub fn apply(&self, x: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (i, row) in self.u.iter().enumerate() {
            out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, |i, j| self.u[i][j])
    }

    /// `max |(U†U - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.to_matrix();
        (&m.adjoint() * &m).max_abs_diff(&ComplexMatrix::identity(4))
    }
}

/// Evaluates the closed-form entries of `exp(-i H_n τ)`.
///
/// The upper triangle is written out term by term as partial fractions over
/// the two squared Rabi frequencies; the lower triangle follows from the
/// symmetry of the real block Hamiltonian.
pub fn evolution_block(n: usize, tau: f64) -> EvolutionBlock {
    let p = rabi_params(n);
    let RabiBlockParams { gamma, beta, eta, mu1, mu2, .. } = p;
    let (g2, b2, e2) = (gamma * gamma, beta * beta, eta * eta);
    let diff = mu1 - mu2;
    assert!(diff > 1e-6, "degenerate Rabi roots in block {n}: mu1 - mu2 = {diff}");

    let (w1, w2) = (mu1.sqrt(), mu2.sqrt());
    let (c1, c2) = ((w1 * tau).cos(), (w2 * tau).cos());
    let (sin1, sin2) = ((w1 * tau).sin(), (w2 * tau).sin());
    // sin(√μ τ)/√μ
    let (s1, s2) = (sin1 / w1, sin2 / w2);
    let sqrt3 = 3.0_f64.sqrt();

    let re = |x: f64| C64::new(x, 0.0);
    let neg_i = |x: f64| C64::new(0.0, -x);

    let u11 = re(((mu1 - 4.0 * b2 - 3.0 * e2) * c1 - (mu2 - 4.0 * b2 - 3.0 * e2) * c2) / diff);
    let u12 = neg_i(sqrt3 * gamma * ((mu1 - 3.0 * e2) * s1 - (mu2 - 3.0 * e2) * s2) / diff);
    let u13 = re(2.0 * sqrt3 * beta * gamma * (c1 - c2) / diff);
    let u14 = neg_i(6.0 * beta * gamma * eta * (s1 - s2) / diff);
    let u22 = re(((mu1 - 3.0 * e2) * c1 - (mu2 - 3.0 * e2) * c2) / diff);
    let u23 = neg_i(2.0 * beta * (w1 * sin1 - w2 * sin2) / diff);
    let u24 = re(2.0 * sqrt3 * beta * eta * (c1 - c2) / diff);
    let u33 = re(((mu1 - 3.0 * g2) * c1 - (mu2 - 3.0 * g2) * c2) / diff);
    let u34 = neg_i(sqrt3 * eta * ((mu1 - 3.0 * g2) * s1 - (mu2 - 3.0 * g2) * s2) / diff);
    let u44 = re(((mu1 - 4.0 * b2 - 3.0 * g2) * c1 - (mu2 - 4.0 * b2 - 3.0 * g2) * c2) / diff);

    let u = [[u11, u12, u13, u14], [u12, u22, u23, u24], [u13, u23, u33, u34], [u14, u24, u34, u44]];
    EvolutionBlock { n, tau, u }
}

/// Atomic part of the initial product state, in the symmetric Dicke basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicInitState {
    pub c_e: C64,
    pub c_w1: C64,
    pub c_w2: C64,
    pub c_g: C64,
}

impl AtomicInitState {
    pub fn new(c_e: C64, c_w1: C64, c_w2: C64, c_g: C64) -> Result<Self> {
        let s = Self { c_e, c_w1, c_w2, c_g };
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > ATOM_NORM_TOL {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(s)
    }

    /// All three atoms excited, `|eee⟩`.
    pub fn excited() -> Self {
        Self { c_e: ONE, c_w1: ZERO, c_w2: ZERO, c_g: ZERO }
    }

    /// `(|eee⟩ + |ggg⟩)/√2`.
    pub fn ghz() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { c_e: h, c_w1: ZERO, c_w2: ZERO, c_g: h }
    }

    /// `(|eeg⟩ + |ege⟩ + |gee⟩)/√3`.
    pub fn w() -> Self {
        Self { c_e: ZERO, c_w1: ONE, c_w2: ZERO, c_g: ZERO }
    }

    pub fn coefficients(&self) -> [C64; 4] {
        [self.c_e, self.c_w1, self.c_w2, self.c_g]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients().iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Truncated coherent-state photon amplitudes `q_n`, `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentField {
    pub alpha0: C64,
    pub nbar: f64,
    pub n_max: usize,
    pub q: Vec<C64>,
    /// `Σ_{n > n_max} |q_n|²`, the probability discarded by truncation.
    pub tail_mass: f64,
}

impl CoherentField {
    /// `q_n`, zero beyond the truncation.
    #[inline]
    pub fn amplitude(&self, n: usize) -> C64 {
        self.q.get(n).copied().unwrap_or(ZERO)
    }
}

/// Coherent amplitudes truncated where the discarded amplitude norm
/// `(Σ_{n>n_max} |q_n|²)^{1/2}` first drops below `tail_tol`.
pub fn coherent_amplitudes(alpha0: C64, tail_tol: f64) -> Result<CoherentField> {
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::OutOfDomain { what: "tail_tol", value: tail_tol });
    }
    let nbar = alpha0.norm_sqr();
    if !nbar.is_finite() {
        return Err(Error::OutOfDomain { what: "|alpha0|^2", value: nbar });
    }
    // Past the Poisson mode successive weights shrink by nbar/(n+1) < 1, so
    // once a weight is below `floor` the remaining tail is bounded too.
    let floor = tail_tol * tail_tol * 1e-8;
    let mut q: Vec<C64> = Vec::new();
    for (n, term) in CoherentTerms::new(alpha0).enumerate() {
        q.push(term);
        let w = term.norm_sqr();
        let ratio = nbar / (n + 1) as f64;
        if (n as f64) > nbar && ratio < 0.5 && w < floor {
            break;
        }
    }
    // suffix[n] = Σ_{k ≥ n} |q_k|²
    let mut suffix = vec![0.0; q.len() + 1];
    for n in (0..q.len()).rev() {
        suffix[n] = suffix[n + 1] + q[n].norm_sqr();
    }
    let n_max = (0..q.len()).find(|&n| suffix[n + 1].sqrt() < tail_tol).unwrap_or(q.len() - 1);
    q.truncate(n_max + 1);
    Ok(CoherentField { alpha0, nbar, n_max, q, tail_mass: suffix[n_max + 1] })
}

/// Amplitudes `X_i^{(n)}(τ)` of the symmetric Dicke states for every block
/// `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricWavefunction {
    pub tau: f64,
    pub x: Vec<[C64; 4]>,
}

impl SymmetricWavefunction {
    pub fn n_max(&self) -> usize {
        self.x.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.iter().flat_map(|b| b.iter()).map(|z| z.norm_sqr()).sum()
    }

    pub fn block_norms(&self) -> Vec<f64> {
        self.x.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum()).collect()
    }

    /// `⟨a†a + ½Σσ_z⟩`; block `n` carries `n + 3/2` excitations.
    pub fn mean_excitation(&self) -> f64 {
        self.block_norms().iter().enumerate().map(|(n, w)| (n as f64 + 1.5) * w).sum()
    }

    /// Amplitude `X_i^{(n)}` with `i` zero-based, or zero outside the stored
    /// ladder.
    #[inline]
    pub fn amplitude(&self, i: usize, n: isize) -> C64 {
        if n < 0 {
            return ZERO;
        }
        self.x.get(n as usize).map_or(ZERO, |b| b[i])
    }

    /// The sequence `X_i^{(0)}, X_i^{(1)}, ...` for one Dicke component.
    pub fn component(&self, i: usize) -> Vec<C64> {
        self.x.iter().map(|b| b[i]).collect()
    }
}

/// `X_i^{(n)}(0) = c_i · q_{n+i-1}`.
pub fn initial_amplitudes(atoms: &AtomicInitState, field: &CoherentField) -> Result<SymmetricWavefunction> {
    let norm_sqr = atoms.norm_sqr();
    if (norm_sqr - 1.0).abs() > ATOM_NORM_TOL {
        return Err(Error::Unnormalized { norm_sqr });
    }
    let c = atoms.coefficients();
    let x = (0..=field.n_max)
        .map(|n| {
            [
                c[0] * field.amplitude(n),
                c[1] * field.amplitude(n + 1),
                c[2] * field.amplitude(n + 2),
                c[3] * field.amplitude(n + 3),
            ]
        })
        .collect();
    Ok(SymmetricWavefunction { tau: 0.0, x })
}

/// Propagates every block by `tau`; the result sits at `initial.tau + tau`.
pub fn evolve(initial: &SymmetricWavefunction, tau: f64) -> SymmetricWavefunction {
    let x = initial.x.iter().enumerate().map(|(n, block)| evolution_block(n, tau).apply(block)).collect();
    SymmetricWavefunction { tau: initial.tau + tau, x }
}
