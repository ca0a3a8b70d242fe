//! Atomic inversions, initial-state occupation and revival-time predictions.

use std::f64::consts::PI;

use crate::dynamics::{AtomicInitState, SymmetricWavefunction};
use crate::error::{Error, Result};
use crate::numerics::{C64, ZERO};

/// Inversions and initial-state occupation at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionSample {
    pub tau: f64,
    pub w_total: f64,
    pub w_single: f64,
    pub p_ini: f64,
}

/// Built-in initial atomic states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `|eee⟩`
    Excited,
    Ghz,
    W,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Excited, Preset::Ghz, Preset::W];

    pub fn atoms(self) -> AtomicInitState {
        match self {
            Preset::Excited => AtomicInitState::excited(),
            Preset::Ghz => AtomicInitState::ghz(),
            Preset::W => AtomicInitState::w(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Excited => "eee",
            Preset::Ghz => "ghz",
            Preset::W => "w",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    TotalInversion,
    SingleInversion,
    InitialPopulation,
}

/// `Σ_n (|X1|² − |X4|²)`.
///
/// This is the plotted total inversion, not `⟨Σσ_z⟩`; see
/// [`full_sz_expectation`] for the latter.
pub fn total_inversion(psi: &SymmetricWavefunction) -> f64 {
    psi.x.iter().map(|b| b[0].norm_sqr() - b[3].norm_sqr()).sum()
}

/// `⟨σ_z^{(a)}⟩ = Σ_n (|X1|² + |X2|²/3 − |X3|²/3 − |X4|²)`.
pub fn single_atom_inversion(psi: &SymmetricWavefunction) -> f64 {
    psi.x.iter().map(|b| b[0].norm_sqr() + (b[1].norm_sqr() - b[2].norm_sqr()) / 3.0 - b[3].norm_sqr()).sum()
}

/// `⟨σ_z^{(a)} + σ_z^{(b)} + σ_z^{(c)}⟩ = Σ_n (3|X1|² + |X2|² − |X3|² − 3|X4|²)`.
pub fn full_sz_expectation(psi: &SymmetricWavefunction) -> f64 {
    psi.x.iter().map(|b| 3.0 * b[0].norm_sqr() + b[1].norm_sqr() - b[2].norm_sqr() - 3.0 * b[3].norm_sqr()).sum()
}

/// Occupation of the initial state resolved by excitation number,
/// `Σ_n |⟨X⁽ⁿ⁾(0)|X⁽ⁿ⁾(τ)⟩|² / ‖X⁽ⁿ⁾(0)‖²`.
///
/// This is `⟨Ψ(τ)|Π|Ψ(τ)⟩` with `Π` the projector onto the normalized
/// initial block states: the return probability once coherences between
/// excitation manifolds (a conserved quantity) are discarded. For |eee⟩ it
/// equals the atomic population `ρ_11`. The full overlap
/// [`return_probability`] decays to zero instead, because the field parts
/// of different blocks dephase.
pub fn initial_population(psi0: &SymmetricWavefunction, psi: &SymmetricWavefunction) -> Result<f64> {
    if psi0.x.len() != psi.x.len() {
        return Err(Error::TruncationMismatch { left: psi0.x.len(), right: psi.x.len() });
    }
    let mut acc = 0.0;
    for (a, b) in psi0.x.iter().zip(&psi.x) {
        let w: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        if w == 0.0 {
            continue;
        }
        let overlap: C64 = a.iter().zip(b).map(|(a, b)| a.conj() * b).sum();
        acc += overlap.norm_sqr() / w;
    }
    Ok(acc)
}

/// `|⟨Ψ(0)|Ψ(τ)⟩|²` over the joint atom–field state.
pub fn return_probability(psi0: &SymmetricWavefunction, psi: &SymmetricWavefunction) -> Result<f64> {
    if psi0.x.len() != psi.x.len() {
        return Err(Error::TruncationMismatch { left: psi0.x.len(), right: psi.x.len() });
    }
    let overlap: C64 =
        psi0.x.iter().zip(&psi.x).flat_map(|(a, b)| a.iter().zip(b.iter())).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.norm_sqr())
}

pub fn inversion_sample(psi0: &SymmetricWavefunction, psi: &SymmetricWavefunction) -> Result<InversionSample> {
    Ok(InversionSample {
        tau: psi.tau,
        w_total: total_inversion(psi),
        w_single: single_atom_inversion(psi),
        p_ini: initial_population(psi0, psi)?,
    })
}

// Large-n block Hamiltonian divided by √n: tridiag(√3, 2, √3), spectrum
// {3, −3, 1, −1}. Rows are orthonormal eigenvectors, scaled by √8.
const ASYMPTOTIC_EIGENVALUES: [f64; 4] = [3.0, -3.0, 1.0, -1.0];
const S3: f64 = 1.732_050_807_568_877_2;
const ASYMPTOTIC_VECTORS_X8: [[f64; 4]; 4] =
    [[1.0, S3, S3, 1.0], [1.0, -S3, S3, -1.0], [S3, 1.0, -1.0, -S3], [S3, -1.0, -1.0, S3]];

fn asymptotic_vectors() -> [[f64; 4]; 4] {
    let k = 1.0 / 8f64.sqrt();
    ASYMPTOTIC_VECTORS_X8.map(|v| v.map(|x| x * k))
}

/// One harmonic `amplitude · cos(frequency·√n·τ + φ)` of a summand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub frequency: u32,
    pub amplitude: f64,
}

/// Oscillating content of the per-block summand of `quantity` when every
/// radicand is replaced by `√n` (Rabi frequencies `3√n` and `√n`) and the
/// photon-shifted amplitudes `q_{n+k}` by `q_n`.
///
/// Returns the harmonics with nonzero amplitude, lowest frequency first, and
/// the constant (time-averaged) part.
pub fn harmonic_content(atoms: &AtomicInitState, quantity: Quantity) -> (f64, Vec<Harmonic>) {
    let c = atoms.coefficients();
    let v = asymptotic_vectors();
    let proj: Vec<C64> = v.iter().map(|vk| vk.iter().zip(&c).map(|(a, b)| b * a).sum()).collect();

    // coefficient A_kl of e^{-i(λ_k − λ_l)s}
    let coeff = |k: usize, l: usize| -> C64 {
        match quantity {
            Quantity::InitialPopulation => C64::new(proj[k].norm_sqr() * proj[l].norm_sqr(), 0.0),
            Quantity::TotalInversion | Quantity::SingleInversion => {
                let w: [f64; 4] = match quantity {
                    Quantity::TotalInversion => [1.0, 0.0, 0.0, -1.0],
                    _ => [1.0, 1.0 / 3.0, -1.0 / 3.0, -1.0],
                };
                let overlap: f64 = (0..4).map(|i| w[i] * v[k][i] * v[l][i]).sum();
                proj[k] * proj[l].conj() * overlap
            }
        }
    };

    let mut constant = 0.0;
    let mut by_freq = [ZERO; 7];
    for k in 0..4 {
        for l in 0..4 {
            let d = ASYMPTOTIC_EIGENVALUES[k] - ASYMPTOTIC_EIGENVALUES[l];
            let a = coeff(k, l);
            if d == 0.0 {
                constant += a.re;
            } else if d > 0.0 {
                // pairs with its conjugate term at −d
                by_freq[d as usize] += a;
            }
        }
    }
    let harmonics = by_freq
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(f, a)| Harmonic { frequency: f as u32, amplitude: 2.0 * a.norm() })
        .collect();
    (constant, harmonics)
}

/// A predicted revival: its time and weight relative to the largest one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revival {
    pub time: f64,
    pub weight: f64,
}

/// Revival times up to `2π√n̄` implied by [`harmonic_content`].
///
/// A harmonic of frequency `k√n` rephases when neighbouring photon numbers
/// drift apart by `2π`, i.e. at multiples of `4π√n̄/k`. Coinciding revivals
/// add their amplitudes.
pub fn predicted_revivals_for(atoms: &AtomicInitState, quantity: Quantity, nbar: f64) -> Result<Vec<Revival>> {
    if !(nbar >= 25.0) {
        return Err(Error::OutOfDomain { what: "nbar (revival analysis needs nbar >= 25)", value: nbar });
    }
    let (_, harmonics) = harmonic_content(atoms, quantity);
    // keyed by the revival time in units of π√n̄/3
    let mut slots = [0.0_f64; 7];
    for h in &harmonics {
        let period = 12 / h.frequency as usize;
        for m in 1..=6 / period {
            slots[m * period] += h.amplitude;
        }
    }
    let max = slots.iter().copied().fold(0.0, f64::max);
    Ok(slots
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(k, &w)| Revival { time: k as f64 * PI * nbar.sqrt() / 3.0, weight: w / max })
        .collect())
}

pub fn predicted_revivals(preset: Preset, quantity: Quantity, nbar: f64) -> Result<Vec<Revival>> {
    predicted_revivals_for(&preset.atoms(), quantity, nbar)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Variance over a sliding window of `2·half_width + 1` samples, truncated at
/// the ends of the series.
pub fn windowed_variance(values: &[f64], half_width: usize) -> Vec<f64> {
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half_width);
            let hi = (i + half_width + 1).min(values.len());
            let w = &values[lo..hi];
            let m = mean(w);
            w.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / w.len() as f64
        })
        .collect()
}
