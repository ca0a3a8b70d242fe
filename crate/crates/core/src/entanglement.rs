//! Entanglement quantifiers for the atoms and the atom–field partitions.

use crate::dynamics::SymmetricWavefunction;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues, singular_values, sqrt_psd_above, ComplexMatrix, C64, ZERO};
use crate::reduced::{
    atomic_density_sym, embed_symmetric, purity, trace_out_one, trace_out_two, AtomicDensityProd, TwoQubitDensity,
};

/// Largest I-concurrence of a state confined to the 4-dimensional symmetric
/// atomic sector: `√(2·(1 − 1/4))`.
pub const SYMMETRIC_SECTOR_I_MAX: f64 = 1.224_744_871_391_589;

/// Entanglement diagnostics at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementSample {
    pub tau: f64,
    /// field ⊗ (abc)
    pub i_f_abc: f64,
    /// (field, c) ⊗ (ab)
    pub i_fc_ab: f64,
    /// (field, c, b) ⊗ a
    pub i_fcb_a: f64,
    pub c_ab: f64,
    pub n_a_bc: f64,
    pub n_ab: f64,
    pub n_abc: f64,
}

/// Negativity split of a three-qubit state with respect to atom `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNegativity {
    pub n_a_bc: f64,
    pub n_ab: f64,
    pub n_abc: f64,
}

/// Tangle split of a pure three-qubit state with respect to qubit `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangles {
    pub tau_a_bc: f64,
    pub tau_ab: f64,
    pub tau_ac: f64,
    pub tau_abc: f64,
}

/// Pure-state I-concurrence `√(2(1 − Tr ρ²))` from the purity of either side.
pub fn i_concurrence_from_purity(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0 + 1e-9) {
        return Err(Error::OutOfDomain { what: "purity", value: p });
    }
    Ok((2.0 * (1.0 - p).max(0.0)).sqrt())
}

/// Maximal I-concurrence for local dimensions `d1, d2`; pass `usize::MAX` for
/// an infinite-dimensional side.
pub fn i_max(d1: usize, d2: usize) -> f64 {
    let m = d1.min(d2) as f64;
    (2.0 * (m - 1.0) / m).sqrt()
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &TwoQubitDensity) -> TwoQubitDensity {
    // σ_y ⊗ σ_y is real: anti-diagonal (-1, 1, 1, -1), so the conjugation only
    // reverses indices and flips signs on mixed parity.
    let sign = |i: usize| if i == 0 || i == 3 { -1.0 } else { 1.0 };
    let flipped = ComplexMatrix::from_fn(4, |i, j| rho.rho[(3 - i, 3 - j)].conj() * (sign(i) * sign(j)));
    TwoQubitDensity { rho: flipped }
}

/// Spectral weight below which an eigenvalue of a unit-trace state is taken
/// as solver noise when forming `√ρ` for the concurrence.
pub const CONCURRENCE_RANK_FLOOR: f64 = 1e-13;

/// Wootters concurrence `max{0, λ1 − λ2 − λ3 − λ4}`.
///
/// The `λ_i` are the square roots of the spectrum of `√ρ ρ̃ √ρ`, obtained
/// directly as the singular values of `√ρ·√ρ̃` so that vanishing ones are
/// not inflated to `√ε` by a square root of roundoff.
pub fn concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let root = sqrt_psd_above(&rho.rho, CONCURRENCE_RANK_FLOOR)?;
    let root_flipped = spin_flip(&TwoQubitDensity { rho: root.clone() });
    let l = singular_values(&(&root * &root_flipped.rho))?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Partial transpose over the first factor of a `dims.0 × dims.1` system in
/// plain tensor ordering.
pub fn partial_transpose_first(rho: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch { expected: da * db, found: rho.dim() });
    }
    Ok(ComplexMatrix::from_fn(rho.dim(), |row, col| {
        let (a, b) = (row / db, row % db);
        let (a2, b2) = (col / db, col % db);
        rho[(a2 * db + b, a * db + b2)]
    }))
}

/// `𝒩 = 2·|Σ negative eigenvalues of ρ^{T_A}|`.
pub fn negativity(rho: &ComplexMatrix, dims: (usize, usize)) -> Result<f64> {
    let pt = partial_transpose_first(rho, dims)?;
    let ev = hermitian_eigenvalues(&pt)?;
    Ok(2.0 * ev.iter().filter(|&&x| x < 0.0).sum::<f64>().abs())
}

/// `𝒩_abc = 𝒩_{a−bc} − 𝒩_{a−b} − 𝒩_{a−c}` with `𝒩_{a−c} = 𝒩_{a−b}` by
/// exchange symmetry of the cooperative dynamics.
pub fn residual_negativity(rho: &AtomicDensityProd) -> Result<ResidualNegativity> {
    let n_a_bc = negativity(&rho.tensor_ordered(), (2, 4))?;
    let n_ab = negativity(&trace_out_one(rho).rho, (2, 2))?;
    Ok(ResidualNegativity { n_a_bc, n_ab, n_abc: n_a_bc - 2.0 * n_ab })
}

/// Three-qubit tangles of a normalized product-basis state vector.
pub fn tangle_decomposition(psi: &[C64; 8]) -> Result<Tangles> {
    let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm_sqr });
    }
    let rho = AtomicDensityProd::from_pure(psi);
    let tau_a_bc = 2.0 * (1.0 - purity(&trace_out_two(&rho).rho));
    let tau_ab = concurrence(&rho.pair(0, 1))?.powi(2);
    let tau_ac = concurrence(&rho.pair(0, 2))?.powi(2);
    Ok(Tangles { tau_a_bc, tau_ab, tau_ac, tau_abc: tau_a_bc - tau_ab - tau_ac })
}

/// Every entanglement diagnostic of the joint atom–field state.
///
/// The three field-inclusive partitions are pure overall, so each
/// I-concurrence follows from the purity of its atomic side.
pub fn entanglement_sample(psi: &SymmetricWavefunction) -> Result<EntanglementSample> {
    let sym = atomic_density_sym(psi);
    let prod = embed_symmetric(&sym);
    let rho_ab = trace_out_one(&prod);
    let rho_a = trace_out_two(&prod);
    let neg = residual_negativity(&prod)?;
    Ok(EntanglementSample {
        tau: psi.tau,
        i_f_abc: i_concurrence_from_purity(purity(&sym.rho4))?,
        i_fc_ab: i_concurrence_from_purity(purity(&rho_ab.rho))?,
        i_fcb_a: i_concurrence_from_purity(purity(&rho_a.rho))?,
        c_ab: concurrence(&rho_ab)?,
        n_a_bc: neg.n_a_bc,
        n_ab: neg.n_ab,
        n_abc: neg.n_abc,
    })
}

/// Standard GHZ and W vectors in the crate's product ordering.
pub fn ghz_vector() -> [C64; 8] {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = [ZERO; 8];
    v[0] = h;
    v[7] = h;
    v
}

pub fn w_vector() -> [C64; 8] {
    let s = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut v = [ZERO; 8];
    v[1] = s;
    v[2] = s;
    v[3] = s;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ONE;

    fn bell() -> TwoQubitDensity {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        TwoQubitDensity::from_pure(&[h, ZERO, ZERO, h])
    }

    #[test]
    fn i_concurrence_values() {
        assert_eq!(i_concurrence_from_purity(1.0).unwrap(), 0.0);
        assert!((i_concurrence_from_purity(0.25).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((i_concurrence_from_purity(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(i_concurrence_from_purity(0.0).is_err());
        assert!(i_concurrence_from_purity(1.1).is_err());
    }

    #[test]
    fn i_max_values() {
        assert_eq!(i_max(2, 7), 1.0);
        assert_eq!(i_max(usize::MAX, 2), 1.0);
        assert!((i_max(4, 4) - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((i_max(8, usize::MAX) - 1.75f64.sqrt()).abs() < 1e-15);
        assert!((i_max(4, 4) - SYMMETRIC_SECTOR_I_MAX).abs() < 1e-15);
    }

    #[test]
    fn spin_flip_examples() {
        let b = bell();
        assert!(spin_flip(&b).rho.max_abs_diff(&b.rho) < 1e-15);
        let ee = TwoQubitDensity::from_pure(&[ONE, ZERO, ZERO, ZERO]);
        let gg = TwoQubitDensity::from_pure(&[ZERO, ZERO, ZERO, ONE]);
        assert!(spin_flip(&ee).rho.max_abs_diff(&gg.rho) < 1e-15);
        let mixed = ComplexMatrix::from_real_diagonal(&[0.25; 4]);
        assert!(spin_flip(&TwoQubitDensity { rho: mixed.clone() }).rho.max_abs_diff(&mixed) < 1e-15);
    }

    #[test]
    fn spin_flip_matches_explicit_product() {
        // (σy⊗σy) ρ* (σy⊗σy) with an explicit matrix, for a complex ρ
        let i = C64::new(0.0, 1.0);
        let sy = [[ZERO, -i], [i, ZERO]];
        let yy = ComplexMatrix::from_fn(4, |r, c| sy[r / 2][c / 2] * sy[r % 2][c % 2]);
        let psi = [C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.4, -0.3), C64::new(0.1, 0.2)];
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = psi.map(|z| z / norm);
        let rho = TwoQubitDensity::from_pure(&psi);
        let want = &(&yy * &rho.rho.conj()) * &yy;
        assert!(spin_flip(&rho).rho.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-9);
        let ghz_ab = TwoQubitDensity { rho: ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]) };
        assert!(concurrence(&ghz_ab).unwrap() < 1e-9);
        let w = AtomicDensityProd::from_pure(&w_vector());
        assert!((concurrence(&trace_out_one(&w)).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn negativity_examples() {
        assert!((negativity(&bell().rho, (2, 2)).unwrap() - 1.0).abs() < 1e-12);
        let prod = TwoQubitDensity::from_pure(&[ZERO, ONE, ZERO, ZERO]);
        assert!(negativity(&prod.rho, (2, 2)).unwrap() < 1e-12);
        let ghz = AtomicDensityProd::from_pure(&ghz_vector());
        assert!((negativity(&ghz.tensor_ordered(), (2, 4)).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(negativity(&bell().rho, (2, 3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn residual_negativity_examples() {
        let ghz = residual_negativity(&AtomicDensityProd::from_pure(&ghz_vector())).unwrap();
        assert!((ghz.n_a_bc - 1.0).abs() < 1e-9 && ghz.n_ab.abs() < 1e-9 && (ghz.n_abc - 1.0).abs() < 1e-9);

        let mut eee = [ZERO; 8];
        eee[0] = ONE;
        let p = residual_negativity(&AtomicDensityProd::from_pure(&eee)).unwrap();
        assert!(p.n_a_bc.abs() < 1e-12 && p.n_ab.abs() < 1e-12 && p.n_abc.abs() < 1e-12);

        let w = residual_negativity(&AtomicDensityProd::from_pure(&w_vector())).unwrap();
        let n_a_bc = 2.0 * 2f64.sqrt() / 3.0;
        let n_ab = (5f64.sqrt() - 1.0) / 3.0;
        assert!((w.n_a_bc - n_a_bc).abs() < 1e-9, "{w:?}");
        assert!((w.n_ab - n_ab).abs() < 1e-9, "{w:?}");
        assert!((w.n_abc - (n_a_bc - 2.0 * n_ab)).abs() < 1e-9);
        assert!((w.n_abc - 0.1187).abs() < 1e-4);
    }

    #[test]
    fn tangle_examples() {
        let g = tangle_decomposition(&ghz_vector()).unwrap();
        assert!(
            (g.tau_a_bc - 1.0).abs() < 1e-9 && g.tau_ab < 1e-9 && g.tau_ac < 1e-9 && (g.tau_abc - 1.0).abs() < 1e-9
        );
        let w = tangle_decomposition(&w_vector()).unwrap();
        assert!((w.tau_a_bc - 8.0 / 9.0).abs() < 1e-9, "{w:?}");
        assert!((w.tau_ab - 4.0 / 9.0).abs() < 1e-9 && (w.tau_ac - 4.0 / 9.0).abs() < 1e-9);
        assert!(w.tau_abc.abs() < 1e-9);
        let mut eee = [ZERO; 8];
        eee[0] = ONE;
        let e = tangle_decomposition(&eee).unwrap();
        assert!(e.tau_a_bc.abs() < 1e-12 && e.tau_ab < 1e-9 && e.tau_abc.abs() < 1e-9);
        let mut bad = eee;
        bad[1] = ONE;
        assert!(tangle_decomposition(&bad).is_err());
    }
}
