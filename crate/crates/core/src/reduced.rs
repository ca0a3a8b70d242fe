//! Reduced atomic density matrices.
//!
//! Product-basis ordering used throughout the crate (slot order a, b, c):
//!
//! ```text
//! 0 |eee⟩  1 |eeg⟩  2 |ege⟩  3 |gee⟩  4 |egg⟩  5 |geg⟩  6 |gge⟩  7 |ggg⟩
//! ```
//!
//! Two-qubit matrices use `|ee⟩, |eg⟩, |ge⟩, |gg⟩` and one-qubit matrices
//! `|e⟩, |g⟩`. Partial transposes depend on this layout, so anything that
//! needs a plain tensor-product ordering goes through
//! [`AtomicDensityProd::tensor_ordered`].

use crate::dynamics::SymmetricWavefunction;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64, ZERO};

/// Slot occupations (0 = excited, 1 = ground) of each product basis index.
pub const PRODUCT_BASIS: [[usize; 3]; 8] =
    [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0], [1, 1, 1]];

pub const PRODUCT_LABELS: [&str; 8] = ["eee", "eeg", "ege", "gee", "egg", "geg", "gge", "ggg"];

/// Above this, truncation has dropped a meaningful part of a coherence.
pub const LEAK_TOL: f64 = 1e-10;

const TRACE_TOL: f64 = 1e-9;

fn product_index(bits: [usize; 3]) -> usize {
    PRODUCT_BASIS.iter().position(|b| *b == bits).expect("every 3-bit pattern is in the basis")
}

fn validate_density(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
    }
    let defect = m.hermitian_defect();
    if defect > 1e-10 {
        return Err(Error::NotHermitian { defect });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::Unnormalized { norm_sqr: tr.re });
    }
    Ok(())
}

/// `ρ_abc` restricted to the symmetric sector, basis `|D1⟩..|D4⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDensitySym {
    pub rho4: ComplexMatrix,
    /// Probability weight of coherence terms whose photon partner lies past
    /// the truncated ladder.
    pub leaked_mass: f64,
}

/// `ρ_abc` in the 8-dimensional product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDensityProd {
    pub rho8: ComplexMatrix,
}

/// Reduced state of two atoms, basis `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    pub rho: ComplexMatrix,
}

/// Reduced state of one atom, basis `|e⟩, |g⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneQubitDensity {
    pub rho: ComplexMatrix,
}

impl AtomicDensitySym {
    pub fn new(rho4: ComplexMatrix) -> Result<Self> {
        validate_density(&rho4, 4)?;
        Ok(Self { rho4, leaked_mass: 0.0 })
    }
}

impl AtomicDensityProd {
    pub fn new(rho8: ComplexMatrix) -> Result<Self> {
        validate_density(&rho8, 8)?;
        Ok(Self { rho8 })
    }

    /// `|ψ⟩⟨ψ|` for a product-basis state vector.
    pub fn from_pure(psi: &[C64; 8]) -> Self {
        Self { rho8: ComplexMatrix::outer(psi) }
    }

    /// The same matrix re-indexed to `a·4 + b·2 + c`, i.e. `A ⊗ B ⊗ C` order.
    pub fn tensor_ordered(&self) -> ComplexMatrix {
        let t = |i: usize| {
            let [a, b, c] = PRODUCT_BASIS[i];
            a * 4 + b * 2 + c
        };
        let mut out = ComplexMatrix::zeros(8);
        for i in 0..8 {
            for j in 0..8 {
                out[(t(i), t(j))] = self.rho8[(i, j)];
            }
        }
        out
    }

    /// Relabels atom slots: slot `k` of the result holds slot `perm[k]` of `self`.
    pub fn permute_slots(&self, perm: [usize; 3]) -> Self {
        let map = |i: usize| {
            let bits = PRODUCT_BASIS[i];
            product_index([bits[perm[0]], bits[perm[1]], bits[perm[2]]])
        };
        let mut out = ComplexMatrix::zeros(8);
        for i in 0..8 {
            for j in 0..8 {
                out[(i, j)] = self.rho8[(map(i), map(j))];
            }
        }
        Self { rho8: out }
    }

    /// Partial trace keeping the listed slots (ascending), in binary order
    /// over the kept slots with `e` first.
    pub fn reduce(&self, keep: &[usize]) -> ComplexMatrix {
        let traced: Vec<usize> = (0..3).filter(|s| !keep.contains(s)).collect();
        let sub = |bits: &[usize; 3]| keep.iter().fold(0, |acc, &s| acc * 2 + bits[s]);
        let mut out = ComplexMatrix::zeros(1 << keep.len());
        for i in 0..8 {
            for j in 0..8 {
                let (bi, bj) = (&PRODUCT_BASIS[i], &PRODUCT_BASIS[j]);
                if traced.iter().all(|&s| bi[s] == bj[s]) {
                    out[(sub(bi), sub(bj))] += self.rho8[(i, j)];
                }
            }
        }
        out
    }

    /// Reduced state of the slot pair `(first, second)`.
    pub fn pair(&self, first: usize, second: usize) -> TwoQubitDensity {
        assert!(first < second && second < 3, "pair slots must be ascending and < 3");
        TwoQubitDensity { rho: self.reduce(&[first, second]) }
    }
}

impl TwoQubitDensity {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        validate_density(&rho, 4)?;
        Ok(Self { rho })
    }

    pub fn from_pure(psi: &[C64; 4]) -> Self {
        Self { rho: ComplexMatrix::outer(psi) }
    }

    /// Trace over the second qubit.
    pub fn trace_out_second(&self) -> OneQubitDensity {
        let r = &self.rho;
        let m = ComplexMatrix::from_fn(2, |i, j| r[(2 * i, 2 * j)] + r[(2 * i + 1, 2 * j + 1)]);
        OneQubitDensity { rho: m }
    }
}

impl OneQubitDensity {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        validate_density(&rho, 2)?;
        Ok(Self { rho })
    }
}

/// `ρ4[i][j] = Σ_n X_i^{(n)} · conj(X_j^{(m)})` with `m = n + i - j`, which
/// pairs amplitudes carrying the same photon number.
pub fn atomic_density_sym(psi: &SymmetricWavefunction) -> AtomicDensitySym {
    let n_max = psi.n_max() as isize;
    let mut rho4 = ComplexMatrix::zeros(4);
    let mut leaked_mass = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let shift = i as isize - j as isize;
            let mut acc = ZERO;
            for (n, block) in psi.x.iter().enumerate() {
                let m = n as isize + shift;
                if m < 0 {
                    // partner would sit in an excitation sector below the ladder
                    continue;
                }
                if m > n_max {
                    if i != j {
                        leaked_mass += block[i].norm_sqr();
                    }
                    continue;
                }
                acc += block[i] * psi.x[m as usize][j].conj();
            }
            rho4[(i, j)] = acc;
        }
    }
    AtomicDensitySym { rho4, leaked_mass }
}

/// Columns are the atomic parts of `|D1⟩..|D4⟩` in the product basis.
pub fn dicke_isometry() -> [[f64; 4]; 8] {
    let s = 1.0 / 3f64.sqrt();
    let mut v = [[0.0; 4]; 8];
    v[0][0] = 1.0;
    for row in &mut v[1..4] {
        row[1] = s;
    }
    for row in &mut v[4..7] {
        row[2] = s;
    }
    v[7][3] = 1.0;
    v
}

/// `ρ8 = V ρ4 V†`.
pub fn embed_symmetric(sym: &AtomicDensitySym) -> AtomicDensityProd {
    let v = dicke_isometry();
    let r = &sym.rho4;
    let rho8 = ComplexMatrix::from_fn(8, |a, b| {
        let mut acc = ZERO;
        for i in 0..4 {
            if v[a][i] == 0.0 {
                continue;
            }
            for j in 0..4 {
                acc += v[a][i] * r[(i, j)] * v[b][j];
            }
        }
        acc
    });
    AtomicDensityProd { rho8 }
}

/// `ρ_ab`: trace over the third atom.
pub fn trace_out_one(rho: &AtomicDensityProd) -> TwoQubitDensity {
    rho.pair(0, 1)
}

/// `ρ_a`: trace over the second and third atoms.
pub fn trace_out_two(rho: &AtomicDensityProd) -> OneQubitDensity {
    OneQubitDensity { rho: rho.reduce(&[0]) }
}

/// `Tr ρ²`.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (rho[(i, j)] * rho[(j, i)]).re;
        }
    }
    acc
}
