//! Small dense complex matrices, a Hermitian eigensolver built on cyclic
//! Jacobi sweeps over the real embedding, and overflow-free coherent-state
//! series.
//!
//! Every matrix in this crate is at most 8×8 complex (16×16 once embedded),
//! so everything here is plain row-major `Vec` storage with no blocking.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for accepting a matrix as Hermitian, scaled by `max(1, max|m_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues of a PSD matrix above `-PSD_CLIP` are clipped to zero.
pub const PSD_CLIP: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// (relative to `max(1, ‖A‖_F)`).
pub const JACOBI_OFF_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Square complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// The projector `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |m_ij - conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)].conj()))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "mul_vec: dimension mismatch");
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Checks Hermiticity against [`HERMITIAN_TOL`] and returns the exact
    /// Hermitian part on success.
    pub fn require_hermitian(&self) -> Result<Self> {
        let defect = self.hermitian_defect();
        if defect > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(self.hermitian_part())
    }

    /// Real symmetric `2n×2n` embedding `[[A, -B], [B, A]]` of `A + iB`.
    fn real_embedding(&self) -> Vec<f64> {
        let n = self.dim;
        let m = 2 * n;
        let mut out = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                out[i * m + j] = z.re;
                out[(i + n) * m + (j + n)] = z.re;
                out[i * m + (j + n)] = -z.im;
                out[(i + n) * m + j] = z.im;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product: dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum: dimension mismatch");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference: dimension mismatch");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigen-decomposition of a real symmetric `n×n` matrix (row-major) by cyclic
/// Jacobi rotations.
///
/// Returns eigenvalues in descending order and, column by column, the
/// matching orthonormal eigenvectors (row-major `n×n`).
pub fn symmetric_eigen(n: usize, matrix: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(matrix.len(), n * n, "symmetric_eigen: expected {n}x{n} entries");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) < JACOBI_OFF_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off >= JACOBI_OFF_TOL * scale {
            return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_norm: off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + col] = v[k * n + src];
        }
    }
    Ok((values, vectors))
}

/// All eigenvalues of a Hermitian matrix, in descending order.
///
/// The real embedding doubles every eigenvalue; adjacent pairs of the sorted
/// embedded spectrum are averaged back into one.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = m.require_hermitian()?;
    let (doubled, _) = symmetric_eigen(2 * h.dim(), &h.real_embedding())?;
    Ok(doubled.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Computed on the real embedding, where the square root of the embedded
/// matrix is itself the embedding of the complex square root.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_above(m, 0.0)
}

/// [`matrix_sqrt_psd`] with eigenvalues below `floor` treated as zero.
pub(crate) fn sqrt_psd_above(m: &ComplexMatrix, floor: f64) -> Result<ComplexMatrix> {
    let h = m.require_hermitian()?;
    let n = h.dim();
    let big = 2 * n;
    let (values, vectors) = symmetric_eigen(big, &h.real_embedding())?;
    let min = values.last().copied().unwrap_or(0.0);
    if min < -PSD_CLIP {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let roots: Vec<f64> = values.iter().map(|&x| if x > floor { x.sqrt() } else { 0.0 }).collect();
    // only the left column block [A'; B'] of the embedded root is needed
    let root_entry =
        |i: usize, j: usize| -> f64 { (0..big).map(|k| vectors[i * big + k] * roots[k] * vectors[j * big + k]).sum() };
    let out = ComplexMatrix::from_fn(n, |i, j| C64::new(root_entry(i, j), root_entry(i + n, j)));
    Ok(out.hermitian_part())
}

/// Singular values of a square complex matrix, descending, by one-sided
/// (Hestenes) Jacobi orthogonalisation of its columns.
///
/// Small singular values come out with absolute error near machine epsilon
/// times the largest one, unlike square roots of the spectrum of `M M†`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect();
    let norm_sqr = |c: &[C64]| c.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let tol = n as f64 * f64::EPSILON;
    let frob = cols.iter().map(|c| norm_sqr(c)).sum::<f64>();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                // the absolute floor leaves columns that are pure roundoff alone
                if g <= tol * (alpha * beta).sqrt() || g <= tol * tol * frob {
                    continue;
                }
                rotated = true;
                // rephase column q so the overlap is real and positive
                let phase = gamma.conj() / g;
                cols[q].iter_mut().for_each(|z| *z *= phase);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let (a, b) = (cols[p][k], cols[q][k]);
                    cols[p][k] = a * c - b * s;
                    cols[q][k] = a * s + b * c;
                }
            }
        }
        if !rotated {
            let mut sv: Vec<f64> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            return Ok(sv);
        }
    }
    Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_norm: f64::NAN })
}

/// Iterator over the normalized coherent-state coefficients
/// `d_k = e^{-|z|²/2} z^k / √(k!)`, generated by `d_{k+1} = d_k · z/√(k+1)`.
///
/// The prefactor is carried as a separate scale that is only materialized
/// after renormalization, so `|z|²` far beyond the exponent range of `f64`
/// (where `e^{-|z|²/2}` alone underflows) still yields the correct terms near
/// the Poisson mode. No factorial or power is ever formed.
#[derive(Clone, Debug)]
pub struct CoherentTerms {
    z: C64,
    k: usize,
    mantissa: C64,
    ln_scale: f64,
    scale: f64,
}

impl CoherentTerms {
    pub fn new(z: C64) -> Self {
        let ln_scale = -0.5 * z.norm_sqr();
        Self { z, k: 0, mantissa: ONE, ln_scale, scale: ln_scale.exp() }
    }
}

impl Iterator for CoherentTerms {
    type Item = C64;

    fn next(&mut self) -> Option<C64> {
        let term = self.mantissa * self.scale;
        self.mantissa *= self.z / ((self.k + 1) as f64).sqrt();
        self.k += 1;
        let m = self.mantissa.norm();
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            self.ln_scale += m.ln();
            self.mantissa /= m;
            self.scale = self.ln_scale.exp();
        }
        Some(term)
    }
}

/// `Σ_n (β*)^{n+offset}/√((n+offset)!) · amplitudes[n] · e^{-|β|²/2}`.
pub fn coherent_coefficient_series(beta: C64, offset: usize, amplitudes: &[C64]) -> C64 {
    CoherentTerms::new(beta.conj()).skip(offset).zip(amplitudes).map(|(d, a)| d * a).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::identity(2)).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvalues_sorted_descending() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, -1.0, 0.5, 0.0]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        for (got, want) in ev.iter().zip([3.0, 0.5, 0.0, -1.0]) {
            assert!((got - want).abs() < 1e-14, "{ev:?}");
        }
    }

    #[test]
    fn pauli_y_has_plus_minus_one() {
        let m = ComplexMatrix::from_row_major(vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(vec![ONE, c(1.0, 0.0), ZERO, ONE]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let r = matrix_sqrt_psd(&ComplexMatrix::from_real_diagonal(&[4.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-14);
        let id = matrix_sqrt_psd(&ComplexMatrix::identity(3)).unwrap();
        assert!(id.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative_spectrum() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-6]);
        assert!(matches!(matrix_sqrt_psd(&m), Err(Error::NotPositive { .. })));
        // roundoff-sized negatives are clipped
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]);
        assert!(matrix_sqrt_psd(&m).is_ok());
    }

    #[test]
    fn coherent_series_trivial_cases() {
        let amps = [ONE, ZERO, ZERO];
        assert!((coherent_coefficient_series(ZERO, 0, &amps) - ONE).norm() < 1e-15);
        let amps = [c(0.3, 0.1), c(-2.0, 1.0), c(5.0, 0.0)];
        assert_eq!(coherent_coefficient_series(ZERO, 1, &amps), ZERO);
    }

    #[test]
    fn coherent_terms_match_direct_formula_for_small_index() {
        let z = c(1.3, -0.4);
        let terms: Vec<C64> = CoherentTerms::new(z).take(6).collect();
        let mut fact = 1.0;
        for (k, t) in terms.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            let direct = (-0.5 * z.norm_sqr()).exp() * z.powu(k as u32) / fact.sqrt();
            assert!((t - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn coherent_terms_survive_huge_amplitude() {
        // |z|² = 2500: e^{-1250} underflows, but the Poisson weights near
        // k = 2500 must still sum to ~1.
        let terms: Vec<f64> = CoherentTerms::new(c(50.0, 0.0)).take(3500).map(|d| d.norm_sqr()).collect();
        let total: f64 = terms.iter().sum();
        assert!((total - 1.0).abs() < 1e-10, "{total}");
        assert!(terms.iter().all(|t| t.is_finite() && *t <= 1.0));
    }
}
