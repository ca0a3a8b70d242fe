mod common;

use common::*;
use proptest::prelude::*;
use tcm3_core::numerics::{singular_values, CoherentTerms};
use tcm3_core::{
    coherent_amplitudes, coherent_coefficient_series, hermitian_eigenvalues, matrix_sqrt_psd, ComplexMatrix, C64,
};

/// Householder reduction of a real symmetric matrix to tridiagonal form.
fn tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        let alpha = -x[0].signum() * x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut v = x.clone();
        v[0] -= alpha;
        let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if vn < 1e-300 {
            continue;
        }
        v.iter_mut().for_each(|t| *t /= vn);
        // A ← H A H with H = I − 2vvᵀ acting on rows/cols k+1..n
        let m = n - k - 1;
        let mut p = vec![0.0; n];
        for i in 0..n {
            p[i] = (0..m).map(|j| a[i][k + 1 + j] * v[j]).sum();
        }
        for i in 0..n {
            for j in 0..m {
                a[i][k + 1 + j] -= 2.0 * p[i] * v[j];
            }
        }
        let mut q = vec![0.0; n];
        for j in 0..n {
            q[j] = (0..m).map(|i| v[i] * a[k + 1 + i][j]).sum();
        }
        for i in 0..m {
            for j in 0..n {
                a[k + 1 + i][j] -= 2.0 * v[i] * q[j];
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    let off = (1..n).map(|i| a[i][i - 1]).collect();
    (diag, off)
}

/// Number of eigenvalues below `x` from the Sturm sequence of the
/// tridiagonal matrix.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = -1e-300;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues of a Hermitian matrix, descending, by bisection on its real
/// embedding.
fn bisection_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut a = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    let (diag, off) = tridiagonalize(a);
    let bound = diag.iter().map(|d| d.abs()).sum::<f64>() + 2.0 * off.iter().map(|o| o.abs()).sum::<f64>() + 1.0;
    let mut out: Vec<f64> = (0..2 * n)
        .step_by(2)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(&diag, &off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    out.reverse();
    out
}

#[test]
fn eigenvalues_match_sturm_bisection() {
    let mut r = rng(11);
    for _ in 0..50 {
        let h = random_hermitian(&mut r, 8);
        let got = hermitian_eigenvalues(&h).unwrap();
        let want = bisection_eigenvalues(&h);
        for (g, w) in got.iter().zip(&want) {
            assert_close(*g, *w, 1e-8, "eigenvalue");
        }
        assert_close(got.iter().sum(), h.trace().re, 1e-9, "trace");
    }
}

#[test]
fn eigenvalues_invariant_under_unitary_conjugation() {
    let mut r = rng(12);
    for d in [2, 4, 8] {
        for _ in 0..20 {
            let h = random_hermitian(&mut r, d);
            let u = random_unitary(&mut r, d);
            let a = hermitian_eigenvalues(&h).unwrap();
            let b = hermitian_eigenvalues(&conjugate(&u, &h).hermitian_part()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_close(*x, *y, 1e-8, "conjugated eigenvalue");
            }
        }
    }
}

#[test]
fn sqrt_squares_back_and_takes_root_of_spectrum() {
    let mut r = rng(13);
    for d in [2, 4, 8] {
        for rank in [1, 2, d] {
            let rho = random_density(&mut r, d, rank);
            let s = matrix_sqrt_psd(&rho).unwrap();
            assert!((&s * &s).max_abs_diff(&rho) < 1e-8);
            assert!(s.hermitian_defect() < 1e-12);
            let ev = hermitian_eigenvalues(&rho).unwrap();
            let sv = hermitian_eigenvalues(&s).unwrap();
            for (e, s) in ev.iter().zip(&sv) {
                assert_close(e.max(0.0).sqrt(), *s, 1e-8, "sqrt eigenvalue");
            }
        }
    }
}

#[test]
fn singular_values_square_to_spectrum_of_gram_matrix() {
    let mut r = rng(14);
    for d in [2, 4, 8] {
        for _ in 0..20 {
            let m = ComplexMatrix::from_fn(d, |_, _| gaussian_c64(&mut r));
            let sv = singular_values(&m).unwrap();
            let ev = hermitian_eigenvalues(&(&m * &m.adjoint()).hermitian_part()).unwrap();
            for (s, e) in sv.iter().zip(&ev) {
                assert_close(s * s, *e, 1e-9 * ev[0], "singular value");
            }
        }
    }
    // a rank-one matrix keeps its zero singular values at roundoff level
    let v = random_unit_vector(&mut r, 4);
    let sv = singular_values(&ComplexMatrix::outer(&v)).unwrap();
    assert!((sv[0] - 1.0).abs() < 1e-14 && sv[1..].iter().all(|s| *s < 1e-14), "{sv:?}");
}

#[test]
fn coherent_overlap_over_a_grid() {
    let alpha0 = C64::new(10.0, 0.0);
    let field = coherent_amplitudes(alpha0, 1e-12).unwrap();
    for re in (-4..=16).map(|k| k as f64) {
        for im in (-6..=6).map(|k| k as f64) {
            let beta = C64::new(re, im);
            let got = coherent_coefficient_series(beta, 0, &field.q).norm_sqr();
            let want = (-(beta - alpha0).norm_sqr()).exp();
            assert!((got - want).abs() < 1e-10, "β={beta}: {got} vs {want}");
        }
    }
}

#[test]
fn coherent_terms_match_direct_formula_for_small_arguments() {
    let z = C64::new(1.3, -0.4);
    let mut fact = 1.0;
    for (k, t) in CoherentTerms::new(z).take(20).enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        let want = (-z.norm_sqr() / 2.0).exp() * z.powu(k as u32) / fact.sqrt();
        assert!((t - want).norm() < 1e-15);
    }
}

proptest! {
    #[test]
    fn spectrum_sums_to_trace(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, d);
        let ev = hermitian_eigenvalues(&h).unwrap();
        prop_assert_eq!(ev.len(), d);
        prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((ev.iter().sum::<f64>() - h.trace().re).abs() < 1e-9);
    }

    #[test]
    fn coherent_terms_stay_bounded(re in -60.0f64..60.0, im in -60.0f64..60.0) {
        let z = C64::new(re, im);
        let total: f64 = CoherentTerms::new(z).take(8000).map(|t| {
            assert!(t.norm() <= 1.0 + 1e-12);
            t.norm_sqr()
        }).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
