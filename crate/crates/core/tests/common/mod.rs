#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tcm3_core::{ComplexMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    // Box-Muller, both outputs used as real and imaginary parts
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    C64::new(r * t.cos(), r * t.sin())
}

pub fn random_unit_vector(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn random_state8(rng: &mut impl Rng) -> [C64; 8] {
    random_unit_vector(rng, 8).try_into().unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(d, |_, _| gaussian_c64(rng));
    (&a + &a.adjoint()).scale(C64::new(0.5, 0.0))
}

/// Haar-ish unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
        for c in &cols {
            let dot: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= dot * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// Random mixed state of rank `rank` in dimension `d`.
pub fn random_density(rng: &mut impl Rng, d: usize, rank: usize) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(d);
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let v = random_unit_vector(rng, d);
        rho = &rho + &ComplexMatrix::outer(&v).scale(C64::new(w / total, 0.0));
    }
    rho
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |i, j| a[(i / db, j / db)] * b[(i % db, j % db)])
}

pub fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    &(u * rho) * &u.adjoint()
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol:e})");
}
