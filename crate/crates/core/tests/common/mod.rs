//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ubound::{Observable, QuantumState};

pub type CVec = DVector<Complex64>;
pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cplx(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> CVec {
    CVec::from_fn(dim, |_, _| cplx(rng))
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> QuantumState {
    QuantumState::normalized(random_vector(rng, dim)).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> CMat {
    let m = CMat::from_fn(dim, dim, |_, _| cplx(rng));
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_observable(rng: &mut impl Rng, dim: usize) -> Observable {
    Observable::new(random_hermitian(rng, dim)).unwrap()
}

/// `k` orthonormal vectors, all orthogonal to `psi`.
pub fn orthonormal_complement(rng: &mut impl Rng, psi: &QuantumState, k: usize) -> Vec<CVec> {
    let dim = psi.dim();
    let mut out: Vec<CVec> = Vec::new();
    while out.len() < k {
        let mut v = random_vector(rng, dim);
        for _ in 0..2 {
            for b in std::iter::once(psi.amplitudes()).chain(out.iter()) {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            out.push(v / Complex64::new(n, 0.0));
        }
    }
    out
}

/// Random unit state orthogonal to `psi`.
pub fn random_perp_state(rng: &mut impl Rng, psi: &QuantumState) -> QuantumState {
    QuantumState::new(orthonormal_complement(rng, psi, 1).remove(0)).unwrap()
}

fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

/// Observable whose deviation vector on `psi` is exactly `weight * dir`
/// (`dir` a unit vector orthogonal to `psi`), with a random mean and a random
/// block on the complement of `psi`.
pub fn observable_with_deviation(rng: &mut impl Rng, psi: &QuantumState, dir: &CVec, weight: f64) -> Observable {
    let dim = psi.dim();
    let p = psi.amplitudes();
    let mean = rng.random_range(-2.0..2.0);
    let w = Complex64::new(weight, 0.0);
    let proj = CMat::identity(dim, dim) - outer(p, p);
    let rest = &proj * random_hermitian(rng, dim) * &proj;
    let m = (outer(dir, p) + outer(p, dir)) * w + outer(p, p) * Complex64::new(mean, 0.0) + rest;
    Observable::new((&m + m.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

/// `n` observables with pairwise orthogonal non-zero deviation vectors on a
/// random state of dimension `dim > n`.
pub fn orthogonal_deviation_instance(rng: &mut impl Rng, dim: usize, n: usize) -> (QuantumState, Vec<Observable>) {
    let psi = random_state(rng, dim);
    let dirs = orthonormal_complement(rng, &psi, n);
    let obs = dirs
        .iter()
        .map(|d| {
            let weight = rng.random_range(0.2..2.0);
            observable_with_deviation(rng, &psi, d, weight)
        })
        .collect();
    (psi, obs)
}
