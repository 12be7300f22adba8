//! Finite-dimensional Hilbert-space primitives.
//!
//! A [`QuantumState`] is a unit vector in `C^n`, an [`Observable`] a Hermitian
//! `n x n` matrix. For a pair `(A, Psi)` the [`DeviationVector`]
//! `Psi_A = (A - <A>) Psi` carries the whole second-moment geometry: its
//! squared norm is the variance and it is always orthogonal to `Psi`.
//! Two deviation vectors are classified by [`classify_case`] into the three
//! geometric situations that decide which uncertainty bound is informative.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `<a|b>`, antilinear in the first slot.
#[inline]
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    /// Wraps amplitudes that are already unit-norm (within `tol::NORM`).
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized {
                norm,
                tolerance: tol::NORM,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let norm = amplitudes.norm();
        if norm <= tol::ZERO_DEVIATION {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes / c(norm, 0.0),
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::normalized(CVector::from_iterator(
            values.len(),
            values.iter().map(|&x| c(x, 0.0)),
        ))
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Multiplies by a global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        Self {
            amplitudes: &self.amplitudes * Complex64::from_polar(1.0, theta),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Hermitian matrix observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let max_asymmetry = max_abs_entry(&(&matrix - matrix.adjoint()));
        if max_asymmetry > tol::HERMITICITY {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        Ok(Self { matrix })
    }

    pub fn from_real(rows: usize, entries: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_row_iterator(
            rows,
            rows,
            entries.iter().map(|&x| c(x, 0.0)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// `self + other`.
    pub fn try_add(&self, other: &Observable) -> Result<Observable> {
        self.same_dim(other)?;
        Ok(Observable {
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// `self - other`.
    pub fn try_sub(&self, other: &Observable) -> Result<Observable> {
        self.same_dim(other)?;
        Ok(Observable {
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Observable {
        let n = self.dim();
        Observable {
            matrix: &self.matrix + CMatrix::identity(n, n) * c(shift, 0.0),
        }
    }

    pub fn scaled(&self, factor: f64) -> Observable {
        Observable {
            matrix: &self.matrix * c(factor, 0.0),
        }
    }

    /// `[self, other]` as a raw matrix (anti-Hermitian).
    pub fn commutator(&self, other: &Observable) -> Result<CMatrix> {
        self.same_dim(other)?;
        Ok(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }

    /// `{self, other}` (Hermitian).
    pub fn anticommutator(&self, other: &Observable) -> Result<Observable> {
        self.same_dim(other)?;
        Ok(Observable {
            matrix: &self.matrix * &other.matrix + &other.matrix * &self.matrix,
        })
    }

    fn same_dim(&self, other: &Observable) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// Largest entry modulus of `a - b`; infinite on shape mismatch.
pub fn max_entry_difference(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    max_abs_entry(&(a - b))
}

/// `<Psi|M|Psi>` for an arbitrary (possibly non-Hermitian) matrix.
pub fn matrix_element(m: &CMatrix, psi: &QuantumState) -> Result<Complex64> {
    psi.check_dim(m.nrows())?;
    Ok(inner(psi.amplitudes(), &(m * psi.amplitudes())))
}

/// `<Psi|A|Psi>`; fails if the imaginary part exceeds `tol::ORTHOGONALITY`.
pub fn expectation(obs: &Observable, psi: &QuantumState) -> Result<f64> {
    let z = matrix_element(obs.matrix(), psi)?;
    if z.im.abs() > tol::ORTHOGONALITY {
        return Err(Error::NonRealExpectation { imag: z.im });
    }
    Ok(z.re)
}

/// `Psi_A = (A - <A>) Psi` together with `<A>` and the base state.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationVector {
    base: QuantumState,
    mean: f64,
    vector: CVector,
}

impl DeviationVector {
    pub fn base(&self) -> &QuantumState {
        &self.base
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    /// Standard deviation `Delta A`.
    pub fn norm(&self) -> f64 {
        self.vector.norm()
    }

    pub fn variance(&self) -> f64 {
        self.vector.norm_squared()
    }

    pub fn is_zero(&self) -> bool {
        self.norm() <= tol::ZERO_DEVIATION
    }

    /// `<Psi_A|aux>`.
    pub fn overlap(&self, aux: &QuantumState) -> Result<Complex64> {
        aux.check_dim(self.vector.len())?;
        Ok(inner(&self.vector, aux.amplitudes()))
    }

    /// `<Psi_A|Psi_B>`.
    pub fn overlap_with(&self, other: &DeviationVector) -> Complex64 {
        inner(&self.vector, &other.vector)
    }
}

pub fn deviation_vector(obs: &Observable, psi: &QuantumState) -> Result<DeviationVector> {
    let mean = expectation(obs, psi)?;
    let vector = obs.apply(psi.amplitudes()) - psi.amplitudes() * c(mean, 0.0);
    Ok(DeviationVector {
        base: psi.clone(),
        mean,
        vector,
    })
}

/// `Psi_A / Delta A`, a unit state orthogonal to `Psi`.
pub fn normalized_deviation(dev: &DeviationVector) -> Result<QuantumState> {
    let norm = dev.norm();
    if norm <= tol::ZERO_DEVIATION {
        return Err(Error::ZeroDeviation { norm });
    }
    Ok(QuantumState {
        amplitudes: dev.vector() / c(norm, 0.0),
    })
}

/// Geometry of a pair of deviation vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    /// `Psi_B = mu Psi_A`: the product relation is saturated.
    Case1Dependent,
    /// Non-orthogonal, linearly independent.
    Case1Generic,
    /// `Psi_A = 0`.
    Case2ZeroA,
    /// `Psi_B = 0`.
    Case2ZeroB,
    /// Orthogonal and both non-zero: the product relation gives zero.
    Case3Orthogonal,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Case1Dependent => "CASE1_DEPENDENT",
            CaseTag::Case1Generic => "CASE1_GENERIC",
            CaseTag::Case2ZeroA => "CASE2_ZERO_A",
            CaseTag::Case2ZeroB => "CASE2_ZERO_B",
            CaseTag::Case3Orthogonal => "CASE3_ORTHOGONAL",
        }
    }

    pub fn is_case2(self) -> bool {
        matches!(self, CaseTag::Case2ZeroA | CaseTag::Case2ZeroB)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyCase {
    pub tag: CaseTag,
    /// `mu` with `Psi_B ~ mu Psi_A`; only for [`CaseTag::Case1Dependent`].
    pub dependence_ratio: Option<Complex64>,
}

pub fn classify_case(dev_a: &DeviationVector, dev_b: &DeviationVector) -> Result<UncertaintyCase> {
    if dev_a.vector.len() != dev_b.vector.len() {
        return Err(Error::DimensionMismatch {
            expected: dev_a.vector.len(),
            found: dev_b.vector.len(),
        });
    }
    let base_gap = (dev_a.base.amplitudes() - dev_b.base.amplitudes()).norm();
    if base_gap > tol::ORTHOGONALITY {
        return Err(Error::MismatchedBase);
    }

    let (na, nb) = (dev_a.norm(), dev_b.norm());
    let case = |tag| UncertaintyCase {
        tag,
        dependence_ratio: None,
    };
    if na <= tol::ZERO_DEVIATION {
        return Ok(case(CaseTag::Case2ZeroA));
    }
    if nb <= tol::ZERO_DEVIATION {
        return Ok(case(CaseTag::Case2ZeroB));
    }
    let overlap = dev_a.overlap_with(dev_b);
    if overlap.norm() <= tol::ORTHOGONALITY {
        return Ok(case(CaseTag::Case3Orthogonal));
    }
    // least-squares ratio for Psi_B ~ mu Psi_A
    let mu = overlap / (na * na);
    let residual = (dev_b.vector() - dev_a.vector() * mu).norm();
    if residual <= tol::DEPENDENCE_RESIDUAL * nb {
        Ok(UncertaintyCase {
            tag: CaseTag::Case1Dependent,
            dependence_ratio: Some(mu),
        })
    } else {
        Ok(case(CaseTag::Case1Generic))
    }
}

/// Max deviation of the Gram matrix of `states` from the identity.
pub fn gram_error(states: &[QuantumState]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b) - c(target, 0.0)).norm());
        }
    }
    worst
}

/// Extends orthonormal `seeds` to a full orthonormal basis of `C^dim`.
///
/// The seeds are kept verbatim as the leading entries. Remaining vectors are
/// taken from the standard basis, at each step picking the candidate with
/// the largest component outside the current span (two passes of modified
/// Gram-Schmidt per candidate).
pub fn gram_schmidt_extend(seeds: &[QuantumState], dim: usize) -> Result<Vec<QuantumState>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    if seeds.len() > dim {
        return Err(Error::TooManySeeds {
            seeds: seeds.len(),
            dim,
        });
    }
    for s in seeds {
        s.check_dim(dim)?;
    }
    let max_error = gram_error(seeds);
    if max_error > tol::SEED_ORTHONORMALITY {
        return Err(Error::SeedsNotOrthonormal { max_error });
    }

    let mut basis: Vec<QuantumState> = seeds.to_vec();
    let mut used = vec![false; dim];
    while basis.len() < dim {
        let mut best: Option<(usize, CVector, f64)> = None;
        for k in (0..dim).filter(|&k| !used[k]) {
            let mut v = CVector::zeros(dim);
            v[k] = c(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let proj = inner(b.amplitudes(), &v);
                    v -= b.amplitudes() * proj;
                }
            }
            let n = v.norm();
            if best.as_ref().is_none_or(|(_, _, bn)| n > *bn) {
                best = Some((k, v, n));
            }
        }
        let (k, v, n) = best.expect("an unused candidate remains while the basis is incomplete");
        used[k] = true;
        basis.push(QuantumState {
            amplitudes: v / c(n, 0.0),
        });
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spin1_jx() -> Observable {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Observable::from_real(3, &[0.0, s, 0.0, s, 0.0, s, 0.0, s, 0.0]).unwrap()
    }

    fn spin1_jy() -> Observable {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.0, 0.0), c(0.0, -s), c(0.0, 0.0),
                c(0.0, s), c(0.0, 0.0), c(0.0, -s),
                c(0.0, 0.0), c(0.0, s), c(0.0, 0.0),
            ],
        );
        Observable::new(m).unwrap()
    }

    fn uniform3() -> QuantumState {
        QuantumState::from_real(&[1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn rejects_unnormalized_and_tiny_states() {
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(QuantumState::new(v), Err(Error::NotNormalized { .. })));
        let v = CVector::from_vec(vec![c(1.0, 0.0)]);
        assert_eq!(QuantumState::new(v), Err(Error::DimensionTooSmall(1)));
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = Observable::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn expectation_of_jx_on_uniform_state() {
        let psi = uniform3();
        assert_abs_diff_eq!(expectation(&spin1_jx(), &psi).unwrap(), 2.0 * 2f64.sqrt() / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(expectation(&spin1_jy(), &psi).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn expectation_on_eigenstate_is_eigenvalue() {
        let z = Observable::from_real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let e3 = QuantumState::basis(3, 2).unwrap();
        assert_abs_diff_eq!(expectation(&z, &e3).unwrap(), -1.0, epsilon = 1e-15);
        assert!(deviation_vector(&z, &e3).unwrap().is_zero());
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let psi = QuantumState::basis(2, 0).unwrap();
        assert!(matches!(
            expectation(&spin1_jx(), &psi),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn deviation_of_jx_on_uniform_state() {
        let dev = deviation_vector(&spin1_jx(), &uniform3()).unwrap();
        let k = 1.0 / (3.0 * 6f64.sqrt());
        for (z, want) in dev.vector().iter().zip([-k, 2.0 * k, -k]) {
            assert_abs_diff_eq!(z.re, want, epsilon = 1e-14);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(dev.norm(), 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn normalized_deviation_divides_by_spread() {
        let dev = deviation_vector(&spin1_jx(), &uniform3()).unwrap();
        let unit = normalized_deviation(&dev).unwrap();
        let k = 1.0 / 6f64.sqrt();
        // norm by direct summation
        let sum: f64 = unit.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-14);
        for (z, want) in unit.amplitudes().iter().zip([-k, 2.0 * k, -k]) {
            assert_abs_diff_eq!(z.re, want, epsilon = 1e-14);
        }
        assert!(unit.inner(&uniform3()).norm() < 1e-14);
    }

    #[test]
    fn normalized_deviation_of_unit_vector_is_unchanged() {
        // A = |e2><e1| + |e1><e2| on e1 gives deviation e2 exactly
        let a = Observable::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e1 = QuantumState::basis(2, 0).unwrap();
        let dev = deviation_vector(&a, &e1).unwrap();
        assert_abs_diff_eq!(dev.norm(), 1.0, epsilon = 1e-15);
        assert_eq!(normalized_deviation(&dev).unwrap(), QuantumState::basis(2, 1).unwrap());
    }

    #[test]
    fn zero_deviation_is_an_error() {
        let z = Observable::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let dev = deviation_vector(&z, &QuantumState::basis(2, 0).unwrap()).unwrap();
        assert!(matches!(normalized_deviation(&dev), Err(Error::ZeroDeviation { .. })));
    }

    #[test]
    fn uniform_state_deviations_are_orthogonal() {
        let psi = uniform3();
        let a = deviation_vector(&spin1_jx(), &psi).unwrap();
        let b = deviation_vector(&spin1_jy(), &psi).unwrap();
        assert_eq!(classify_case(&a, &b).unwrap().tag, CaseTag::Case3Orthogonal);
    }

    #[test]
    fn qutrit_experiment_state_cases() {
        let state = |phi: f64| QuantumState::from_real(&[phi.sin(), 0.0, phi.cos()]).unwrap();
        let generic = state(0.3);
        let a = deviation_vector(&spin1_jx(), &generic).unwrap();
        let b = deviation_vector(&spin1_jy(), &generic).unwrap();
        let case = classify_case(&a, &b).unwrap();
        assert_eq!(case.tag, CaseTag::Case1Dependent);
        let mu = case.dependence_ratio.unwrap();
        assert!((b.vector() - a.vector() * mu).norm() < 1e-14);

        let special = state(std::f64::consts::FRAC_PI_4);
        let a = deviation_vector(&spin1_jx(), &special).unwrap();
        let b = deviation_vector(&spin1_jy(), &special).unwrap();
        assert_eq!(classify_case(&a, &b).unwrap().tag, CaseTag::Case2ZeroB);
    }

    #[test]
    fn generic_case1_is_detected() {
        let a = Observable::from_real(3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        let psi = uniform3();
        let da = deviation_vector(&a, &psi).unwrap();
        let db = deviation_vector(&spin1_jx(), &psi).unwrap();
        // (-1,0,1) against (-1,2,-1): orthogonal; perturb with a third operator
        let b = spin1_jx().try_add(&Observable::from_real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        let db2 = deviation_vector(&b, &psi).unwrap();
        assert_eq!(classify_case(&da, &db).unwrap().tag, CaseTag::Case3Orthogonal);
        assert_eq!(classify_case(&da, &db2).unwrap().tag, CaseTag::Case1Generic);
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let a = deviation_vector(&spin1_jx(), &uniform3()).unwrap();
        let other = QuantumState::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let b = deviation_vector(&spin1_jx(), &other).unwrap();
        assert_eq!(classify_case(&a, &b), Err(Error::MismatchedBase));
    }

    #[test]
    fn gram_schmidt_keeps_full_seed_set() {
        let psi = uniform3();
        let a = normalized_deviation(&deviation_vector(&spin1_jx(), &psi).unwrap()).unwrap();
        let b = normalized_deviation(&deviation_vector(&spin1_jy(), &psi).unwrap()).unwrap();
        let seeds = vec![psi, a, b];
        let basis = gram_schmidt_extend(&seeds, 3).unwrap();
        assert_eq!(basis, seeds);
    }

    #[test]
    fn gram_schmidt_from_single_unit_vector() {
        let e1 = QuantumState::basis(3, 0).unwrap();
        let basis = gram_schmidt_extend(std::slice::from_ref(&e1), 3).unwrap();
        assert_eq!(basis.len(), 3);
        assert_eq!(basis[0], e1);
        for (k, state) in basis.iter().enumerate().skip(1) {
            // each later member is e_k up to phase
            let ek = QuantumState::basis(3, k).unwrap();
            assert_abs_diff_eq!(state.inner(&ek).norm(), 1.0, epsilon = 1e-14);
        }
        assert!(gram_error(&basis) < 1e-14);
    }

    #[test]
    fn gram_schmidt_rejects_bad_seeds() {
        let e1 = QuantumState::basis(3, 0).unwrap();
        let skew = QuantumState::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            gram_schmidt_extend(&[e1.clone(), skew], 3),
            Err(Error::SeedsNotOrthonormal { .. })
        ));
        let e = |k| QuantumState::basis(2, k).unwrap();
        assert!(matches!(
            gram_schmidt_extend(&[e(0), e(1), e(0)], 2),
            Err(Error::TooManySeeds { seeds: 3, dim: 2 })
        ));
    }
}
