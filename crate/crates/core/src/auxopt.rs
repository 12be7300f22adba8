//! Auxiliary states expanded over a basis seeded with `Psi`, `Psi_A/dA`, `Psi_B/dB`.
//!
//! With `theta_1 = Psi`, `theta_2 = Psi_A/dA`, `theta_3 = Psi_B/dB` (orthogonal
//! deviations) and `N = sum c_j theta_j / sqrt(sum r_j^2)`, `r_j = |c_j|`,
//!
//! ```text
//! |<Psi_A|N>| |<Psi_B|N>| = r_2 r_3 / sum r_j^2 * dA dB  <=  dA dB / 2,
//! ```
//!
//! with equality iff only `r_2 = r_3` are non-zero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    c, gram_error, gram_schmidt_extend, normalized_deviation, CVector, DeviationVector, QuantumState,
};
use crate::tol;

/// Coefficients over an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxParametrization {
    basis: Vec<QuantumState>,
    coefficients: Vec<Complex64>,
}

impl AuxParametrization {
    /// `coefficients` may be shorter than the basis; missing entries are zero.
    pub fn new(basis: Vec<QuantumState>, mut coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() > basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: coefficients.len(),
            });
        }
        let max_error = gram_error(&basis);
        if max_error > tol::SEED_ORTHONORMALITY {
            return Err(Error::SeedsNotOrthonormal { max_error });
        }
        coefficients.resize(basis.len(), c(0.0, 0.0));
        Ok(Self { basis, coefficients })
    }

    /// Basis `Psi, Psi_A/dA, Psi_B/dB, ...` completed to the full space.
    pub fn from_deviations(dev_a: &DeviationVector, dev_b: &DeviationVector, coefficients: Vec<Complex64>) -> Result<Self> {
        let psi = dev_a.base().clone();
        if (psi.amplitudes() - dev_b.base().amplitudes()).norm() > tol::ORTHOGONALITY {
            return Err(Error::MismatchedBase);
        }
        let seeds = [psi.clone(), normalized_deviation(dev_a)?, normalized_deviation(dev_b)?];
        let basis = gram_schmidt_extend(&seeds, psi.dim())?;
        Self::new(basis, coefficients)
    }

    pub fn basis(&self) -> &[QuantumState] {
        &self.basis
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `r_j = |c_j|`.
    pub fn moduli(&self) -> Vec<f64> {
        self.coefficients.iter().map(|z| z.norm()).collect()
    }
}

pub fn aux_from_coefficients(param: &AuxParametrization) -> Result<QuantumState> {
    let weight: f64 = param.coefficients.iter().map(|z| z.norm_sqr()).sum();
    if weight <= 0.0 {
        return Err(Error::ZeroCoefficients);
    }
    let dim = param.basis[0].dim();
    let mut v = CVector::zeros(dim);
    for (cj, theta) in param.coefficients.iter().zip(&param.basis) {
        v += theta.amplitudes() * *cj;
    }
    QuantumState::new(v / c(weight.sqrt(), 0.0))
}

/// `r_2 r_3 / sum r_j^2 * dA dB` (0-based `r[1] r[2]`).
pub fn closed_form_objective(moduli: &[f64], delta_a: f64, delta_b: f64) -> f64 {
    let weight: f64 = moduli.iter().map(|r| r * r).sum();
    if weight == 0.0 || moduli.len() < 3 {
        return 0.0;
    }
    moduli[1] * moduli[2] / weight * delta_a * delta_b
}

/// `|<Psi_A|N>| |<Psi_B|N>|` for the parametrized `N`, cross-checked against
/// [`closed_form_objective`] to 1e-10.
pub fn overlap_product_objective(param: &AuxParametrization, dev_a: &DeviationVector, dev_b: &DeviationVector) -> Result<f64> {
    if param.basis.len() < 3 {
        return Err(Error::BasisSeedMismatch(format!(
            "basis has {} states, need at least 3 seeds",
            param.basis.len()
        )));
    }
    let expected = [dev_a.base().clone(), normalized_deviation(dev_a)?, normalized_deviation(dev_b)?];
    for (k, (want, got)) in expected.iter().zip(&param.basis).enumerate() {
        let gap = (want.amplitudes() - got.amplitudes()).norm();
        if gap > tol::SEED_ORTHONORMALITY {
            return Err(Error::BasisSeedMismatch(format!(
                "basis state #{k} differs from its seed by {gap:.3e}"
            )));
        }
    }
    let aux = aux_from_coefficients(param)?;
    let direct = dev_a.overlap(&aux)?.norm() * dev_b.overlap(&aux)?.norm();
    let closed = closed_form_objective(&param.moduli(), dev_a.norm(), dev_b.norm());
    if (direct - closed).abs() > 1e-10 {
        return Err(Error::BasisSeedMismatch(format!(
            "overlap product {direct} disagrees with closed form {closed}"
        )));
    }
    Ok(direct)
}

fn check_devs(devs: &[&DeviationVector]) -> Result<()> {
    let base = devs[0].base();
    for (i, d) in devs.iter().enumerate() {
        if d.base().dim() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: d.base().dim(),
            });
        }
        if (d.base().amplitudes() - base.amplitudes()).norm() > tol::ORTHOGONALITY {
            return Err(Error::MismatchedBase);
        }
        if d.is_zero() {
            return Err(Error::ZeroDeviation { norm: d.norm() });
        }
        for (j, e) in devs.iter().enumerate().skip(i + 1) {
            let overlap = d.overlap_with(e).norm();
            if overlap > tol::CASE3_PRECONDITION {
                return Err(Error::PreconditionViolated(format!(
                    "deviation vectors #{i} and #{j} are not orthogonal (|overlap| = {overlap:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// `(Psi_A/dA + Psi_B/dB) / sqrt2`.
pub fn optimal_aux_pair(dev_a: &DeviationVector, dev_b: &DeviationVector) -> Result<QuantumState> {
    optimal_aux_multi(&[dev_a.clone(), dev_b.clone()])
}

/// `sum_i (Psi_i/dX_i) / sqrt(n)` for `n >= 2` pairwise orthogonal deviations.
pub fn optimal_aux_multi(devs: &[DeviationVector]) -> Result<QuantumState> {
    if devs.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two deviation vectors (got {})",
            devs.len()
        )));
    }
    check_devs(&devs.iter().collect::<Vec<_>>())?;
    let mut v = CVector::zeros(devs[0].base().dim());
    for d in devs {
        v += normalized_deviation(d)?.amplitudes();
    }
    QuantumState::new(v / c((devs.len() as f64).sqrt(), 0.0))
}
