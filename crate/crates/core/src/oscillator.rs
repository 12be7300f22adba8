//! Function-space examples on a quadrature grid.
//!
//! Units: `hbar = 1`, `m = 1/2`, force constant `K = 2`, so the oscillator
//! Hamiltonian is `H = p^2 + x^2 = -d^2/dx^2 + x^2` with `H phi_n = (2n+1) phi_n`.
//! The scaled-Gaussian anharmonic example uses `H = -d^2/dx^2 + lambda x^4`
//! (same `hbar` and `m`) and lives in its own functions below.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{c, CMatrix, Observable};
use crate::quadrature::Grid;
use crate::tol;

/// Highest Hermite index offered by [`hermite_state`].
pub const MAX_HERMITE_LEVEL: usize = 10;

/// Complex samples of a wavefunction on a grid.
#[derive(Debug, Clone)]
pub struct FunctionState<'g> {
    grid: &'g Grid,
    samples: Vec<Complex64>,
    support: (f64, f64),
}

impl<'g> FunctionState<'g> {
    pub fn from_fn(grid: &'g Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            samples: grid.nodes().iter().map(|&x| f(x)).collect(),
            support: (grid.lower(), grid.upper()),
        }
    }

    pub fn from_real_fn(grid: &'g Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| c(f(x), 0.0))
    }

    /// Samples of `f` restricted to `[lo, hi]` (zero outside).
    pub fn from_real_fn_on(grid: &'g Grid, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Self {
        let mut s = Self::from_real_fn(grid, |x| if (lo..=hi).contains(&x) { f(x) } else { 0.0 });
        s.support = (lo, hi);
        s
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FunctionState<'_>) -> Complex64 {
        let prod: Vec<Complex64> = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .collect();
        self.grid.integrate_complex(&prod)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid.integrate(&self.samples.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> FunctionState<'g> {
        FunctionState {
            grid: self.grid,
            samples: self
                .grid
                .nodes()
                .iter()
                .zip(&self.samples)
                .map(|(&x, &z)| f(x, z))
                .collect(),
            support: self.support,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> FunctionState<'g> {
        self.map(|_, z| z * factor)
    }

    /// `self - other`.
    pub fn minus(&self, other: &FunctionState<'_>) -> FunctionState<'g> {
        let mut out = self.clone();
        for (a, b) in out.samples.iter_mut().zip(&other.samples) {
            *a -= b;
        }
        out
    }

    /// Sample-based derivative (panel-wise polynomial differentiation).
    pub fn derivative(&self) -> FunctionState<'g> {
        FunctionState {
            grid: self.grid,
            samples: self.grid.differentiate(&self.samples),
            support: self.support,
        }
    }
}

/// Normalized Hermite function `phi_n(x)` (eigenfunction of `-d^2/dx^2 + x^2`).
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let phi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return phi0;
    }
    let (mut prev, mut cur) = (phi0, 2f64.sqrt() * x * phi0);
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `phi_n'(x) = sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}`.
pub fn hermite_derivative(n: usize, x: f64) -> f64 {
    let down = if n == 0 {
        0.0
    } else {
        (n as f64 / 2.0).sqrt() * hermite_function(n - 1, x)
    };
    down - ((n as f64 + 1.0) / 2.0).sqrt() * hermite_function(n + 1, x)
}

pub fn hermite_state(n: usize, grid: &Grid) -> Result<FunctionState<'_>> {
    if n > MAX_HERMITE_LEVEL {
        return Err(Error::InvalidParameter(format!(
            "Hermite level {n} exceeds {MAX_HERMITE_LEVEL}"
        )));
    }
    let state = FunctionState::from_real_fn(grid, |x| hermite_function(n, x));
    let deficit = (1.0 - state.norm_sqr()).abs();
    if deficit > 1e-6 {
        return Err(Error::GridTooNarrow { deficit });
    }
    Ok(state)
}

/// Observables whose deviation vectors on the ground state are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationKind {
    X,
    XSquared,
    P,
    PSquared,
}

impl DeviationKind {
    /// `O phi_0(x)` in closed form.
    fn apply_to_ground(self, x: f64) -> Complex64 {
        let phi0 = hermite_function(0, x);
        match self {
            DeviationKind::X => c(x * phi0, 0.0),
            DeviationKind::XSquared => c(x * x * phi0, 0.0),
            // p = -i d/dx, phi_0' = -x phi_0
            DeviationKind::P => c(0.0, -hermite_derivative(0, x)),
            // p^2 = -d^2/dx^2, phi_0'' = (x^2 - 1) phi_0
            DeviationKind::PSquared => c((1.0 - x * x) * phi0, 0.0),
        }
    }
}

/// `(O - <O>) phi_0` sampled on `grid`.
///
/// `x^2 -> phi_2/sqrt2`, `p -> i phi_1/sqrt2`, `x -> phi_1/sqrt2`, `p^2 -> -phi_2/sqrt2`.
pub fn deviation_function(kind: DeviationKind, grid: &Grid) -> Result<FunctionState<'_>> {
    let ground = hermite_state(0, grid)?;
    let applied = FunctionState::from_fn(grid, |x| kind.apply_to_ground(x));
    let mean = ground.inner(&applied);
    Ok(applied.minus(&ground.scaled(mean)))
}

/// `(sin x + eta cos(3x/2)) / sqrt((1 + eta^2) pi)` on `[-pi, pi]`, zero outside.
pub fn trial_state(eta: f64, grid: &Grid) -> FunctionState<'_> {
    let norm = ((1.0 + eta * eta) * PI).sqrt();
    FunctionState::from_real_fn_on(grid, -PI, PI, move |x| (x.sin() + eta * (1.5 * x).cos()) / norm)
}

/// `cos(3x/2)/sqrt(pi)` on `[-pi, pi]`.
pub fn even_trial_component(grid: &Grid) -> FunctionState<'_> {
    FunctionState::from_real_fn_on(grid, -PI, PI, |x| (1.5 * x).cos() / PI.sqrt())
}

/// `sin(x)/sqrt(pi)` on `[-pi, pi]`.
pub fn odd_trial_component(grid: &Grid) -> FunctionState<'_> {
    FunctionState::from_real_fn_on(grid, -PI, PI, |x| x.sin() / PI.sqrt())
}

/// `2 |<dev_a|aux>| |<dev_b|aux>|` for orthogonal non-zero deviations.
pub fn strengthened_product_fn(
    dev_a: &FunctionState<'_>,
    dev_b: &FunctionState<'_>,
    aux: &FunctionState<'_>,
) -> Result<f64> {
    let overlap = dev_a.inner(dev_b).norm();
    if overlap > tol::CASE3_PRECONDITION {
        return Err(Error::PreconditionViolated(format!(
            "deviation functions are not orthogonal (|overlap| = {overlap:.3e})"
        )));
    }
    Ok(2.0 * dev_a.inner(aux).norm() * dev_b.inner(aux).norm())
}

/// `|<dev_a|aux1>| |<dev_b|aux2>|`.
pub fn product_two_aux_fn(
    dev_a: &FunctionState<'_>,
    dev_b: &FunctionState<'_>,
    aux1: &FunctionState<'_>,
    aux2: &FunctionState<'_>,
) -> f64 {
    dev_a.inner(aux1).norm() * dev_b.inner(aux2).norm()
}

/// Strengthened product bound for `A = x^2`, `B = p` on `phi_0` with the trial state at `eta`.
pub fn bound17_eta(eta: f64, grid: &Grid) -> Result<f64> {
    let dev_a = deviation_function(DeviationKind::XSquared, grid)?;
    let dev_b = deviation_function(DeviationKind::P, grid)?;
    strengthened_product_fn(&dev_a, &dev_b, &trial_state(eta, grid))
}

/// Closed reduction `eta |I1 I2| / ((1 + eta^2) pi)` with
/// `I1 = int phi_1 sin x`, `I2 = int phi_2 cos(3x/2)` over `[-pi, pi]`.
pub fn bound17_eta_reduced(eta: f64, grid: &Grid) -> f64 {
    let inside = |f: &dyn Fn(f64) -> f64| grid.integrate_fn(|x| if x.abs() <= PI { f(x) } else { 0.0 });
    let i1 = inside(&|x| hermite_function(1, x) * x.sin());
    let i2 = inside(&|x| hermite_function(2, x) * (1.5 * x).cos());
    (eta * i1 * i2).abs() / ((1.0 + eta * eta) * PI)
}

/// `(eta, bound17_eta(eta))` for each `eta`.
pub fn scan_bound17(etas: &[f64], grid: &Grid) -> Result<Vec<(f64, f64)>> {
    let dev_a = deviation_function(DeviationKind::XSquared, grid)?;
    let dev_b = deviation_function(DeviationKind::P, grid)?;
    etas.iter()
        .map(|&eta| Ok((eta, strengthened_product_fn(&dev_a, &dev_b, &trial_state(eta, grid))?)))
        .collect()
}

/// Two-auxiliary product with the even piece paired to `x^2` and the odd piece to `p`.
pub fn split_aux_bound(grid: &Grid) -> Result<f64> {
    let dev_a = deviation_function(DeviationKind::XSquared, grid)?;
    let dev_b = deviation_function(DeviationKind::P, grid)?;
    Ok(product_two_aux_fn(&dev_a, &dev_b, &even_trial_component(grid), &odd_trial_component(grid)))
}

/// Same pieces with the assignment swapped; vanishes by parity.
pub fn split_aux_bound_swapped(grid: &Grid) -> Result<f64> {
    let dev_a = deviation_function(DeviationKind::XSquared, grid)?;
    let dev_b = deviation_function(DeviationKind::P, grid)?;
    Ok(product_two_aux_fn(&dev_a, &dev_b, &odd_trial_component(grid), &even_trial_component(grid)))
}

fn mirror(grid: &Grid) -> Result<Vec<usize>> {
    grid.mirror_map()
        .ok_or_else(|| Error::InvalidParameter("half-line route needs a grid symmetric about 0".into()))
}

fn check_even_modulus(f: &FunctionState<'_>, mirror: &[usize]) -> Result<()> {
    let s = f.samples();
    let max_asymmetry = mirror
        .iter()
        .enumerate()
        .map(|(i, &j)| (s[i].norm_sqr() - s[j].norm_sqr()).abs())
        .fold(0.0, f64::max);
    if max_asymmetry > 1e-8 {
        return Err(Error::EvennessViolated { max_asymmetry });
    }
    Ok(())
}

/// `int_0^inf |f|^2 / int |f|^2`.
pub fn half_line_fraction(f: &FunctionState<'_>) -> f64 {
    let grid = f.grid();
    let half: f64 = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(f.samples())
        .filter(|((&x, _), _)| x > 0.0)
        .map(|((_, w), z)| w * z.norm_sqr())
        .sum();
    half / f.norm_sqr()
}

/// `2 |int_0^inf conj(dev_a) dev_b dx|`, a lower bound on `dA dB` when both
/// squared moduli are even.
pub fn half_line_product_bound(dev_a: &FunctionState<'_>, dev_b: &FunctionState<'_>) -> Result<f64> {
    let grid = dev_a.grid();
    let m = mirror(grid)?;
    check_even_modulus(dev_a, &m)?;
    check_even_modulus(dev_b, &m)?;
    let cross: Complex64 = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(dev_a.samples().iter().zip(dev_b.samples()))
        .filter(|((&x, _), _)| x > 0.0)
        .map(|((_, w), (a, b))| a.conj() * b * w)
        .sum();
    Ok(2.0 * cross.norm())
}

/// Matrices of `x^2` and `p^2` in the first `levels` Hermite functions.
///
/// Entries are the exact infinite-basis matrix elements, so `x^2 + p^2` is
/// exactly `diag(1, 3, 5, ...)`.
pub fn hermite_basis_operators(levels: usize) -> Result<(Observable, Observable)> {
    if levels < 2 {
        return Err(Error::DimensionTooSmall(levels));
    }
    let mut x2 = CMatrix::zeros(levels, levels);
    let mut p2 = CMatrix::zeros(levels, levels);
    for n in 0..levels {
        let diag = n as f64 + 0.5;
        x2[(n, n)] = c(diag, 0.0);
        p2[(n, n)] = c(diag, 0.0);
        if n + 2 < levels {
            let off = ((n + 1) as f64 * (n + 2) as f64).sqrt() / 2.0;
            x2[(n, n + 2)] = c(off, 0.0);
            x2[(n + 2, n)] = c(off, 0.0);
            p2[(n, n + 2)] = c(-off, 0.0);
            p2[(n + 2, n)] = c(-off, 0.0);
        }
    }
    Ok((Observable::new(x2)?, Observable::new(p2)?))
}

/// Kinetic/potential spreads of a sampled state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySpreads {
    pub mean_t: f64,
    pub mean_v: f64,
    pub delta_t: f64,
    pub delta_v: f64,
}

/// Spreads of `T = -d^2/dx^2` (sample-based derivative) and the potential `V`
/// given at the grid nodes.
pub fn energy_spreads(psi: &FunctionState<'_>, potential: &[f64]) -> Result<EnergySpreads> {
    let grid = psi.grid();
    if potential.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: potential.len(),
        });
    }
    let t_psi = psi.derivative().derivative().scaled(c(-1.0, 0.0));
    let v_psi = psi.map(|_, z| z);
    let v_psi = FunctionState {
        samples: v_psi.samples.iter().zip(potential).map(|(z, v)| z * v).collect(),
        ..v_psi
    };
    let spread = |applied: &FunctionState<'_>| {
        let mean = psi.inner(applied).re;
        (mean, (applied.norm_sqr() - mean * mean).max(0.0).sqrt())
    };
    let (mean_t, delta_t) = spread(&t_psi);
    let (mean_v, delta_v) = spread(&v_psi);
    Ok(EnergySpreads {
        mean_t,
        mean_v,
        delta_t,
        delta_v,
    })
}

/// `|dT - dV|`: zero for stationary states of `-d^2/dx^2 + V`.
pub fn stationarity_diagnostic(psi: &FunctionState<'_>, potential: &[f64]) -> Result<f64> {
    let s = energy_spreads(psi, potential)?;
    Ok((s.delta_t - s.delta_v).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledGaussianReport {
    pub lambda: f64,
    pub k: f64,
    pub mean_t: f64,
    pub mean_v: f64,
    pub delta_t: f64,
    pub delta_v: f64,
    /// `<T> = 2 <V>` within 1e-8.
    pub virial_satisfied: bool,
}

/// Quadrature grid sized for `exp(-k x^2)`.
pub fn gaussian_grid(k: f64) -> Result<Grid> {
    let width = 8.0 / k.sqrt();
    Grid::composite(&[-width, 0.0, width], (0.5 / k.sqrt()).min(0.5), crate::quadrature::DEFAULT_ORDER)
}

/// Moments of `(k/pi)^{1/4} exp(-k x^2 / 2)` under `T = -d^2/dx^2`, `V = lambda x^4`.
pub fn scaled_gaussian_report(lambda: f64, k: f64) -> Result<ScaledGaussianReport> {
    if !(lambda > 0.0 && k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda and k must be positive (got {lambda}, {k})"
        )));
    }
    let grid = gaussian_grid(k)?;
    let g = |x: f64| (k / PI).powf(0.25) * (-0.5 * k * x * x).exp();
    // -g'' = (k - k^2 x^2) g
    let t_g = |x: f64| (k - k * k * x * x) * g(x);
    let v_g = |x: f64| lambda * x.powi(4) * g(x);
    let mean_t = grid.integrate_fn(|x| g(x) * t_g(x));
    let mean_v = grid.integrate_fn(|x| g(x) * v_g(x));
    let delta_t = (grid.integrate_fn(|x| t_g(x).powi(2)) - mean_t * mean_t).sqrt();
    let delta_v = (grid.integrate_fn(|x| v_g(x).powi(2)) - mean_v * mean_v).sqrt();
    Ok(ScaledGaussianReport {
        lambda,
        k,
        mean_t,
        mean_v,
        delta_t,
        delta_v,
        virial_satisfied: (mean_t - 2.0 * mean_v).abs() <= 1e-8,
    })
}

/// Energy-minimizing scale `k = (3 lambda)^{1/3}` of `k/2 + 3 lambda / (4 k^2)`.
pub fn virial_optimal_k(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive (got {lambda})")));
    }
    Ok((3.0 * lambda).cbrt())
}
