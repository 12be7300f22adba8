//! Angular-momentum matrices and the spin-1 / spin-1/2 scenarios.
//!
//! Matrices are written in the `|j, mu>` basis ordered `mu = j, j-1, ..., -j`,
//! so for `j = 1` the column vector `(a, b, c)` means
//! `a |1,1> + b |1,0> + c |1,-1>`. Units have `hbar = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{
    robertson_product, shifted_operator_bypass, strengthened_product, sum_bound_4a,
    sum_bound_4a_canonical, sum_bound_4b, sum_one_aux, sum_two_aux, weighted_sum_5a,
    weighted_sum_5b, product_one_aux, product_two_aux, Aux, BoundReport,
};
use crate::error::{Error, Result};
use crate::hilbert::{
    c, classify_case, deviation_vector, CMatrix, CaseTag, CVector, Observable, QuantumState,
};
use crate::tol;

/// Spin-`j` irreducible representation.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    two_j: u32,
    pub jx: Observable,
    pub jy: Observable,
    pub jz: Observable,
    pub jsq: Observable,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
}

impl SpinSystem {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `mu` of basis index `k`.
    pub fn mu(&self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

/// Builds `J_x, J_y, J_z, J^2, J_+, J_-` for spin `j` (`2j` a positive integer).
pub fn spin_matrices(j: f64) -> Result<SpinSystem> {
    let two_j = (2.0 * j).round();
    if !(two_j >= 1.0 && (2.0 * j - two_j).abs() < 1e-12) {
        return Err(Error::InvalidSpin(j));
    }
    let two_j = two_j as u32;
    let dim = two_j as usize + 1;
    let mu = |k: usize| j - k as f64;

    // J+ |mu> = sqrt((j - mu)(j + mu + 1)) |mu + 1>; |mu + 1> sits one index up
    let mut jplus = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        let m = mu(k);
        jplus[(k - 1, k)] = c(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus) * c(0.5, 0.0);
    let jy = (&jplus - &jminus) * c(0.0, -0.5);
    let jz = CMatrix::from_diagonal(&CVector::from_iterator(dim, (0..dim).map(|k| c(mu(k), 0.0))));
    let jsq = &jx * &jx + &jy * &jy + &jz * &jz;

    Ok(SpinSystem {
        two_j,
        jx: Observable::new(jx)?,
        jy: Observable::new(jy)?,
        jz: Observable::new(jz)?,
        jsq: Observable::new(jsq)?,
        jplus,
        jminus,
    })
}

/// Pauli matrices `(sigma_x, sigma_y, sigma_z)`.
pub fn pauli() -> (Observable, Observable, Observable) {
    let s = spin_matrices(0.5).expect("spin-1/2 is valid");
    (s.jx.scaled(2.0), s.jy.scaled(2.0), s.jz.scaled(2.0))
}

/// `sin(phi) |1,1> + cos(phi) |1,-1>`.
pub fn qutrit_state(phi: f64) -> QuantumState {
    QuantumState::from_real(&[phi.sin(), 0.0, phi.cos()]).expect("unit vector")
}

/// `sin(phi) |up> + cos(phi) |down>`.
pub fn qubit_state(phi: f64) -> QuantumState {
    QuantumState::from_real(&[phi.sin(), phi.cos()]).expect("unit vector")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// Spin 1 with `A = J_x`, `B = J_y`.
    Qutrit,
    /// Spin 1/2 with `A = sigma_x`, `B = sigma_y`.
    Qubit,
}

impl SystemKind {
    pub fn state(self, phi: f64) -> QuantumState {
        match self {
            SystemKind::Qutrit => qutrit_state(phi),
            SystemKind::Qubit => qubit_state(phi),
        }
    }

    pub fn observables(self) -> (Observable, Observable) {
        match self {
            SystemKind::Qutrit => {
                let s = spin_matrices(1.0).expect("spin-1 is valid");
                (s.jx, s.jy)
            }
            SystemKind::Qubit => {
                let (x, y, _) = pauli();
                (x, y)
            }
        }
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qutrit" => Ok(SystemKind::Qutrit),
            "qubit" => Ok(SystemKind::Qubit),
            other => Err(Error::InvalidParameter(format!("unknown system '{other}'"))),
        }
    }
}

/// One angle of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub phi: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    /// `dA dB`
    pub product: f64,
    /// `|<Psi_A|Psi_B>|`
    pub robertson_rhs: f64,
    pub robertson_saturated: bool,
    pub sum_4a_rhs: Option<f64>,
    pub sum_4b_rhs: Option<f64>,
    pub case: CaseTag,
    /// Spread of the shifted operator at Case-2 points (`B - A`, or `A - B`
    /// when `Psi_A` is the vanishing one).
    pub bypass_delta: Option<f64>,
    pub bypass_ok: Option<bool>,
}

/// `n` equally spaced angles on `[start, end]` (both ends included).
pub fn phi_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// 181 points on `[0, pi]`.
pub fn default_phi_grid() -> Vec<f64> {
    phi_grid(0.0, PI, 181)
}

pub fn sweep(kind: SystemKind, phis: &[f64]) -> Result<Vec<SweepRow>> {
    if phis.is_empty() {
        return Err(Error::InvalidParameter("empty angle grid".into()));
    }
    let (a, b) = kind.observables();
    phis.iter().map(|&phi| sweep_row(&a, &b, kind.state(phi), phi)).collect()
}

fn sweep_row(a: &Observable, b: &Observable, psi: QuantumState, phi: f64) -> Result<SweepRow> {
    let dev_a = deviation_vector(a, &psi)?;
    let dev_b = deviation_vector(b, &psi)?;
    let case = classify_case(&dev_a, &dev_b)?.tag;
    let robertson = robertson_product(a, b, &psi)?.report;
    let sum_4a = sum_bound_4a_canonical(a, b, &psi).ok().map(|r| r.rhs);
    let sum_4b = sum_bound_4b(a, b, &psi, None).ok().map(|r| r.rhs);
    let bypass = match case {
        CaseTag::Case2ZeroB => Some(shifted_operator_bypass(a, b, &psi)?),
        CaseTag::Case2ZeroA => Some(shifted_operator_bypass(b, a, &psi)?),
        _ => None,
    };
    Ok(SweepRow {
        phi,
        mean_a: dev_a.mean(),
        mean_b: dev_b.mean(),
        var_a: dev_a.variance(),
        var_b: dev_b.variance(),
        product: robertson.lhs,
        robertson_rhs: robertson.rhs,
        robertson_saturated: robertson.saturated,
        sum_4a_rhs: sum_4a,
        sum_4b_rhs: sum_4b,
        case,
        bypass_delta: bypass.as_ref().map(|r| r.delta_shifted),
        bypass_ok: bypass.map(|r| r.delta_equal && r.commutator_preserved),
    })
}

/// Which component acts as a toggle on the spin-1 experiment state.
#[derive(Debug, Clone, PartialEq)]
pub struct Toggle {
    pub operator: &'static str,
    /// `J Psi`, the state `Psi` is toggled with.
    pub partner: QuantumState,
}

/// Returns `Some` when `J_x` (or else `J_y`) maps `Psi(phi)` to a unit
/// vector `Psi'` and back, i.e. `J Psi' = Psi`, `J^2 Psi = Psi`,
/// `J^2 Psi' = Psi'`, all within 1e-12.
pub fn toggle_partner(phi: f64) -> Option<Toggle> {
    let s = spin_matrices(1.0).expect("spin-1 is valid");
    let psi = qutrit_state(phi);
    let found = [("Jx", &s.jx), ("Jy", &s.jy)]
        .into_iter()
        .find_map(|(name, op)| toggles(op, &psi).map(|partner| Toggle { operator: name, partner }));
    found
}

pub fn toggle_check(phi: f64) -> bool {
    toggle_partner(phi).is_some()
}

fn toggles(op: &Observable, psi: &QuantumState) -> Option<QuantumState> {
    const EPS: f64 = 1e-12;
    let image = op.apply(psi.amplitudes());
    if (image.norm() - 1.0).abs() > EPS {
        return None;
    }
    let back = op.apply(&image);
    let again = op.apply(&back);
    let ok = (&back - psi.amplitudes()).norm() <= EPS && (&again - &image).norm() <= EPS;
    ok.then(|| QuantumState::normalized(image).expect("unit image"))
}

/// One row of the three-level comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub label: &'static str,
    pub exact_form: &'static str,
    pub expected: f64,
    pub report: BoundReport,
}

impl Table1Row {
    pub fn abs_error(&self) -> f64 {
        (self.report.rhs - self.expected).abs()
    }
}

/// The three headline bounds and the combined sum estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Headline {
    /// `dJx dJy >= 1/6`
    pub product: f64,
    /// `dJx^2 + dJy^2 >= 32/81`
    pub variance_sum: f64,
    /// `dJx + dJy >= (sqrt3 + 2 sqrt2)/6`
    pub sum: f64,
    /// `sqrt(variance_sum + 2 product) = sqrt(59/81)`
    pub combined: f64,
    /// Whether the combined estimate is larger than the direct sum bound.
    pub combined_exceeds_sum: bool,
    pub actual_product: f64,
    pub actual_variance_sum: f64,
    pub actual_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
    pub headline: Headline,
    /// `<Psi_A|N1>, <Psi_B|N1>, <Psi_A|N2>, <Psi_B|N2>`.
    pub overlaps: [Complex64; 4],
}

/// Inputs: `Psi = (1,1,1)/sqrt3`, `N1 = (-1,1,0)/sqrt2`, `N2 = (1,-1,-1)/sqrt3`, `A = J_x`, `B = J_y`.
pub fn table1_inputs() -> (Observable, Observable, QuantumState, QuantumState, QuantumState) {
    let s = spin_matrices(1.0).expect("spin-1 is valid");
    (
        s.jx,
        s.jy,
        QuantumState::from_real(&[1.0, 1.0, 1.0]).expect("unit"),
        QuantumState::from_real(&[-1.0, 1.0, 0.0]).expect("unit"),
        QuantumState::from_real(&[1.0, -1.0, -1.0]).expect("unit"),
    )
}

pub fn table1_scenario() -> Result<Table1> {
    let (a, b, psi, n1, n2) = table1_inputs();
    // N2 is not orthogonal to Psi; the sum forms only see its projection
    let (aux1, aux2) = (Aux::lenient("N1", &n1), Aux::lenient("N2", &n2));
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());

    let row = |label, exact_form, expected, report: Result<BoundReport>| -> Result<Table1Row> {
        Ok(Table1Row {
            label,
            exact_form,
            expected,
            report: report?,
        })
    };
    let rows = vec![
        row("4a (i)", "1/3", 1.0 / 3.0, sum_bound_4a(&a, &b, &psi, aux1))?,
        row("4a (ii)", "32/81", 32.0 / 81.0, sum_bound_4a(&a, &b, &psi, aux2))?,
        row("4b (i)", "1/12", 1.0 / 12.0, sum_bound_4b(&a, &b, &psi, Some(aux1)))?,
        row("4b (ii)", "10/81", 10.0 / 81.0, sum_bound_4b(&a, &b, &psi, Some(aux2)))?,
        row("5a", "59/81", 59.0 / 81.0, weighted_sum_5a(&a, &b, &psi, aux1, aux2, 1.0))?,
        row("5b", "67/162", 67.0 / 162.0, weighted_sum_5b(&a, &b, &psi, Some(aux1), aux2, 1.0))?,
        row("13 (i)", "1/12", 1.0 / 12.0, product_one_aux(&a, &b, &psi, aux1))?,
        row("13 (ii)", "2/27", 2.0 / 27.0, product_one_aux(&a, &b, &psi, aux2))?,
        row("14 (i)", "1/sqrt3", 1.0 / s3, sum_one_aux(&a, &b, &psi, aux1))?,
        row("14 (ii)", "4sqrt2/9", 4.0 * s2 / 9.0, sum_one_aux(&a, &b, &psi, aux2))?,
        row("15", "1/(3sqrt6)", 1.0 / (3.0 * s6), product_two_aux(&a, &b, &psi, aux1, aux2))?,
        row("16", "(sqrt3+2sqrt2)/6", (s3 + 2.0 * s2) / 6.0, sum_two_aux(&a, &b, &psi, aux1, aux2))?,
        row("17 (i)", "1/6", 1.0 / 6.0, strengthened_product(&a, &b, &psi, aux1))?,
        row("17 (ii)", "4/27", 4.0 / 27.0, strengthened_product(&a, &b, &psi, aux2))?,
    ];

    let rhs_of = |label: &str| {
        rows.iter()
            .find(|r| r.label == label)
            .map(|r| r.report.rhs)
            .expect("row present")
    };
    let product = rhs_of("17 (i)");
    let variance_sum = rhs_of("4a (ii)");
    let sum = rhs_of("16");
    let combined = (variance_sum + 2.0 * product).sqrt();

    let dev_a = deviation_vector(&a, &psi)?;
    let dev_b = deviation_vector(&b, &psi)?;
    let headline = Headline {
        product,
        variance_sum,
        sum,
        combined,
        combined_exceeds_sum: combined > sum + tol::VALIDITY,
        actual_product: dev_a.norm() * dev_b.norm(),
        actual_variance_sum: dev_a.variance() + dev_b.variance(),
        actual_sum: dev_a.norm() + dev_b.norm(),
    };
    let overlaps = [
        dev_a.overlap(&n1)?,
        dev_b.overlap(&n1)?,
        dev_a.overlap(&n2)?,
        dev_b.overlap(&n2)?,
    ];
    Ok(Table1 {
        rows,
        headline,
        overlaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{expectation, max_entry_difference};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn identity(n: usize) -> CMatrix {
        CMatrix::identity(n, n)
    }

    #[test]
    fn rejects_invalid_spin() {
        assert_eq!(spin_matrices(0.0).unwrap_err(), Error::InvalidSpin(0.0));
        assert!(spin_matrices(0.3).is_err());
        assert!(spin_matrices(-1.0).is_err());
    }

    #[test]
    fn spin_half_gives_pauli_matrices() {
        let (x, y, z) = pauli();
        for s in [&x, &y, &z] {
            assert!(max_entry_difference(&(s.matrix() * s.matrix()), &identity(2)) < 1e-15);
        }
        let s = spin_matrices(0.5).unwrap();
        assert!(max_entry_difference(&(s.jx.matrix() * c(2.0, 0.0)), x.matrix()) == 0.0);
    }

    #[test]
    fn spin_one_jx_standard_form() {
        let s = spin_matrices(1.0).unwrap();
        let h = FRAC_1_SQRT_2;
        let want = CMatrix::from_row_slice(3, 3, &[0.0, h, 0.0, h, 0.0, h, 0.0, h, 0.0].map(|x| c(x, 0.0)));
        assert!(max_entry_difference(s.jx.matrix(), &want) < 1e-15);
    }

    #[test]
    fn commutation_relations_and_casimir() {
        for two_j in 1..=6 {
            let s = spin_matrices(two_j as f64 / 2.0).unwrap();
            let n = s.dim();
            let iz = s.jz.matrix() * c(0.0, 1.0);
            let ix = s.jx.matrix() * c(0.0, 1.0);
            let iy = s.jy.matrix() * c(0.0, 1.0);
            assert!(max_entry_difference(&s.jx.commutator(&s.jy).unwrap(), &iz) < 1e-12);
            assert!(max_entry_difference(&s.jy.commutator(&s.jz).unwrap(), &ix) < 1e-12);
            assert!(max_entry_difference(&s.jz.commutator(&s.jx).unwrap(), &iy) < 1e-12);
            let casimir = identity(n) * c(s.j() * (s.j() + 1.0), 0.0);
            assert!(max_entry_difference(s.jsq.matrix(), &casimir) < 1e-12);
            let jx = (&s.jplus + &s.jminus) * c(0.5, 0.0);
            assert!(max_entry_difference(s.jx.matrix(), &jx) < 1e-15);
        }
    }

    #[test]
    fn ladder_coefficients() {
        let s = spin_matrices(1.5).unwrap();
        // J+ |3/2, 1/2> = sqrt(3) |3/2, 3/2>
        assert_abs_diff_eq!(s.jplus[(0, 1)].re, 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.jplus[(1, 2)].re, 2.0, epsilon = 1e-15);
        assert_eq!(s.mu(3), -1.5);
    }

    #[test]
    fn transverse_means_vanish_on_basis_states_and_sparse_pairs() {
        for two_j in 1..=6 {
            let s = spin_matrices(two_j as f64 / 2.0).unwrap();
            let n = s.dim();
            for k in 0..n {
                let e = QuantumState::basis(n, k).unwrap();
                assert_abs_diff_eq!(expectation(&s.jx, &e).unwrap(), 0.0, epsilon = 1e-15);
                assert_abs_diff_eq!(expectation(&s.jy, &e).unwrap(), 0.0, epsilon = 1e-15);
            }
            for k1 in 0..n {
                for k2 in (k1 + 2)..n {
                    let mut v = vec![0.0; n];
                    v[k1] = 0.6;
                    v[k2] = -0.8;
                    let psi = QuantumState::from_real(&v).unwrap();
                    assert_abs_diff_eq!(expectation(&s.jx, &psi).unwrap(), 0.0, epsilon = 1e-15);
                    assert_abs_diff_eq!(expectation(&s.jy, &psi).unwrap(), 0.0, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn experiment_states_are_joint_eigenstates() {
        let s = spin_matrices(1.0).unwrap();
        let jz2 = Observable::new(s.jz.matrix() * s.jz.matrix()).unwrap();
        let (x, y, _) = pauli();
        let sum_sq = x.matrix() * x.matrix() + y.matrix() * y.matrix();
        for k in 0..=36 {
            let phi = k as f64 * PI / 36.0;
            let psi = qutrit_state(phi);
            let v = psi.amplitudes();
            assert!((s.jsq.apply(v) - v * c(2.0, 0.0)).norm() < 1e-14);
            assert!((jz2.apply(v) - v).norm() < 1e-14);
            assert_abs_diff_eq!(expectation(&s.jx, &psi).unwrap(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(expectation(&s.jy, &psi).unwrap(), 0.0, epsilon = 1e-15);

            let q = qubit_state(phi);
            assert!((&sum_sq * q.amplitudes() - q.amplitudes() * c(2.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn pauli_squares_commute() {
        let (x, y, _) = pauli();
        assert!(max_entry_difference(&x.commutator(&y).unwrap(), &CMatrix::zeros(2, 2)) > 1.0);
        let x2 = Observable::new(x.matrix() * x.matrix()).unwrap();
        let y2 = Observable::new(y.matrix() * y.matrix()).unwrap();
        assert!(max_entry_difference(&x2.commutator(&y2).unwrap(), &CMatrix::zeros(2, 2)) < 1e-12);
    }

    #[test]
    fn qubit_state_moments() {
        let (x, y, _) = pauli();
        for phi in [0.0, 0.4, 1.1, 2.9] {
            let psi = qubit_state(phi);
            assert_abs_diff_eq!(expectation(&x, &psi).unwrap(), (2.0 * phi).sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(expectation(&y, &psi).unwrap(), 0.0, epsilon = 1e-15);
            let va = deviation_vector(&x, &psi).unwrap().variance();
            let vb = deviation_vector(&y, &psi).unwrap().variance();
            assert_abs_diff_eq!(va + vb, 1.0 + (2.0 * phi).cos().powi(2), epsilon = 1e-14);
        }
        assert!(deviation_vector(&x, &qubit_state(FRAC_PI_4)).unwrap().is_zero());
    }

    #[test]
    fn qutrit_special_points() {
        let s = spin_matrices(1.0).unwrap();
        assert!(deviation_vector(&s.jy, &qutrit_state(FRAC_PI_4)).unwrap().is_zero());
        assert!(deviation_vector(&s.jx, &qutrit_state(3.0 * FRAC_PI_4)).unwrap().is_zero());
    }

    #[test]
    fn qutrit_sweep_rows() {
        let rows = sweep(SystemKind::Qutrit, &default_phi_grid()).unwrap();
        assert_eq!(rows.len(), 181);
        for r in &rows {
            assert_abs_diff_eq!(r.product, 0.5 * (2.0 * r.phi).cos().abs(), epsilon = 1e-12);
            assert_abs_diff_eq!(r.var_a + r.var_b, 1.0, epsilon = 1e-12);
            // canonical 4a is an equality on this family
            assert_abs_diff_eq!(r.sum_4a_rhs.unwrap(), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(rows[0].product, 0.5, epsilon = 1e-15);
        let special: Vec<_> = rows.iter().filter(|r| r.case.is_case2()).map(|r| r.phi).collect();
        assert_eq!(special.len(), 2);
        assert_abs_diff_eq!(special[0], FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(special[1], 3.0 * FRAC_PI_4, epsilon = 1e-12);
    }

    #[test]
    fn qubit_sweep_rows() {
        let rows = sweep(SystemKind::Qubit, &phi_grid(0.0, PI, 91)).unwrap();
        for r in &rows {
            assert_abs_diff_eq!(r.product, (2.0 * r.phi).cos().abs(), epsilon = 1e-12);
            assert_abs_diff_eq!(r.var_a + r.var_b, 1.0 + (2.0 * r.phi).cos().powi(2), epsilon = 1e-12);
            if !r.case.is_case2() {
                assert_eq!(r.case, CaseTag::Case1Dependent);
            } else {
                assert_eq!(r.case, CaseTag::Case2ZeroA);
                assert_eq!(r.bypass_ok, Some(true));
            }
        }
    }

    #[test]
    fn sweep_point_at_quarter_pi_reports_bypass() {
        let rows = sweep(SystemKind::Qutrit, &[FRAC_PI_4]).unwrap();
        let r = &rows[0];
        assert_eq!(r.case, CaseTag::Case2ZeroB);
        assert_abs_diff_eq!(r.bypass_delta.unwrap(), r.var_a.sqrt(), epsilon = 1e-14);
        assert!(sweep(SystemKind::Qubit, &[]).is_err());
    }

    #[test]
    fn toggle_at_quarter_pi() {
        let t = toggle_partner(FRAC_PI_4).unwrap();
        assert_eq!(t.operator, "Jx");
        let phi10 = QuantumState::basis(3, 1).unwrap();
        assert!((t.partner.amplitudes() - phi10.amplitudes()).norm() < 1e-12);
        assert!(!toggle_check(0.0));
        assert!(!toggle_check(0.3));
    }

    #[test]
    fn toggle_with_jy_at_three_quarter_pi() {
        let t = toggle_partner(3.0 * FRAC_PI_4).unwrap();
        assert_eq!(t.operator, "Jy");
        // partner is Phi(1,0) up to a phase
        assert_abs_diff_eq!(t.partner.inner(&QuantumState::basis(3, 1).unwrap()).norm(), 1.0, epsilon = 1e-12);
        assert!(toggle_check(3.0 * FRAC_PI_4));
    }

    #[test]
    fn table1_overlap_magnitudes() {
        let t = table1_scenario().unwrap();
        let [a1, b1, a2, b2] = t.overlaps;
        assert_abs_diff_eq!(a1.norm(), 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(b1.norm(), 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(a2.re, -(2f64.sqrt()) / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b2.norm(), 2f64.sqrt() / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn table1_rows_bounded_by_actual_values() {
        let t = table1_scenario().unwrap();
        assert_eq!(t.rows.len(), 14);
        for r in &t.rows {
            assert!(r.abs_error() < 1e-12, "{} off by {}", r.label, r.abs_error());
            assert!(r.report.valid);
        }
        let h = &t.headline;
        assert_abs_diff_eq!(h.actual_product, 1.0 / (3.0 * 3f64.sqrt()), epsilon = 1e-15);
        for r in t.rows.iter().filter(|r| r.label.starts_with("1") && r.report.lhs < 0.3) {
            assert!(r.report.rhs <= h.actual_product);
        }
        assert_abs_diff_eq!(h.combined, (59.0f64 / 81.0).sqrt(), epsilon = 1e-12);
        assert!(h.combined_exceeds_sum);
    }
}
