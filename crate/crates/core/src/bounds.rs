//! Evaluators for the individual uncertainty inequalities.
//!
//! Every evaluator takes the observables, the state and whatever auxiliary
//! states the inequality needs, and returns a [`BoundReport`] holding both
//! sides. Deviation vectors are recomputed per call; everything here is a
//! pure function of its inputs.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    classify_case, deviation_vector, matrix_element, max_entry_difference, CaseTag,
    DeviationVector, Observable, QuantumState,
};
use crate::tol;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationId {
    /// `dA dB >= |<Psi_A|Psi_B>|`
    #[serde(rename = "EQ2")]
    Eq2,
    /// Squared product against commutator + anticommutator terms.
    #[serde(rename = "EQ3")]
    Eq3,
    #[serde(rename = "EQ4A")]
    Eq4a,
    #[serde(rename = "EQ4B")]
    Eq4b,
    #[serde(rename = "EQ5A")]
    Eq5a,
    #[serde(rename = "EQ5B")]
    Eq5b,
    #[serde(rename = "EQ13")]
    Eq13,
    #[serde(rename = "EQ14")]
    Eq14,
    #[serde(rename = "EQ15")]
    Eq15,
    #[serde(rename = "EQ16")]
    Eq16,
    #[serde(rename = "EQ17")]
    Eq17,
    #[serde(rename = "MULTI")]
    Multi,
    #[serde(rename = "CHENFEI")]
    ChenFei,
}

impl RelationId {
    pub const ALL: [RelationId; 13] = [
        RelationId::Eq2,
        RelationId::Eq3,
        RelationId::Eq4a,
        RelationId::Eq4b,
        RelationId::Eq5a,
        RelationId::Eq5b,
        RelationId::Eq13,
        RelationId::Eq14,
        RelationId::Eq15,
        RelationId::Eq16,
        RelationId::Eq17,
        RelationId::Multi,
        RelationId::ChenFei,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationId::Eq2 => "EQ2",
            RelationId::Eq3 => "EQ3",
            RelationId::Eq4a => "EQ4A",
            RelationId::Eq4b => "EQ4B",
            RelationId::Eq5a => "EQ5A",
            RelationId::Eq5b => "EQ5B",
            RelationId::Eq13 => "EQ13",
            RelationId::Eq14 => "EQ14",
            RelationId::Eq15 => "EQ15",
            RelationId::Eq16 => "EQ16",
            RelationId::Eq17 => "EQ17",
            RelationId::Multi => "MULTI",
            RelationId::ChenFei => "CHENFEI",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase();
        RelationId::ALL
            .into_iter()
            .find(|r| r.as_str() == wanted)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown relation id '{s}'")))
    }
}

/// A labelled auxiliary state.
#[derive(Debug, Clone, Copy)]
pub struct Aux<'a> {
    pub label: &'a str,
    pub state: &'a QuantumState,
    /// Skip the `<Psi|aux> = 0` check of the sum forms.
    ///
    /// `Psi_A` and `Psi_B` are orthogonal to `Psi`, so only the projection of
    /// the auxiliary state onto the complement enters, and it has norm <= 1:
    /// the inequalities still hold, they are merely not as tight as with the
    /// renormalized projection.
    pub lenient: bool,
}

impl<'a> Aux<'a> {
    pub fn new(label: &'a str, state: &'a QuantumState) -> Self {
        Self {
            label,
            state,
            lenient: false,
        }
    }

    pub fn lenient(label: &'a str, state: &'a QuantumState) -> Self {
        Self {
            label,
            state,
            lenient: true,
        }
    }
}

/// One evaluated inequality `lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub relation: RelationId,
    pub lhs: f64,
    pub rhs: f64,
    pub aux_ids: Vec<String>,
    pub lambda: Option<f64>,
    /// Winning sign for the relations that maximize over `+-`.
    pub sign_choice: Option<i8>,
    /// False when an arbitrary state was substituted for the
    /// `(Psi_A + Psi_B)`-aligned auxiliary state of the 4b/5b forms.
    pub canonical: bool,
    pub valid: bool,
    pub saturated: bool,
}

impl BoundReport {
    fn new(relation: RelationId, lhs: f64, rhs: f64) -> Self {
        Self {
            relation,
            lhs,
            rhs,
            aux_ids: Vec::new(),
            lambda: None,
            sign_choice: None,
            canonical: true,
            valid: rhs <= lhs + tol::VALIDITY,
            saturated: (lhs - rhs).abs() <= tol::SATURATION,
        }
    }

    fn with_aux(mut self, labels: &[&str]) -> Self {
        self.aux_ids = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    /// `lhs - rhs`.
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Deviation vectors of `A` and `B` plus the real number `i<[A,B]>`.
struct Pair {
    a: DeviationVector,
    b: DeviationVector,
    i_commutator: f64,
}

impl Pair {
    fn new(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<Self> {
        let dev_a = deviation_vector(a, psi)?;
        let dev_b = deviation_vector(b, psi)?;
        let comm = matrix_element(&a.commutator(b)?, psi)?;
        Ok(Self {
            a: dev_a,
            b: dev_b,
            i_commutator: (I * comm).re,
        })
    }

    fn spreads(&self) -> (f64, f64) {
        (self.a.norm(), self.b.norm())
    }

    fn overlaps(&self, aux: &QuantumState) -> Result<(Complex64, Complex64)> {
        Ok((self.a.overlap(aux)?, self.b.overlap(aux)?))
    }

    fn require_case3(&self, what: &str) -> Result<()> {
        let overlap = self.a.overlap_with(&self.b).norm();
        if overlap > tol::CASE3_PRECONDITION || self.a.is_zero() || self.b.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "{what} needs orthogonal non-zero deviation vectors \
                 (|<Psi_A|Psi_B>| = {overlap:.3e}, dA = {:.3e}, dB = {:.3e})",
                self.a.norm(),
                self.b.norm()
            )));
        }
        Ok(())
    }
}

fn require_orthogonal(aux: Aux<'_>, psi: &QuantumState) -> Result<()> {
    if aux.state.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            found: aux.state.dim(),
        });
    }
    let overlap = psi.inner(aux.state).norm();
    if !aux.lenient && overlap > tol::AUX_ORTHOGONALITY {
        return Err(Error::AuxNotOrthogonal {
            label: aux.label.to_string(),
            overlap,
        });
    }
    Ok(())
}

fn require_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

/// Larger of the two sign branches, with the sign that achieved it.
fn best_sign(eval: impl Fn(f64) -> f64) -> (f64, i8) {
    let (plus, minus) = (eval(1.0), eval(-1.0));
    if plus >= minus {
        (plus, 1)
    } else {
        (minus, -1)
    }
}

/// Product relation plus its commutator/anticommutator decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct RobertsonReport {
    pub report: BoundReport,
    /// `|<[A,B]>/2|^2`
    pub commutator_term: f64,
    /// `(<{A,B}>/2 - <A><B>)^2`
    pub anticommutator_term: f64,
}

pub fn robertson_product(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<RobertsonReport> {
    let pair = Pair::new(a, b, psi)?;
    let (da, db) = pair.spreads();
    let rhs = pair.a.overlap_with(&pair.b).norm();

    // operator-moment route, independent of the deviation vectors
    let comm = matrix_element(&a.commutator(b)?, psi)?;
    let anti = matrix_element(a.anticommutator(b)?.matrix(), psi)?.re;
    let commutator_term = (comm * 0.5).norm_sqr();
    let anticommutator_term = (0.5 * anti - pair.a.mean() * pair.b.mean()).powi(2);

    Ok(RobertsonReport {
        report: BoundReport::new(RelationId::Eq2, da * db, rhs),
        commutator_term,
        anticommutator_term,
    })
}

/// Squared form: `dA^2 dB^2 >= commutator term + anticommutator term`.
pub fn robertson_schrodinger(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<BoundReport> {
    let r = robertson_product(a, b, psi)?;
    let lhs = r.report.lhs * r.report.lhs;
    Ok(BoundReport::new(
        RelationId::Eq3,
        lhs,
        r.commutator_term + r.anticommutator_term,
    ))
}

/// `dA^2 + dB^2 >= s i<[A,B]> + |<Psi_A|aux> + s i <Psi_B|aux>|^2`, maximized over `s = +-1`.
pub fn sum_bound_4a(a: &Observable, b: &Observable, psi: &QuantumState, aux: Aux<'_>) -> Result<BoundReport> {
    require_orthogonal(aux, psi)?;
    let pair = Pair::new(a, b, psi)?;
    let (oa, ob) = pair.overlaps(aux.state)?;
    let (rhs, sign) = best_sign(|s| s * pair.i_commutator + (oa + I * ob * s).norm_sqr());
    let (da, db) = pair.spreads();
    let mut report = BoundReport::new(RelationId::Eq4a, da * da + db * db, rhs).with_aux(&[aux.label]);
    report.sign_choice = Some(sign);
    Ok(report)
}

/// [`sum_bound_4a`] with, for each sign, the auxiliary state aligned with
/// `Psi_A - s i Psi_B` (the choice that turns that branch into an equality).
pub fn sum_bound_4a_canonical(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let mut best: Option<(f64, i8)> = None;
    for s in [1.0, -1.0] {
        let v = pair.a.vector() - pair.b.vector() * (I * s);
        let Ok(aux) = QuantumState::normalized(v) else {
            continue;
        };
        let (oa, ob) = pair.overlaps(&aux)?;
        let value = s * pair.i_commutator + (oa + I * ob * s).norm_sqr();
        if best.is_none_or(|(v, _)| value > v) {
            best = Some((value, s as i8));
        }
    }
    let (rhs, sign) = best.ok_or(Error::ZeroCombinedDeviation)?;
    let (da, db) = pair.spreads();
    let mut report = BoundReport::new(RelationId::Eq4a, da * da + db * db, rhs).with_aux(&["canonical"]);
    report.sign_choice = Some(sign);
    Ok(report)
}

/// `dA^2 + dB^2 >= |<Psi_A|aux> + <Psi_B|aux>|^2 / 2`.
///
/// Without an override the auxiliary state is `(Psi_A + Psi_B)/||Psi_A + Psi_B||`.
pub fn sum_bound_4b(
    a: &Observable,
    b: &Observable,
    psi: &QuantumState,
    aux_override: Option<Aux<'_>>,
) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let (da, db) = pair.spreads();
    let lhs = da * da + db * db;
    match aux_override {
        Some(aux) => {
            require_orthogonal(aux, psi)?;
            let (oa, ob) = pair.overlaps(aux.state)?;
            let mut report = BoundReport::new(RelationId::Eq4b, lhs, 0.5 * (oa + ob).norm_sqr()).with_aux(&[aux.label]);
            report.canonical = false;
            Ok(report)
        }
        None => {
            let combined = (pair.a.vector() + pair.b.vector()).norm();
            if combined <= tol::ZERO_DEVIATION {
                return Err(Error::ZeroCombinedDeviation);
            }
            Ok(BoundReport::new(RelationId::Eq4b, lhs, 0.5 * combined * combined).with_aux(&["canonical"]))
        }
    }
}

/// Weighted two-auxiliary-state sum:
/// `(1+l) dA^2 + (1+1/l) dB^2 >= 2 s i<[A,B]> + |<Psi_A|aux1> + s i<Psi_B|aux1>|^2
///  + |l <Psi_A|aux2> + s i<Psi_B|aux2>|^2 / l`, maximized over a common sign `s`.
pub fn weighted_sum_5a(
    a: &Observable,
    b: &Observable,
    psi: &QuantumState,
    aux1: Aux<'_>,
    aux2: Aux<'_>,
    lambda: f64,
) -> Result<BoundReport> {
    require_lambda(lambda)?;
    require_orthogonal(aux1, psi)?;
    require_orthogonal(aux2, psi)?;
    let pair = Pair::new(a, b, psi)?;
    let (a1, b1) = pair.overlaps(aux1.state)?;
    let (a2, b2) = pair.overlaps(aux2.state)?;
    let (rhs, sign) = best_sign(|s| {
        2.0 * s * pair.i_commutator
            + (a1 + I * b1 * s).norm_sqr()
            + (a2 * lambda + I * b2 * s).norm_sqr() / lambda
    });
    let (da, db) = pair.spreads();
    let lhs = (1.0 + lambda) * da * da + (1.0 + 1.0 / lambda) * db * db;
    let mut report = BoundReport::new(RelationId::Eq5a, lhs, rhs).with_aux(&[aux1.label, aux2.label]);
    report.lambda = Some(lambda);
    report.sign_choice = Some(sign);
    Ok(report)
}

/// `(1+l) dA^2 + (1+1/l) dB^2 >= |<Psi_A|aux_first> + <Psi_B|aux_first>|^2
///  + |l <Psi_A|aux_second> - <Psi_B|aux_second>|^2 / l`.
pub fn weighted_sum_5b(
    a: &Observable,
    b: &Observable,
    psi: &QuantumState,
    aux_first: Option<Aux<'_>>,
    aux_second: Aux<'_>,
    lambda: f64,
) -> Result<BoundReport> {
    require_lambda(lambda)?;
    require_orthogonal(aux_second, psi)?;
    let pair = Pair::new(a, b, psi)?;
    let (first, label, canonical) = match aux_first {
        Some(aux) => {
            require_orthogonal(aux, psi)?;
            let (oa, ob) = pair.overlaps(aux.state)?;
            ((oa + ob).norm_sqr(), aux.label, false)
        }
        None => {
            let combined = (pair.a.vector() + pair.b.vector()).norm();
            if combined <= tol::ZERO_DEVIATION {
                return Err(Error::ZeroCombinedDeviation);
            }
            (combined * combined, "canonical", true)
        }
    };
    let (a2, b2) = pair.overlaps(aux_second.state)?;
    let rhs = first + (a2 * lambda - b2).norm_sqr() / lambda;
    let (da, db) = pair.spreads();
    let lhs = (1.0 + lambda) * da * da + (1.0 + 1.0 / lambda) * db * db;
    let mut report = BoundReport::new(RelationId::Eq5b, lhs, rhs).with_aux(&[label, aux_second.label]);
    report.lambda = Some(lambda);
    report.canonical = canonical;
    Ok(report)
}

/// `dA dB >= |<Psi_A|N>| |<Psi_B|N>|`. `N` need not be orthogonal to `Psi`.
pub fn product_one_aux(a: &Observable, b: &Observable, psi: &QuantumState, aux: Aux<'_>) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let (oa, ob) = pair.overlaps(aux.state)?;
    let (da, db) = pair.spreads();
    Ok(BoundReport::new(RelationId::Eq13, da * db, oa.norm() * ob.norm()).with_aux(&[aux.label]))
}

/// `dA + dB >= |<Psi_A|N>| + |<Psi_B|N>|`.
pub fn sum_one_aux(a: &Observable, b: &Observable, psi: &QuantumState, aux: Aux<'_>) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let (oa, ob) = pair.overlaps(aux.state)?;
    let (da, db) = pair.spreads();
    Ok(BoundReport::new(RelationId::Eq14, da + db, oa.norm() + ob.norm()).with_aux(&[aux.label]))
}

/// `dA dB >= |<Psi_A|N1>| |<Psi_B|N2>|`.
pub fn product_two_aux(
    a: &Observable,
    b: &Observable,
    psi: &QuantumState,
    aux1: Aux<'_>,
    aux2: Aux<'_>,
) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let oa = pair.a.overlap(aux1.state)?;
    let ob = pair.b.overlap(aux2.state)?;
    let (da, db) = pair.spreads();
    Ok(BoundReport::new(RelationId::Eq15, da * db, oa.norm() * ob.norm()).with_aux(&[aux1.label, aux2.label]))
}

/// `dA + dB >= |<Psi_A|N1>| + |<Psi_B|N2>|`.
pub fn sum_two_aux(
    a: &Observable,
    b: &Observable,
    psi: &QuantumState,
    aux1: Aux<'_>,
    aux2: Aux<'_>,
) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let oa = pair.a.overlap(aux1.state)?;
    let ob = pair.b.overlap(aux2.state)?;
    let (da, db) = pair.spreads();
    Ok(BoundReport::new(RelationId::Eq16, da + db, oa.norm() + ob.norm()).with_aux(&[aux1.label, aux2.label]))
}

/// `dA dB >= 2 |<Psi_A|N>| |<Psi_B|N>|`, only for orthogonal non-zero deviations.
pub fn strengthened_product(a: &Observable, b: &Observable, psi: &QuantumState, aux: Aux<'_>) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    pair.require_case3("the strengthened product bound")?;
    let (oa, ob) = pair.overlaps(aux.state)?;
    let (da, db) = pair.spreads();
    Ok(BoundReport::new(RelationId::Eq17, da * db, 2.0 * oa.norm() * ob.norm()).with_aux(&[aux.label]))
}

/// `prod dX_i >= n^{n/2} prod |<Psi_{X_i}|N>|` for pairwise orthogonal deviations.
pub fn multi_observable_product(obs: &[Observable], psi: &QuantumState, aux: Aux<'_>) -> Result<BoundReport> {
    if obs.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "multi-observable product needs at least two observables (got {})",
            obs.len()
        )));
    }
    let devs = obs
        .iter()
        .map(|o| deviation_vector(o, psi))
        .collect::<Result<Vec<_>>>()?;
    for (i, d) in devs.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "deviation vector of observable #{i} vanishes"
            )));
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
    let n = devs.len() as f64;
    let lhs: f64 = devs.iter().map(DeviationVector::norm).product();
    let mut rhs = n.powf(n / 2.0);
    for d in &devs {
        rhs *= d.overlap(aux.state)?.norm();
    }
    Ok(BoundReport::new(RelationId::Multi, lhs, rhs).with_aux(&[aux.label]))
}

/// `dA + dB >= max(d(A+B), d(A-B))`.
pub fn chen_fei_sum(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<BoundReport> {
    let pair = Pair::new(a, b, psi)?;
    let plus = deviation_vector(&a.try_add(b)?, psi)?.norm();
    let minus = deviation_vector(&a.try_sub(b)?, psi)?.norm();
    let (da, db) = pair.spreads();
    Ok(BoundReport::new(RelationId::ChenFei, da + db, plus.max(minus)))
}

/// Result of replacing an observable `B` with `dB = 0` by `B - A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedBypassResult {
    /// `B - A`
    pub shifted_obs: Observable,
    /// Eigenvalue `beta` in `B Psi = beta Psi`.
    pub eigenvalue: f64,
    pub delta_a: f64,
    pub delta_shifted: f64,
    /// `|d(B - A) - dA| <= 1e-10`
    pub delta_equal: bool,
    /// Max entry of `[A, B - A] - [A, B]`.
    pub commutator_error: f64,
    pub commutator_preserved: bool,
}

pub fn shifted_operator_bypass(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<ShiftedBypassResult> {
    let dev_b = deviation_vector(b, psi)?;
    if dev_b.norm() > tol::ORTHOGONALITY {
        return Err(Error::PreconditionViolated(format!(
            "shifted-operator bypass needs an eigenstate of B (dB = {:.3e})",
            dev_b.norm()
        )));
    }
    let shifted = b.try_sub(a)?;
    let delta_a = deviation_vector(a, psi)?.norm();
    let delta_shifted = deviation_vector(&shifted, psi)?.norm();
    let commutator_error = max_entry_difference(&a.commutator(&shifted)?, &a.commutator(b)?);
    Ok(ShiftedBypassResult {
        shifted_obs: shifted,
        eigenvalue: dev_b.mean(),
        delta_a,
        delta_shifted,
        delta_equal: (delta_shifted - delta_a).abs() <= tol::ORTHOGONALITY,
        commutator_error,
        commutator_preserved: commutator_error <= tol::ORTHOGONALITY,
    })
}

/// Case classification for `(A, B, Psi)`.
pub fn case_of(a: &Observable, b: &Observable, psi: &QuantumState) -> Result<CaseTag> {
    let da = deviation_vector(a, psi)?;
    let db = deviation_vector(b, psi)?;
    Ok(classify_case(&da, &db)?.tag)
}
