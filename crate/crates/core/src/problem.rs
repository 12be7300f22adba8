//! JSON problem files: a state, named observables, named auxiliary states and
//! a list of relations to evaluate.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "state": [[0.577, 0], [0.577, 0], [0.577, 0]],
//!   "observables": { "A": [[[0,0],[0.7,0],[0,0]], ...], "B": ... },
//!   "aux": { "N1": [[-0.707,0],[0.707,0],[0,0]] },
//!   "lambda": 1.0,
//!   "relations": ["EQ2", {"id": "EQ17", "aux": ["N1"]}]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs; matrices are lists of rows. Relations
//! act on the observables `A` and `B` unless named explicitly, and draw
//! auxiliary states from `aux` in key order unless named explicitly. The 4b/5b
//! forms use their canonical auxiliary state unless one is given. The sum
//! forms reject auxiliary states that overlap the state unless
//! `"lenient_aux": true` is set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, Aux, BoundReport, RelationId};
use crate::error::Error;
use crate::hilbert::{c, CMatrix, CVector, CaseTag, Observable, QuantumState};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot parse problem file: {0}")]
    Parse(String),
    #[error("{field}: {source}")]
    Invalid {
        field: String,
        #[source]
        source: Error,
    },
}

fn invalid(field: impl Into<String>) -> impl FnOnce(Error) -> LoadError {
    let field = field.into();
    move |source| LoadError::Invalid { field, source }
}

/// Raw file contents.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim: usize,
    pub state: Vec<[f64; 2]>,
    pub observables: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub aux: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub lenient_aux: bool,
    #[serde(default)]
    pub relations: Vec<RelationRequest>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RelationRequest {
    Id(String),
    Detailed {
        id: String,
        #[serde(default)]
        observables: Option<Vec<String>>,
        #[serde(default)]
        aux: Option<Vec<String>>,
        #[serde(default)]
        lambda: Option<f64>,
    },
}

/// One resolved relation request.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationSpec {
    pub id: RelationId,
    pub observables: Option<Vec<String>>,
    pub aux: Option<Vec<String>>,
    pub lambda: Option<f64>,
}

/// Validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub state: QuantumState,
    pub observables: BTreeMap<String, Observable>,
    pub aux: BTreeMap<String, QuantumState>,
    pub lambda: f64,
    pub lenient_aux: bool,
    pub relations: Vec<RelationSpec>,
}

fn vector(entries: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|[re, im]| c(*re, *im)))
}

fn dim_check(field: &str, expected: usize, found: usize) -> Result<(), LoadError> {
    if expected != found {
        return Err(LoadError::Invalid {
            field: field.to_string(),
            source: Error::DimensionMismatch { expected, found },
        });
    }
    Ok(())
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))
    }

    /// Builds states and observables, enforcing unit norm and Hermiticity.
    pub fn validate(&self) -> Result<Problem, LoadError> {
        let dim = self.dim;
        dim_check("state", dim, self.state.len())?;
        let state = QuantumState::new(vector(&self.state)).map_err(invalid("state"))?;

        let mut observables = BTreeMap::new();
        for (name, rows) in &self.observables {
            let field = format!("observables.{name}");
            dim_check(&field, dim, rows.len())?;
            for row in rows {
                dim_check(&field, dim, row.len())?;
            }
            let m = CMatrix::from_fn(dim, dim, |i, j| c(rows[i][j][0], rows[i][j][1]));
            observables.insert(name.clone(), Observable::new(m).map_err(invalid(field))?);
        }

        let mut aux = BTreeMap::new();
        for (name, entries) in &self.aux {
            let field = format!("aux.{name}");
            dim_check(&field, dim, entries.len())?;
            aux.insert(name.clone(), QuantumState::new(vector(entries)).map_err(invalid(field))?);
        }

        let lambda = self.lambda.unwrap_or(1.0);
        let mut relations = Vec::new();
        for (k, r) in self.relations.iter().enumerate() {
            let field = format!("relations[{k}]");
            let spec = match r {
                RelationRequest::Id(id) => RelationSpec {
                    id: id.parse().map_err(invalid(field))?,
                    observables: None,
                    aux: None,
                    lambda: None,
                },
                RelationRequest::Detailed {
                    id,
                    observables,
                    aux,
                    lambda,
                } => RelationSpec {
                    id: id.parse().map_err(invalid(field))?,
                    observables: observables.clone(),
                    aux: aux.clone(),
                    lambda: *lambda,
                },
            };
            relations.push(spec);
        }
        Ok(Problem {
            state,
            observables,
            aux,
            lambda,
            lenient_aux: self.lenient_aux,
            relations,
        })
    }
}

/// Outcome of one requested relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationOutcome {
    pub relation: RelationId,
    pub observables: Vec<String>,
    pub report: Option<BoundReport>,
    /// Set when the evaluator refused the input.
    pub error: Option<String>,
    pub precondition_violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemResult {
    /// Case of the first two observables used (`A`, `B` by default).
    pub case: Option<CaseTag>,
    pub outcomes: Vec<RelationOutcome>,
}

impl ProblemResult {
    pub fn any_precondition_violated(&self) -> bool {
        self.outcomes.iter().any(|o| o.precondition_violated)
    }
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        ProblemFile::from_json(text)?.validate()
    }

    fn default_pair(&self) -> Vec<String> {
        if self.observables.contains_key("A") && self.observables.contains_key("B") {
            vec!["A".into(), "B".into()]
        } else {
            self.observables.keys().take(2).cloned().collect()
        }
    }

    fn observable(&self, name: &str) -> Result<&Observable, Error> {
        self.observables
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown observable '{name}'")))
    }

    fn make_aux<'s>(&self, label: &'s str, state: &'s QuantumState) -> Aux<'s> {
        if self.lenient_aux {
            Aux::lenient(label, state)
        } else {
            Aux::new(label, state)
        }
    }

    fn aux_state<'s>(&'s self, name: &'s str) -> Result<Aux<'s>, Error> {
        self.aux
            .get_key_value(name)
            .map(|(k, v)| self.make_aux(k.as_str(), v))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown auxiliary state '{name}'")))
    }

    /// `k`-th auxiliary state: explicitly named or in key order.
    fn nth_aux<'s>(&'s self, names: Option<&'s [String]>, k: usize) -> Result<Aux<'s>, Error> {
        match names {
            Some(names) => {
                let name = names.get(k).ok_or_else(|| {
                    Error::InvalidParameter(format!("relation needs at least {} auxiliary states", k + 1))
                })?;
                self.aux_state(name)
            }
            None => self
                .aux
                .iter()
                .nth(k)
                .map(|(n, s)| self.make_aux(n.as_str(), s))
                .ok_or_else(|| Error::InvalidParameter(format!("problem defines fewer than {} auxiliary states", k + 1))),
        }
    }

    fn optional_aux<'s>(&'s self, names: Option<&'s [String]>) -> Result<Option<Aux<'s>>, Error> {
        match names.and_then(|n| n.first()) {
            Some(name) => self.aux_state(name).map(Some),
            None => Ok(None),
        }
    }

    fn evaluate_one(&self, spec: &RelationSpec, names: &[String]) -> Result<BoundReport, Error> {
        let psi = &self.state;
        let lambda = spec.lambda.unwrap_or(self.lambda);
        let aux_names = spec.aux.as_deref();
        if spec.id == RelationId::Multi {
            let obs = names
                .iter()
                .map(|n| self.observable(n).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            return bounds::multi_observable_product(&obs, psi, self.nth_aux(aux_names, 0)?);
        }
        if names.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "{} needs exactly two observables (got {})",
                spec.id,
                names.len()
            )));
        }
        let (a, b) = (self.observable(&names[0])?, self.observable(&names[1])?);
        match spec.id {
            RelationId::Eq2 => Ok(bounds::robertson_product(a, b, psi)?.report),
            RelationId::Eq3 => bounds::robertson_schrodinger(a, b, psi),
            RelationId::Eq4a => match aux_names {
                Some(_) => bounds::sum_bound_4a(a, b, psi, self.nth_aux(aux_names, 0)?),
                None if self.aux.is_empty() => bounds::sum_bound_4a_canonical(a, b, psi),
                None => bounds::sum_bound_4a(a, b, psi, self.nth_aux(None, 0)?),
            },
            RelationId::Eq4b => bounds::sum_bound_4b(a, b, psi, self.optional_aux(aux_names)?),
            RelationId::Eq5a => bounds::weighted_sum_5a(
                a,
                b,
                psi,
                self.nth_aux(aux_names, 0)?,
                self.nth_aux(aux_names, 1)?,
                lambda,
            ),
            RelationId::Eq5b => {
                // one name: the second auxiliary state, first one canonical
                let (first, second) = match aux_names {
                    Some([one]) => (None, self.aux_state(one)?),
                    Some(_) => (Some(self.nth_aux(aux_names, 0)?), self.nth_aux(aux_names, 1)?),
                    None => (Some(self.nth_aux(None, 0)?), self.nth_aux(None, 1)?),
                };
                bounds::weighted_sum_5b(a, b, psi, first, second, lambda)
            }
            RelationId::Eq13 => bounds::product_one_aux(a, b, psi, self.nth_aux(aux_names, 0)?),
            RelationId::Eq14 => bounds::sum_one_aux(a, b, psi, self.nth_aux(aux_names, 0)?),
            RelationId::Eq15 => {
                bounds::product_two_aux(a, b, psi, self.nth_aux(aux_names, 0)?, self.nth_aux(aux_names, 1)?)
            }
            RelationId::Eq16 => {
                bounds::sum_two_aux(a, b, psi, self.nth_aux(aux_names, 0)?, self.nth_aux(aux_names, 1)?)
            }
            RelationId::Eq17 => bounds::strengthened_product(a, b, psi, self.nth_aux(aux_names, 0)?),
            RelationId::ChenFei => bounds::chen_fei_sum(a, b, psi),
            RelationId::Multi => unreachable!("handled above"),
        }
    }

    /// Evaluates every requested relation; refusals are recorded, not skipped.
    pub fn evaluate(&self) -> ProblemResult {
        let default_pair = self.default_pair();
        let case = match default_pair.as_slice() {
            [a, b] => bounds::case_of(&self.observables[a], &self.observables[b], &self.state).ok(),
            _ => None,
        };
        let outcomes = self
            .relations
            .iter()
            .map(|spec| {
                let names = match (&spec.observables, spec.id) {
                    (Some(n), _) => n.clone(),
                    (None, RelationId::Multi) => self.observables.keys().cloned().collect(),
                    (None, _) => default_pair.clone(),
                };
                match self.evaluate_one(spec, &names) {
                    Ok(report) => RelationOutcome {
                        relation: spec.id,
                        observables: names,
                        report: Some(report),
                        error: None,
                        precondition_violated: false,
                    },
                    Err(e) => RelationOutcome {
                        relation: spec.id,
                        observables: names,
                        report: None,
                        precondition_violated: e.is_precondition(),
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect();
        ProblemResult { case, outcomes }
    }
}
