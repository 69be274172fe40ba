//! Pseudo-Boolean constraint models: raw user constraints over named binary
//! variables, plus their normalized form used by the propagation engine.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};

use crate::ModelError;

/// Index of a Boolean variable within a model. Ids are dense: `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable or its negation, packed as `var << 1 | negated`.
///
/// A positive literal is satisfied when its variable takes value 1, a
/// negative literal when it takes value 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn positive(var: Var) -> Lit {
        Lit(var.0 << 1)
    }

    #[inline]
    pub fn negative(var: Var) -> Lit {
        Lit(var.0 << 1 | 1)
    }

    #[inline]
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var.0 << 1 | negated as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    /// The variable value that makes this literal true.
    #[inline]
    pub fn satisfying_value(self) -> bool {
        !self.is_negated()
    }

    #[inline]
    pub fn satisfied_by(self, value: bool) -> bool {
        value != self.is_negated()
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            write!(f, "~x{}", self.var().0)
        } else {
            write!(f, "x{}", self.var().0)
        }
    }
}

/// Constraint sense of a raw (user-facing) constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Le => write!(f, "<="),
            Sense::Ge => write!(f, ">="),
            Sense::Eq => write!(f, "="),
        }
    }
}

/// A named linear constraint `sum(coef * var) sense rhs` as written by the
/// user. Coefficients are non-zero and variables distinct; the total
/// magnitude `sum |coef| + |rhs|` must fit in an `i64`, which makes all
/// later slack arithmetic exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConstraint {
    pub name: String,
    pub terms: Vec<(i64, Var)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Normalized constraint: positive coefficients over literals with a `>=`
/// degree. `origin` names the raw constraint it was derived from; learned
/// constraints have no origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormConstraint {
    pub id: usize,
    pub origin: Option<String>,
    pub terms: Vec<(i64, Lit)>,
    pub degree: i64,
}

impl NormConstraint {
    /// A constraint with degree <= 0 holds under every assignment and never
    /// propagates or conflicts.
    pub fn is_tautology(&self) -> bool {
        self.degree <= 0
    }

    /// Evaluates the constraint under a total assignment indexed by variable id.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        let mut sum: i64 = 0;
        for &(coef, lit) in &self.terms {
            let value = *assignment
                .get(lit.var().index())
                .unwrap_or_else(|| panic!("variable x{} is unassigned", lit.var().0));
            if lit.satisfied_by(value) {
                sum += coef;
            }
        }
        sum >= self.degree
    }
}

/// Rewrites a raw constraint into normalized `>=` form.
///
/// `GE` is kept, `LE` is negated into `GE`, and `EQ` splits into both sides.
/// Negative coefficients move to the negated literal, shifting the degree by
/// their magnitude. Ids are assigned from `next_id` upward.
pub fn normalize(raw: &RawConstraint, next_id: usize) -> Vec<NormConstraint> {
    let ge = |id: usize, flip_sign: bool| {
        let mut degree = if flip_sign { -raw.rhs } else { raw.rhs };
        let mut terms = Vec::with_capacity(raw.terms.len());
        for &(coef, var) in &raw.terms {
            let a = if flip_sign { -coef } else { coef };
            if a > 0 {
                terms.push((a, Lit::positive(var)));
            } else {
                terms.push((-a, Lit::negative(var)));
                degree += -a;
            }
        }
        NormConstraint {
            id,
            origin: Some(raw.name.clone()),
            terms,
            degree,
        }
    };
    match raw.sense {
        Sense::Ge => vec![ge(next_id, false)],
        Sense::Le => vec![ge(next_id, true)],
        Sense::Eq => vec![ge(next_id, false), ge(next_id + 1, true)],
    }
}

/// A diagnosable model: named variables, raw constraints, and the
/// normalized forms with an origin index mapping each raw name to its norm
/// ids. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Model {
    var_names: Vec<String>,
    var_ids: HashMap<String, Var>,
    raw: Vec<RawConstraint>,
    raw_positions: HashMap<String, usize>,
    normalized: Vec<NormConstraint>,
    origin_index: HashMap<String, Vec<usize>>,
}

impl Model {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_name(&self, var: Var) -> &str {
        &self.var_names[var.index()]
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.var_ids.get(name).copied()
    }

    pub fn raw_constraints(&self) -> &[RawConstraint] {
        &self.raw
    }

    pub fn raw_by_name(&self, name: &str) -> Option<&RawConstraint> {
        self.raw_positions.get(name).map(|&i| &self.raw[i])
    }

    /// Position of a raw constraint in model (file) order.
    pub fn raw_position(&self, name: &str) -> Option<usize> {
        self.raw_positions.get(name).copied()
    }

    pub fn normalized(&self) -> &[NormConstraint] {
        &self.normalized
    }

    /// Norm ids derived from the named raw constraint: one for `<=`/`>=`,
    /// two for `=`.
    pub fn norm_ids_of(&self, name: &str) -> &[usize] {
        self.origin_index
            .get(name)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Mean raw term count per constraint; 0 for an empty model.
    pub fn avg_terms(&self) -> f64 {
        if self.raw.is_empty() {
            return 0.0;
        }
        let total: usize = self.raw.iter().map(|c| c.terms.len()).sum();
        total as f64 / self.raw.len() as f64
    }

    /// Orders a set of raw constraint names by their position in the model.
    pub fn sort_names(&self, names: &mut [String]) {
        names.sort_by_key(|n| self.raw_position(n).unwrap_or(usize::MAX));
    }

    /// Sub-model induced by a subset of raw constraint names. Only the
    /// variables those constraints mention are kept (remapped to dense ids);
    /// feasibility is unchanged since dropped variables are unconstrained.
    pub fn induced(&self, names: &BTreeSet<String>) -> Model {
        let mut builder = Model::builder();
        let mut remap: HashMap<Var, Var> = HashMap::new();
        for raw in &self.raw {
            if !names.contains(&raw.name) {
                continue;
            }
            for &(_, var) in &raw.terms {
                if let std::collections::hash_map::Entry::Vacant(slot) = remap.entry(var) {
                    let new = builder
                        .variable(self.var_name(var))
                        .expect("unique names stay unique in a sub-model");
                    slot.insert(new);
                }
            }
        }
        for raw in &self.raw {
            if !names.contains(&raw.name) {
                continue;
            }
            let terms = raw
                .terms
                .iter()
                .map(|&(c, v)| (c, remap[&v]))
                .collect();
            builder
                .constraint(&raw.name, terms, raw.sense, raw.rhs)
                .expect("constraints of a valid model stay valid");
        }
        builder.finish()
    }
}

/// Incremental model construction with invariant checks at each step.
#[derive(Debug, Default)]
pub struct ModelBuilder {
    var_names: Vec<String>,
    var_ids: HashMap<String, Var>,
    raw: Vec<RawConstraint>,
    raw_positions: HashMap<String, usize>,
}

impl ModelBuilder {
    pub fn variable(&mut self, name: &str) -> Result<Var, ModelError> {
        if name.is_empty() {
            return Err(ModelError::EmptyVariableName);
        }
        if self.var_ids.contains_key(name) {
            return Err(ModelError::DuplicateVariable(name.to_string()));
        }
        let var = Var(self.var_names.len() as u32);
        self.var_names.push(name.to_string());
        self.var_ids.insert(name.to_string(), var);
        Ok(var)
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.var_ids.get(name).copied()
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn constraint(
        &mut self,
        name: &str,
        terms: Vec<(i64, Var)>,
        sense: Sense,
        rhs: i64,
    ) -> Result<(), ModelError> {
        if name.is_empty() {
            return Err(ModelError::EmptyConstraintName);
        }
        if self.raw_positions.contains_key(name) {
            return Err(ModelError::DuplicateConstraintName(name.to_string()));
        }
        let mut seen = BTreeSet::new();
        let mut magnitude: i128 = rhs.unsigned_abs() as i128;
        for &(coef, var) in &terms {
            if coef == 0 {
                return Err(ModelError::ZeroCoefficient {
                    constraint: name.to_string(),
                    var: self.var_names[var.index()].clone(),
                });
            }
            if var.index() >= self.var_names.len() {
                return Err(ModelError::UnknownVariable {
                    constraint: name.to_string(),
                    var: format!("#{}", var.0),
                });
            }
            if !seen.insert(var) {
                return Err(ModelError::DuplicateTermVariable {
                    constraint: name.to_string(),
                    var: self.var_names[var.index()].clone(),
                });
            }
            magnitude += coef.unsigned_abs() as i128;
        }
        if magnitude > i64::MAX as i128 {
            return Err(ModelError::MagnitudeOverflow {
                constraint: name.to_string(),
            });
        }
        self.raw_positions.insert(name.to_string(), self.raw.len());
        self.raw.push(RawConstraint {
            name: name.to_string(),
            terms,
            sense,
            rhs,
        });
        Ok(())
    }

    pub fn finish(self) -> Model {
        let mut normalized = Vec::new();
        let mut origin_index: HashMap<String, Vec<usize>> = HashMap::new();
        for raw in &self.raw {
            let ncs = normalize(raw, normalized.len());
            origin_index.insert(raw.name.clone(), ncs.iter().map(|nc| nc.id).collect());
            normalized.extend(ncs);
        }
        Model {
            var_names: self.var_names,
            var_ids: self.var_ids,
            raw: self.raw,
            raw_positions: self.raw_positions,
            normalized,
            origin_index,
        }
    }
}
