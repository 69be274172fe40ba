//! Assignment trail with decision levels and implication reasons, plus
//! slack-based unit propagation over normalized constraints.

use std::collections::{BTreeSet, HashMap};

use crate::model::{Model, NormConstraint, Var};
use crate::trace::TraceEvent;

/// Index into the active constraint set: ids below the model's normalized
/// count refer to original constraints, ids at or above it to learned ones.
pub type ConsId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    Decision,
    Implied(ConsId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailEntry {
    pub var: Var,
    pub value: bool,
    pub level: u32,
    pub reason: Reason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    NoConflict,
    Conflict(ConsId),
}

/// Search counters matching the per-run statistics report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub decisions: u64,
    pub backtracks: u64,
    pub conflicts: u64,
    pub learned: u64,
    pub max_dl: u32,
}

/// Mutable solver state for one search over an immutable model: the trail,
/// per-variable assignment/level/reason, the tried-decision ledger, learned
/// constraints, and the accumulated conflict core.
pub struct SolverState<'m> {
    model: &'m Model,
    assignment: Vec<Option<bool>>,
    var_level: Vec<u32>,
    var_reason: Vec<Reason>,
    trail: Vec<TrailEntry>,
    level: u32,
    tried: HashMap<Var, [bool; 2]>,
    learned: Vec<NormConstraint>,
    core: BTreeSet<String>,
    pub counters: Counters,
    trace: Option<Vec<TraceEvent>>,
}

impl<'m> SolverState<'m> {
    pub fn new(model: &'m Model) -> Self {
        let n = model.num_vars();
        SolverState {
            model,
            assignment: vec![None; n],
            var_level: vec![0; n],
            var_reason: vec![Reason::Decision; n],
            trail: Vec::new(),
            level: 0,
            tried: HashMap::new(),
            learned: Vec::new(),
            core: BTreeSet::new(),
            counters: Counters::default(),
            trace: None,
        }
    }

    pub fn with_trace(model: &'m Model) -> Self {
        let mut state = SolverState::new(model);
        state.trace = Some(Vec::new());
        state
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn trail(&self) -> &[TrailEntry] {
        &self.trail
    }

    pub fn decision_level(&self) -> u32 {
        self.level
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.assignment[var.index()]
    }

    pub fn is_assigned(&self, var: Var) -> bool {
        self.assignment[var.index()].is_some()
    }

    /// Decision level of an assigned variable.
    pub fn level_of(&self, var: Var) -> u32 {
        debug_assert!(self.is_assigned(var));
        self.var_level[var.index()]
    }

    /// Reason of an assigned variable.
    pub fn reason_of(&self, var: Var) -> Reason {
        debug_assert!(self.is_assigned(var));
        self.var_reason[var.index()]
    }

    pub fn all_assigned(&self) -> bool {
        self.trail.len() == self.assignment.len()
    }

    /// Lowest-id unassigned variable, the fixed decision order.
    pub fn first_unassigned(&self) -> Option<Var> {
        self.assignment
            .iter()
            .position(Option::is_none)
            .map(|i| Var(i as u32))
    }

    pub fn num_active(&self) -> usize {
        self.model.normalized().len() + self.learned.len()
    }

    pub fn active(&self, cid: ConsId) -> &NormConstraint {
        let n = self.model.normalized().len();
        if cid < n {
            &self.model.normalized()[cid]
        } else {
            &self.learned[cid - n]
        }
    }

    /// Origin name of an active constraint; learned constraints have none.
    pub fn origin_of(&self, cid: ConsId) -> Option<&str> {
        self.active(cid).origin.as_deref()
    }

    pub fn add_learned(&mut self, mut nc: NormConstraint) -> ConsId {
        let cid = self.num_active();
        nc.id = cid;
        if let Some(events) = self.trace.as_mut() {
            events.push(TraceEvent::Learn {
                cons: cid,
                degree: nc.degree,
                lits: nc.terms.iter().map(|&(_, l)| l).collect(),
            });
        }
        self.learned.push(nc);
        self.counters.learned += 1;
        cid
    }

    pub fn learned(&self) -> &[NormConstraint] {
        &self.learned
    }

    /// Adds an origin name to the conflict core. Returns true if new.
    pub fn add_to_core(&mut self, name: &str) -> bool {
        let inserted = self.core.insert(name.to_string());
        if inserted {
            if let Some(events) = self.trace.as_mut() {
                events.push(TraceEvent::CoreAdd {
                    name: name.to_string(),
                });
            }
        }
        inserted
    }

    pub fn core(&self) -> &BTreeSet<String> {
        &self.core
    }

    pub fn tried_values(&self, var: Var) -> Option<[bool; 2]> {
        self.tried.get(&var).copied()
    }

    pub fn mark_tried(&mut self, var: Var, value: bool) {
        self.tried.entry(var).or_insert([false, false])[value as usize] = true;
    }

    pub fn clear_tried(&mut self, var: Var) {
        self.tried.remove(&var);
    }

    pub fn trace_event(&mut self, ev: TraceEvent) {
        if let Some(events) = self.trace.as_mut() {
            events.push(ev);
        }
    }

    pub fn take_trace(&mut self) -> Option<Vec<TraceEvent>> {
        self.trace.take()
    }

    /// Slack of a constraint under the current partial assignment: the sum
    /// of coefficients over literals not yet falsified, minus the degree.
    /// Negative slack means no extension can satisfy the constraint.
    pub fn slack(&self, nc: &NormConstraint) -> i64 {
        let mut s = -nc.degree;
        for &(coef, lit) in &nc.terms {
            let falsified = match self.assignment[lit.var().index()] {
                Some(v) => !lit.satisfied_by(v),
                None => false,
            };
            if !falsified {
                s += coef;
            }
        }
        s
    }

    fn slack_of(&self, cid: ConsId) -> i64 {
        self.slack(self.active(cid))
    }

    fn assign(&mut self, var: Var, value: bool, reason: Reason) {
        debug_assert!(!self.is_assigned(var));
        // levels never decrease along the trail
        debug_assert!(self.trail.last().is_none_or(|e| e.level <= self.level));
        self.assignment[var.index()] = Some(value);
        self.var_level[var.index()] = self.level;
        self.var_reason[var.index()] = reason;
        self.trail.push(TrailEntry {
            var,
            value,
            level: self.level,
            reason,
        });
        if let Some(events) = self.trace.as_mut() {
            events.push(match reason {
                Reason::Decision => TraceEvent::Decide {
                    var: var.0,
                    value,
                    level: self.level,
                },
                Reason::Implied(cons) => TraceEvent::Imply {
                    var: var.0,
                    value,
                    level: self.level,
                    cons,
                },
            });
        }
    }

    /// Runs unit propagation to fixpoint. Scans all active constraints in id
    /// order each round; a constraint with negative slack is returned as a
    /// conflict, and any unassigned literal whose coefficient exceeds the
    /// slack is assigned true at the current level with the constraint
    /// recorded as its reason.
    pub fn propagate(&mut self) -> Propagation {
        loop {
            let mut changed = false;
            for cid in 0..self.num_active() {
                if self.active(cid).is_tautology() {
                    continue;
                }
                let s = self.slack_of(cid);
                if s < 0 {
                    return Propagation::Conflict(cid);
                }
                let n_terms = self.active(cid).terms.len();
                for i in 0..n_terms {
                    let (coef, lit) = self.active(cid).terms[i];
                    if coef > s && !self.is_assigned(lit.var()) {
                        self.assign(lit.var(), lit.satisfying_value(), Reason::Implied(cid));
                        changed = true;
                    }
                }
            }
            if !changed {
                return Propagation::NoConflict;
            }
        }
    }

    /// Opens a new decision level and assigns `var = value` as a decision.
    pub fn decide(&mut self, var: Var, value: bool) {
        assert!(
            !self.is_assigned(var),
            "cannot decide assigned variable x{}",
            var.0
        );
        self.level += 1;
        self.counters.decisions += 1;
        self.counters.max_dl = self.counters.max_dl.max(self.level);
        self.assign(var, value, Reason::Decision);
    }

    /// Removes every trail entry at `level` or deeper, so the decision made
    /// at `level` becomes free for flipping, and sets the current level to
    /// `level - 1` (saturating at the root). Tried-value ledger entries of
    /// popped decisions are cleared.
    pub fn backtrack(&mut self, level: u32) {
        assert!(
            level <= self.level,
            "backtrack level {level} out of range (current {})",
            self.level
        );
        while let Some(entry) = self.trail.last() {
            if entry.level < level {
                break;
            }
            let entry = self.trail.pop().expect("checked non-empty");
            self.assignment[entry.var.index()] = None;
            if entry.reason == Reason::Decision {
                self.tried.remove(&entry.var);
            }
        }
        self.level = level.saturating_sub(1);
        self.counters.backtracks += 1;
        if let Some(events) = self.trace.as_mut() {
            events.push(TraceEvent::Backtrack { level });
        }
    }
}
