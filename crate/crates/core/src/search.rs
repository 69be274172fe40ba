//! CDCL-style search over pseudo-Boolean constraints. Instead of proving
//! unsatisfiability alone, the search accumulates a conflict core: the set of
//! original constraint names reached by backward traversal of the
//! implication graph at each conflict.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::engine::{ConsId, Propagation, Reason, SolverState};
use crate::model::{Lit, Model, NormConstraint, Var};
use crate::trace::TraceEvent;

/// Knobs for one search run.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Derive and add a no-good constraint at each conflict.
    pub learning: bool,
    /// Apply saturation and gcd division to learned constraints.
    pub strengthen: bool,
    /// Abort with a `Timeout` outcome once exceeded.
    pub time_limit: Option<Duration>,
    /// Record one trace event per decide/imply/conflict/backtrack.
    pub trace: bool,
    /// Retain the implication graph of the final conflict.
    pub capture_graph: bool,
    /// Value tried first on each decision.
    pub default_value: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            learning: true,
            strengthen: false,
            time_limit: None,
            trace: false,
            capture_graph: false,
            default_value: true,
        }
    }
}

/// Names of the original constraints implicated in infeasibility, in model
/// order. Produced by a completed run it induces an infeasible sub-model;
/// it is generally not minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictCore {
    pub names: Vec<String>,
    /// Constraint count of the model the core was extracted from.
    pub original: usize,
}

impl ConflictCore {
    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Fraction of the original constraints eliminated, in [0, 1].
    pub fn reduction(&self) -> f64 {
        if self.original == 0 {
            return 0.0;
        }
        1.0 - self.names.len() as f64 / self.original as f64
    }

    pub fn reduction_pct(&self) -> f64 {
        (self.reduction() * 10_000.0).round() / 100.0
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// A satisfying total assignment, indexed by variable id.
    Sat(Vec<bool>),
    Unsat(ConflictCore),
    /// The time limit expired. The partial core is what had been gathered
    /// so far and is NOT guaranteed to induce an infeasible sub-model.
    Timeout(ConflictCore),
}

impl SearchOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SearchOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SearchOutcome::Unsat(_))
    }
}

/// Per-run statistics: model shape, core size, and search counters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub cons: usize,
    pub vars: usize,
    pub avg_lit: f64,
    pub red_cons: usize,
    pub conflicts: u64,
    pub decisions: u64,
    pub backtracks: u64,
    pub learned: u64,
    pub max_dl: u32,
    pub time_ms: f64,
}

/// Implication graph of one conflict: assigned variables as nodes, reason
/// constraints as edge labels, plus edges into a synthetic conflict node.
#[derive(Debug, Clone, Default)]
pub struct ConflictGraph {
    pub violated: String,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Clone)]
pub struct GraphNode {
    pub var: String,
    pub value: bool,
    pub level: u32,
    pub decision: bool,
}

#[derive(Debug, Clone)]
pub struct GraphEdge {
    pub from: String,
    /// Target variable name, or "conflict" for edges into the violated
    /// constraint's node.
    pub to: String,
    pub label: String,
}

#[derive(Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: RunStats,
    /// No-good constraints added during the run.
    pub learned: Vec<NormConstraint>,
    pub trace: Option<Vec<TraceEvent>>,
    /// Implication graph of the final conflict, when capture was requested
    /// and at least one conflict occurred.
    pub final_graph: Option<ConflictGraph>,
}

fn display_name(state: &SolverState, cid: ConsId) -> String {
    match state.origin_of(cid) {
        Some(name) => name.to_string(),
        None => format!("learned{}", cid - state.model().normalized().len()),
    }
}

/// Backward traversal of the implication graph from a violated constraint,
/// per the conflict-analysis procedure: visited constraints join the global
/// conflict core, a no-good over the traversed decisions is learned, and the
/// deepest decision variable involved is returned (None for a conflict that
/// rests only on root-level implications).
pub fn analyze_conflict(
    state: &mut SolverState,
    violated: ConsId,
    opts: &SearchOptions,
) -> Option<Var> {
    analyze_conflict_impl(state, violated, opts).0
}

fn analyze_conflict_impl(
    state: &mut SolverState,
    violated: ConsId,
    opts: &SearchOptions,
) -> (Option<Var>, Option<ConflictGraph>) {
    assert!(
        state.slack(state.active(violated)) < 0,
        "analyze_conflict requires a violated constraint"
    );

    let mut stack = vec![violated];
    let mut visited: HashSet<ConsId> = HashSet::new();
    let mut visit_order: Vec<ConsId> = Vec::new();
    let mut latest: Option<Var> = None;
    let mut latest_level: i64 = -1;

    while let Some(cid) = stack.pop() {
        if !visited.insert(cid) {
            continue;
        }
        visit_order.push(cid);
        let n_terms = state.active(cid).terms.len();
        for i in 0..n_terms {
            let (_, lit) = state.active(cid).terms[i];
            let var = lit.var();
            if !state.is_assigned(var) {
                continue;
            }
            match state.reason_of(var) {
                Reason::Implied(reason) => stack.push(reason),
                Reason::Decision => {
                    let level = state.level_of(var) as i64;
                    debug_assert!(
                        level != latest_level || latest == Some(var),
                        "one decision per level"
                    );
                    if level > latest_level {
                        latest_level = level;
                        latest = Some(var);
                    }
                }
            }
        }
    }

    for &cid in &visit_order {
        if let Some(origin) = state.origin_of(cid).map(str::to_string) {
            state.add_to_core(&origin);
        }
    }
    state.counters.conflicts += 1;

    if opts.learning {
        let nogood = derive_learned_constraint(state, &visit_order);
        if !nogood.terms.is_empty() {
            let nogood = if opts.strengthen {
                strengthen(nogood)
            } else {
                nogood
            };
            state.add_learned(nogood);
        }
    }

    let graph = opts
        .capture_graph
        .then(|| capture_graph(state, violated, &visit_order));
    (latest, graph)
}

/// No-good over the decision variables appearing in a conflict traversal:
/// for decisions D with current values v(x), the constraint
/// `sum over x in D of (literal falsified by v(x)) >= 1`. With no decisions
/// involved the result is an empty tautology that callers never add.
pub fn derive_learned_constraint(state: &SolverState, visited: &[ConsId]) -> NormConstraint {
    let mut decision_vars: Vec<Var> = Vec::new();
    let mut seen: HashSet<Var> = HashSet::new();
    for &cid in visited {
        for &(_, lit) in &state.active(cid).terms {
            let var = lit.var();
            if state.is_assigned(var)
                && state.reason_of(var) == Reason::Decision
                && seen.insert(var)
            {
                decision_vars.push(var);
            }
        }
    }
    decision_vars.sort();
    let terms: Vec<(i64, Lit)> = decision_vars
        .iter()
        .map(|&var| {
            let value = state.value(var).expect("decision variable is assigned");
            (1, Lit::new(var, value))
        })
        .collect();
    let degree = if terms.is_empty() { 0 } else { 1 };
    NormConstraint {
        id: usize::MAX, // assigned on insertion
        origin: None,
        terms,
        degree,
    }
}

/// Saturation (coefficients capped at the degree) followed by division by
/// the common gcd with a rounded-up degree. Both transformations preserve
/// the 0/1 solution set of a `>=` constraint with positive coefficients.
fn strengthen(mut nc: NormConstraint) -> NormConstraint {
    if nc.degree <= 0 || nc.terms.is_empty() {
        return nc;
    }
    for (coef, _) in nc.terms.iter_mut() {
        *coef = (*coef).min(nc.degree);
    }
    let gcd = nc
        .terms
        .iter()
        .fold(0i64, |acc, &(coef, _)| gcd_i64(acc, coef));
    if gcd > 1 {
        for (coef, _) in nc.terms.iter_mut() {
            *coef /= gcd;
        }
        nc.degree = (nc.degree + gcd - 1) / gcd;
    }
    nc
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn capture_graph(state: &SolverState, violated: ConsId, visited: &[ConsId]) -> ConflictGraph {
    let model = state.model();
    let mut nodes: Vec<GraphNode> = Vec::new();
    let mut node_seen: HashSet<Var> = HashSet::new();
    let mut edges: Vec<GraphEdge> = Vec::new();

    for &cid in visited {
        for &(_, lit) in &state.active(cid).terms {
            let var = lit.var();
            if state.is_assigned(var) && node_seen.insert(var) {
                nodes.push(GraphNode {
                    var: model.var_name(var).to_string(),
                    value: state.value(var).expect("assigned"),
                    level: state.level_of(var),
                    decision: state.reason_of(var) == Reason::Decision,
                });
            }
        }
    }
    for &cid in visited {
        let label = display_name(state, cid);
        for &(_, lit) in &state.active(cid).terms {
            let var = lit.var();
            if !state.is_assigned(var) {
                continue;
            }
            if state.reason_of(var) == Reason::Implied(cid) {
                for &(_, other) in &state.active(cid).terms {
                    let from = other.var();
                    if from != var && state.is_assigned(from) {
                        edges.push(GraphEdge {
                            from: model.var_name(from).to_string(),
                            to: model.var_name(var).to_string(),
                            label: label.clone(),
                        });
                    }
                }
            }
        }
    }
    let violated_label = display_name(state, violated);
    for &(_, lit) in &state.active(violated).terms {
        let var = lit.var();
        if state.is_assigned(var) {
            edges.push(GraphEdge {
                from: model.var_name(var).to_string(),
                to: "conflict".to_string(),
                label: violated_label.clone(),
            });
        }
    }
    ConflictGraph {
        violated: violated_label,
        nodes,
        edges,
    }
}

fn core_snapshot(state: &SolverState) -> ConflictCore {
    let model = state.model();
    let mut names: Vec<String> = state.core().iter().cloned().collect();
    model.sort_names(&mut names);
    ConflictCore {
        names,
        original: model.raw_constraints().len(),
    }
}

/// Statistics snapshot after a finished search.
pub fn stats_snapshot(state: &SolverState, outcome: &SearchOutcome, time_ms: f64) -> RunStats {
    let model = state.model();
    let red_cons = match outcome {
        SearchOutcome::Sat(_) => 0,
        SearchOutcome::Unsat(core) | SearchOutcome::Timeout(core) => core.size(),
    };
    RunStats {
        cons: model.raw_constraints().len(),
        vars: model.num_vars(),
        avg_lit: model.avg_terms(),
        red_cons,
        conflicts: state.counters.conflicts,
        decisions: state.counters.decisions,
        backtracks: state.counters.backtracks,
        learned: state.counters.learned,
        max_dl: state.counters.max_dl,
        time_ms,
    }
}

/// Most recent decision on the trail strictly below `level`.
fn previous_decision(state: &SolverState, level: u32) -> Option<Var> {
    state
        .trail()
        .iter()
        .rev()
        .find(|e| e.reason == Reason::Decision && e.level < level)
        .map(|e| e.var)
}

/// Runs the conflict-set extraction search to completion.
///
/// The loop propagates; on a conflict it analyzes the implication graph and
/// either flips the deepest involved decision whose sibling value is
/// untried, walks back to an earlier decision when both values were tried,
/// or reports infeasibility with the accumulated core when no decision
/// remains. A clean fixpoint with variables left picks the lowest-id
/// unassigned variable and decides the default value.
pub fn extract_conflict_set(model: &Model, opts: &SearchOptions) -> SearchResult {
    let start = Instant::now();
    let mut state = if opts.trace {
        SolverState::with_trace(model)
    } else {
        SolverState::new(model)
    };
    let mut final_graph: Option<ConflictGraph> = None;

    let outcome = 'search: loop {
        if let Some(limit) = opts.time_limit {
            if start.elapsed() > limit {
                break SearchOutcome::Timeout(core_snapshot(&state));
            }
        }
        match state.propagate() {
            Propagation::Conflict(cid) => {
                state.trace_event(TraceEvent::Conflict {
                    cons: cid,
                    level: state.decision_level(),
                });
                let (mut latest, graph) = analyze_conflict_impl(&mut state, cid, opts);
                if graph.is_some() {
                    final_graph = graph;
                }
                loop {
                    let Some(var) = latest else {
                        break 'search SearchOutcome::Unsat(core_snapshot(&state));
                    };
                    let value = state.value(var).expect("decision variable is assigned");
                    state.mark_tried(var, value);
                    let tried = state.tried_values(var).expect("just marked");
                    if tried[0] && tried[1] {
                        // both branches explored under this context
                        state.clear_tried(var);
                        let level = state.level_of(var);
                        latest = previous_decision(&state, level);
                        continue;
                    }
                    let level = state.level_of(var);
                    state.backtrack(level);
                    state.mark_tried(var, value);
                    state.decide(var, !value);
                    break;
                }
            }
            Propagation::NoConflict => match state.first_unassigned() {
                None => {
                    let assignment: Vec<bool> = (0..model.num_vars())
                        .map(|i| state.value(Var(i as u32)).expect("all assigned"))
                        .collect();
                    assert!(
                        model.normalized().iter().all(|nc| nc.evaluate(&assignment)),
                        "complete assignment must satisfy the model"
                    );
                    break SearchOutcome::Sat(assignment);
                }
                Some(var) => state.decide(var, opts.default_value),
            },
        }
    };

    let time_ms = start.elapsed().as_secs_f64() * 1000.0;
    let label = match &outcome {
        SearchOutcome::Sat(_) => "SAT",
        SearchOutcome::Unsat(_) => "UNSAT",
        SearchOutcome::Timeout(_) => "TIMEOUT",
    };
    let core_size = match &outcome {
        SearchOutcome::Sat(_) => 0,
        SearchOutcome::Unsat(core) | SearchOutcome::Timeout(core) => core.size(),
    };
    state.trace_event(TraceEvent::Result {
        outcome: label,
        core_size,
    });
    let stats = stats_snapshot(&state, &outcome, time_ms);
    let learned = state.learned().to_vec();
    let trace = state.take_trace();
    SearchResult {
        outcome,
        stats,
        learned,
        trace,
        final_graph,
    }
}
