//! Reference oracles and generators used by the test suites: exhaustive
//! enumeration over raw constraints, independent of the normalization and
//! propagation paths it checks. Exponential in the variable count; callers
//! keep instances small.
#![doc(hidden)]

use std::collections::BTreeSet;

use rand::Rng;

use crate::model::{Model, RawConstraint, Sense, Var};

/// Evaluates a raw constraint by direct arithmetic on its original form.
pub fn eval_raw(raw: &RawConstraint, assignment: &[bool]) -> bool {
    let lhs: i64 = raw
        .terms
        .iter()
        .map(|&(c, v)| if assignment[v.index()] { c } else { 0 })
        .sum();
    match raw.sense {
        Sense::Le => lhs <= raw.rhs,
        Sense::Ge => lhs >= raw.rhs,
        Sense::Eq => lhs == raw.rhs,
    }
}

/// Exhaustive satisfiability check over all `2^n` assignments, returning a
/// witness if one exists.
pub fn brute_force_solution(model: &Model) -> Option<Vec<bool>> {
    let n = model.num_vars();
    assert!(n <= 24, "brute force oracle limited to 24 variables");
    for bits in 0..(1u64 << n) {
        let assignment: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        if model
            .raw_constraints()
            .iter()
            .all(|raw| eval_raw(raw, &assignment))
        {
            return Some(assignment);
        }
    }
    None
}

pub fn brute_force_feasible(model: &Model) -> bool {
    brute_force_solution(model).is_some()
}

/// Feasibility of the sub-model induced by a name subset, by enumeration.
pub fn brute_force_subset_feasible(model: &Model, names: &BTreeSet<String>) -> bool {
    brute_force_feasible(&model.induced(names))
}

/// Seeded random model over at most `max_vars` variables and `max_cons`
/// constraints, mixing senses and signed coefficients. Bounds sit near the
/// midpoint of each constraint's achievable range (with a small chance of
/// going past it), so infeasibility usually emerges from constraint
/// interaction and exercises real search rather than root-level conflicts
/// only.
pub fn random_model(rng: &mut impl Rng, max_vars: usize, max_cons: usize) -> Model {
    let n_vars = rng.gen_range(max_vars.min(4)..=max_vars);
    let n_cons = rng.gen_range((max_cons / 2).max(1)..=max_cons);
    let mut b = Model::builder();
    let vars: Vec<Var> = (0..n_vars)
        .map(|i| b.variable(&format!("v{i}")).unwrap())
        .collect();
    for c in 0..n_cons {
        let width = rng.gen_range(n_vars.min(2)..=n_vars.min(5));
        let mut picked: Vec<usize> = (0..n_vars).collect();
        for i in 0..width {
            let j = rng.gen_range(i..n_vars);
            picked.swap(i, j);
        }
        let mut terms = Vec::with_capacity(width);
        for &vi in picked.iter().take(width) {
            let mag = if rng.gen_bool(0.8) { 1 } else { 2 };
            let coef = if rng.gen() { mag } else { -mag };
            terms.push((coef, vars[vi]));
        }
        let sense = match rng.gen_range(0..20) {
            0..=11 => Sense::Ge,
            12..=16 => Sense::Le,
            _ => Sense::Eq,
        };
        let pos: i64 = terms.iter().map(|&(c, _)| c.max(0)).sum();
        let neg: i64 = terms.iter().map(|&(c, _)| (-c).max(0)).sum();
        let mut rhs = (pos - neg).div_euclid(2) + rng.gen_range(-1..=1);
        if rng.gen_bool(0.05) {
            rhs += if rng.gen() { 2 } else { -2 };
        }
        b.constraint(&format!("c{c}"), terms, sense, rhs).unwrap();
    }
    b.finish()
}

/// Pigeonhole assignment model: every pigeon needs a hole, holes take at
/// most one pigeon. Infeasible iff `pigeons > holes`, and proving either
/// verdict requires genuine search (no root propagation fires).
pub fn pigeonhole_model(pigeons: u32, holes: u32) -> Model {
    let mut b = Model::builder();
    let mut grid = Vec::new();
    for p in 0..pigeons {
        let mut row = Vec::new();
        for h in 0..holes {
            row.push(b.variable(&format!("p{p}h{h}")).unwrap());
        }
        grid.push(row);
    }
    for (p, row) in grid.iter().enumerate() {
        let terms: Vec<(i64, Var)> = row.iter().map(|&v| (1, v)).collect();
        b.constraint(&format!("pigeon{p}"), terms, Sense::Ge, 1)
            .unwrap();
    }
    for h in 0..holes as usize {
        let terms: Vec<(i64, Var)> = grid.iter().map(|row| (1, row[h])).collect();
        b.constraint(&format!("hole{h}"), terms, Sense::Le, 1)
            .unwrap();
    }
    b.finish()
}

/// Keeps generating until an infeasible model is found.
pub fn random_infeasible_model(
    rng: &mut impl Rng,
    max_vars: usize,
    max_cons: usize,
) -> Model {
    loop {
        let m = random_model(rng, max_vars, max_cons);
        if !brute_force_feasible(&m) {
            return m;
        }
    }
}
