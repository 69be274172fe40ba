//! Feasibility oracle and IIS minimization: QuickXplain, the deletion
//! filter, the hybrid additive-deletion method, and an IIS verifier.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::model::Model;
use crate::search::{extract_conflict_set, SearchOptions, SearchOutcome, SearchResult};
use crate::MinimizeError;

/// Extraction / minimization method tags as they appear in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "csea")]
    Csea,
    #[serde(rename = "csea+qx")]
    CseaQx,
    #[serde(rename = "qx")]
    Qx,
    #[serde(rename = "deletion")]
    Deletion,
    #[serde(rename = "additive")]
    Additive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Csea => "csea",
            Method::CseaQx => "csea+qx",
            Method::Qx => "qx",
            Method::Deletion => "deletion",
            Method::Additive => "additive",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csea" => Ok(Method::Csea),
            "csea+qx" => Ok(Method::CseaQx),
            "qx" => Ok(Method::Qx),
            "deletion" => Ok(Method::Deletion),
            "additive" => Ok(Method::Additive),
            other => Err(format!(
                "unknown method `{other}` (expected csea, csea+qx, qx, deletion, or additive)"
            )),
        }
    }
}

/// A minimal infeasible subset together with how it was obtained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IISResult {
    pub method: Method,
    pub iis: Vec<String>,
    pub oracle_calls: u64,
    pub time_ms: f64,
    pub verified: bool,
}

/// Feasibility oracle over constraint-name subsets, backed by the complete
/// search. Answers are memoized per oracle (keyed by the sorted name set)
/// unless disabled; the call counter increments once per non-memoized query.
pub struct Oracle<'m> {
    model: &'m Model,
    time_limit: Option<Duration>,
    memo: Option<HashMap<Vec<String>, bool>>,
    calls: u64,
}

impl<'m> Oracle<'m> {
    pub fn new(model: &'m Model, time_limit: Option<Duration>, memo: bool) -> Self {
        Oracle {
            model,
            time_limit,
            memo: memo.then(HashMap::new),
            calls: 0,
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    fn solve(&self, names: &[String]) -> Result<bool, MinimizeError> {
        let set: BTreeSet<String> = names.iter().cloned().collect();
        let sub = self.model.induced(&set);
        let opts = SearchOptions {
            time_limit: self.time_limit,
            ..SearchOptions::default()
        };
        match extract_conflict_set(&sub, &opts).outcome {
            SearchOutcome::Sat(_) => Ok(true),
            SearchOutcome::Unsat(_) => Ok(false),
            SearchOutcome::Timeout(_) => Err(MinimizeError::Timeout { partial: vec![] }),
        }
    }

    /// True iff the sub-model induced by `names` has a satisfying
    /// assignment.
    pub fn is_feasible(&mut self, names: &[String]) -> Result<bool, MinimizeError> {
        for name in names {
            assert!(
                self.model.raw_position(name).is_some(),
                "unknown constraint `{name}` in oracle query"
            );
        }
        let mut key: Vec<String> = names.to_vec();
        key.sort();
        key.dedup();
        if let Some(cache) = &self.memo {
            if let Some(&hit) = cache.get(&key) {
                return Ok(hit);
            }
        }
        self.calls += 1;
        let answer = self.solve(&key)?;
        if let Some(cache) = &mut self.memo {
            cache.insert(key, answer);
        }
        Ok(answer)
    }
}

fn model_order(model: &Model, names: &mut [String]) {
    model.sort_names(names);
}

/// QuickXplain over an ordered candidate list: returns a minimal subset S of
/// `candidates` such that `background` together with S is infeasible, by the
/// standard preferred-constraints divide and conquer. Requires the
/// background alone to be feasible; errors if background plus candidates is
/// feasible (one upfront oracle query).
pub fn quickxplain(
    oracle: &mut Oracle,
    background: &[String],
    candidates: &[String],
) -> Result<IISResult, MinimizeError> {
    let start = Instant::now();
    let calls_before = oracle.calls();
    let mut all: Vec<String> = background.to_vec();
    all.extend_from_slice(candidates);
    if oracle.is_feasible(&all)? {
        return Err(MinimizeError::Precondition(
            "the input constraint set is feasible".to_string(),
        ));
    }
    if candidates.is_empty() {
        return Err(MinimizeError::Precondition(
            "background is already infeasible with no candidates".to_string(),
        ));
    }
    let mut committed: Vec<String> = Vec::new();
    let result = qx_rec(oracle, background, false, candidates, &mut committed);
    let mut iis = match result {
        Ok(iis) => iis,
        Err(MinimizeError::Timeout { .. }) => {
            return Err(MinimizeError::Timeout { partial: committed })
        }
        Err(other) => return Err(other),
    };
    model_order(oracle.model(), &mut iis);
    Ok(IISResult {
        method: Method::Qx,
        iis,
        oracle_calls: oracle.calls() - calls_before,
        time_ms: start.elapsed().as_secs_f64() * 1000.0,
        verified: false,
    })
}

fn qx_rec(
    oracle: &mut Oracle,
    background: &[String],
    has_delta: bool,
    candidates: &[String],
    committed: &mut Vec<String>,
) -> Result<Vec<String>, MinimizeError> {
    if has_delta && !oracle.is_feasible(background)? {
        return Ok(Vec::new());
    }
    if candidates.len() == 1 {
        committed.push(candidates[0].clone());
        return Ok(candidates.to_vec());
    }
    let mid = candidates.len() / 2;
    let (first, second) = candidates.split_at(mid);
    let mut with_first: Vec<String> = background.to_vec();
    with_first.extend_from_slice(first);
    let need_second = qx_rec(oracle, &with_first, !first.is_empty(), second, committed)?;
    let mut with_second: Vec<String> = background.to_vec();
    with_second.extend_from_slice(&need_second);
    let need_first = qx_rec(oracle, &with_second, !need_second.is_empty(), first, committed)?;
    Ok(need_first.into_iter().chain(need_second).collect())
}

/// Deletion filter: tentatively removes each constraint in model order,
/// keeping removals that preserve infeasibility. Makes exactly one oracle
/// query per input name. The precondition (an infeasible input) is checked
/// by a direct search before the filtering loop, outside the oracle's call
/// accounting.
pub fn deletion_filter(
    oracle: &mut Oracle,
    names: &[String],
) -> Result<IISResult, MinimizeError> {
    let start = Instant::now();
    let calls_before = oracle.calls();
    match oracle.solve(names)? {
        true => Err(MinimizeError::Precondition(
            "the input constraint set is feasible".to_string(),
        )),
        false => {
            let mut kept: Vec<String> = names.to_vec();
            model_order(oracle.model(), &mut kept);
            let mut i = 0;
            while i < kept.len() {
                let mut trial = kept.clone();
                trial.remove(i);
                match oracle.is_feasible(&trial) {
                    Ok(false) => kept = trial,
                    Ok(true) => i += 1,
                    Err(MinimizeError::Timeout { .. }) => {
                        return Err(MinimizeError::Timeout { partial: kept })
                    }
                    Err(other) => return Err(other),
                }
            }
            Ok(IISResult {
                method: Method::Deletion,
                iis: kept,
                oracle_calls: oracle.calls() - calls_before,
                time_ms: start.elapsed().as_secs_f64() * 1000.0,
                verified: false,
            })
        }
    }
}

/// Hybrid additive-deletion. The additive phase grows a test set in input
/// order until it turns infeasible; the constraint that tipped it joins the
/// kernel and growth restarts over the infeasible prefix's members. Once the
/// kernel itself is infeasible, a deletion pass trims it to an IIS. A
/// feasible input is detected when the first growth pass exhausts all
/// candidates without hitting infeasibility.
pub fn additive_deletion(
    oracle: &mut Oracle,
    names: &[String],
) -> Result<IISResult, MinimizeError> {
    let start = Instant::now();
    let calls_before = oracle.calls();
    let mut kernel: Vec<String> = Vec::new();
    match additive_inner(oracle, names, &mut kernel) {
        Ok(()) => {}
        Err(MinimizeError::Timeout { .. }) => {
            return Err(MinimizeError::Timeout { partial: kernel })
        }
        Err(other) => return Err(other),
    }
    model_order(oracle.model(), &mut kernel);
    let mut i = 0;
    while i < kernel.len() {
        let mut trial = kernel.clone();
        trial.remove(i);
        match oracle.is_feasible(&trial) {
            Ok(false) => kernel = trial,
            Ok(true) => i += 1,
            Err(MinimizeError::Timeout { .. }) => {
                return Err(MinimizeError::Timeout { partial: kernel })
            }
            Err(other) => return Err(other),
        }
    }
    Ok(IISResult {
        method: Method::Additive,
        iis: kernel,
        oracle_calls: oracle.calls() - calls_before,
        time_ms: start.elapsed().as_secs_f64() * 1000.0,
        verified: false,
    })
}

fn additive_inner(
    oracle: &mut Oracle,
    names: &[String],
    kernel: &mut Vec<String>,
) -> Result<(), MinimizeError> {
    let mut candidates: Vec<String> = names.to_vec();
    loop {
        if !kernel.is_empty() && !oracle.is_feasible(kernel)? {
            return Ok(());
        }
        let mut test: Vec<String> = kernel.clone();
        let mut stopped = false;
        for name in candidates.clone() {
            if kernel.contains(&name) {
                continue;
            }
            test.push(name.clone());
            if !oracle.is_feasible(&test)? {
                kernel.push(name);
                candidates = test;
                stopped = true;
                break;
            }
        }
        if !stopped {
            return Err(MinimizeError::Precondition(
                "the input constraint set is feasible".to_string(),
            ));
        }
    }
}

/// Output of the combined pipeline: the conflict-set extraction run plus
/// the QuickXplain minimization of its core.
#[derive(Debug)]
pub struct CoreThenIis {
    pub iis: IISResult,
    pub search: SearchResult,
}

/// Runs the extraction search, then QuickXplain with an empty background
/// over the core's names in model order. `oracle_calls` covers only the
/// minimization phase; `time_ms` covers both phases.
pub fn csea_then_quickxplain(
    model: &Model,
    opts: &SearchOptions,
    memo: bool,
) -> Result<CoreThenIis, MinimizeError> {
    let start = Instant::now();
    let search = extract_conflict_set(model, opts);
    let core = match &search.outcome {
        SearchOutcome::Sat(_) => {
            return Err(MinimizeError::Precondition("model is feasible".to_string()))
        }
        SearchOutcome::Timeout(partial) => {
            return Err(MinimizeError::Timeout {
                partial: partial.names.clone(),
            })
        }
        SearchOutcome::Unsat(core) => core,
    };
    let mut oracle = Oracle::new(model, opts.time_limit, memo);
    let mut result = quickxplain(&mut oracle, &[], &core.names)?;
    result.method = Method::CseaQx;
    result.time_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(CoreThenIis {
        iis: result,
        search,
    })
}

/// True iff the named sub-model is infeasible and every single-constraint
/// removal makes it feasible. Runs direct searches without a time limit.
pub fn verify_iis(model: &Model, names: &[String]) -> bool {
    let feasible = |subset: &BTreeSet<String>| {
        extract_conflict_set(&model.induced(subset), &SearchOptions::default())
            .outcome
            .is_sat()
    };
    let set: BTreeSet<String> = names.iter().cloned().collect();
    if feasible(&set) {
        return false;
    }
    for name in &set {
        let mut smaller = set.clone();
        smaller.remove(name);
        if !feasible(&smaller) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;
    use crate::testutil;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    // A: x1 >= 1 and B: x1 <= 0 contradict; fillers y_i >= 1 are irrelevant.
    fn contradiction_with_fillers(before: usize, between: usize, after: usize) -> Model {
        let mut b = Model::builder();
        let x = b.variable("x").unwrap();
        let mut fillers = Vec::new();
        for i in 0..before + between + after {
            fillers.push(b.variable(&format!("y{i}")).unwrap());
        }
        let mut fi = 0;
        for _ in 0..before {
            b.constraint(&format!("f{fi}"), vec![(1, fillers[fi])], Sense::Ge, 1)
                .unwrap();
            fi += 1;
        }
        b.constraint("A", vec![(1, x)], Sense::Ge, 1).unwrap();
        for _ in 0..between {
            b.constraint(&format!("f{fi}"), vec![(1, fillers[fi])], Sense::Ge, 1)
                .unwrap();
            fi += 1;
        }
        b.constraint("B", vec![(1, x)], Sense::Le, 0).unwrap();
        for _ in 0..after {
            b.constraint(&format!("f{fi}"), vec![(1, fillers[fi])], Sense::Ge, 1)
                .unwrap();
            fi += 1;
        }
        b.finish()
    }

    fn names_of(model: &Model) -> Vec<String> {
        model
            .raw_constraints()
            .iter()
            .map(|c| c.name.clone())
            .collect()
    }

    #[test]
    fn empty_subset_is_feasible() {
        let m = contradiction_with_fillers(0, 0, 0);
        let mut oracle = Oracle::new(&m, None, true);
        assert!(oracle.is_feasible(&[]).unwrap());
    }

    #[test]
    fn infeasible_pair_is_reported() {
        let mut b = Model::builder();
        let x1 = b.variable("x1").unwrap();
        let x2 = b.variable("x2").unwrap();
        b.constraint("c", vec![(1, x1), (1, x2)], Sense::Ge, 3).unwrap();
        let m = b.finish();
        let mut oracle = Oracle::new(&m, None, true);
        assert!(!oracle.is_feasible(&["c".to_string()]).unwrap());
    }

    #[test]
    fn oracle_matches_brute_force_on_random_subsets() {
        let mut rng = StdRng::seed_from_u64(0x0bac1e);
        for _ in 0..300 {
            let m = testutil::random_model(&mut rng, 8, 8);
            let all = names_of(&m);
            let subset: Vec<String> = all
                .iter()
                .filter(|_| rng.gen_bool(0.6))
                .cloned()
                .collect();
            let mut oracle = Oracle::new(&m, None, true);
            let got = oracle.is_feasible(&subset).unwrap();
            let set: BTreeSet<String> = subset.iter().cloned().collect();
            assert_eq!(got, testutil::brute_force_subset_feasible(&m, &set));
        }
    }

    #[test]
    fn memo_hits_do_not_count_as_calls() {
        let m = contradiction_with_fillers(1, 1, 1);
        let mut oracle = Oracle::new(&m, None, true);
        let subset = vec!["A".to_string(), "B".to_string()];
        let first = oracle.is_feasible(&subset).unwrap();
        assert_eq!(oracle.calls(), 1);
        // same set, different order: still one counted call
        let second = oracle
            .is_feasible(&["B".to_string(), "A".to_string()])
            .unwrap();
        assert_eq!(first, second);
        assert_eq!(oracle.calls(), 1);
    }

    #[test]
    fn quickxplain_keeps_both_members_of_a_pair() {
        let m = contradiction_with_fillers(0, 0, 0);
        let mut oracle = Oracle::new(&m, None, true);
        let result = quickxplain(&mut oracle, &[], &names_of(&m)).unwrap();
        assert_eq!(result.iis, vec!["A".to_string(), "B".to_string()]);
    }

    #[test]
    fn quickxplain_drops_irrelevant_candidates() {
        // A: x1 >= 1, B: x2 >= 1, C: x1 <= 0 -> {A, C}
        let mut b = Model::builder();
        let x1 = b.variable("x1").unwrap();
        let x2 = b.variable("x2").unwrap();
        b.constraint("A", vec![(1, x1)], Sense::Ge, 1).unwrap();
        b.constraint("B", vec![(1, x2)], Sense::Ge, 1).unwrap();
        b.constraint("C", vec![(1, x1)], Sense::Le, 0).unwrap();
        let m = b.finish();
        let mut oracle = Oracle::new(&m, None, true);
        let result = quickxplain(&mut oracle, &[], &names_of(&m)).unwrap();
        assert_eq!(result.iis, vec!["A".to_string(), "C".to_string()]);
    }

    #[test]
    fn quickxplain_rejects_feasible_input() {
        let mut b = Model::builder();
        let x = b.variable("x").unwrap();
        b.constraint("only", vec![(1, x)], Sense::Ge, 1).unwrap();
        let m = b.finish();
        let mut oracle = Oracle::new(&m, None, true);
        assert!(matches!(
            quickxplain(&mut oracle, &[], &names_of(&m)),
            Err(MinimizeError::Precondition(_))
        ));
    }

    #[test]
    fn deletion_filter_uses_exactly_one_call_per_name() {
        let m = contradiction_with_fillers(0, 0, 0);
        let mut oracle = Oracle::new(&m, None, false);
        let result = deletion_filter(&mut oracle, &names_of(&m)).unwrap();
        assert_eq!(result.iis, vec!["A".to_string(), "B".to_string()]);
        assert_eq!(result.oracle_calls, 2);

        let m = contradiction_with_fillers(2, 2, 1);
        let mut oracle = Oracle::new(&m, None, false);
        let names = names_of(&m);
        let result = deletion_filter(&mut oracle, &names).unwrap();
        assert_eq!(result.iis, vec!["A".to_string(), "B".to_string()]);
        assert_eq!(result.oracle_calls, names.len() as u64);
    }

    #[test]
    fn deletion_filter_rejects_feasible_input() {
        let mut b = Model::builder();
        let x = b.variable("x").unwrap();
        b.constraint("only", vec![(1, x)], Sense::Ge, 1).unwrap();
        let m = b.finish();
        let mut oracle = Oracle::new(&m, None, false);
        let err = deletion_filter(&mut oracle, &names_of(&m)).unwrap_err();
        assert!(matches!(err, MinimizeError::Precondition(_)));
        assert_eq!(oracle.calls(), 0, "precondition check is not an oracle call");
    }

    #[test]
    fn additive_growth_stops_at_first_infeasible_prefix() {
        // contradiction at positions 1 and 9 of 10
        let m = contradiction_with_fillers(0, 7, 1);
        assert_eq!(m.raw_constraints()[0].name, "A");
        assert_eq!(m.raw_constraints()[8].name, "B");
        let mut oracle = Oracle::new(&m, None, false);
        let result = additive_deletion(&mut oracle, &names_of(&m)).unwrap();
        assert_eq!(result.iis, vec!["A".to_string(), "B".to_string()]);
        // growth to B: 9 queries; regrow from {B}: feasible({B}) + {B,A}: 2;
        // kernel check {B,A}: 1; deletion pass: 2  -> 14 total
        assert_eq!(result.oracle_calls, 14);
    }

    #[test]
    fn additive_finds_singleton_anywhere() {
        let mut b = Model::builder();
        let x1 = b.variable("x1").unwrap();
        let x2 = b.variable("x2").unwrap();
        let y = b.variable("y").unwrap();
        b.constraint("f0", vec![(1, y)], Sense::Ge, 1).unwrap();
        b.constraint("bad", vec![(1, x1), (1, x2)], Sense::Ge, 3).unwrap();
        b.constraint("f1", vec![(1, y)], Sense::Le, 1).unwrap();
        let m = b.finish();
        let mut oracle = Oracle::new(&m, None, true);
        let result = additive_deletion(&mut oracle, &names_of(&m)).unwrap();
        assert_eq!(result.iis, vec!["bad".to_string()]);
    }

    #[test]
    fn additive_rejects_feasible_input() {
        let mut b = Model::builder();
        let x = b.variable("x").unwrap();
        b.constraint("c1", vec![(1, x)], Sense::Ge, 1).unwrap();
        b.constraint("c2", vec![(1, x)], Sense::Le, 1).unwrap();
        let m = b.finish();
        let mut oracle = Oracle::new(&m, None, true);
        assert!(matches!(
            additive_deletion(&mut oracle, &names_of(&m)),
            Err(MinimizeError::Precondition(_))
        ));
    }

    #[test]
    fn verify_iis_accepts_minimal_and_rejects_padded() {
        let m = contradiction_with_fillers(1, 0, 0);
        assert!(verify_iis(&m, &["A".to_string(), "B".to_string()]));
        assert!(!verify_iis(
            &m,
            &["A".to_string(), "B".to_string(), "f0".to_string()]
        ));
        // feasible subset is not an IIS either
        assert!(!verify_iis(&m, &["A".to_string()]));
    }

    #[test]
    fn csea_pipeline_minimizes_its_core() {
        let m = contradiction_with_fillers(3, 3, 3);
        let out = csea_then_quickxplain(&m, &SearchOptions::default(), true).unwrap();
        assert_eq!(out.iis.method, Method::CseaQx);
        assert_eq!(out.iis.iis, vec!["A".to_string(), "B".to_string()]);
        let SearchOutcome::Unsat(core) = &out.search.outcome else {
            panic!("pipeline requires unsat");
        };
        for name in &out.iis.iis {
            assert!(core.names.contains(name), "IIS must be a subset of the core");
        }
        assert!(verify_iis(&m, &out.iis.iis));
    }

    #[test]
    fn csea_pipeline_on_root_singleton_needs_few_calls() {
        let mut b = Model::builder();
        let x1 = b.variable("x1").unwrap();
        let x2 = b.variable("x2").unwrap();
        b.constraint("bad", vec![(1, x1), (1, x2)], Sense::Ge, 3).unwrap();
        let m = b.finish();
        let out = csea_then_quickxplain(&m, &SearchOptions::default(), true).unwrap();
        assert_eq!(out.iis.iis, vec!["bad".to_string()]);
        assert!(out.iis.oracle_calls <= 2);
    }

    #[test]
    fn csea_pipeline_errors_on_feasible_model() {
        let mut b = Model::builder();
        let x = b.variable("x").unwrap();
        b.constraint("fine", vec![(1, x)], Sense::Ge, 1).unwrap();
        let m = b.finish();
        let err = csea_then_quickxplain(&m, &SearchOptions::default(), true).unwrap_err();
        assert!(err.to_string().contains("feasible"));
    }

    #[test]
    fn all_methods_produce_verified_iis_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(0x115);
        for round in 0..40 {
            let m = testutil::random_infeasible_model(&mut rng, 8, 10);
            let names = names_of(&m);

            let mut oracle = Oracle::new(&m, None, true);
            let qx = quickxplain(&mut oracle, &[], &names).unwrap();
            assert!(verify_iis(&m, &qx.iis), "round {round}: qx not minimal");

            let mut oracle = Oracle::new(&m, None, true);
            let del = deletion_filter(&mut oracle, &names).unwrap();
            assert!(verify_iis(&m, &del.iis), "round {round}: deletion not minimal");

            let mut oracle = Oracle::new(&m, None, true);
            let add = additive_deletion(&mut oracle, &names).unwrap();
            assert!(verify_iis(&m, &add.iis), "round {round}: additive not minimal");

            let pipe = csea_then_quickxplain(&m, &SearchOptions::default(), true).unwrap();
            assert!(verify_iis(&m, &pipe.iis.iis), "round {round}: pipeline not minimal");
        }
    }

    #[test]
    fn whole_pigeonhole_model_is_its_own_iis() {
        // with one pigeon too many, no constraint is redundant
        let m = testutil::pigeonhole_model(4, 3);
        let names = names_of(&m);
        let mut oracle = Oracle::new(&m, None, true);
        let qx = quickxplain(&mut oracle, &[], &names).unwrap();
        assert_eq!(qx.iis, names);
        let pipe = csea_then_quickxplain(&m, &SearchOptions::default(), true).unwrap();
        assert_eq!(pipe.iis.iis, names);
        assert!(verify_iis(&m, &names));
    }

    #[test]
    fn memoization_changes_counts_but_not_outputs() {
        let mut rng = StdRng::seed_from_u64(0xcac4e);
        for _ in 0..20 {
            let m = testutil::random_infeasible_model(&mut rng, 8, 10);
            let names = names_of(&m);
            let mut with_memo = Oracle::new(&m, None, true);
            let mut without = Oracle::new(&m, None, false);
            let a = quickxplain(&mut with_memo, &[], &names).unwrap();
            let b = quickxplain(&mut without, &[], &names).unwrap();
            assert_eq!(a.iis, b.iis);
            assert!(a.oracle_calls <= b.oracle_calls);

            let mut with_memo = Oracle::new(&m, None, true);
            let mut without = Oracle::new(&m, None, false);
            let a = additive_deletion(&mut with_memo, &names).unwrap();
            let b = additive_deletion(&mut without, &names).unwrap();
            assert_eq!(a.iis, b.iis);
            assert!(a.oracle_calls <= b.oracle_calls);
        }
    }

    #[test]
    fn iis_result_serializes_to_documented_schema() {
        let result = IISResult {
            method: Method::CseaQx,
            iis: vec!["A".to_string(), "B".to_string()],
            oracle_calls: 5,
            time_ms: 1.25,
            verified: true,
        };
        let json = serde_json::to_string(&result).unwrap();
        assert_eq!(
            json,
            r#"{"method":"csea+qx","iis":["A","B"],"oracle_calls":5,"time_ms":1.25,"verified":true}"#
        );
    }
}
