//! Seeded generator of workforce-scheduling models (feasible or with an
//! injected conflict) and a benchmark runner producing CSV reports.

use std::time::Duration;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::minimize::{
    additive_deletion, csea_then_quickxplain, deletion_filter, quickxplain, verify_iis, Method,
    Oracle,
};
use crate::model::{Model, Sense, Var};
use crate::search::{extract_conflict_set, SearchOptions, SearchOutcome};
use crate::{GenError, MinimizeError};

/// Which pair of constraint families is perturbed into a joint conflict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Injection {
    #[default]
    None,
    /// One day-shift demand is raised above the number of agents.
    DemandExceedsCapacity,
    /// A day-off is granted while that day's demand needs every agent.
    DayoffVsDemand,
    /// Demand fills a whole window although the window cap forbids it.
    WindowCapVsDemand,
}

/// Parameters of one generated scheduling instance. Deterministic in `seed`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub agents: u32,
    pub days: u32,
    pub shifts_per_day: u32,
    pub demand_per_shift: u32,
    #[serde(default = "default_max_shifts")]
    pub max_shifts_per_agent_day: u32,
    /// Sliding window over days per agent: (window length, max workdays).
    #[serde(default)]
    pub window: Option<(u32, u32)>,
    /// Requested days off as (agent, day), zero-based.
    #[serde(default)]
    pub day_offs: Vec<(u32, u32)>,
    #[serde(default)]
    pub injection: Injection,
    pub seed: u64,
}

fn default_max_shifts() -> u32 {
    1
}

/// Builds the pseudo-Boolean model for the given parameters.
///
/// Variables are `x_a{a}_d{d}_s{s}` for each agent/day/shift. Families:
/// per-agent-day shift caps, per-day-shift staffing demands, per-agent
/// sliding-window workday caps, and day-off equalities pinning a day's
/// shifts to zero. An injection perturbs the parameters so the chosen
/// family pair is jointly unsatisfiable.
pub fn generate_instance(params: &ScheduleParams) -> Result<Model, GenError> {
    let p = params;
    if p.agents == 0 || p.days == 0 || p.shifts_per_day == 0 {
        return Err(GenError::InvalidParams(
            "agents, days, and shifts_per_day must be positive".to_string(),
        ));
    }
    for &(a, d) in &p.day_offs {
        if a >= p.agents || d >= p.days {
            return Err(GenError::InvalidParams(format!(
                "day-off ({a}, {d}) out of range"
            )));
        }
    }
    if let Some((len, _)) = p.window {
        if len == 0 || len > p.days {
            return Err(GenError::InvalidParams(format!(
                "window length {len} out of range for {} days",
                p.days
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut max_shifts = p.max_shifts_per_agent_day;
    let mut day_offs: Vec<(u32, u32)> = p.day_offs.clone();
    // demand per (day, shift); injections perturb individual cells
    let mut demand = vec![vec![p.demand_per_shift; p.shifts_per_day as usize]; p.days as usize];

    match p.injection {
        Injection::None => {}
        Injection::DemandExceedsCapacity => {
            let d = rng.gen_range(0..p.days) as usize;
            let s = rng.gen_range(0..p.shifts_per_day) as usize;
            demand[d][s] = p.agents + 1;
        }
        Injection::DayoffVsDemand => {
            let a = rng.gen_range(0..p.agents);
            let d = rng.gen_range(0..p.days);
            let s = rng.gen_range(0..p.shifts_per_day) as usize;
            demand[d as usize][s] = p.agents;
            if !day_offs.contains(&(a, d)) {
                day_offs.push((a, d));
            }
        }
        Injection::WindowCapVsDemand => {
            let Some((len, cap)) = p.window else {
                return Err(GenError::InjectionImpossible(
                    "window_cap_vs_demand needs a window parameter".to_string(),
                ));
            };
            if u64::from(cap) >= u64::from(len) * u64::from(p.shifts_per_day) {
                return Err(GenError::InjectionImpossible(format!(
                    "window cap {cap} never binds over {len} days x {} shifts",
                    p.shifts_per_day
                )));
            }
            let start = rng.gen_range(0..=p.days - len);
            for d in start..start + len {
                demand[d as usize].fill(p.agents);
            }
            // keep the per-day caps out of the injected pair
            max_shifts = max_shifts.max(p.shifts_per_day);
        }
    }

    day_offs.sort_unstable();
    day_offs.dedup();

    let mut b = Model::builder();
    let var_at = |a: u32, d: u32, s: u32| -> u32 { (a * p.days + d) * p.shifts_per_day + s };
    for a in 0..p.agents {
        for d in 0..p.days {
            for s in 0..p.shifts_per_day {
                b.variable(&format!("x_a{a}_d{d}_s{s}"))
                    .expect("generated names are unique");
            }
        }
    }
    let build = |b: &mut crate::model::ModelBuilder,
                 name: String,
                 terms: Vec<(i64, Var)>,
                 sense: Sense,
                 rhs: i64|
     -> Result<(), GenError> {
        b.constraint(&name, terms, sense, rhs)
            .map_err(|e| GenError::InvalidParams(e.to_string()))
    };

    for a in 0..p.agents {
        for d in 0..p.days {
            let terms: Vec<(i64, Var)> = (0..p.shifts_per_day)
                .map(|s| (1, Var(var_at(a, d, s))))
                .collect();
            build(
                &mut b,
                format!("cap_a{a}_d{d}"),
                terms,
                Sense::Le,
                i64::from(max_shifts),
            )?;
        }
    }
    for d in 0..p.days {
        for s in 0..p.shifts_per_day {
            let terms: Vec<(i64, Var)> = (0..p.agents)
                .map(|a| (1, Var(var_at(a, d, s))))
                .collect();
            build(
                &mut b,
                format!("demand_d{d}_s{s}"),
                terms,
                Sense::Ge,
                i64::from(demand[d as usize][s as usize]),
            )?;
        }
    }
    if let Some((len, cap)) = p.window {
        for a in 0..p.agents {
            for start in 0..=p.days - len {
                let mut terms = Vec::new();
                for d in start..start + len {
                    for s in 0..p.shifts_per_day {
                        terms.push((1, Var(var_at(a, d, s))));
                    }
                }
                build(
                    &mut b,
                    format!("window_a{a}_d{start}"),
                    terms,
                    Sense::Le,
                    i64::from(cap),
                )?;
            }
        }
    }
    for &(a, d) in &day_offs {
        let terms: Vec<(i64, Var)> = (0..p.shifts_per_day)
            .map(|s| (1, Var(var_at(a, d, s))))
            .collect();
        build(&mut b, format!("dayoff_a{a}_d{d}"), terms, Sense::Eq, 0)?;
    }
    Ok(b.finish())
}

/// Parses a JSON manifest: a list of `ScheduleParams`.
pub fn load_manifest(text: &str) -> Result<Vec<ScheduleParams>, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOutcome {
    Sat,
    Unsat,
    Iis,
    Timeout,
}

impl std::fmt::Display for RowOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowOutcome::Sat => write!(f, "sat"),
            RowOutcome::Unsat => write!(f, "unsat"),
            RowOutcome::Iis => write!(f, "iis"),
            RowOutcome::Timeout => write!(f, "timeout"),
        }
    }
}

/// One benchmark cell: an instance/method pair with its counters.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub method: Method,
    pub cons: usize,
    pub vars: usize,
    pub avg_lit: f64,
    pub red_cons: usize,
    pub conflicts: u64,
    pub decisions: u64,
    pub backtracks: u64,
    pub learned: u64,
    pub max_dl: u32,
    pub oracle_calls: u64,
    pub time_ms: f64,
    pub outcome: RowOutcome,
    pub verified: bool,
}

/// Per-method aggregates over the data rows.
#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub method: Method,
    pub median_time_ms: f64,
    pub median_oracle_calls: f64,
    pub mean_reduction_pct: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchLimits {
    pub time_limit: Option<Duration>,
    pub memo: bool,
}

impl Default for BenchLimits {
    fn default() -> Self {
        BenchLimits {
            time_limit: None,
            memo: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<MethodSummary>,
}

pub const CSV_HEADER: &str = "instance,method,cons,vars,avg_lit,red_cons,conflicts,decisions,\
backtracks,learned,max_dl,oracle_calls,time_ms,outcome,verified";

impl BenchReport {
    /// Renders the report. With `include_timing` off, time columns print as
    /// zero so repeated runs compare byte-for-byte.
    pub fn to_csv(&self, include_timing: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let t = |ms: f64| if include_timing { ms } else { 0.0 };
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.2},{},{},{},{},{},{},{},{:.3},{},{}\n",
                r.instance,
                r.method,
                r.cons,
                r.vars,
                r.avg_lit,
                r.red_cons,
                r.conflicts,
                r.decisions,
                r.backtracks,
                r.learned,
                r.max_dl,
                r.oracle_calls,
                t(r.time_ms),
                r.outcome,
                r.verified
            ));
        }
        // summary rows reuse the schema: red_cons carries the mean core
        // reduction percentage, oracle_calls and time_ms carry medians
        for s in &self.summaries {
            out.push_str(&format!(
                "summary,{},,,,{:.2},,,,,,{:.1},{:.3},summary,\n",
                s.method,
                s.mean_reduction_pct,
                s.median_oracle_calls,
                t(s.median_time_ms),
            ));
        }
        out
    }
}

fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN timings"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn blank_row(instance: &str, method: Method, model: &Model) -> BenchRow {
    BenchRow {
        instance: instance.to_string(),
        method,
        cons: model.raw_constraints().len(),
        vars: model.num_vars(),
        avg_lit: model.avg_terms(),
        red_cons: 0,
        conflicts: 0,
        decisions: 0,
        backtracks: 0,
        learned: 0,
        max_dl: 0,
        oracle_calls: 0,
        time_ms: 0.0,
        outcome: RowOutcome::Sat,
        verified: true,
    }
}

fn run_cell(instance: &str, model: &Model, method: Method, limits: &BenchLimits) -> BenchRow {
    let opts = SearchOptions {
        time_limit: limits.time_limit,
        ..SearchOptions::default()
    };
    let mut row = blank_row(instance, method, model);
    match method {
        Method::Csea => {
            let result = extract_conflict_set(model, &opts);
            row.red_cons = result.stats.red_cons;
            row.conflicts = result.stats.conflicts;
            row.decisions = result.stats.decisions;
            row.backtracks = result.stats.backtracks;
            row.learned = result.stats.learned;
            row.max_dl = result.stats.max_dl;
            row.time_ms = result.stats.time_ms;
            match result.outcome {
                SearchOutcome::Sat(_) => {
                    row.outcome = RowOutcome::Sat;
                }
                SearchOutcome::Unsat(core) => {
                    row.outcome = RowOutcome::Unsat;
                    // a core is not an IIS; "verified" records that the
                    // induced sub-model is indeed infeasible
                    let names: std::collections::BTreeSet<String> =
                        core.names.iter().cloned().collect();
                    row.verified = !extract_conflict_set(&model.induced(&names), &opts)
                        .outcome
                        .is_sat();
                }
                SearchOutcome::Timeout(partial) => {
                    row.outcome = RowOutcome::Timeout;
                    row.red_cons = partial.size();
                    row.verified = false;
                }
            }
        }
        Method::CseaQx => {
            let started = std::time::Instant::now();
            match csea_then_quickxplain(model, &opts, limits.memo) {
                Ok(out) => {
                    row.outcome = RowOutcome::Iis;
                    row.red_cons = out.iis.iis.len();
                    row.oracle_calls = out.iis.oracle_calls;
                    row.time_ms = out.iis.time_ms;
                    row.conflicts = out.search.stats.conflicts;
                    row.decisions = out.search.stats.decisions;
                    row.backtracks = out.search.stats.backtracks;
                    row.learned = out.search.stats.learned;
                    row.max_dl = out.search.stats.max_dl;
                    row.verified = verify_iis(model, &out.iis.iis);
                }
                Err(e) => apply_minimize_error(&mut row, e, started),
            }
        }
        Method::Qx | Method::Deletion | Method::Additive => {
            let names: Vec<String> = model
                .raw_constraints()
                .iter()
                .map(|c| c.name.clone())
                .collect();
            let mut oracle = Oracle::new(model, limits.time_limit, limits.memo);
            let started = std::time::Instant::now();
            let outcome = match method {
                Method::Qx => quickxplain(&mut oracle, &[], &names),
                Method::Deletion => deletion_filter(&mut oracle, &names),
                Method::Additive => additive_deletion(&mut oracle, &names),
                _ => unreachable!(),
            };
            match outcome {
                Ok(result) => {
                    row.outcome = RowOutcome::Iis;
                    row.red_cons = result.iis.len();
                    row.oracle_calls = result.oracle_calls;
                    row.time_ms = result.time_ms;
                    row.verified = verify_iis(model, &result.iis);
                }
                Err(e) => apply_minimize_error(&mut row, e, started),
            }
        }
    }
    row
}

fn apply_minimize_error(row: &mut BenchRow, err: MinimizeError, started: std::time::Instant) {
    row.time_ms = started.elapsed().as_secs_f64() * 1000.0;
    match err {
        MinimizeError::Precondition(_) => {
            row.outcome = RowOutcome::Sat;
            row.red_cons = 0;
            row.verified = true;
        }
        MinimizeError::Timeout { partial } => {
            row.outcome = RowOutcome::Timeout;
            row.red_cons = partial.len();
            row.verified = false;
        }
    }
}

/// Runs every instance/method cell serially in input order and aggregates
/// per-method summaries. A per-run timeout becomes an `outcome=timeout` row;
/// the run continues.
pub fn run_benchmark(
    instances: &[(String, Model)],
    methods: &[Method],
    limits: &BenchLimits,
) -> BenchReport {
    let mut rows = Vec::with_capacity(instances.len() * methods.len());
    for (name, model) in instances {
        for &method in methods {
            rows.push(run_cell(name, model, method, limits));
        }
    }
    let summaries = methods
        .iter()
        .map(|&method| {
            let of_method: Vec<&BenchRow> = rows.iter().filter(|r| r.method == method).collect();
            let reductions: Vec<f64> = of_method
                .iter()
                .filter(|r| matches!(r.outcome, RowOutcome::Unsat | RowOutcome::Iis))
                .map(|r| {
                    if r.cons == 0 {
                        0.0
                    } else {
                        (1.0 - r.red_cons as f64 / r.cons as f64) * 100.0
                    }
                })
                .collect();
            MethodSummary {
                method,
                median_time_ms: median(of_method.iter().map(|r| r.time_ms).collect()),
                median_oracle_calls: median(
                    of_method.iter().map(|r| r.oracle_calls as f64).collect(),
                ),
                mean_reduction_pct: if reductions.is_empty() {
                    0.0
                } else {
                    reductions.iter().sum::<f64>() / reductions.len() as f64
                },
            }
        })
        .collect();
    BenchReport { rows, summaries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;
    use std::collections::BTreeSet;

    fn tiny(injection: Injection, seed: u64) -> ScheduleParams {
        ScheduleParams {
            agents: 2,
            days: 3,
            shifts_per_day: 1,
            demand_per_shift: 1,
            max_shifts_per_agent_day: 1,
            window: Some((2, 1)),
            day_offs: vec![],
            injection,
            seed,
        }
    }

    #[test]
    fn variable_count_is_exactly_the_grid() {
        let m = generate_instance(&tiny(Injection::None, 1)).unwrap();
        assert_eq!(m.num_vars(), 2 * 3);
    }

    #[test]
    fn plain_instance_with_slack_capacity_is_feasible() {
        let m = generate_instance(&tiny(Injection::None, 7)).unwrap();
        assert!(testutil::brute_force_feasible(&m));
        let outcome = extract_conflict_set(&m, &SearchOptions::default()).outcome;
        assert!(outcome.is_sat());
    }

    #[test]
    fn generator_is_deterministic_in_seed() {
        let a = crate::io::model_to_json(&generate_instance(&tiny(Injection::DayoffVsDemand, 42)).unwrap());
        let b = crate::io::model_to_json(&generate_instance(&tiny(Injection::DayoffVsDemand, 42)).unwrap());
        assert_eq!(a, b);
        let c = crate::io::model_to_json(&generate_instance(&tiny(Injection::DayoffVsDemand, 43)).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn dayoff_demand_conflict_has_the_expected_iis() {
        // two agents, one day, one shift, demand = 2, agent day-off:
        // the IIS is the demand constraint plus the day-off alone
        let params = ScheduleParams {
            agents: 2,
            days: 1,
            shifts_per_day: 1,
            demand_per_shift: 2,
            max_shifts_per_agent_day: 1,
            window: None,
            day_offs: vec![(1, 0)],
            injection: Injection::None,
            seed: 0,
        };
        let m = generate_instance(&params).unwrap();
        assert!(!testutil::brute_force_feasible(&m));
        // brute-force the minimal infeasible subsets over the 2-variable model
        let expected: BTreeSet<String> =
            BTreeSet::from(["demand_d0_s0".to_string(), "dayoff_a1_d0".to_string()]);
        assert!(!testutil::brute_force_subset_feasible(&m, &expected));
        for name in &expected {
            let mut smaller = expected.clone();
            smaller.remove(name);
            assert!(testutil::brute_force_subset_feasible(&m, &smaller));
        }
        assert!(verify_iis(&m, &expected.iter().cloned().collect::<Vec<_>>()));
    }

    #[test]
    fn injections_always_produce_infeasible_instances() {
        let mut checked = 0;
        for seed in 0..6 {
            for injection in [
                Injection::DemandExceedsCapacity,
                Injection::DayoffVsDemand,
                Injection::WindowCapVsDemand,
            ] {
                let m = generate_instance(&tiny(injection, seed)).unwrap();
                let outcome = extract_conflict_set(&m, &SearchOptions::default()).outcome;
                assert!(outcome.is_unsat(), "{injection:?} seed {seed} not unsat");
                if m.num_vars() <= 20 {
                    assert!(!testutil::brute_force_feasible(&m));
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn window_injection_requires_a_window() {
        let mut params = tiny(Injection::WindowCapVsDemand, 1);
        params.window = None;
        assert!(matches!(
            generate_instance(&params),
            Err(GenError::InjectionImpossible(_))
        ));
        let mut params = tiny(Injection::WindowCapVsDemand, 1);
        params.window = Some((2, 9)); // cap never binds
        assert!(matches!(
            generate_instance(&params),
            Err(GenError::InjectionImpossible(_))
        ));
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        let mut params = tiny(Injection::None, 1);
        params.day_offs = vec![(5, 0)];
        assert!(matches!(
            generate_instance(&params),
            Err(GenError::InvalidParams(_))
        ));
        let mut params = tiny(Injection::None, 1);
        params.agents = 0;
        assert!(matches!(
            generate_instance(&params),
            Err(GenError::InvalidParams(_))
        ));
    }

    #[test]
    fn empty_benchmark_is_header_only() {
        let report = run_benchmark(&[], &[Method::Csea], &BenchLimits::default());
        let csv = report.to_csv(true);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        // one summary row per method, no data rows
        assert_eq!(lines.len(), 2);
    }

    #[test]
    fn feasible_instance_reports_sat_rows() {
        let m = generate_instance(&tiny(Injection::None, 3)).unwrap();
        let methods = [Method::Csea, Method::CseaQx, Method::Qx];
        let report = run_benchmark(
            &[("inst0".to_string(), m)],
            &methods,
            &BenchLimits::default(),
        );
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert_eq!(row.outcome, RowOutcome::Sat);
            assert_eq!(row.red_cons, 0);
        }
    }

    #[test]
    fn infeasible_suite_rows_verify() {
        let mut instances = Vec::new();
        for seed in 0..4 {
            let m = generate_instance(&tiny(Injection::DayoffVsDemand, seed)).unwrap();
            instances.push((format!("inst{seed}"), m));
        }
        let methods = [Method::Csea, Method::CseaQx, Method::Deletion, Method::Additive];
        let report = run_benchmark(&instances, &methods, &BenchLimits::default());
        assert_eq!(report.rows.len(), instances.len() * methods.len());
        for row in &report.rows {
            assert!(row.verified, "{} {} not verified", row.instance, row.method);
            match row.method {
                Method::Csea => assert_eq!(row.outcome, RowOutcome::Unsat),
                _ => assert_eq!(row.outcome, RowOutcome::Iis),
            }
        }
        let csv = report.to_csv(true);
        assert_eq!(
            csv.lines().count(),
            1 + instances.len() * methods.len() + methods.len()
        );
    }

    #[test]
    fn deletion_makes_one_call_per_constraint_in_bench() {
        let m = generate_instance(&tiny(Injection::DemandExceedsCapacity, 9)).unwrap();
        let cons = m.raw_constraints().len() as u64;
        let report = run_benchmark(
            &[("inst0".to_string(), m)],
            &[Method::Deletion],
            &BenchLimits {
                time_limit: None,
                memo: false,
            },
        );
        assert_eq!(report.rows[0].oracle_calls, cons);
    }

    #[test]
    fn manifest_round_trips() {
        let manifest = vec![tiny(Injection::None, 1), tiny(Injection::DayoffVsDemand, 2)];
        let text = serde_json::to_string_pretty(&manifest).unwrap();
        let parsed = load_manifest(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].injection, Injection::DayoffVsDemand);
        assert_eq!(parsed[1].seed, 2);
    }
}
