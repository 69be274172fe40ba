//! `pbdiag` command line: check feasibility, extract conflict cores,
//! minimize to an IIS, generate scheduling instances, run benchmarks, and
//! export implication graphs.
//!
//! Exit codes: 0 success (SAT for `check`, verified IIS for `iis`),
//! 1 UNSAT / diagnosis failure, 2 usage or parse errors, 3 timeout.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use pbdiag::bench::{
    generate_instance, load_manifest, run_benchmark, BenchLimits, Injection, ScheduleParams,
};
use pbdiag::dot::to_dot;
use pbdiag::io::{load_model, model_to_json};
use pbdiag::minimize::{
    additive_deletion, csea_then_quickxplain, deletion_filter, quickxplain, verify_iis, IISResult,
    Method, Oracle,
};
use pbdiag::search::{extract_conflict_set, SearchOptions, SearchOutcome};
use pbdiag::trace::render_trace;
use pbdiag::{MinimizeError, Model};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pbdiag",
    version,
    about = "Diagnose infeasible pseudo-Boolean constraint models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchFlags {
    /// Abort the search after this many milliseconds
    #[arg(long, value_name = "MS")]
    time_limit_ms: Option<u64>,
    /// Disable no-good learning during search
    #[arg(long)]
    no_learning: bool,
    /// Write a line-per-event search trace to this file
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

impl SearchFlags {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            learning: !self.no_learning,
            time_limit: self.time_limit_ms.map(Duration::from_millis),
            trace: self.trace.is_some(),
            ..SearchOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide feasibility; prints SAT or UNSAT
    Check {
        /// Model file (JSON or OPB)
        model: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Extract the conflict core of an infeasible model (JSON output)
    Core {
        model: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        /// Write output here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Minimize to an Irreducible Infeasible Subset (JSON output)
    Iis {
        model: PathBuf,
        /// Minimization method
        #[arg(long, value_name = "METHOD")]
        method: Method,
        #[command(flatten)]
        search: SearchFlags,
        /// Disable oracle memoization
        #[arg(long)]
        no_memo: bool,
        /// Report time fields as zero for reproducible output
        #[arg(long)]
        no_timing: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Generate a workforce-scheduling model (JSON output)
    Gen {
        #[arg(long)]
        agents: u32,
        #[arg(long)]
        days: u32,
        #[arg(long, default_value_t = 1)]
        shifts: u32,
        #[arg(long)]
        demand: u32,
        #[arg(long, default_value_t = 1)]
        max_shifts: u32,
        /// Sliding window as LENGTH,CAP
        #[arg(long, value_name = "L,C", value_parser = parse_pair)]
        window: Option<(u32, u32)>,
        /// Day-off request as AGENT,DAY (repeatable)
        #[arg(long = "dayoff", value_name = "A,D", value_parser = parse_pair)]
        day_offs: Vec<(u32, u32)>,
        /// Conflict injection: none, demand, dayoff, or window
        #[arg(long, default_value = "none", value_parser = parse_injection)]
        inject: Injection,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run instance x method benchmark cells from a manifest (CSV output)
    Bench {
        /// JSON manifest: a list of instance parameters
        #[arg(long, value_name = "PATH")]
        manifest: PathBuf,
        /// Comma-separated methods: csea, csea+qx, qx, deletion, additive
        #[arg(long, value_delimiter = ',', default_value = "csea,csea+qx")]
        methods: Vec<Method>,
        #[arg(long, value_name = "MS")]
        time_limit_ms: Option<u64>,
        #[arg(long)]
        no_memo: bool,
        #[arg(long)]
        no_timing: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Export the final conflict's implication graph as DOT
    ExportDot {
        model: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated integers, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("bad first value: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad second value: {e}"))?;
    Ok((a, b))
}

fn parse_injection(s: &str) -> Result<Injection, String> {
    match s {
        "none" => Ok(Injection::None),
        "demand" | "demand_exceeds_capacity" => Ok(Injection::DemandExceedsCapacity),
        "dayoff" | "dayoff_vs_demand" => Ok(Injection::DayoffVsDemand),
        "window" | "window_cap_vs_demand" => Ok(Injection::WindowCapVsDemand),
        other => Err(format!(
            "unknown injection `{other}` (expected none, demand, dayoff, or window)"
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Check { model, search } => cmd_check(&model, &search),
        Command::Core { model, search, out } => cmd_core(&model, &search, out.as_deref()),
        Command::Iis {
            model,
            method,
            search,
            no_memo,
            no_timing,
            out,
        } => cmd_iis(&model, method, &search, !no_memo, no_timing, out.as_deref()),
        Command::Gen {
            agents,
            days,
            shifts,
            demand,
            max_shifts,
            window,
            day_offs,
            inject,
            seed,
            out,
        } => {
            let params = ScheduleParams {
                agents,
                days,
                shifts_per_day: shifts,
                demand_per_shift: demand,
                max_shifts_per_agent_day: max_shifts,
                window,
                day_offs,
                injection: inject,
                seed,
            };
            cmd_gen(&params, out.as_deref())
        }
        Command::Bench {
            manifest,
            methods,
            time_limit_ms,
            no_memo,
            no_timing,
            out,
        } => cmd_bench(
            &manifest,
            &methods,
            time_limit_ms,
            !no_memo,
            no_timing,
            out.as_deref(),
        ),
        Command::ExportDot { model, search, out } => cmd_export_dot(&model, &search, out.as_deref()),
    }
}

fn read_model(path: &Path) -> Result<Model, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })?;
    load_model(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })
}

fn write_output(out: Option<&Path>, content: &str) -> u8 {
    match out {
        None => {
            print!("{content}");
            EXIT_OK
        }
        Some(path) => match fs::write(path, content) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
    }
}

fn dump_trace(flags: &SearchFlags, trace: Option<&[pbdiag::trace::TraceEvent]>) -> Option<u8> {
    if let (Some(path), Some(events)) = (flags.trace.as_ref(), trace) {
        if let Err(e) = fs::write(path, render_trace(events)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Some(EXIT_USAGE);
        }
    }
    None
}

fn cmd_check(path: &Path, flags: &SearchFlags) -> u8 {
    let model = match read_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let result = extract_conflict_set(&model, &flags.options());
    if let Some(code) = dump_trace(flags, result.trace.as_deref()) {
        return code;
    }
    match result.outcome {
        SearchOutcome::Sat(_) => {
            println!("SAT");
            EXIT_OK
        }
        SearchOutcome::Unsat(_) => {
            println!("UNSAT");
            EXIT_FAIL
        }
        SearchOutcome::Timeout(_) => {
            println!("TIMEOUT");
            EXIT_TIMEOUT
        }
    }
}

fn cmd_core(path: &Path, flags: &SearchFlags, out: Option<&Path>) -> u8 {
    let model = match read_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let result = extract_conflict_set(&model, &flags.options());
    if let Some(code) = dump_trace(flags, result.trace.as_deref()) {
        return code;
    }
    match result.outcome {
        SearchOutcome::Sat(_) => {
            eprintln!("error: model is feasible; no conflict core to report");
            EXIT_FAIL
        }
        SearchOutcome::Unsat(core) => {
            let doc = serde_json::json!({
                "names": core.names,
                "original": core.original,
                "core": core.size(),
                "reduction_pct": core.reduction_pct(),
            });
            write_output(out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        SearchOutcome::Timeout(_) => {
            eprintln!("error: time limit exceeded before the search completed");
            EXIT_TIMEOUT
        }
    }
}

fn cmd_iis(
    path: &Path,
    method: Method,
    flags: &SearchFlags,
    memo: bool,
    no_timing: bool,
    out: Option<&Path>,
) -> u8 {
    let model = match read_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let opts = flags.options();
    let outcome: Result<IISResult, MinimizeError> = match method {
        Method::Csea => {
            eprintln!("error: `csea` extracts a core, not an IIS; use the `core` command");
            return EXIT_USAGE;
        }
        Method::CseaQx => csea_then_quickxplain(&model, &opts, memo).map(|out| out.iis),
        Method::Qx | Method::Deletion | Method::Additive => {
            let names: Vec<String> = model
                .raw_constraints()
                .iter()
                .map(|c| c.name.clone())
                .collect();
            let mut oracle = Oracle::new(&model, opts.time_limit, memo);
            match method {
                Method::Qx => quickxplain(&mut oracle, &[], &names),
                Method::Deletion => deletion_filter(&mut oracle, &names),
                Method::Additive => additive_deletion(&mut oracle, &names),
                _ => unreachable!(),
            }
        }
    };
    match outcome {
        Ok(mut result) => {
            result.verified = verify_iis(&model, &result.iis);
            if no_timing {
                result.time_ms = 0.0;
            }
            let json = serde_json::to_string_pretty(&result).unwrap();
            let code = write_output(out, &format!("{json}\n"));
            if code != EXIT_OK {
                return code;
            }
            if result.verified {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(MinimizeError::Precondition(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAIL
        }
        Err(MinimizeError::Timeout { partial }) => {
            let result = IISResult {
                method,
                iis: partial,
                oracle_calls: 0,
                time_ms: 0.0,
                verified: false,
            };
            let json = serde_json::to_string_pretty(&result).unwrap();
            let _ = write_output(out, &format!("{json}\n"));
            eprintln!("error: time limit exceeded; partial result is unverified");
            EXIT_TIMEOUT
        }
    }
}

fn cmd_gen(params: &ScheduleParams, out: Option<&Path>) -> u8 {
    match generate_instance(params) {
        Ok(model) => write_output(out, &model_to_json(&model)),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_bench(
    manifest_path: &Path,
    methods: &[Method],
    time_limit_ms: Option<u64>,
    memo: bool,
    no_timing: bool,
    out: Option<&Path>,
) -> u8 {
    let text = match fs::read_to_string(manifest_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", manifest_path.display());
            return EXIT_USAGE;
        }
    };
    let manifest = match load_manifest(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {}: {e}", manifest_path.display());
            return EXIT_USAGE;
        }
    };
    let mut instances = Vec::with_capacity(manifest.len());
    for (i, params) in manifest.iter().enumerate() {
        match generate_instance(params) {
            Ok(model) => instances.push((format!("inst{i:03}"), model)),
            Err(e) => {
                eprintln!("error: manifest entry {i}: {e}");
                return EXIT_USAGE;
            }
        }
    }
    let limits = BenchLimits {
        time_limit: time_limit_ms.map(Duration::from_millis),
        memo,
    };
    let report = run_benchmark(&instances, methods, &limits);
    write_output(out, &report.to_csv(!no_timing))
}

fn cmd_export_dot(path: &Path, flags: &SearchFlags, out: Option<&Path>) -> u8 {
    let model = match read_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let mut opts = flags.options();
    opts.capture_graph = true;
    let result = extract_conflict_set(&model, &opts);
    if let Some(code) = dump_trace(flags, result.trace.as_deref()) {
        return code;
    }
    match result.outcome {
        SearchOutcome::Sat(_) => {
            eprintln!("error: model is feasible; no conflict graph to export");
            EXIT_FAIL
        }
        SearchOutcome::Timeout(_) => {
            eprintln!("error: time limit exceeded before the search completed");
            EXIT_TIMEOUT
        }
        SearchOutcome::Unsat(_) => {
            let graph = result.final_graph.expect("unsat search has a final conflict");
            write_output(out, &to_dot(&graph))
        }
    }
}
