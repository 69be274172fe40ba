//! Line-oriented search trace. Each event renders to one stable text line,
//! so runs can be diffed byte-for-byte and replayed by tools and tests.
//!
//! Schema (space separated; variables and constraints by numeric id, the
//! `core` payload is a raw constraint name and extends to end of line):
//!
//! ```text
//! decide <var> <0|1> <level>
//! imply <var> <0|1> <level> <cons>
//! conflict <cons> <level>
//! core <name>
//! learn <cons> <degree> [<lit>...]      lit = <var> | ~<var>
//! backtrack <level>
//! result <SAT|UNSAT|TIMEOUT> <core-size>
//! ```

use std::fmt;

use crate::model::Lit;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Decide { var: u32, value: bool, level: u32 },
    Imply { var: u32, value: bool, level: u32, cons: usize },
    Conflict { cons: usize, level: u32 },
    CoreAdd { name: String },
    Learn { cons: usize, degree: i64, lits: Vec<Lit> },
    Backtrack { level: u32 },
    Result { outcome: &'static str, core_size: usize },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Decide { var, value, level } => {
                write!(f, "decide {var} {} {level}", *value as u8)
            }
            TraceEvent::Imply { var, value, level, cons } => {
                write!(f, "imply {var} {} {level} {cons}", *value as u8)
            }
            TraceEvent::Conflict { cons, level } => write!(f, "conflict {cons} {level}"),
            TraceEvent::CoreAdd { name } => write!(f, "core {name}"),
            TraceEvent::Learn { cons, degree, lits } => {
                write!(f, "learn {cons} {degree}")?;
                for lit in lits {
                    if lit.is_negated() {
                        write!(f, " ~{}", lit.var().0)?;
                    } else {
                        write!(f, " {}", lit.var().0)?;
                    }
                }
                Ok(())
            }
            TraceEvent::Backtrack { level } => write!(f, "backtrack {level}"),
            TraceEvent::Result { outcome, core_size } => {
                write!(f, "result {outcome} {core_size}")
            }
        }
    }
}

/// Renders a trace as newline-terminated lines.
pub fn render_trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&ev.to_string());
        out.push('\n');
    }
    out
}
