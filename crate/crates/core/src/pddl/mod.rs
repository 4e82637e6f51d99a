//! Front end for a small STRIPS subset of PDDL.
//!
//! Three file kinds are read: a domain (`define (domain ...)`), a problem
//! (`define (problem ...)`) and a plan (one ground application per line).
//! The grammar is documented in `docs/grammar.md` at the repository root.
//! Symbols are case-insensitive; the first declared spelling is kept for
//! display.

mod domain;
mod plan;
mod problem;
pub mod sexpr;

use std::fmt;

use thiserror::Error;

pub use domain::{parse_domain, ActionSchema, AtomSchema, DomainAst, PredicateDecl};
pub use plan::{format_plan, parse_plan};
pub use problem::{parse_problem, ProblemAst};
pub use sexpr::Pos;

use crate::planning::{Plan, PlanningProblem};

/// Above this many ground actions the universe is restricted to the plan's
/// own steps.
pub const UNIVERSE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("nesting deeper than {0} levels")]
    TooDeep(usize),
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("variable `{variable}` is not a parameter of `{action}`")]
    UnboundVariable { variable: String, action: String },
    #[error("`{predicate}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("`{0}` is not ground")]
    NonGround(String),
    #[error("action `{action}` takes {expected} argument(s), got {found}")]
    WrongArgumentCount {
        action: String,
        expected: usize,
        found: usize,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("problem is for domain `{found}`, expected `{expected}`")]
    DomainMismatch { expected: String, found: String },
}

/// A parse failure at a position in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }

    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::new(pos, ParseErrorKind::Syntax(msg.into()))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("parameter `{parameter}` of `{action}` is not bound")]
    IncompleteBinding { action: String, parameter: String },
    #[error("action `{action}` takes {expected} argument(s), got {found}")]
    WrongArgumentCount {
        action: String,
        expected: usize,
        found: usize,
    },
}

/// Decodes raw bytes, reporting the position of the first invalid sequence.
pub fn decode(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
        let line = valid.matches('\n').count() + 1;
        let col = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError::new(Pos { line, col }, ParseErrorKind::InvalidUtf8)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Domain,
    Problem,
    Plan,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Domain => "domain",
            FileKind::Problem => "problem",
            FileKind::Plan => "plan",
        })
    }
}

/// A parse error tagged with the file it came from.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}:{error}")]
pub struct LoadError {
    pub file: FileKind,
    pub error: ParseError,
}

/// Parses all three inputs and assembles the planning problem and plan.
pub fn load(domain: &str, problem: &str, plan: &str) -> Result<(PlanningProblem, Plan), LoadError> {
    let tag = |file| move |error| LoadError { file, error };
    let dom = parse_domain(domain).map_err(tag(FileKind::Domain))?;
    let prob = parse_problem(problem, &dom).map_err(tag(FileKind::Problem))?;
    let plan = parse_plan(plan, &dom, &prob).map_err(tag(FileKind::Plan))?;
    let problem = prob.to_planning_problem(&dom, &plan);
    Ok((problem, plan))
}
