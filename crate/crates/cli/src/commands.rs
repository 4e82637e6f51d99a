//! Batch commands: validate, explain, graph and the terminal dialogue.
//!
//! Each command writes to a caller-supplied writer and returns the process
//! exit status, so the binary and the tests share one code path.

use std::io::{self, BufRead, Write};
use std::path::Path;

use planadv_core::dialogue::{DialogueSession, PlannerMove, UserMove};
use planadv_core::export::{to_dot, to_json};
use planadv_core::framework::{ArgumentGraph, FullFramework};
use planadv_core::planning::{format_atoms, gamma_star, validate_trace, Plan, PlanningProblem, StepVerdict, Trace};
use planadv_core::schemes::{render, render_cq, Argument, Element};
use serde::Serialize;
use thiserror::Error;

pub const EXIT_VALID: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

pub fn validate(problem: &PlanningProblem, plan: &Plan, out: &mut impl Write) -> io::Result<u8> {
    let trace = gamma_star(problem, plan);
    let report = validate_trace(problem, &trace);
    writeln!(out, "problem {}", problem.name)?;
    writeln!(out, "plan {plan}")?;
    let mark = |ok: bool| if ok { "ok  " } else { "FAIL" };
    writeln!(out, "[{}] S1 is the initial state", mark(report.initial_state))?;
    for (i, (step, verdict)) in plan.steps().iter().zip(&report.steps).enumerate() {
        let i = i + 1;
        match verdict {
            StepVerdict::Applicable => writeln!(out, "[ok  ] step {i} {step} is applicable in S{i}")?,
            StepVerdict::Inapplicable => writeln!(
                out,
                "[FAIL] step {i} {step} is not applicable in S{i}: missing {}",
                format_atoms(missing_preconditions(&trace, i))
            )?,
            StepVerdict::NotReached => writeln!(out, "[skip] step {i} {step} is not reached")?,
        }
    }
    let last = trace.states.len();
    for verdict in &report.goals {
        if trace.is_complete() {
            let holds = if verdict.satisfied { "holds" } else { "does not hold" };
            writeln!(
                out,
                "[{}] goal {} {holds} in S{last}",
                mark(verdict.satisfied),
                verdict.goal
            )?;
        } else {
            writeln!(out, "[FAIL] goal {}: the final state is not reached", verdict.goal)?;
        }
    }
    writeln!(
        out,
        "[{}] {} of {} goal(s) achieved",
        mark(report.goals_achieved > 0),
        report.goals_achieved,
        problem.goals.len()
    )?;
    writeln!(out, "states:")?;
    for (j, state) in trace.states.iter().enumerate() {
        writeln!(out, "  S{} = {state}", j + 1)?;
    }
    if report.valid {
        writeln!(out, "valid")?;
        return Ok(EXIT_VALID);
    }
    writeln!(out, "invalid")?;
    for verdict in report.unmet_goals() {
        writeln!(out, "unmet goal {}", verdict.goal)?;
    }
    Ok(EXIT_INVALID)
}

fn missing_preconditions(trace: &Trace, step: usize) -> Vec<&planadv_core::planning::Atom> {
    match (trace.step(step), trace.state(step)) {
        (Some(action), Some(state)) => action.pre.iter().filter(|p| !state.contains(p)).collect(),
        _ => Vec::new(),
    }
}

/// Why the plan summary argument cannot be built, naming its first false
/// premise.
pub fn first_false_premise(problem: &PlanningProblem, trace: &Trace) -> Option<String> {
    if let Some(i) = trace.failure {
        let step = trace.step(i)?;
        return Some(format!(
            "premise 1 of Arg_pi is false: HoldPrecondition(pre({step}), S{i}) fails at step {i}, missing {}",
            format_atoms(missing_preconditions(trace, i))
        ));
    }
    let last = trace.states.len();
    let final_state = trace.final_state()?;
    let unmet: Vec<String> = problem
        .goals
        .iter()
        .filter(|g| !g.holds_in(final_state))
        .map(|g| g.to_string())
        .collect();
    if !unmet.is_empty() {
        return Some(format!(
            "premise 2 of Arg_pi is false: HoldGoals(G, S{last}) fails, unmet goal(s) {}",
            unmet.join(", ")
        ));
    }
    if trace.goals_achieved() == 0 {
        return Some("premise 3 of Arg_pi is false: AchieveGoals(π, G) fails, no goal is achieved".into());
    }
    None
}

/// Arg_π first, then each step's action and state arguments in plan order,
/// then the goal arguments.
pub fn explanation_order(arguments: &[Argument]) -> Vec<&Argument> {
    let key = |a: &Argument| match a.target {
        Element::Plan => (0, 0, 0),
        Element::Step(i) => (1, i, 0),
        Element::State(j) => (1, j - 1, 1),
        Element::Goal(g) => (2, g, 0),
    };
    let mut sorted: Vec<&Argument> = arguments.iter().collect();
    sorted.sort_by_key(|a| key(a));
    sorted
}

#[derive(Debug, Serialize)]
pub struct Explanation<'a> {
    pub problem: String,
    pub plan: Vec<String>,
    pub arguments: Vec<&'a Argument>,
}

pub fn explain(problem: &PlanningProblem, plan: &Plan, format: Format, out: &mut impl Write) -> io::Result<u8> {
    let framework = FullFramework::new(problem, plan);
    if let Some(reason) = first_false_premise(problem, &framework.trace) {
        writeln!(out, "cannot explain {plan}: {reason}")?;
        return Ok(EXIT_INVALID);
    }
    let ordered = explanation_order(&framework.arguments);
    match format {
        Format::Text => {
            for (k, arg) in ordered.iter().enumerate() {
                if k > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "== {} ==", arg.id())?;
                write!(out, "{}", render(arg))?;
            }
        }
        Format::Json => {
            let doc = Explanation {
                problem: problem.name.to_string(),
                plan: plan.steps().iter().map(|s| s.to_string()).collect(),
                arguments: ordered,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_VALID)
}

#[derive(Debug, Error)]
pub enum SessionFileError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {entry}: {message}")]
    Entry { entry: usize, message: String },
    #[error("move {position} (`{mv}`): {message}")]
    Replay {
        position: usize,
        mv: UserMove,
        message: String,
    },
}

/// User moves recorded in a session file: either a transcript as written by
/// `dialogue --transcript` (a JSON array of entries), or one move per line
/// with `#` comments.
pub fn session_moves(text: &str) -> Result<Vec<UserMove>, SessionFileError> {
    if text.trim_start().starts_with('[') {
        let entries: Vec<serde_json::Value> = serde_json::from_str(text)?;
        let mut moves = Vec::new();
        for (k, entry) in entries.iter().enumerate() {
            if entry.get("actor").and_then(|a| a.as_str()) != Some("user") {
                continue;
            }
            let id = entry
                .get("id")
                .and_then(|v| v.as_str())
                .ok_or(SessionFileError::Entry {
                    entry: k + 1,
                    message: "missing `id`".into(),
                })?;
            moves.push(id.parse().map_err(|e| SessionFileError::Entry {
                entry: k + 1,
                message: format!("{e}"),
            })?);
        }
        return Ok(moves);
    }
    text.lines()
        .enumerate()
        .map(|(k, line)| (k, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(k, line)| {
            line.parse().map_err(|e| SessionFileError::Entry {
                entry: k + 1,
                message: format!("{e}"),
            })
        })
        .collect()
}

/// Replays recorded moves without closing the dialogue.
pub fn replay(problem: &PlanningProblem, plan: &Plan, moves: &[UserMove]) -> Result<DialogueSession, SessionFileError> {
    let mut session = DialogueSession::new(problem.clone(), plan.clone());
    for (k, mv) in moves.iter().enumerate() {
        session.advance(*mv, None).map_err(|e| SessionFileError::Replay {
            position: k + 1,
            mv: *mv,
            message: e.to_string(),
        })?;
    }
    Ok(session)
}

pub fn write_graph(graph: &ArgumentGraph, format: GraphFormat, out: &mut impl Write) -> io::Result<()> {
    match format {
        GraphFormat::Dot => write!(out, "{}", to_dot(graph)),
        GraphFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &to_json(graph))?;
            writeln!(out)
        }
    }
}

/// Full framework when `session` is `None`, otherwise the graph of the
/// dialogue recorded in that file.
pub fn graph(
    problem: &PlanningProblem,
    plan: &Plan,
    session: Option<&str>,
    format: GraphFormat,
    out: &mut impl Write,
) -> Result<(), GraphError> {
    let graph = match session {
        None => FullFramework::new(problem, plan).graph,
        Some(text) => replay(problem, plan, &session_moves(text)?)?.session_aaf(),
    };
    write_graph(&graph, format, out)?;
    Ok(())
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Session(#[from] SessionFileError),
}

/// Terminal dialogue. Each turn lists the legal questions as a numbered
/// menu; `0` (or end of input) plays `none`. A question id such as
/// `CQ2(1)` may be typed instead of its number.
pub fn dialogue(session: &mut DialogueSession, input: impl BufRead, out: &mut impl Write) -> io::Result<()> {
    let mut lines = input.lines();
    writeln!(out, "problem {}", session.problem().name)?;
    writeln!(out, "plan {}", session.plan())?;
    session.check_exhaustion();
    while session.outcome().is_none() {
        let legal: Vec<_> = session.legal_moves().into_iter().collect();
        writeln!(out)?;
        writeln!(out, "Your move:")?;
        for (k, cq) in legal.iter().enumerate() {
            writeln!(
                out,
                "  {}. {} {}",
                k + 1,
                cq.id(),
                render_cq(cq, session.problem(), session.trace())
            )?;
        }
        writeln!(out, "  0. none")?;
        write!(out, "> ")?;
        out.flush()?;
        let line = match lines.next() {
            Some(line) => line?,
            None => {
                writeln!(out)?;
                "0".to_string()
            }
        };
        let choice = line.trim();
        if choice.is_empty() {
            continue;
        }
        let mv = match choice.parse::<usize>() {
            Ok(0) => UserMove::None,
            Ok(k) if k <= legal.len() => UserMove::Ask(legal[k - 1]),
            Ok(k) => {
                writeln!(out, "no move numbered {k}")?;
                continue;
            }
            Err(_) => match choice.parse::<UserMove>() {
                Ok(mv) => mv,
                Err(e) => {
                    writeln!(out, "{e}")?;
                    continue;
                }
            },
        };
        match session.advance(mv, None) {
            Ok(Some(PlannerMove::Argue(arg))) => {
                writeln!(out, "\nUser: {mv}")?;
                writeln!(out, "Planner: {}", arg.id())?;
                write!(out, "{}", render(&arg))?;
            }
            Ok(Some(PlannerMove::Null)) => {
                writeln!(out, "\nUser: {mv}")?;
                writeln!(out, "Planner: no argument can be given")?;
            }
            Ok(None) => writeln!(out, "\nUser: {mv}")?,
            Err(e) => writeln!(out, "rejected: {e}")?,
        }
    }
    if let Some(outcome) = session.outcome() {
        writeln!(out)?;
        writeln!(out, "=== {outcome} ===")?;
    }
    Ok(())
}

/// Writes a transcript as pretty JSON.
pub fn save_transcript(session: &DialogueSession, path: &Path) -> io::Result<()> {
    let json = serde_json::to_string_pretty(&session.transcript())?;
    std::fs::write(path, json + "\n")
}
