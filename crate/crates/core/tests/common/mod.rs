//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's own evaluation code: traces, claims
//! and grounded extensions are recomputed directly from the definitions.

#![allow(dead_code)]

use std::collections::BTreeSet;

use planadv_core::aaf::Aaf;
use planadv_core::planning::{Atom, GroundAction, Plan, PlanningProblem};
use rand::seq::SliceRandom;
use rand::Rng;

pub const GOLDEN_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{GOLDEN_DIR}/{name}")).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Collapses whitespace and sorts the members of each `{...}` literal.
/// Set literals list members in no particular order, so two renderings of
/// the same set compare equal.
pub fn normalize(text: &str) -> String {
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let mut rest = collapsed.as_str();
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').map(|c| open + c).expect("balanced braces");
        let body = &rest[open + 1..close];
        let mut members = split_top_level(body);
        members.sort();
        out.push('{');
        out.push_str(&members.join(", "));
        out.push('}');
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

fn split_top_level(body: &str) -> Vec<String> {
    let mut members = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in body.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                members.push(current.trim().to_string());
                current.clear();
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    if !current.trim().is_empty() {
        members.push(current.trim().to_string());
    }
    members
}

/// State sequence and first failing step (1-based), recomputed atom by
/// atom: an atom is in the next state iff it was added, or it was present
/// and not deleted.
pub struct OracleTrace {
    pub states: Vec<Vec<Atom>>,
    pub failure: Option<usize>,
}

pub fn oracle_trace(initial: &[Atom], steps: &[GroundAction]) -> OracleTrace {
    let mut states = vec![dedup(initial.to_vec())];
    for (i, step) in steps.iter().enumerate() {
        let current = states.last().unwrap();
        if !step.pre.iter().all(|p| current.contains(p)) {
            return OracleTrace {
                states,
                failure: Some(i + 1),
            };
        }
        let mut universe: Vec<Atom> = current.clone();
        universe.extend(step.add.iter().cloned());
        let next: Vec<Atom> = universe
            .into_iter()
            .filter(|x| step.add.contains(x) || (current.contains(x) && !step.del.contains(x)))
            .collect();
        states.push(dedup(next));
    }
    OracleTrace { states, failure: None }
}

fn dedup(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort();
    atoms.dedup();
    atoms
}

pub fn as_set(atoms: &[Atom]) -> BTreeSet<Atom> {
    atoms.iter().cloned().collect()
}

/// Validity straight from the four conditions.
pub fn oracle_valid(problem: &PlanningProblem, plan: &Plan) -> bool {
    let initial: Vec<Atom> = problem.initial.iter().cloned().collect();
    let trace = oracle_trace(&initial, plan.steps());
    if trace.failure.is_some() {
        return false;
    }
    let last = trace.states.last().unwrap();
    let satisfied = problem
        .goals
        .iter()
        .filter(|g| g.requirements().iter().all(|r| last.contains(r)))
        .count();
    satisfied == problem.goals.len() && satisfied > 0
}

pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// One to three random drop, duplicate or swap edits.
pub fn mutate<R: Rng>(rng: &mut R, steps: &[GroundAction]) -> Vec<GroundAction> {
    let mut out = steps.to_vec();
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..3) {
            0 if !out.is_empty() => {
                let i = rng.gen_range(0..out.len());
                out.remove(i);
            }
            1 if !out.is_empty() => {
                let i = rng.gen_range(0..out.len());
                let step = out[i].clone();
                out.insert(i, step);
            }
            2 if out.len() >= 2 => {
                let i = rng.gen_range(0..out.len());
                let j = rng.gen_range(0..out.len());
                out.swap(i, j);
            }
            _ => {}
        }
    }
    out
}

/// Random framework over `n` nodes, each ordered pair (self-loops
/// included) attacking with probability `density`.
pub fn random_aaf<R: Rng>(rng: &mut R, n: usize, density: f64) -> Aaf {
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::new();
    for a in &nodes {
        for b in &nodes {
            if rng.gen_bool(density) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    Aaf::from_edges(nodes, edges).unwrap()
}

/// Least fixpoint of the defence operator, iterated from the empty set on
/// the raw edge list.
pub fn oracle_grounded(aaf: &Aaf) -> BTreeSet<String> {
    let edges: Vec<(String, String)> = aaf.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let mut current: BTreeSet<String> = BTreeSet::new();
    loop {
        let next: BTreeSet<String> = aaf
            .nodes()
            .iter()
            .filter(|x| {
                edges
                    .iter()
                    .filter(|(_, t)| t == *x)
                    .all(|(y, _)| edges.iter().any(|(z, t)| t == y && current.contains(z)))
            })
            .cloned()
            .collect();
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Random plan over the problem's action universe.
pub fn random_plan<R: Rng>(rng: &mut R, problem: &PlanningProblem, max_len: usize) -> Plan {
    let len = rng.gen_range(0..=max_len);
    Plan::new(
        (0..len)
            .map(|_| problem.actions.choose(rng).expect("non-empty universe").clone())
            .collect(),
    )
}

/// Plays uniformly random legal questions, stopping with `none` with
/// probability `stop`, until the dialogue terminates.
pub fn random_walk<R: Rng>(
    rng: &mut R,
    problem: &PlanningProblem,
    plan: &Plan,
    stop: f64,
) -> Result<planadv_core::dialogue::DialogueSession, planadv_core::dialogue::DialogueError> {
    use planadv_core::dialogue::{DialogueSession, UserMove};
    let mut session = DialogueSession::new(problem.clone(), plan.clone());
    session.check_exhaustion();
    while session.outcome().is_none() {
        let legal: Vec<_> = session.legal_moves().into_iter().collect();
        let mv = if legal.is_empty() || rng.gen_bool(stop) {
            UserMove::None
        } else {
            UserMove::Ask(*legal.choose(rng).unwrap())
        };
        session.advance(mv, None)?;
    }
    Ok(session)
}

const FUZZ_TOKENS: &[&str] = &[
    "(",
    ")",
    "(",
    ")",
    " ",
    "\n",
    ";",
    "define",
    "domain",
    "problem",
    ":requirements",
    ":strips",
    ":typing",
    ":predicates",
    ":action",
    ":parameters",
    ":precondition",
    ":effect",
    ":objects",
    ":init",
    ":goal",
    ":domain",
    "and",
    "not",
    "or",
    "?x",
    "?y",
    "a",
    "B",
    "on",
    "clear",
    "unstack",
    "-",
    "object",
    "é",
    "\u{0}",
    "((((",
    "))))",
];

/// A fuzz case derived from `seed`: byte edits, token splices, truncation,
/// deep nesting or raw noise.
pub fn fuzz_bytes<R: Rng>(rng: &mut R, seed: &str) -> Vec<u8> {
    let mut bytes = seed.as_bytes().to_vec();
    match rng.gen_range(0..6) {
        0 => {
            for _ in 0..rng.gen_range(1..8) {
                let i = rng.gen_range(0..=bytes.len());
                match rng.gen_range(0..3) {
                    0 if i < bytes.len() => bytes[i] = rng.gen(),
                    1 if i < bytes.len() => {
                        bytes.remove(i);
                    }
                    _ => bytes.insert(i, rng.gen()),
                }
            }
        }
        1 => {
            for _ in 0..rng.gen_range(1..6) {
                let i = char_boundary(&bytes, rng.gen_range(0..=bytes.len()));
                let tok = FUZZ_TOKENS.choose(rng).unwrap();
                bytes.splice(i..i, tok.bytes());
            }
        }
        2 => bytes.truncate(rng.gen_range(0..=bytes.len())),
        3 => {
            let depth = rng.gen_range(1..200);
            let mut out = "(".repeat(depth).into_bytes();
            out.extend_from_slice(&bytes);
            out.extend(std::iter::repeat_n(b')', rng.gen_range(0..=depth)));
            bytes = out;
        }
        4 => {
            bytes = (0..rng.gen_range(0..200))
                .flat_map(|_| FUZZ_TOKENS.choose(rng).unwrap().bytes().chain(*b" "))
                .collect();
        }
        _ => bytes = (0..rng.gen_range(0..300)).map(|_| rng.gen()).collect(),
    }
    bytes
}

fn char_boundary(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && (bytes[i] & 0xC0) == 0x80 {
        i += 1;
    }
    i
}

/// Whether a reported position lies within the input (or one past its end).
pub fn position_in_bounds(text: &str, line: usize, col: usize) -> bool {
    let lines: Vec<&str> = text.split('\n').collect();
    line >= 1 && col >= 1 && lines.get(line - 1).is_some_and(|l| col <= l.chars().count() + 1)
}
