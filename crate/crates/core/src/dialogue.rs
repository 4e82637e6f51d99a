//! Explanation dialogue between a user asking critical questions and a
//! planner answering with scheme arguments.
//!
//! The user opens with CQ1. After each planner argument the user may ask a
//! question about an element that argument's premises mention, or stop
//! with `none`. The dialogue ends when the planner cannot answer (T1, O1),
//! when every question instance has been asked and answered (T2, O2), or
//! when the user stops (T3, O3).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::framework::{ArgumentGraph, GraphNode};
use crate::planning::{gamma_star, Plan, PlanningProblem, Trace};
use crate::schemes::{
    answer, enumerate_cqs, render, render_cq, Argument, CqKind, CriticalQuestion, Element, SchemeError, SchemeKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Termination {
    T1,
    T2,
    T3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OutcomeTag {
    O1,
    O2,
    O3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Outcome {
    pub termination: Termination,
    pub outcome: OutcomeTag,
    pub message: &'static str,
}

impl Outcome {
    pub fn from_termination(termination: Termination) -> Outcome {
        let (outcome, message) = match termination {
            Termination::T1 => (OutcomeTag::O1, "Plan is invalid and explanation is unacceptable"),
            Termination::T2 => (OutcomeTag::O2, "Plan is valid and explanation is acceptable"),
            Termination::T3 => (OutcomeTag::O3, "Explanation is acceptable"),
        };
        Outcome {
            termination,
            outcome,
            message,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}: {}", self.termination, self.outcome, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    AwaitingUser,
    AwaitingPlanner,
    Terminated(Outcome),
}

/// A critical question, or `none` to stop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UserMove {
    Ask(CriticalQuestion),
    None,
}

impl fmt::Display for UserMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UserMove::Ask(cq) => write!(f, "{cq}"),
            UserMove::None => f.write_str("none"),
        }
    }
}

impl From<CriticalQuestion> for UserMove {
    fn from(cq: CriticalQuestion) -> Self {
        UserMove::Ask(cq)
    }
}

impl std::str::FromStr for UserMove {
    type Err = crate::schemes::CqParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("none") {
            Ok(UserMove::None)
        } else {
            s.parse().map(UserMove::Ask)
        }
    }
}

impl Serialize for UserMove {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UserMove {
    /// Accepts `"none"`, an id string like `"CQ2(1)"`, or an object
    /// `{"kind": "CQ2", "target": {"type": "step", "index": 1}}`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Object { kind: Option<CqKind>, target: Element },
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Object { kind, target } => {
                let cq = CriticalQuestion { target };
                match kind {
                    Some(k) if k != cq.kind() => Err(serde::de::Error::custom(format!(
                        "{k} does not target a {}",
                        match target {
                            Element::Plan => "plan",
                            Element::Step(_) => "step",
                            Element::State(_) => "state",
                            Element::Goal(_) => "goal",
                        }
                    ))),
                    _ => Ok(UserMove::Ask(cq)),
                }
            }
        }
    }
}

/// The planner's reply: an argument, or `null` when none can be built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PlannerMove {
    Argue(Box<Argument>),
    Null,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialogueError {
    #[error("the dialogue has already terminated")]
    Terminated,
    #[error("it is the planner's turn")]
    AwaitingPlanner,
    #[error("it is the user's turn")]
    AwaitingUser,
    #[error("{0} has already been asked")]
    Repeated(CriticalQuestion),
    #[error("{question} is not a legal move here")]
    IllegalMove {
        question: CriticalQuestion,
        legal: BTreeSet<CriticalQuestion>,
    },
    #[error("`{0}` is not an argument the planner has put forward")]
    UnknownPrior(String),
    #[error(transparent)]
    Target(#[from] SchemeError),
}

/// One entry of the move history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    User(CriticalQuestion),
    Planner(Box<Argument>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Actor {
    User,
    Planner,
}

/// A history entry as shown to clients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub turn: usize,
    pub actor: Actor,
    pub id: String,
    pub kind: String,
    pub target: Element,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argument: Option<Argument>,
}

#[derive(Debug, Clone)]
pub struct DialogueSession {
    problem: PlanningProblem,
    trace: Trace,
    instances: BTreeSet<CriticalQuestion>,
    asked: BTreeSet<CriticalQuestion>,
    arguments: Vec<Argument>,
    history: Vec<Move>,
    status: Status,
}

impl DialogueSession {
    pub fn new(problem: PlanningProblem, plan: Plan) -> DialogueSession {
        let trace = gamma_star(&problem, &plan);
        let instances = enumerate_cqs(&problem, &plan);
        DialogueSession {
            problem,
            trace,
            instances,
            asked: BTreeSet::new(),
            arguments: Vec::new(),
            history: Vec::new(),
            status: Status::AwaitingUser,
        }
    }

    pub fn problem(&self) -> &PlanningProblem {
        &self.problem
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn plan(&self) -> &Plan {
        &self.trace.plan
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn outcome(&self) -> Option<Outcome> {
        match self.status {
            Status::Terminated(o) => Some(o),
            _ => None,
        }
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    /// Every question instance for the plan.
    pub fn instances(&self) -> &BTreeSet<CriticalQuestion> {
        &self.instances
    }

    /// CS(us): the questions asked so far.
    pub fn asked(&self) -> &BTreeSet<CriticalQuestion> {
        &self.asked
    }

    /// CS(pl): the planner's arguments, in the order put forward.
    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn argument(&self, id: &str) -> Option<&Argument> {
        self.arguments.iter().find(|a| a.id() == id)
    }

    /// Questions the argument `arg` opens up, before removing asked ones.
    pub fn offered_by(&self, arg: &Argument) -> BTreeSet<CriticalQuestion> {
        let n = self.trace.len();
        let non_initial = |j: &usize| (2..=n + 1).contains(j);
        match arg.target {
            Element::Plan => self
                .instances
                .iter()
                .filter(|q| q.target != Element::Plan)
                .copied()
                .collect(),
            // The action's precondition state and the state it leads to.
            Element::Step(i) => [i, i + 1]
                .into_iter()
                .filter(non_initial)
                .map(CriticalQuestion::state)
                .collect(),
            Element::State(_) | Element::Goal(_) => {
                let mut out: BTreeSet<CriticalQuestion> = BTreeSet::new();
                if arg.kind() == SchemeKind::Goal {
                    out.extend(
                        arg.premise_states(n)
                            .into_iter()
                            .filter(non_initial)
                            .map(CriticalQuestion::state),
                    );
                }
                out.extend(arg.premise_steps(n).into_iter().map(CriticalQuestion::step));
                out
            }
        }
    }

    /// Legal questions in response to `prior`, which defaults to the most
    /// recent argument. Before any argument only CQ1 is available.
    pub fn find_user_moves(&self, prior: Option<&str>) -> Result<BTreeSet<CriticalQuestion>, DialogueError> {
        let offered = match prior {
            Some(id) => self.offered_by(
                self.argument(id)
                    .ok_or_else(|| DialogueError::UnknownPrior(id.to_string()))?,
            ),
            None => match self.arguments.last() {
                Some(arg) => self.offered_by(arg),
                None => BTreeSet::from([CriticalQuestion::CQ1]),
            },
        };
        Ok(&offered - &self.asked)
    }

    /// Legal questions in response to any argument put forward so far.
    pub fn legal_moves(&self) -> BTreeSet<CriticalQuestion> {
        if self.arguments.is_empty() {
            return &BTreeSet::from([CriticalQuestion::CQ1]) - &self.asked;
        }
        let all: BTreeSet<CriticalQuestion> = self.arguments.iter().flat_map(|a| self.offered_by(a)).collect();
        &all - &self.asked
    }

    fn expect_user_turn(&self) -> Result<(), DialogueError> {
        match self.status {
            Status::AwaitingUser => Ok(()),
            Status::AwaitingPlanner => Err(DialogueError::AwaitingPlanner),
            Status::Terminated(_) => Err(DialogueError::Terminated),
        }
    }

    /// Plays a user move. With `prior`, the question must respond to that
    /// argument; without, to any argument put forward so far. A rejected
    /// move leaves the session unchanged.
    pub fn user_move(&mut self, mv: UserMove, prior: Option<&str>) -> Result<(), DialogueError> {
        self.expect_user_turn()?;
        let cq = match mv {
            UserMove::None => {
                if let Some(id) = prior {
                    self.argument(id)
                        .ok_or_else(|| DialogueError::UnknownPrior(id.to_string()))?;
                }
                self.status = Status::Terminated(Outcome::from_termination(Termination::T3));
                return Ok(());
            }
            UserMove::Ask(cq) => cq,
        };
        cq.check(self.trace.len(), self.problem.goals.len())?;
        if self.asked.contains(&cq) {
            return Err(DialogueError::Repeated(cq));
        }
        let legal = match prior {
            Some(_) => self.find_user_moves(prior)?,
            None => self.legal_moves(),
        };
        if !legal.contains(&cq) {
            return Err(DialogueError::IllegalMove { question: cq, legal });
        }
        self.asked.insert(cq);
        self.history.push(Move::User(cq));
        self.status = Status::AwaitingPlanner;
        Ok(())
    }

    /// Answers the last question with the paired scheme, or terminates
    /// with T1 when no argument can be built.
    pub fn planner_respond(&mut self) -> Result<PlannerMove, DialogueError> {
        match self.status {
            Status::AwaitingPlanner => {}
            Status::AwaitingUser => return Err(DialogueError::AwaitingUser),
            Status::Terminated(_) => return Err(DialogueError::Terminated),
        }
        let cq = match self.history.last() {
            Some(Move::User(cq)) => *cq,
            _ => unreachable!("awaiting the planner only after a user question"),
        };
        match answer(&cq, &self.problem, &self.trace)? {
            Some(arg) => {
                self.arguments.push(arg.clone());
                self.history.push(Move::Planner(Box::new(arg.clone())));
                self.status = Status::AwaitingUser;
                Ok(PlannerMove::Argue(Box::new(arg)))
            }
            None => {
                self.status = Status::Terminated(Outcome::from_termination(Termination::T1));
                Ok(PlannerMove::Null)
            }
        }
    }

    /// Terminates with T2 once every question instance has been asked.
    pub fn check_exhaustion(&mut self) -> bool {
        if self.status == Status::AwaitingUser && self.asked == self.instances {
            self.status = Status::Terminated(Outcome::from_termination(Termination::T2));
            true
        } else {
            false
        }
    }

    /// One round: the user's move, the planner's reply, then the
    /// exhaustion check. Returns the reply, if the user asked a question.
    pub fn advance(&mut self, mv: UserMove, prior: Option<&str>) -> Result<Option<PlannerMove>, DialogueError> {
        self.user_move(mv, prior)?;
        if self.status != Status::AwaitingPlanner {
            return Ok(None);
        }
        let reply = self.planner_respond()?;
        self.check_exhaustion();
        Ok(Some(reply))
    }

    /// The graph over the moves played so far.
    pub fn session_aaf(&self) -> ArgumentGraph {
        let nodes = self.history.iter().map(|m| match m {
            Move::User(cq) => GraphNode::Question(*cq),
            Move::Planner(arg) => GraphNode::Argument(arg),
        });
        ArgumentGraph::build(&self.problem, &self.trace, nodes)
    }

    pub fn transcript(&self) -> Vec<TranscriptEntry> {
        self.history
            .iter()
            .enumerate()
            .map(|(i, m)| match m {
                Move::User(cq) => TranscriptEntry {
                    turn: i + 1,
                    actor: Actor::User,
                    id: cq.id(),
                    kind: cq.kind().to_string(),
                    target: cq.target,
                    text: render_cq(cq, &self.problem, &self.trace),
                    argument: None,
                },
                Move::Planner(arg) => TranscriptEntry {
                    turn: i + 1,
                    actor: Actor::Planner,
                    id: arg.id(),
                    kind: arg.kind().to_string(),
                    target: arg.target,
                    text: render(arg),
                    argument: Some((**arg).clone()),
                },
            })
            .collect()
    }
}

/// A scripted move that could not be played.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {position} (`{mv}`): {error}")]
pub struct ScriptError {
    /// 1-based index into the script.
    pub position: usize,
    pub mv: UserMove,
    pub error: DialogueError,
}

/// Runs a whole dialogue from a script of user moves. A script that runs
/// out before the dialogue ends counts as `none`; moves left after it ends
/// are an error.
pub fn run_scripted(
    session: &mut DialogueSession,
    script: impl IntoIterator<Item = UserMove>,
) -> Result<(Vec<TranscriptEntry>, Outcome), ScriptError> {
    let mut script = script.into_iter().enumerate();
    loop {
        if session.status() == Status::AwaitingUser {
            session.check_exhaustion();
        }
        if let Some(outcome) = session.outcome() {
            if let Some((i, mv)) = script.next() {
                return Err(ScriptError {
                    position: i + 1,
                    mv,
                    error: DialogueError::Terminated,
                });
            }
            return Ok((session.transcript(), outcome));
        }
        let (i, mv) = script.next().unwrap_or((usize::MAX, UserMove::None));
        session.advance(mv, None).map_err(|error| ScriptError {
            position: i.saturating_add(1),
            mv,
            error,
        })?;
    }
}
