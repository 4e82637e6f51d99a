//! Argument schemes and critical questions over a plan trace.
//!
//! Four schemes explain the plan and its elements: the plan summary
//! argument (`Arg_pi`), action arguments (`Arg_a`), state arguments
//! (`Arg_S`) and goal arguments (`Arg_g`). Each critical question targets
//! one plan element and is answered by the scheme for that element:
//!
//! | question | target        | answered by |
//! |----------|---------------|-------------|
//! | CQ1      | the plan      | `Arg_pi`    |
//! | CQ2      | step `i`      | `Arg_a`     |
//! | CQ3      | state `j ≥ 2` | `Arg_S`     |
//! | CQ4      | goal `g`      | `Arg_g`     |
//!
//! Steps, states and goals are numbered from 1; state 1 is the initial
//! state. An argument is only built when all of its premises hold against
//! the trace; otherwise the constructor returns `None`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planning::{
    achiever, format_atoms, format_goals, gamma, Achiever, Goal, GroundAction, Plan, PlanningProblem, State, Trace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("step {index} is out of range 1..={len}")]
    StepOutOfRange { index: usize, len: usize },
    #[error("state {index} is out of range 2..={last}")]
    StateOutOfRange { index: usize, last: usize },
    #[error("the initial state is known to be true and cannot be questioned")]
    InitialState,
    #[error("goal {0} is not a goal of the problem")]
    UnknownGoal(usize),
}

/// A plan element that a question or argument is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "index", rename_all = "snake_case")]
pub enum Element {
    Plan,
    Step(usize),
    State(usize),
    Goal(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CqKind {
    #[serde(rename = "CQ1")]
    Cq1,
    #[serde(rename = "CQ2")]
    Cq2,
    #[serde(rename = "CQ3")]
    Cq3,
    #[serde(rename = "CQ4")]
    Cq4,
}

impl fmt::Display for CqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CqKind::Cq1 => "CQ1",
            CqKind::Cq2 => "CQ2",
            CqKind::Cq3 => "CQ3",
            CqKind::Cq4 => "CQ4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    #[serde(rename = "Arg_pi")]
    Plan,
    #[serde(rename = "Arg_a")]
    Action,
    #[serde(rename = "Arg_S")]
    State,
    #[serde(rename = "Arg_g")]
    Goal,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Plan => "Arg_pi",
            SchemeKind::Action => "Arg_a",
            SchemeKind::State => "Arg_S",
            SchemeKind::Goal => "Arg_g",
        })
    }
}

impl Element {
    pub fn scheme(self) -> SchemeKind {
        match self {
            Element::Plan => SchemeKind::Plan,
            Element::Step(_) => SchemeKind::Action,
            Element::State(_) => SchemeKind::State,
            Element::Goal(_) => SchemeKind::Goal,
        }
    }

    pub fn question_kind(self) -> CqKind {
        match self {
            Element::Plan => CqKind::Cq1,
            Element::Step(_) => CqKind::Cq2,
            Element::State(_) => CqKind::Cq3,
            Element::Goal(_) => CqKind::Cq4,
        }
    }

    fn suffix(self) -> String {
        match self {
            Element::Plan => String::new(),
            Element::Step(i) | Element::State(i) | Element::Goal(i) => format!("({i})"),
        }
    }
}

/// A critical question instance, identified by the element it targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CriticalQuestion {
    pub target: Element,
}

impl CriticalQuestion {
    pub const CQ1: CriticalQuestion = CriticalQuestion { target: Element::Plan };

    pub fn step(i: usize) -> Self {
        CriticalQuestion {
            target: Element::Step(i),
        }
    }

    pub fn state(j: usize) -> Self {
        CriticalQuestion {
            target: Element::State(j),
        }
    }

    pub fn goal(g: usize) -> Self {
        CriticalQuestion {
            target: Element::Goal(g),
        }
    }

    pub fn kind(&self) -> CqKind {
        self.target.question_kind()
    }

    /// Identifier such as `CQ1` or `CQ2(3)`.
    pub fn id(&self) -> String {
        format!("{}{}", self.kind(), self.target.suffix())
    }

    /// Checks the target against a plan of `steps` steps and `goals` goals.
    pub fn check(&self, steps: usize, goals: usize) -> Result<(), SchemeError> {
        match self.target {
            Element::Plan => Ok(()),
            Element::Step(i) if (1..=steps).contains(&i) => Ok(()),
            Element::Step(i) => Err(SchemeError::StepOutOfRange { index: i, len: steps }),
            Element::State(1) => Err(SchemeError::InitialState),
            Element::State(j) if (2..=steps + 1).contains(&j) => Ok(()),
            Element::State(j) => Err(SchemeError::StateOutOfRange {
                index: j,
                last: steps + 1,
            }),
            Element::Goal(g) if (1..=goals).contains(&g) => Ok(()),
            Element::Goal(g) => Err(SchemeError::UnknownGoal(g)),
        }
    }
}

impl fmt::Display for CriticalQuestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a critical question id (expected CQ1, CQ2(i), CQ3(j) or CQ4(g))")]
pub struct CqParseError(pub String);

impl FromStr for CriticalQuestion {
    type Err = CqParseError;

    /// Accepts `CQ1`, `CQ2(1)`, and the space-separated form `cq2 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CqParseError(s.to_string());
        let t = s.trim().to_ascii_lowercase();
        let rest = t.strip_prefix("cq").ok_or_else(err)?;
        let (digit, arg) = rest.split_at(rest.chars().next().map_or(0, char::len_utf8));
        let arg = arg.trim();
        let arg = arg
            .strip_prefix('(')
            .and_then(|a| a.strip_suffix(')'))
            .unwrap_or(arg)
            .trim();
        let index = || arg.parse::<usize>().map_err(|_| err());
        let target = match digit {
            "1" if arg.is_empty() => Element::Plan,
            "2" => Element::Step(index()?),
            "3" => Element::State(index()?),
            "4" => Element::Goal(index()?),
            _ => return Err(err()),
        };
        Ok(CriticalQuestion { target })
    }
}

/// A structured claim evaluable against a trace.
///
/// State indices are 1-based positions in the trace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "predicate", rename_all = "snake_case")]
pub enum Claim {
    /// `pre(a_step) ⊆ S_state`.
    HoldPrecondition {
        step: usize,
        state: usize,
    },
    /// Goal `goal` holds in `S_state`.
    HoldGoal {
        goal: usize,
        state: usize,
    },
    /// Every goal holds in `S_state`, which must be the final state.
    HoldGoals {
        state: usize,
    },
    ExecuteAction {
        step: usize,
        state: usize,
    },
    /// The goal holds right after the achiever and keeps holding.
    AchieveGoal {
        goal: usize,
        achiever: Achiever,
    },
    /// The plan reaches the final state and all goals (of which there is at
    /// least one) hold there.
    AchieveGoals,
    Solution,
    /// `γ(S_step, a_step) = S_{step+1}`.
    Transition {
        step: usize,
    },
    /// Every step's transition, from S₁ to S_{n+1}.
    TransitionChain,
    /// State `S_state` is reached by the plan.
    StateReached {
        state: usize,
    },
    /// The goal holds in Δ_I and in every later state.
    Persists {
        goal: usize,
    },
}

impl Claim {
    /// Evaluates the claim directly on the trace's states and the plan.
    pub fn evaluate(&self, problem: &PlanningProblem, trace: &Trace) -> bool {
        let n = trace.len();
        let transition = |step: usize| -> bool {
            match (trace.step(step), trace.state(step), trace.state(step + 1)) {
                (Some(a), Some(from), Some(to)) => gamma(from, a).as_ref() == Some(to),
                _ => false,
            }
        };
        let goal_in = |goal: usize, state: usize| -> bool {
            match (problem.goal(goal), trace.state(state)) {
                (Some(g), Some(s)) => g.holds_in(s),
                _ => false,
            }
        };
        let complete = trace.is_complete() && trace.states.len() == n + 1;
        match *self {
            Claim::HoldPrecondition { step, state } | Claim::ExecuteAction { step, state } => {
                match (trace.step(step), trace.state(state)) {
                    (Some(a), Some(s)) => s.is_superset(&a.pre),
                    _ => false,
                }
            }
            Claim::HoldGoal { goal, state } => goal_in(goal, state),
            Claim::HoldGoals { state } => {
                complete && state == n + 1 && (1..=problem.goals.len()).all(|g| goal_in(g, state))
            }
            Claim::AchieveGoal { goal, achiever } => {
                let from = match achiever {
                    Achiever::Initial => 1,
                    Achiever::Step(i) => i + 1,
                };
                complete
                    && from <= n + 1
                    && (from..=n + 1).all(|s| goal_in(goal, s))
                    && match achiever {
                        Achiever::Initial => true,
                        Achiever::Step(i) => transition(i),
                    }
            }
            Claim::AchieveGoals => {
                complete && !problem.goals.is_empty() && (1..=problem.goals.len()).all(|g| goal_in(g, n + 1))
            }
            Claim::Solution => {
                Claim::TransitionChain.evaluate(problem, trace)
                    && Claim::HoldGoals { state: n + 1 }.evaluate(problem, trace)
                    && Claim::AchieveGoals.evaluate(problem, trace)
            }
            Claim::Transition { step } => transition(step),
            Claim::TransitionChain => complete && (1..=n).all(transition),
            Claim::StateReached { state } => trace.state(state).is_some() && (state == 1 || transition(state - 1)),
            Claim::Persists { goal } => complete && (1..=n + 1).all(|s| goal_in(goal, s)),
        }
    }

    /// States (1-based) the claim refers to.
    pub fn states(&self, steps: usize) -> BTreeSet<usize> {
        match *self {
            Claim::HoldPrecondition { state, .. }
            | Claim::ExecuteAction { state, .. }
            | Claim::HoldGoal { state, .. }
            | Claim::HoldGoals { state }
            | Claim::StateReached { state } => BTreeSet::from([state]),
            Claim::Transition { step } => BTreeSet::from([step, step + 1]),
            Claim::TransitionChain | Claim::Persists { .. } => (1..=steps + 1).collect(),
            Claim::AchieveGoal { .. } | Claim::AchieveGoals | Claim::Solution => BTreeSet::new(),
        }
    }

    /// Steps (1-based) the claim refers to.
    pub fn steps(&self, steps: usize) -> BTreeSet<usize> {
        match *self {
            Claim::HoldPrecondition { step, .. } | Claim::ExecuteAction { step, .. } | Claim::Transition { step } => {
                BTreeSet::from([step])
            }
            Claim::TransitionChain => (1..=steps).collect(),
            Claim::AchieveGoal {
                achiever: Achiever::Step(i),
                ..
            } => BTreeSet::from([i]),
            _ => BTreeSet::new(),
        }
    }

    /// Goals (1-based) the claim refers to.
    pub fn goals(&self, goals: usize) -> BTreeSet<usize> {
        match *self {
            Claim::HoldGoal { goal, .. } | Claim::AchieveGoal { goal, .. } | Claim::Persists { goal } => {
                BTreeSet::from([goal])
            }
            Claim::HoldGoals { .. } | Claim::AchieveGoals => (1..=goals).collect(),
            _ => BTreeSet::new(),
        }
    }
}

/// A premise or conclusion: a claim with its formal and English renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Statement {
    #[serde(rename = "structured")]
    pub claim: Claim,
    #[serde(rename = "claim")]
    pub formal: String,
    pub text: String,
    /// Per-step pieces of a statement spanning several transitions.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<StatementPart>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatementPart {
    #[serde(rename = "claim")]
    pub formal: String,
    pub text: String,
}

impl Statement {
    fn new(claim: Claim, formal: impl Into<String>, text: impl Into<String>) -> Self {
        Statement {
            claim,
            formal: formal.into(),
            text: text.into(),
            parts: Vec::new(),
        }
    }
}

/// An instantiated scheme explaining one plan element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub target: Element,
    pub premises: Vec<Statement>,
    pub conclusion: Statement,
    /// Goal argument for a goal that held from the initial state, with no
    /// achieving action.
    pub degenerate: bool,
}

impl Argument {
    pub fn kind(&self) -> SchemeKind {
        self.target.scheme()
    }

    /// Identifier such as `Arg_pi` or `Arg_a(1)`.
    pub fn id(&self) -> String {
        id_for(self.target)
    }

    /// The question this argument answers.
    pub fn answers(&self) -> CriticalQuestion {
        CriticalQuestion { target: self.target }
    }

    /// States mentioned by the premises.
    pub fn premise_states(&self, steps: usize) -> BTreeSet<usize> {
        self.premises.iter().flat_map(|p| p.claim.states(steps)).collect()
    }

    /// Steps mentioned by the premises.
    pub fn premise_steps(&self, steps: usize) -> BTreeSet<usize> {
        self.premises.iter().flat_map(|p| p.claim.steps(steps)).collect()
    }

    /// Whether some premise is about `element`, in a plan of `steps` steps
    /// with `goals` goals.
    pub fn mentions(&self, element: Element, steps: usize, goals: usize) -> bool {
        self.premises.iter().any(|p| match element {
            Element::Plan => false,
            Element::Step(i) => p.claim.steps(steps).contains(&i),
            Element::State(j) => p.claim.states(steps).contains(&j),
            Element::Goal(g) => p.claim.goals(goals).contains(&g),
        })
    }
}

impl Serialize for Argument {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Argument", 7)?;
        s.serialize_field("id", &self.id())?;
        s.serialize_field("kind", &self.kind())?;
        s.serialize_field("target", &self.target)?;
        s.serialize_field("premises", &self.premises)?;
        s.serialize_field("conclusion", &self.conclusion)?;
        s.serialize_field("degenerate", &self.degenerate)?;
        s.serialize_field("text", &render(self))?;
        s.end()
    }
}

/// Node identifier of the argument answering questions about `target`.
pub fn id_for(target: Element) -> String {
    format!("{}{}", target.scheme(), target.suffix())
}

fn state_name(j: usize) -> String {
    format!("S{j}")
}

fn check_step(trace: &Trace, i: usize) -> Result<&GroundAction, SchemeError> {
    trace.step(i).ok_or(SchemeError::StepOutOfRange {
        index: i,
        len: trace.len(),
    })
}

/// `Arg_a` for step `i`: its precondition holds in `S_i`.
pub fn make_action_arg(trace: &Trace, i: usize) -> Result<Option<Argument>, SchemeError> {
    let action = check_step(trace, i)?;
    let state = match trace.state(i) {
        Some(s) if action.is_applicable(s) => s,
        _ => return Ok(None),
    };
    let premise = Statement::new(
        Claim::HoldPrecondition { step: i, state: i },
        format!("HoldPrecondition(pre({action}), {})", state_name(i)),
        format!(
            "In the current state {state}, the pre-condition {} of action {action} holds.",
            format_atoms(&action.pre)
        ),
    );
    let conclusion = Statement::new(
        Claim::ExecuteAction { step: i, state: i },
        format!("ExecuteAction({action}, {})", state_name(i)),
        format!("Therefore, we can execute action {action} in the current state {state}."),
    );
    Ok(Some(Argument {
        target: Element::Step(i),
        premises: vec![premise],
        conclusion,
        degenerate: false,
    }))
}

fn transition_states(trace: &Trace, step: usize) -> Option<(&GroundAction, &State, &State)> {
    let action = trace.step(step)?;
    let from = trace.state(step)?;
    let to = trace.state(step + 1)?;
    (gamma(from, action).as_ref() == Some(to)).then_some((action, from, to))
}

/// `Arg_S` for state `j ≥ 2`: it results from executing step `j - 1`.
pub fn make_state_arg(trace: &Trace, j: usize) -> Result<Option<Argument>, SchemeError> {
    CriticalQuestion::state(j).check(trace.len(), 0)?;
    let (action, from, to) = match transition_states(trace, j - 1) {
        Some(t) => t,
        None => return Ok(None),
    };
    let (prev, cur) = (state_name(j - 1), state_name(j));
    let premise = Statement::new(
        Claim::Transition { step: j - 1 },
        format!("γ({prev}, {action}) → (({prev} \\ post({action})⁻) ∪ post({action})⁺ = {cur})"),
        format!(
            "In the current state {from}, we can execute the action {action}, after which the negative \
             postconditions {} do not hold and the positive postconditions {} hold, that results in the state {to}.",
            format_atoms(&action.del),
            format_atoms(&action.add)
        ),
    );
    let conclusion = Statement::new(
        Claim::StateReached { state: j },
        "",
        format!("Therefore, the state {to} is true."),
    );
    Ok(Some(Argument {
        target: Element::State(j),
        premises: vec![premise],
        conclusion,
        degenerate: false,
    }))
}

/// `Arg_g` for goal `g`: the latest action adding one of its requirements
/// leads to a state where the goal holds.
pub fn make_goal_arg(problem: &PlanningProblem, trace: &Trace, g: usize) -> Result<Option<Argument>, SchemeError> {
    let goal = problem.goal(g).ok_or(SchemeError::UnknownGoal(g))?;
    let who = match achiever(trace, goal) {
        Ok(who) => who,
        Err(_) => return Ok(None),
    };
    let arg = match who {
        Achiever::Step(i) => {
            let (action, from, to) = match transition_states(trace, i) {
                Some(t) => t,
                None => return Ok(None),
            };
            let (cur, next) = (state_name(i), state_name(i + 1));
            Argument {
                target: Element::Goal(g),
                premises: vec![
                    Statement::new(
                        Claim::Transition { step: i },
                        format!("γ({cur}, {action}) → {next}"),
                        format!(
                            "In the current state {from}, we can execute the action {action}, that results in the \
                             next state {to}."
                        ),
                    ),
                    Statement::new(
                        Claim::HoldGoal { goal: g, state: i + 1 },
                        format!("HoldGoal({goal}, {next})"),
                        format!("In the next state {to}, the goal {goal} holds."),
                    ),
                ],
                conclusion: Statement::new(
                    Claim::AchieveGoal { goal: g, achiever: who },
                    format!("AchieveGoal({action}, {goal})"),
                    format!("Therefore, the action {action} achieves the goal {goal}."),
                ),
                degenerate: false,
            }
        }
        Achiever::Initial => {
            let last = trace.len() + 1;
            let final_state = trace.state(last).expect("complete trace");
            Argument {
                target: Element::Goal(g),
                premises: vec![
                    Statement::new(
                        Claim::Persists { goal: g },
                        format!("Persists({goal}, S1, {})", state_name(last)),
                        format!(
                            "The goal {goal} already holds in the initial state {} and no action in the plan \
                             deletes it.",
                            problem.initial
                        ),
                    ),
                    Statement::new(
                        Claim::HoldGoal { goal: g, state: last },
                        format!("HoldGoal({goal}, {})", state_name(last)),
                        format!("In the final state {final_state}, the goal {goal} holds."),
                    ),
                ],
                conclusion: Statement::new(
                    Claim::AchieveGoal { goal: g, achiever: who },
                    format!("AchieveGoal(Δ_I, {goal})"),
                    format!("Therefore, the goal {goal} holds from the initial state without any action achieving it."),
                ),
                degenerate: true,
            }
        }
    };
    Ok(Some(arg))
}

fn chain_statement(trace: &Trace) -> Statement {
    let n = trace.len();
    if n == 0 {
        return Statement::new(
            Claim::TransitionChain,
            "S1 = Δ_G",
            format!(
                "In the initial state {}, no action needs to be executed and it is the goal state.",
                trace.states[0]
            ),
        );
    }
    let parts: Vec<StatementPart> = (1..=n)
        .map(|i| {
            let action = &trace.plan.steps()[i - 1];
            let from = &trace.states[i - 1];
            let to = &trace.states[i];
            let opening = if i == 1 { "In the initial state" } else { "In the state" };
            let result = if i == n { "the goal state" } else { "the next state" };
            StatementPart {
                formal: format!("γ({}, {action}) → {}", state_name(i), state_name(i + 1)),
                text: format!("{opening} {from}, we can execute the action {action} that results in {result} {to}."),
            }
        })
        .collect();
    Statement {
        claim: Claim::TransitionChain,
        formal: parts.iter().map(|p| p.formal.as_str()).collect::<Vec<_>>().join(", "),
        text: parts.iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(" "),
        parts,
    }
}

/// `Arg_pi`: the plan executes from Δ_I to a goal state where every goal
/// holds.
pub fn make_plan_arg(problem: &PlanningProblem, trace: &Trace) -> Option<Argument> {
    let n = trace.len();
    let final_state = trace.final_state()?;
    if trace.states.len() != n + 1 || problem.goals.is_empty() || !trace.all_goals_hold() {
        return None;
    }
    let goals = format_goals(&problem.goals);
    let plan = &trace.plan;
    let last = state_name(n + 1);
    Some(Argument {
        target: Element::Plan,
        premises: vec![
            chain_statement(trace),
            Statement::new(
                Claim::HoldGoals { state: n + 1 },
                format!("HoldGoals(G, {last})"),
                format!("In the goal state {final_state}, all the goals in the set of goals {goals} hold."),
            ),
            Statement::new(
                Claim::AchieveGoals,
                "AchieveGoals(π, G)",
                format!("The sequence of actions {plan} achieves the set of all goals {goals}."),
            ),
        ],
        conclusion: Statement::new(
            Claim::Solution,
            "Solution(π, P)",
            format!(
                "Therefore, {plan} is a solution to the planning problem {}.",
                problem.name
            ),
        ),
        degenerate: false,
    })
}

/// Every critical question instance for a plan: CQ1, CQ2 per step, CQ3 per
/// non-initial state, CQ4 per goal.
pub fn enumerate_cqs(problem: &PlanningProblem, plan: &Plan) -> BTreeSet<CriticalQuestion> {
    let n = plan.len();
    std::iter::once(CriticalQuestion::CQ1)
        .chain((1..=n).map(CriticalQuestion::step))
        .chain((2..=n + 1).map(CriticalQuestion::state))
        .chain((1..=problem.goals.len()).map(CriticalQuestion::goal))
        .collect()
}

/// Answers a critical question with the argument of its paired scheme.
pub fn answer(
    cq: &CriticalQuestion,
    problem: &PlanningProblem,
    trace: &Trace,
) -> Result<Option<Argument>, SchemeError> {
    cq.check(trace.len(), problem.goals.len())?;
    match cq.target {
        Element::Plan => Ok(make_plan_arg(problem, trace)),
        Element::Step(i) => make_action_arg(trace, i),
        Element::State(j) => make_state_arg(trace, j),
        Element::Goal(g) => make_goal_arg(problem, trace, g),
    }
}

/// Full text of an argument: a heading for each premise and the
/// conclusion, then its formal claim (if any) and English sentence.
pub fn render(arg: &Argument) -> String {
    let mut out = String::new();
    let mut statement = |heading: String, st: &Statement| {
        out.push_str(&heading);
        out.push('\n');
        if st.parts.is_empty() {
            if !st.formal.is_empty() {
                out.push_str(&st.formal);
                out.push('\n');
            }
            out.push_str(&st.text);
            out.push('\n');
        }
        for part in &st.parts {
            out.push_str(&format!("{}\n{}\n", part.formal, part.text));
        }
    };
    for (i, premise) in arg.premises.iter().enumerate() {
        statement(format!("Premise {}:", i + 1), premise);
    }
    statement("Conclusion:".to_string(), &arg.conclusion);
    out
}

/// The question in English.
pub fn render_cq(cq: &CriticalQuestion, problem: &PlanningProblem, trace: &Trace) -> String {
    match cq.target {
        Element::Plan => format!("Is it possible for the plan {} to be a solution?", trace.plan),
        Element::Step(i) => match trace.step(i) {
            Some(a) => format!("Is it possible to execute the action {a}?"),
            None => format!("Is it possible to execute the action at step {i}?"),
        },
        Element::State(j) => match trace.state(j) {
            Some(s) => format!("Is it possible to have the state {s}?"),
            None => format!("Is it possible to have the state {}?", state_name(j)),
        },
        Element::Goal(g) => match problem.goal(g) {
            Some(goal) => format!("Is it possible to achieve the goal {goal}?"),
            None => format!("Is it possible to achieve goal {g}?"),
        },
    }
}

/// A question together with its rendered text, as sent to clients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqView {
    pub id: String,
    pub kind: CqKind,
    pub target: Element,
    pub text: String,
}

impl CqView {
    pub fn new(cq: &CriticalQuestion, problem: &PlanningProblem, trace: &Trace) -> Self {
        CqView {
            id: cq.id(),
            kind: cq.kind(),
            target: cq.target,
            text: render_cq(cq, problem, trace),
        }
    }
}

/// The goal a CQ4 instance or goal argument targets.
pub fn goal_of(problem: &PlanningProblem, target: Element) -> Option<&Goal> {
    match target {
        Element::Goal(g) => problem.goal(g),
        _ => None,
    }
}
