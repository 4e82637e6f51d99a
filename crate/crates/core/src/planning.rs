//! STRIPS planning model: ground atoms, closed-world states, ground actions,
//! the transition function and plan validation.
//!
//! States are closed-world: an atom not in the set is false. Negative
//! preconditions are not supported.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanningError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{predicate}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("goal {0} has no requirements")]
    EmptyGoal(usize),
    #[error("plan step {step} `{action}` is not in the action universe")]
    UnknownAction { step: usize, action: String },
    #[error("goal {0} does not hold in the final state")]
    GoalNotSatisfied(String),
    #[error("the plan fails at step {0}; no final state")]
    IncompleteTrace(usize),
}

/// A ground predicate such as `On(B,C)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Symbol>,
}

impl Atom {
    pub fn new<P, I, A>(predicate: P, args: I) -> Self
    where
        P: Into<Symbol>,
        I: IntoIterator<Item = A>,
        A: Into<Symbol>,
    {
        Atom {
            predicate: predicate.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{arg}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Renders atoms as `{A, B, C}` in canonical order.
pub fn format_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> String {
    let sorted: BTreeSet<&Atom> = atoms.into_iter().collect();
    let parts: Vec<String> = sorted.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// The set of atoms true in a state.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct State(BTreeSet<Atom>);

impl State {
    pub fn new() -> Self {
        State(BTreeSet::new())
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    /// `s ⊨ atom` when `positive`, `s ⊨ ¬atom` otherwise.
    pub fn satisfies(&self, atom: &Atom, positive: bool) -> bool {
        self.0.contains(atom) == positive
    }

    pub fn is_superset(&self, atoms: &BTreeSet<Atom>) -> bool {
        atoms.is_subset(&self.0)
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Atom> for State {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        State(iter.into_iter().collect())
    }
}

impl From<BTreeSet<Atom>> for State {
    fn from(atoms: BTreeSet<Atom>) -> Self {
        State(atoms)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_atoms(&self.0))
    }
}

/// A fully instantiated action with precondition, add and delete sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub name: Symbol,
    pub args: Vec<Symbol>,
    pub pre: BTreeSet<Atom>,
    pub add: BTreeSet<Atom>,
    pub del: BTreeSet<Atom>,
}

impl GroundAction {
    /// Atoms both added and deleted are kept in `add` only, which is what
    /// `(S \ del) ∪ add` yields for them anyway.
    pub fn new(
        name: impl Into<Symbol>,
        args: Vec<Symbol>,
        pre: BTreeSet<Atom>,
        add: BTreeSet<Atom>,
        mut del: BTreeSet<Atom>,
    ) -> Self {
        del.retain(|atom| !add.contains(atom));
        GroundAction {
            name: name.into(),
            args,
            pre,
            add,
            del,
        }
    }

    pub fn is_applicable(&self, state: &State) -> bool {
        state.is_superset(&self.pre)
    }

    /// Same name and arguments.
    pub fn same_signature(&self, other: &GroundAction) -> bool {
        self.name == other.name && self.args == other.args
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{arg}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Serialize for GroundAction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A goal: a non-empty set of requirements that must all hold together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Goal {
    requirements: BTreeSet<Atom>,
}

impl Goal {
    pub fn new(requirements: impl IntoIterator<Item = Atom>) -> Option<Self> {
        let requirements: BTreeSet<Atom> = requirements.into_iter().collect();
        if requirements.is_empty() {
            None
        } else {
            Some(Goal { requirements })
        }
    }

    pub fn single(atom: Atom) -> Self {
        Goal {
            requirements: BTreeSet::from([atom]),
        }
    }

    pub fn requirements(&self) -> &BTreeSet<Atom> {
        &self.requirements
    }

    pub fn holds_in(&self, state: &State) -> bool {
        state.is_superset(&self.requirements)
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.requirements.len() == 1 {
            write!(f, "{}", self.requirements.iter().next().unwrap())
        } else {
            f.write_str(&format_atoms(&self.requirements))
        }
    }
}

impl Serialize for Goal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Renders a goal set `{g1, g2, ...}` in canonical order.
pub fn format_goals<'a>(goals: impl IntoIterator<Item = &'a Goal>) -> String {
    let sorted: BTreeSet<&Goal> = goals.into_iter().collect();
    let parts: Vec<String> = sorted.iter().map(|g| g.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Declared objects and predicate signatures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub objects: BTreeSet<Symbol>,
    pub predicates: std::collections::BTreeMap<Symbol, usize>,
}

impl Vocabulary {
    pub fn check_atom(&self, atom: &Atom) -> Result<(), PlanningError> {
        let arity = self
            .predicates
            .get(&atom.predicate)
            .ok_or_else(|| PlanningError::UnknownPredicate(atom.predicate.to_string()))?;
        if *arity != atom.args.len() {
            return Err(PlanningError::ArityMismatch {
                predicate: atom.predicate.to_string(),
                expected: *arity,
                found: atom.args.len(),
            });
        }
        for arg in &atom.args {
            if !self.objects.contains(arg) {
                return Err(PlanningError::UnknownObject(arg.to_string()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningProblem {
    pub name: Symbol,
    pub vocabulary: Vocabulary,
    pub initial: State,
    pub goals: Vec<Goal>,
    /// The ground action universe. Either every grounding of the domain's
    /// schemas or, for large domains, only the actions the plan uses.
    pub actions: Vec<GroundAction>,
}

impl PlanningProblem {
    pub fn new(
        name: impl Into<Symbol>,
        vocabulary: Vocabulary,
        initial: State,
        goals: Vec<Goal>,
        actions: Vec<GroundAction>,
    ) -> Result<Self, PlanningError> {
        for atom in initial.iter() {
            vocabulary.check_atom(atom)?;
        }
        let mut unique_goals: Vec<Goal> = Vec::with_capacity(goals.len());
        for goal in goals {
            for atom in goal.requirements() {
                vocabulary.check_atom(atom)?;
            }
            if !unique_goals.contains(&goal) {
                unique_goals.push(goal);
            }
        }
        for action in &actions {
            for atom in action.pre.iter().chain(&action.add).chain(&action.del) {
                vocabulary.check_atom(atom)?;
            }
        }
        Ok(PlanningProblem {
            name: name.into(),
            vocabulary,
            initial,
            goals: unique_goals,
            actions,
        })
    }

    /// `s ⊨ atom` (or `s ⊨ ¬atom`) after checking the atom is well formed.
    pub fn holds(&self, state: &State, atom: &Atom, positive: bool) -> Result<bool, PlanningError> {
        self.vocabulary.check_atom(atom)?;
        Ok(state.satisfies(atom, positive))
    }

    /// 1-based goal lookup.
    pub fn goal(&self, index: usize) -> Option<&Goal> {
        index.checked_sub(1).and_then(|i| self.goals.get(i))
    }

    pub fn goal_index(&self, goal: &Goal) -> Option<usize> {
        self.goals.iter().position(|g| g == goal).map(|i| i + 1)
    }

    /// Every step must be (by signature and effects) in the universe.
    pub fn check_plan(&self, plan: &Plan) -> Result<(), PlanningError> {
        for (i, step) in plan.steps().iter().enumerate() {
            if !self.actions.contains(step) {
                return Err(PlanningError::UnknownAction {
                    step: i + 1,
                    action: step.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Plan {
    steps: Vec<GroundAction>,
}

impl Plan {
    pub fn new(steps: Vec<GroundAction>) -> Self {
        Plan { steps }
    }

    pub fn steps(&self) -> &[GroundAction] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// 1-based step lookup.
    pub fn step(&self, index: usize) -> Option<&GroundAction> {
        index.checked_sub(1).and_then(|i| self.steps.get(i))
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{step}")?;
        }
        f.write_str("⟩")
    }
}

pub fn applicable(state: &State, action: &GroundAction) -> bool {
    action.is_applicable(state)
}

/// The transition function: `(s \ del) ∪ add` when applicable, `None`
/// (undefined) otherwise.
pub fn gamma(state: &State, action: &GroundAction) -> Option<State> {
    if !action.is_applicable(state) {
        return None;
    }
    let mut next = state.0.clone();
    for atom in &action.del {
        next.remove(atom);
    }
    next.extend(action.add.iter().cloned());
    Some(State(next))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepVerdict {
    Applicable,
    Inapplicable,
    NotReached,
}

/// The states visited by executing a plan from the initial state.
///
/// `states[0]` is S₁ = Δ_I. When every step applies there are `n + 1`
/// states; otherwise the trace stops at the state in which the failing
/// step was attempted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub plan: Plan,
    pub states: Vec<State>,
    pub verdicts: Vec<StepVerdict>,
    /// 1-based index of the first inapplicable step.
    pub failure: Option<usize>,
    /// Per goal (problem order): holds in the final state. All false when
    /// the plan fails.
    pub goal_verdicts: Vec<bool>,
}

impl Trace {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    /// S_{n+1}, when the plan executes to completion.
    pub fn final_state(&self) -> Option<&State> {
        if self.is_complete() {
            self.states.last()
        } else {
            None
        }
    }

    /// 1-based state lookup (S₁ is the initial state).
    pub fn state(&self, index: usize) -> Option<&State> {
        index.checked_sub(1).and_then(|i| self.states.get(i))
    }

    pub fn step(&self, index: usize) -> Option<&GroundAction> {
        self.plan.step(index)
    }

    pub fn len(&self) -> usize {
        self.plan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plan.is_empty()
    }

    /// Number of goals satisfied in the final state (|G_π|).
    pub fn goals_achieved(&self) -> usize {
        self.goal_verdicts.iter().filter(|v| **v).count()
    }

    pub fn all_goals_hold(&self) -> bool {
        self.is_complete() && self.goal_verdicts.iter().all(|v| *v)
    }
}

/// Folds `gamma` over the plan starting from the initial state.
pub fn gamma_star(problem: &PlanningProblem, plan: &Plan) -> Trace {
    let mut states = vec![problem.initial.clone()];
    let mut verdicts = vec![StepVerdict::NotReached; plan.len()];
    let mut failure = None;
    for (i, step) in plan.steps().iter().enumerate() {
        match gamma(states.last().unwrap(), step) {
            Some(next) => {
                verdicts[i] = StepVerdict::Applicable;
                states.push(next);
            }
            None => {
                verdicts[i] = StepVerdict::Inapplicable;
                failure = Some(i + 1);
                break;
            }
        }
    }
    let goal_verdicts = match failure {
        None => {
            let last = states.last().unwrap();
            problem.goals.iter().map(|g| g.holds_in(last)).collect()
        }
        Some(_) => vec![false; problem.goals.len()],
    };
    Trace {
        plan: plan.clone(),
        states,
        verdicts,
        failure,
        goal_verdicts,
    }
}

/// The step after which a goal holds and keeps holding to the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Achiever {
    /// The goal already held in Δ_I and no step re-adds any requirement.
    Initial,
    Step(usize),
}

/// Latest step whose add list contains a requirement of `goal`.
pub fn achiever(trace: &Trace, goal: &Goal) -> Result<Achiever, PlanningError> {
    let last = match trace.final_state() {
        Some(state) => state,
        None => return Err(PlanningError::IncompleteTrace(trace.failure.unwrap_or(0))),
    };
    if !goal.holds_in(last) {
        return Err(PlanningError::GoalNotSatisfied(goal.to_string()));
    }
    let latest = trace
        .plan
        .steps()
        .iter()
        .enumerate()
        .rev()
        .find(|(_, step)| goal.requirements().iter().any(|r| step.add.contains(r)))
        .map(|(i, _)| Achiever::Step(i + 1));
    Ok(latest.unwrap_or(Achiever::Initial))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoalVerdict {
    pub index: usize,
    pub goal: Goal,
    pub satisfied: bool,
}

/// Verdict on each validity condition for a plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Condition 1: S₁ = Δ_I. Holds by construction of the trace.
    pub initial_state: bool,
    /// Condition 2: per-step applicability.
    pub steps: Vec<StepVerdict>,
    pub failure: Option<usize>,
    /// Condition 3: each goal in the final state.
    pub goals: Vec<GoalVerdict>,
    /// Condition 4: |G_π| > 0.
    pub goals_achieved: usize,
    pub valid: bool,
}

impl ValidationReport {
    pub fn unmet_goals(&self) -> impl Iterator<Item = &GoalVerdict> {
        self.goals.iter().filter(|g| !g.satisfied)
    }
}

pub fn validate_trace(problem: &PlanningProblem, trace: &Trace) -> ValidationReport {
    let initial_state = trace.states.first() == Some(&problem.initial);
    let goals: Vec<GoalVerdict> = problem
        .goals
        .iter()
        .zip(&trace.goal_verdicts)
        .enumerate()
        .map(|(i, (goal, satisfied))| GoalVerdict {
            index: i + 1,
            goal: goal.clone(),
            satisfied: *satisfied,
        })
        .collect();
    let goals_achieved = trace.goals_achieved();
    let valid = initial_state && trace.is_complete() && trace.all_goals_hold() && goals_achieved > 0;
    ValidationReport {
        initial_state,
        steps: trace.verdicts.clone(),
        failure: trace.failure,
        goals,
        goals_achieved,
        valid,
    }
}

pub fn validate_plan(problem: &PlanningProblem, plan: &Plan) -> ValidationReport {
    validate_trace(problem, &gamma_star(problem, plan))
}
