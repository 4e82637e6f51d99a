//! The argumentation framework linking scheme arguments and critical
//! questions.
//!
//! An answering argument attacks the question it answers. A question
//! attacks the arguments whose premises are about its target element,
//! restricted by kind: CQ2 attacks `Arg_pi`, `Arg_S` and `Arg_g`; CQ3
//! attacks `Arg_pi`, `Arg_a` and `Arg_g`; CQ4 attacks `Arg_pi`; CQ1 attacks
//! nothing. Arguments that cannot be built are simply absent, so their
//! questions stay unattacked.

use serde::Serialize;

use crate::aaf::{Aaf, Extension};
use crate::planning::{gamma_star, validate_trace, Plan, PlanningProblem, Trace};
use crate::schemes::{answer, enumerate_cqs, render_cq, Argument, CqKind, CriticalQuestion, SchemeKind};

/// Whether `cq` attacks `arg`.
pub fn cq_attacks(cq: &CriticalQuestion, arg: &Argument, steps: usize, goals: usize) -> bool {
    if arg.answers() == *cq {
        return false;
    }
    let kind_ok = match cq.kind() {
        CqKind::Cq1 => false,
        CqKind::Cq2 => matches!(arg.kind(), SchemeKind::Plan | SchemeKind::State | SchemeKind::Goal),
        CqKind::Cq3 => matches!(arg.kind(), SchemeKind::Plan | SchemeKind::Action | SchemeKind::Goal),
        CqKind::Cq4 => arg.kind() == SchemeKind::Plan,
    };
    kind_ok && arg.mentions(cq.target, steps, goals)
}

/// Framework over the given arguments and questions, nodes in the order
/// arguments then questions.
pub fn build_aaf<'a>(
    arguments: impl IntoIterator<Item = &'a Argument>,
    questions: impl IntoIterator<Item = &'a CriticalQuestion>,
    steps: usize,
    goals: usize,
) -> Aaf {
    let arguments: Vec<&Argument> = arguments.into_iter().collect();
    let questions: Vec<&CriticalQuestion> = questions.into_iter().collect();
    let mut nodes: Vec<NodeRef> = arguments.iter().map(|a| NodeRef::Argument(a)).collect();
    nodes.extend(questions.iter().map(|q| NodeRef::Question(**q)));
    aaf_over(&nodes, steps, goals)
}

#[derive(Clone, Copy)]
enum NodeRef<'a> {
    Argument(&'a Argument),
    Question(CriticalQuestion),
}

impl NodeRef<'_> {
    fn id(&self) -> String {
        match self {
            NodeRef::Argument(a) => a.id(),
            NodeRef::Question(q) => q.id(),
        }
    }
}

fn aaf_over(nodes: &[NodeRef], steps: usize, goals: usize) -> Aaf {
    let mut aaf = Aaf::new();
    for node in nodes {
        // Repeated nodes collapse into one.
        let _ = aaf.add_node(node.id());
    }
    for a in nodes {
        for b in nodes {
            let attack = match (a, b) {
                (NodeRef::Argument(arg), NodeRef::Question(q)) => arg.answers() == *q,
                (NodeRef::Question(q), NodeRef::Argument(arg)) => cq_attacks(q, arg, steps, goals),
                _ => false,
            };
            if attack {
                aaf.add_attack(&a.id(), &b.id()).expect("both endpoints were added");
            }
        }
    }
    aaf
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Argument,
    Question,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeInfo {
    pub id: String,
    pub kind: NodeKind,
    /// `Arg_pi`, `Arg_a`, ..., or `CQ1` ... `CQ4`.
    pub scheme: String,
    pub label: String,
}

/// A framework with display information for each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentGraph {
    pub aaf: Aaf,
    pub nodes: Vec<NodeInfo>,
}

impl ArgumentGraph {
    /// Graph over the given moves, in order. Repeated nodes are kept once.
    pub fn build<'a>(
        problem: &PlanningProblem,
        trace: &Trace,
        moves: impl IntoIterator<Item = GraphNode<'a>>,
    ) -> ArgumentGraph {
        let mut refs = Vec::new();
        let mut nodes: Vec<NodeInfo> = Vec::new();
        for m in moves {
            let (r, info) = match m {
                GraphNode::Argument(arg) => (
                    NodeRef::Argument(arg),
                    NodeInfo {
                        id: arg.id(),
                        kind: NodeKind::Argument,
                        scheme: arg.kind().to_string(),
                        label: arg.conclusion.text.clone(),
                    },
                ),
                GraphNode::Question(cq) => (
                    NodeRef::Question(cq),
                    NodeInfo {
                        id: cq.id(),
                        kind: NodeKind::Question,
                        scheme: cq.kind().to_string(),
                        label: render_cq(&cq, problem, trace),
                    },
                ),
            };
            if nodes.iter().all(|n| n.id != info.id) {
                refs.push(r);
                nodes.push(info);
            }
        }
        let aaf = aaf_over(&refs, trace.len(), problem.goals.len());
        ArgumentGraph { aaf, nodes }
    }

    pub fn grounded(&self) -> Extension {
        self.aaf.grounded()
    }
}

/// A node to place in an [`ArgumentGraph`].
#[derive(Debug, Clone, Copy)]
pub enum GraphNode<'a> {
    Argument(&'a Argument),
    Question(CriticalQuestion),
}

/// Every question instance for a plan with every argument that can be
/// built.
#[derive(Debug, Clone)]
pub struct FullFramework {
    pub trace: Trace,
    pub questions: Vec<CriticalQuestion>,
    /// Arguments in question order; unconstructible ones are missing.
    pub arguments: Vec<Argument>,
    pub graph: ArgumentGraph,
}

impl FullFramework {
    pub fn new(problem: &PlanningProblem, plan: &Plan) -> FullFramework {
        let trace = gamma_star(problem, plan);
        let questions: Vec<CriticalQuestion> = enumerate_cqs(problem, plan).into_iter().collect();
        let arguments: Vec<Argument> = questions
            .iter()
            .filter_map(|cq| answer(cq, problem, &trace).expect("enumerated targets are in range"))
            .collect();
        let moves = arguments
            .iter()
            .map(GraphNode::Argument)
            .chain(questions.iter().copied().map(GraphNode::Question));
        let graph = ArgumentGraph::build(problem, &trace, moves);
        FullFramework {
            trace,
            questions,
            arguments,
            graph,
        }
    }

    pub fn argument(&self, cq: &CriticalQuestion) -> Option<&Argument> {
        self.arguments.iter().find(|a| a.answers() == *cq)
    }
}

/// Outcome of comparing acceptance of `Arg_pi` with plan validity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Alignment {
    /// `Arg_pi` is in the grounded extension of the full framework.
    pub accepted: bool,
    pub valid: bool,
}

impl Alignment {
    pub fn aligned(&self) -> bool {
        self.accepted == self.valid
    }
}

pub fn check_validity_alignment(problem: &PlanningProblem, plan: &Plan) -> Alignment {
    let full = FullFramework::new(problem, plan);
    let accepted = full
        .graph
        .grounded()
        .contains(&CriticalQuestion::CQ1.target_argument_id());
    let valid = validate_trace(problem, &full.trace).valid;
    Alignment { accepted, valid }
}

impl CriticalQuestion {
    /// Id of the argument that would answer this question.
    pub fn target_argument_id(&self) -> String {
        crate::schemes::id_for(self.target)
    }
}
