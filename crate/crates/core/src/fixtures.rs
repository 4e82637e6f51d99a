//! The three-block example bundled with the crate.

use crate::pddl;
use crate::planning::{Plan, PlanningProblem};

pub const BLOCKS_DOMAIN: &str = include_str!("../fixtures/blocks/domain.pddl");
pub const BLOCKS_PROBLEM: &str = include_str!("../fixtures/blocks/problem.pddl");
pub const BLOCKS_PLAN: &str = include_str!("../fixtures/blocks/plan.plan");
/// The first step of the plan only; leaves goals unmet.
pub const BLOCKS_TRUNCATED_PLAN: &str = include_str!("../fixtures/blocks/truncated.plan");

/// Problem and valid three-step plan.
pub fn blocks() -> (PlanningProblem, Plan) {
    pddl::load(BLOCKS_DOMAIN, BLOCKS_PROBLEM, BLOCKS_PLAN).expect("bundled fixture parses")
}

pub fn blocks_truncated() -> (PlanningProblem, Plan) {
    pddl::load(BLOCKS_DOMAIN, BLOCKS_PROBLEM, BLOCKS_TRUNCATED_PLAN).expect("bundled fixture parses")
}
