//! Explanations for classical plans built from argument schemes.
//!
//! A plan is executed against a STRIPS model ([`planning`]), the resulting
//! trace is turned into scheme arguments and critical questions
//! ([`schemes`]), those are arranged into an abstract argumentation
//! framework evaluated under grounded semantics ([`aaf`], [`framework`]),
//! and a planner/user explanation dialogue is run over them ([`dialogue`]).

pub mod aaf;
pub mod dialogue;
pub mod export;
pub mod fixtures;
pub mod framework;
pub mod pddl;
pub mod planning;
pub mod schemes;
pub mod symbol;

pub use symbol::Symbol;
