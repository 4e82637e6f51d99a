//! Command-line front end and HTTP session service for plan explanation
//! dialogues. The binary in `main.rs` is a thin clap wrapper around
//! [`commands`] and [`service`].

pub mod commands;
pub mod inputs;
pub mod service;
