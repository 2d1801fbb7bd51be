//! Proof kernel, tactic engine and surface syntax for first-order B logic.

pub mod binder;
pub mod kernel;
pub mod selftest;
pub mod syntax;
pub mod tactics;
pub mod term;
