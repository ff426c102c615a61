//! Command-line front end: module expressions, model and script loaders,
//! structured output and the self-test sweeps.

pub mod app;
pub mod corpus;
pub mod expr;
pub mod selftest;
