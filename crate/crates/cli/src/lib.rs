//! Document formats and subcommands of the `causal-games` tool.

pub mod commands;
pub mod documents;
