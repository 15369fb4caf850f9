//! File formats, the bundled corpus and the `netcode` command line.

pub mod cli;
pub mod corpus;
pub mod formats;
pub mod parallel;

pub use cli::{run, CommandOutcome};
