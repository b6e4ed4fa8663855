//! File formats, the cut/paste script and the command-line front end for
//! `skk-core`.

pub mod cli;
pub mod io;
pub mod script;

pub use cli::{run, CommandResult};
