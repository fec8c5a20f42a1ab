//! JSON formats and the command-line front end for `mct-core`.

pub mod cli;
pub mod io;
