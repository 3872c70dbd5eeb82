//! File formats, corpus storage, suite runners and the `galois` command.

pub mod cli;
pub mod corpus_io;
pub mod format;
pub mod report;
pub mod suites;

pub use cli::run;
