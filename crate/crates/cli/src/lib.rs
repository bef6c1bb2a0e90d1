//! Command-line front end: instance files, reports, random corpora.

pub mod commands;
pub mod instance;
pub mod report;
pub mod suite;
