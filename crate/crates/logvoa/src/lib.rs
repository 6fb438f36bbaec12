//! Command-line companion: run configuration, matrix cache, reports and
//! the verification suites.

pub mod cache;
pub mod config;
pub mod report;
pub mod suites;
