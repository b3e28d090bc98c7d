//! Command-line surface over `halo-core`: validated run configuration, cached coset tables,
//! JSON/CSV reports and the acceptance suite.

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;
pub mod suite;
