//! Library surface of the harness: config parsing, residual tables, grid
//! CSV dump/load, the parallel sweep helper and the command
//! implementations. The `coulomb` binary is a thin wrapper over this.

pub mod commands;
pub mod config;
pub mod error;
pub mod parallel;
pub mod table;
