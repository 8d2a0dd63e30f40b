//! Command implementations and report types behind the `kova` binary.

pub mod commands;
pub mod report;
