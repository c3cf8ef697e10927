//! Verification suites and the `verify` harness.

pub mod certificate;
pub mod cli;
pub mod context;
pub mod manifest;
pub mod suites;
