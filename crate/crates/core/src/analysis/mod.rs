//! Exact and numerical analyses built on solved branches and traced curves.

pub mod annihilator;
pub mod census;
pub mod controls;
pub mod linalg;
pub mod oracle;
pub mod profile;
