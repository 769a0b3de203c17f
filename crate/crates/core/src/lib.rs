pub mod analysis;
pub mod branch;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod output;
pub mod report;
pub mod series;
pub mod verify;
