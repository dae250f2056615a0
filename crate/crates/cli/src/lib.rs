//! File formats, generators, timing sweeps and plots behind the `acit` binary.

pub mod bench;
pub mod commands;
pub mod gen;
pub mod instance;
pub mod plot;
