//! IO, file formats and check suites around `clonecalc-core`.

pub mod dot;
pub mod json;
pub mod report;
pub mod rng;
pub mod suites;
