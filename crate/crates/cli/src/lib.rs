//! Library side of the `hk` command: the colength cache, reports, the
//! fixture corpus and the verification harness.

pub mod cache;
pub mod fixture;
pub mod pipeline;
pub mod report;
pub mod verify;
