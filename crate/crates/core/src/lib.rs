//! Exact Picard-Vessiot extensions of real differential fields.

pub mod arith;
pub mod cli;
pub mod correspondence;
pub mod report;
pub mod scenario;
pub mod seidenberg;
pub mod tower;
pub mod group;
pub mod pv;
pub mod real_forms;
pub mod wronskian;
