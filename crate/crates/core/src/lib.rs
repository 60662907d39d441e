//! Fair division of goods whose divisibility depends on who looks at them.
//!
//! Each agent sees every good as either divisible (value scales with the
//! share held) or indivisible (worth nothing unless held whole). All
//! arithmetic is exact over big rationals.

pub mod audit;
pub mod cli;
pub mod envy_algorithms;
pub mod error;
pub mod io;
pub mod mms;
pub mod mms_algorithms;
pub mod model;
pub mod oracle;
pub mod rational;

pub use error::{Error, Result};
pub use model::{Allocation, AlgoTrace, Instance};
pub use rational::Rational;
