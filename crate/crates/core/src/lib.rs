//! Online task allocation for ephemeral edge computing.
//!
//! A source node receives tasks one at a time and dispatches each to one of
//! its neighbours before a fixed time budget runs out. The crate provides
//! the online primal-dual greedy allocator ([`online`]), an exact offline
//! optimum ([`oracle`]), competitive-ratio and fading-model analysis
//! ([`analysis`]), a Monte Carlo sweep harness ([`harness`]) and the
//! command-line front end ([`cli`]).

pub mod analysis;
pub mod cli;
pub mod error;
pub mod harness;
pub mod model;
pub mod online;
pub mod oracle;

pub use error::{Error, Result};
