//! Online and PAC learning against strategic agents.

pub mod environments;
pub mod error;
pub mod harness;
pub mod learners;
pub mod model;
pub mod protocol;

pub use error::{Error, Result};
