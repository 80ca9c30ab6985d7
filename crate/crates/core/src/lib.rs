pub mod attack;
pub mod cli;
pub mod error;
pub mod exploit;
pub mod hbb;
pub mod optimizer;
pub mod output;
pub mod qmath;
pub mod qstate;
pub mod rng;
pub mod sampling;

pub use error::{QssError, Result};
