//! Single-shot antidistinguishability (state exclusion) of quantum states and
//! of unitary operations probed by single-system or entangled inputs.

pub mod config;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod sdp;
pub mod states;
pub mod unitary;

pub use config::{Config, SearchConfig, SolverConfig, Tolerances};
pub use error::{Error, Result};
