//! File formats, configuration, reference oracles and the experiment runner
//! built on [`dixlab_core`].

pub mod config;
pub mod error;
pub mod experiments;
pub mod format;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
