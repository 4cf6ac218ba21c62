pub mod cli;
pub mod entanglement;
pub mod error;
pub mod fmt;
pub mod linalg;
pub mod optimize;
pub mod qchannel;
pub mod qstate;
pub mod teleport;

pub use error::{Error, Result};
