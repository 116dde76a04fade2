pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod floquet;
pub mod model;
pub mod ode;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
