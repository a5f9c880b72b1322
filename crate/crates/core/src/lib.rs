pub mod error;
pub mod momentum;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod spectral;
pub mod wells;

pub use error::{Error, Result};
