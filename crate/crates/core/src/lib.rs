pub mod chain;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod presheaf;
pub mod random;
pub mod site;
pub mod tstruct;

pub use error::{Error, Result};
