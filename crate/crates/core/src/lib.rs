pub mod chains;
pub mod error;
pub mod fixtures;
pub mod fuzz;
pub mod io;
pub mod linalg;
pub mod triples;
pub mod relations;
pub mod sampling;
pub mod tripotents;

mod corner;

pub use error::{Error, Result};
