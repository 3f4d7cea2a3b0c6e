pub mod cli;
pub mod error;
pub mod field;
pub mod frequency;
pub mod order;
pub mod polysystem;
pub mod quad;
pub mod threeball;

pub use error::{Error, Result};
