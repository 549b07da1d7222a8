pub mod algebra;
pub mod calculus;
pub mod check;
pub mod error;
pub mod expr;
pub mod maps;
pub mod qrt;
pub mod registry;
pub mod verify;

pub use error::{Error, Result};
