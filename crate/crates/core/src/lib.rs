pub mod arith;
pub mod cache;
pub mod engine;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod modsym;
pub mod qexp;

pub use error::{Error, Result};
