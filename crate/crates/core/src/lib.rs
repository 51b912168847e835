pub mod analytics;
pub mod cli;
pub mod error;
pub mod greeks;
pub mod measure;
pub mod operator;
pub mod scheme;

pub use error::{Error, Result};
