//! Cubicalizations of thin-powered categories.

pub mod cli;
pub mod cube;
pub mod error;
pub mod finite;
pub mod json;
pub mod presheaf;
pub mod report;
pub mod site;
pub mod spans;
pub mod topology;

pub use error::{Error, Result};
