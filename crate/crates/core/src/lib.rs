pub mod cli;
pub mod element;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod hyperspace;
pub mod hyperstructures;
pub mod inner;
pub mod report;
pub mod search;
pub mod setalg;
pub mod violation;

pub use error::{Error, Result};
