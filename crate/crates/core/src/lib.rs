//! Pushdown automata on ultimately periodic ω-words, triangle-composed
//! languages and pushdown games with stack-limit winning conditions.

pub mod automata;
pub mod brute;
pub mod catalog;
pub mod error;
pub mod format;
pub mod games;
pub mod omega;
pub mod sample;
pub mod suite;
pub mod triangle;
pub mod words;

pub use error::{Error, Result};
