//! Exact-rational toolkit for accretion sets of sequences and functions,
//! interval-set topology and certified Darboux integration.

pub mod accretion;
pub mod cli;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod exact;
pub mod fnacc;
pub mod integration;
pub mod report;
pub mod sequences;
pub mod sets;
mod text;

pub use error::{Error, Result};
