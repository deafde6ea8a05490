//! ρ-bisimulations for finite coalgebras: labelled transition systems,
//! Kripke models and linear weighted automata.

pub mod cli;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod linear;
pub mod logics;
pub mod models;
pub mod oracle;
pub mod relations;
pub mod zoo;

pub use error::{Error, Result};
