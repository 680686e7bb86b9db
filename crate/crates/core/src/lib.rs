//! Finite-model workbench for effect algebras, their implication algebras
//! and the Hilbert-style calculi that axiomatize them.

pub mod algebra;
pub mod implication;
pub mod logic;
pub mod models;
pub mod report;
pub mod term;
pub mod transforms;
pub mod proof;
pub mod corpus;
pub mod enumerate;
pub mod io;
pub mod cli;
