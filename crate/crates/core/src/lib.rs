pub mod data;
pub mod selection;
pub mod stats;
pub mod classifiers;
pub mod eval;
pub mod cli;
pub mod experiment;
