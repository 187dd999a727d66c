pub mod constraints;
pub mod counters;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod par;
pub mod problems;
pub mod rng;
pub mod solvers;
pub mod vector;
