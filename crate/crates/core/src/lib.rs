//! Maximum stable set via QUBO sampling, post-processing and CH-partitioning.

pub mod dimacs;
pub mod graph;
pub mod qubo;
pub mod samplers;
pub mod postprocess;
pub mod partition;
pub mod harness;
