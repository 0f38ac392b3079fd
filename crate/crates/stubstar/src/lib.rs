//! Feasibility and reconstruction for degree-constrained graph realization
//! problems where each vertex prescribes both its degree and the sum of its
//! neighbors' degrees.
//!
//! An instance is a pair of sequences `(D, F)`: vertex `k` must have degree
//! `d_k` and its neighbors' degrees must sum to `f_k`. Such data arises in
//! NMR spectroscopy, where a carbon skeleton is reconstructed from per-atom
//! hydrogen counts and peak splitting. The question "is there a graph in
//! class C realizing `(D, F)`?" is answered by reformulating vertices as
//! stub-stars (a degree-`d` vertex whose stubs carry the intended neighbor
//! degrees as labels) and deciding an integer feasibility system over
//! stub-star multiplicities.
//!
//! Modules:
//!
//! * [`model`]: partitions, stub-star ensembles, instances, labeled graphs.
//! * [`seqcheck`]: classical degree-sequence tests and constructive builders
//!   (Erdos-Gallai, Gale-Ryser, Havel-Hakimi, forest and multigraph forms).
//! * [`feasibility`]: the integer systems, two encodings, and a small exact
//!   solver with enumeration support.
//! * [`assembler`]: turning a feasible stub-star ensemble into an actual
//!   graph of the requested class, including the swap machinery that merges
//!   components of forest realizations.
//! * [`oracle`]: brute-force ground truth for small sizes, Prufer-code tree
//!   enumeration, and the random tree generator used by the benchmarks.
//! * [`nmr`]: peak-table ingestion for the hydrocarbon use case.
//! * [`bench`]: timing/counting benchmark harness behind the CLI.

#![forbid(unsafe_code)]

pub mod assembler;
pub mod bench;
pub mod feasibility;
pub mod model;
pub mod nmr;
pub mod oracle;
pub mod seqcheck;

pub use model::{Ensemble, GraphClass, Instance, LabeledGraph, Partition};
