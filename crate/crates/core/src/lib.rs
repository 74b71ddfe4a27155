//! Connected components by graph contraction on a simulated MPC substrate.
//!
//! * [`graph`]: normalized graphs, edge-list I/O, union-find oracle.
//! * [`contraction`]: orderings, merge-by-label contraction, pruning.
//! * [`algorithms`]: LocalContraction (optionally with merge-to-large),
//!   TreeContraction, Hash-Min, Hash-to-Min, Cracker.
//! * [`mpc`]: round, message and hash-table accounting.
//! * [`generators`]: seeded graph families.
//! * [`bench`]: experiment runner, verification, stats CSV.

pub mod algorithms;
pub mod bench;
pub mod contraction;
pub mod generators;
pub mod graph;
pub mod mpc;
