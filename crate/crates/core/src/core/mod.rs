//! Representation-independent building blocks: objective values, the two
//! solution encodings, the problem interface and the seeded random stream.

mod problem;
mod random;
mod solution;

pub use problem::{evaluate, Problem};
pub use random::RandomStream;
pub use solution::{
    symmetric_difference, Objective, PartitionSolution, PermutationSolution, Solution,
};
