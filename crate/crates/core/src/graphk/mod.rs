//! Graph algebras over finite spaces: block adjacency matrices, K-groups of
//! subquotients, filtrated K-theory modules and their Tor.

pub mod graph;
pub mod kgroups;
pub mod tor;

pub use graph::{graph_checks, BlockGraph, GraphFile, GraphReport};
pub use kgroups::{fk_module, k_groups, SubquotientK};
pub use tor::{
    tor1_complex, tor1_fast, tor1_fast_part, tor_ck, z3_odd_witness, OddWitness, ShortComplex,
};
