//! Exact linear algebra over the integers.

pub mod graded;
pub mod group;
pub mod matrix;
pub mod smith;
pub mod sparse;

pub use graded::{GradedGroup, GradedHom, GradedNF, Parity};
pub use group::{subquotient_homology, AbGroupNF, GroupHom, Homology, Presentation, Subgroup};
pub use matrix::{ivec, IntMatrix};
pub use smith::{image_basis, in_column_span, kernel, rank, smith, solve, SmithForm};
