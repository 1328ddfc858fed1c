//! Tor obstructions and projective dimension for modules over the
//! categories of natural transformations of filtrated K-theory over finite
//! topological spaces, with a Cuntz-Krieger front end.

pub mod error;
pub mod finspace;
pub mod graphk;
pub mod ntcat;
pub mod ntmod;
pub mod zexact;

pub use error::{Error, Result};
