//! Modules over the categories of natural transformations: validation,
//! exactness, resolutions of simple modules and Tor.

pub mod exact;
pub mod free;
pub mod module;
pub mod resolution;
pub mod sample;
pub mod tor;

pub use exact::{check_exact, ExactnessReport, PairVerdict};
pub use free::{summands, Summand, Variance};
pub use module::{
    coker_module, free_module, m_ss, simple_module, validate, ActionMats, GradedModule, ModuleEval,
    ModuleFile, ValidationReport,
};
pub use resolution::{
    builtin_resolution, has_builtin_resolution, resolve_simple, FreeResolution, Tail,
};
pub use sample::{length_two_resolution, LeftResolution};
pub use tor::{
    projective_dimension, rational_projective_dimension, rational_tor, resolution_for,
    tensored_complex, tor, tor_for, Engine, TorReport,
};
