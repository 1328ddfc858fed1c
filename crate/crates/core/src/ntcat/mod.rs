//! Presented graded categories of natural transformations over finite spaces.

pub mod builtin;
pub mod closure;
pub mod elementary;
pub mod ideal;
pub mod quiver;

pub use builtin::{builtin_presentation, MapEntry, NtCategory, BUILTIN_CATEGORIES};
pub use closure::{hom_closure, BasisElem, HomTable, TableCache};
pub use elementary::ElemMap;
pub use ideal::{ideal_checks, RingIdealData};
pub use quiver::{Arrow, ArrowKind, CatPresentation, CategoryFile, GradedQuiver, PathRelation};
