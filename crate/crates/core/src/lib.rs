//! Exact Čech cohomology computations for substitution tilings.
//!
//! The pipeline: a filtered cellular approximant with a cellular substitution
//! endomorphism ([`cellcx::FilteredComplex`]) yields cohomology of strata and
//! pairs as stationary inductive systems ([`indsys::InductiveSystem`]); their
//! direct limits are classified into [`indsys::LimitDescriptor`]s and spliced
//! through long exact sequences. The [`rotfib`] layer handles rotation
//! spaces and [`onedim`] builds one-dimensional approximants automatically.

pub mod abgroups;
pub mod cellcx;
pub mod datasets;
pub mod error;
pub mod indsys;
pub mod intlinalg;
pub mod onedim;
pub mod rotfib;

pub use error::{Error, Result};
