//! Length spectra of cocompact Fuchsian groups, for checking the count
//! bounds against real surfaces.
//!
//! Orientable fixtures only: conjugacy is tested in PSL(2, ℝ), so an
//! orientation-reversing conjugator would not be seen.

mod dirichlet;
mod enumerate;
mod group;
mod index;
mod mat2;
mod spectrum;
mod validate;

pub use dirichlet::{dirichlet_polygon, DirichletPolygon};
pub use enumerate::{enumerate_ball, enumerate_ball_with, Ball, BallConfig, Element, Truncation};
pub use group::{load_group, Group, GroupSpec, Word, DET_TOL, RELATOR_TOL, TRACE_TOL};
pub use index::{Lookup, MatrixIndex, AMBIGUOUS_TOL, MATCH_TOL};
pub use mat2::Mat2;
pub use spectrum::{
    length_spectrum, Completeness, Count, GeodesicClass, Spectrum, SpectrumConfig, SpectrumEntry, LENGTH_TOL,
};
pub use validate::{validate_bounds, CountCheck, Validation};
