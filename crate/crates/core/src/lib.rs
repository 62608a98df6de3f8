//! Virtual strings, multistrings and their based matrices.
//!
//! Diagrams live in [`diagram`]; [`pairing`] builds the based and woven based
//! matrices; [`homology`] implements the matrix move calculus and primitive
//! reduction; [`invariants`] and [`iso`] compare the results.

mod util;

pub mod diagram;
pub mod error;
pub mod fuzz;
pub mod homology;
pub mod invariants;
pub mod iso;
pub mod pairing;

pub use diagram::{DiagramMove, EndpointRef, Gap, MoveKind, Multistring, Role};
pub use error::{DiagramError, MatrixError};
pub use homology::{MatrixMove, MoveCertificate, ReduceOptions, Search};
pub use invariants::{InvariantReport, LaurentPoly, RhoFamily};
pub use iso::{Distinction, Equivalence, Verdict, WovenIsomorphism};
pub use pairing::{BasedMatrix, ElementId, WovenBasedMatrix};
pub use util::natural_cmp;
