//! Wall forms of isometries of quadratic spaces over small exact fields.
//!
//! The crate computes residual and fixed spaces, Wall forms and their
//! classification, decomposes isometries with `(τ − id)² = 0` into interchange
//! isometries and plane reflections, and, in characteristic 2, builds the
//! Clifford algebra with the involution induced by an orthogonal involution
//! together with its invariants (Φ-subalgebra, Pfister invariant, splitting as
//! a matrix algebra with transpose). The [`oracle`] module enumerates small
//! orthogonal groups to check all of this exhaustively.

pub mod clifford;
pub mod decompose;
pub mod field;
pub mod fixtures;
pub mod isometry;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod quadspace;
pub mod report;
pub mod wallform;

pub use field::{Field, FieldElement};
pub use isometry::Isometry;
pub use linalg::{Matrix, Vector};
pub use quadspace::{QuadraticSpace, Subspace};
pub use wallform::WallForm;
