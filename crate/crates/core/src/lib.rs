//! Exact computations in vacuum modules of untwisted affine Lie algebras.
//!
//! The crate builds finite simple Lie algebras from Cartan data, realizes the
//! level-`k` vacuum module as explicit PBW monomial bases, evaluates vertex
//! operator coefficients `v_n`, and computes kernels of the induction and
//! normal-order product maps per graded block, entirely over the rationals.
//! The `claims` module packages the theorem-level checks behind a registry
//! that the CLI and the Python bindings both drive.

pub mod cache;
pub mod claims;
pub mod exact;
pub mod lie;
pub mod relations;
pub mod report;
pub mod vacuum;
pub mod vertex;

pub use exact::{Rational, SparseMat, SparseVec};
pub use lie::{build_algebra, Algebra, CartanType, Family, SignConvention};
pub use relations::RelCtx;
pub use report::VerificationReport;
pub use vacuum::{ModuleCtx, State};
