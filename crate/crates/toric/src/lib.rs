//! Exact integer geometry of complete smooth toric surfaces.
//!
//! A surface is represented by its fan: a counterclockwise cycle of primitive
//! lattice vectors in Z^2 in which every adjacent pair is a positively
//! oriented basis. On top of that sit intersection numbers of the boundary
//! curves, ampleness tests for invariant divisors, the divisor polytope with
//! its lattice data, and an exhaustive classifier for boundary-support pairs.
//! All arithmetic is checked `i64`; overflow is reported, never wrapped.
//!
//! ```
//! use toric::{lattice_points, polytope_of, CompleteSmoothFan, InvariantDivisor, LatticeVector};
//!
//! # fn main() -> toric::Result<()> {
//! let fan = CompleteSmoothFan::validate(vec![
//!     LatticeVector::new(-1, -1),
//!     LatticeVector::new(1, 0),
//!     LatticeVector::new(0, 1),
//! ])?;
//! let l = InvariantDivisor::new(&fan, vec![1, 1, 1])?;
//! let p = polytope_of(&l)?;
//! assert_eq!(p.facet_volumes(), &[3, 3, 3]);
//! assert_eq!(lattice_points(&l)?.len(), 10);
//! # Ok(())
//! # }
//! ```

mod error;

pub mod classify;
pub mod divisor;
pub mod fan;
pub mod lattice;
pub mod polytope;

pub use classify::{
    classify_pairs, verify_higher_rank, verify_hirzebruch, verify_projective_plane,
    verify_volume_identity, ClassificationRecord, VerificationFailure, VerificationReport,
};
pub use divisor::{
    intersection_matrix, linearly_equivalent, log_anticanonical, principal_divisor, Ampleness,
    InvariantDivisor, SupportSet,
};
pub use error::{Error, Result};
pub use fan::{
    enumerate_fans, hirzebruch, projective_plane, CompleteSmoothFan, FanDocument, GammaSequence,
};
pub use lattice::{
    det2, dot, is_primitive, segment_lattice_count, solve_unimodular_pair, LatticeVector,
};
pub use polytope::{
    facet_has_lattice_point, lattice_points, polytope_of, DivisorPolytope, PolytopeDocument,
};
