//! Point-line configurations of multi-qubit Pauli observables in the binary
//! symplectic polar spaces W(2N-1,2): construction of subspaces, perpsets,
//! quadrics, doilies, spreads and grids; sign evaluation; and decision and
//! quantification of quantum contextuality.
//!
//! A configuration is contextual when the GF(2) linear system `A x = E`
//! built from its contexts and signs has no solution; the contextuality
//! degree is the Hamming distance from E to the image of A. The [`solver`]
//! module decides the former by Gaussian elimination and computes the latter
//! exactly by coset minimum-weight search, by branch and bound behind a
//! satisfaction-threshold interface, or approximately by randomized local
//! search. The [`satbridge`] module translates threshold problems to DIMACS
//! CNF for external SAT solvers.

pub mod error;
pub mod geometry;
pub mod gf2;
pub mod incidence;
pub mod pauli;
pub mod satbridge;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{Configuration, Context, FamilySpec, Subspace};
pub use incidence::{build_incidence, stats, validate, ConfigStats, IncidenceSystem};
pub use pauli::{
    commutes, context_sign, subspace_count, CountParams, PhasedPauli, Point, Sign,
};
pub use solver::{
    cabello_bound, degree_exact, degree_upper_bound, degree_via_threshold, is_contextual,
    BranchBoundOracle, DegreeResult, DegreeStatus, SolveBudget, ThresholdOracle,
};
