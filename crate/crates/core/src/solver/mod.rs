//! Contextuality decision and degree computation.
//!
//! A configuration is contextual iff `A x = E` has no solution over GF(2).
//! The contextuality degree is the Hamming distance from E to the image of
//! A, i.e. the minimum number of contexts any noncontextual assignment must
//! violate.

mod coset;
mod gauss;
mod heuristic;
mod threshold;

pub use gauss::{is_contextual, verify_certificate, Consistency};
pub use threshold::{degree_via_threshold, BranchBoundOracle, ThresholdOracle};

use crate::error::{Error, Result};
use crate::gf2;
use crate::incidence::IncidenceSystem;
use std::time::Duration;

/// How a reported degree value is to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeStatus {
    /// `d = 0`; the witness solves `A x = E`.
    NonContextual,
    /// `d` is the exact degree; optimality was proven.
    Exact,
    /// `d` is only known to be achievable; the true degree may be smaller.
    UpperBound,
}

/// A degree value with its status and a witnessing assignment.
#[derive(Clone, Debug)]
pub struct DegreeResult {
    pub status: DegreeStatus,
    pub d: usize,
    /// Assignment achieving `l - d` satisfied contexts, bit-packed over the
    /// observables.
    pub witness: Vec<u64>,
    /// Context indices violated by the witness; exactly `d` of them.
    pub unsatisfied: Vec<usize>,
}

impl DegreeResult {
    fn from_witness(system: &IncidenceSystem, status: DegreeStatus, witness: Vec<u64>) -> Self {
        let unsatisfied = system
            .unsatisfied_contexts(&witness)
            .expect("witness has the right length");
        DegreeResult {
            status,
            d: unsatisfied.len(),
            witness,
            unsatisfied,
        }
    }
}

/// Search limits for the degree solvers. All searches are deterministic
/// given the seed.
#[derive(Clone, Debug)]
pub struct SolveBudget {
    /// Wall-clock limit; `None` means unlimited.
    pub time_limit: Option<Duration>,
    /// Iteration limit: enumerated candidates for the exact search,
    /// restarts for the heuristic.
    pub iteration_limit: u64,
    pub seed: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            time_limit: None,
            iteration_limit: 200_000_000,
            seed: 0,
        }
    }
}

/// Computes the contextuality degree, proving optimality when the budget
/// allows.
///
/// Consistency is decided by Gaussian elimination first. Contextual systems
/// are then solved as a nearest-codeword problem on the coset `E + Im(A)`:
/// coset vectors are enumerated by their restriction weight on disjoint
/// information sets of rows, which yields a matching lower bound and hence a
/// completed optimality proof. Budget exhaustion downgrades the status to
/// [`DegreeStatus::UpperBound`] with the best witness found.
pub fn degree_exact(system: &IncidenceSystem, budget: &SolveBudget) -> DegreeResult {
    let p_words = gf2::words_for(system.observables());
    if system.contexts() == 0 {
        // vacuously non-contextual (e.g. the two-qubit elliptic quadric)
        return DegreeResult {
            status: DegreeStatus::NonContextual,
            d: 0,
            witness: vec![0; p_words],
            unsatisfied: Vec::new(),
        };
    }
    if let Some(solution) = system.matrix().solve(system.valuation()) {
        return DegreeResult::from_witness(system, DegreeStatus::NonContextual, solution);
    }
    let (status, witness) = coset::min_weight_coset(system, budget);
    DegreeResult::from_witness(system, status, witness)
}

/// Randomized upper bound on the degree: parallel restarts of steepest
/// descent with plateau moves over single observable flips. Monotone in the
/// iteration count and deterministic given the seed, independent of the
/// worker count.
pub fn degree_upper_bound(system: &IncidenceSystem, budget: &SolveBudget) -> DegreeResult {
    if system.contexts() == 0 {
        return DegreeResult {
            status: DegreeStatus::NonContextual,
            d: 0,
            witness: vec![0; gf2::words_for(system.observables())],
            unsatisfied: Vec::new(),
        };
    }
    let witness = heuristic::best_assignment(system, budget);
    let unsat = system
        .unsatisfied_contexts(&witness)
        .expect("witness length");
    let status = if unsat.is_empty() {
        DegreeStatus::NonContextual
    } else {
        DegreeStatus::UpperBound
    };
    DegreeResult::from_witness(system, status, witness)
}

/// Classical bound of the Cabello inequality: `b = l - 2d`.
pub fn cabello_bound(contexts: usize, degree: usize) -> Result<i64> {
    if degree > contexts {
        return Err(Error::DegreeExceedsContexts {
            l: contexts,
            d: degree,
        });
    }
    Ok(contexts as i64 - 2 * degree as i64)
}

/// Context indices violated by an assignment (re-exported convenience over
/// [`IncidenceSystem::unsatisfied_contexts`]).
pub fn unsatisfied_contexts(system: &IncidenceSystem, x: &[u64]) -> Result<Vec<usize>> {
    system.unsatisfied_contexts(x)
}
