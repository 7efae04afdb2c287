//! Degree computation through a satisfaction-threshold oracle.
//!
//! The driver starts from the number of positive contexts (always reachable
//! by the all-zero assignment), repeatedly asks whether one more context can
//! be satisfied, and stops at the first unsatisfiable threshold. Any backend
//! able to answer "find an assignment satisfying at least `low` and at most
//! `high` contexts" can be plugged in: the internal branch-and-bound below,
//! or an external SAT solver through the DIMACS bridge.

use super::{DegreeResult, DegreeStatus, SolveBudget};
use crate::error::{Error, Result};
use crate::gf2;
use crate::incidence::IncidenceSystem;
use std::time::Instant;

/// Backend answering threshold queries for a fixed incidence system.
pub trait ThresholdOracle {
    /// Returns an assignment satisfying at least `low` and at most `high`
    /// contexts, `None` if no such assignment exists, or
    /// [`Error::BudgetExhausted`] when the search gave up.
    fn solve(
        &mut self,
        system: &IncidenceSystem,
        low: usize,
        high: usize,
    ) -> Result<Option<Vec<u64>>>;
}

/// Runs the iterative-threshold degree loop over an oracle.
pub fn degree_via_threshold<O: ThresholdOracle>(
    system: &IncidenceSystem,
    oracle: &mut O,
) -> Result<DegreeResult> {
    let l = system.contexts();
    let p_words = gf2::words_for(system.observables());
    let mut best_witness = vec![0u64; p_words];
    let mut i = l - system.negative_contexts(); // |C+|, reached by x = 0
    while i < l {
        match oracle.solve(system, i + 1, l) {
            Ok(Some(assignment)) => {
                let matched = system.n_match(&assignment)?;
                debug_assert!(matched > i);
                i = matched;
                best_witness = assignment;
            }
            Ok(None) => {
                let unsatisfied = system.unsatisfied_contexts(&best_witness)?;
                return Ok(DegreeResult {
                    status: DegreeStatus::Exact,
                    d: l - i,
                    witness: best_witness,
                    unsatisfied,
                });
            }
            Err(Error::BudgetExhausted) => {
                let unsatisfied = system.unsatisfied_contexts(&best_witness)?;
                return Ok(DegreeResult {
                    status: DegreeStatus::UpperBound,
                    d: l - i,
                    witness: best_witness,
                    unsatisfied,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(DegreeResult {
        status: DegreeStatus::NonContextual,
        d: 0,
        witness: best_witness,
        unsatisfied: Vec::new(),
    })
}

/// Depth-first branch-and-bound threshold oracle.
///
/// Branches on observables in descending occurrence order; a branch is cut
/// as soon as the violated rows plus the upper bound on further satisfied
/// rows can no longer reach the threshold. Adequate for systems with a few
/// dozen observables.
pub struct BranchBoundOracle {
    pub node_limit: u64,
    pub time_limit: Option<std::time::Duration>,
}

impl Default for BranchBoundOracle {
    fn default() -> Self {
        BranchBoundOracle {
            node_limit: 500_000_000,
            time_limit: None,
        }
    }
}

impl BranchBoundOracle {
    pub fn from_budget(budget: &SolveBudget) -> Self {
        BranchBoundOracle {
            node_limit: budget.iteration_limit,
            time_limit: budget.time_limit,
        }
    }
}

struct BbState {
    /// Per row: number of still unassigned member variables.
    remaining: Vec<u32>,
    /// Per row: parity of assigned members XOR target.
    parity: Vec<u8>,
    violated: usize,
    satisfied: usize,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
    exhausted: bool,
}

impl ThresholdOracle for BranchBoundOracle {
    fn solve(
        &mut self,
        system: &IncidenceSystem,
        low: usize,
        high: usize,
    ) -> Result<Option<Vec<u64>>> {
        let l = system.contexts();
        let p = system.observables();
        // variable order: descending occurrence count
        let mut var_rows: Vec<Vec<u32>> = vec![Vec::new(); p];
        for i in 0..l {
            for (j, rows) in var_rows.iter_mut().enumerate() {
                if system.matrix().get(i, j) {
                    rows.push(i as u32);
                }
            }
        }
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by_key(|&j| std::cmp::Reverse(var_rows[j].len()));

        let mut state = BbState {
            remaining: (0..l)
                .map(|i| {
                    (0..p)
                        .filter(|&j| system.matrix().get(i, j))
                        .count() as u32
                })
                .collect(),
            parity: (0..l)
                .map(|i| gf2::get_bit(system.valuation(), i) as u8)
                .collect(),
            violated: 0,
            satisfied: 0,
            nodes: 0,
            node_limit: self.node_limit,
            deadline: self.time_limit.map(|t| Instant::now() + t),
            exhausted: false,
        };
        let mut assignment = vec![0u64; gf2::words_for(p)];
        let found = branch(
            system,
            &order,
            &var_rows,
            0,
            low,
            high,
            &mut state,
            &mut assignment,
        );
        if state.exhausted {
            return Err(Error::BudgetExhausted);
        }
        Ok(found.then_some(assignment))
    }
}

#[allow(clippy::too_many_arguments)]
fn branch(
    system: &IncidenceSystem,
    order: &[usize],
    var_rows: &[Vec<u32>],
    depth: usize,
    low: usize,
    high: usize,
    state: &mut BbState,
    assignment: &mut Vec<u64>,
) -> bool {
    let l = system.contexts();
    if state.violated > l - low || state.satisfied > high {
        return false;
    }
    if depth == order.len() {
        return state.satisfied >= low && state.satisfied <= high;
    }
    state.nodes += 1;
    if state.nodes > state.node_limit {
        state.exhausted = true;
        return false;
    }
    if state.nodes.is_multiple_of(65_536) {
        if let Some(deadline) = state.deadline {
            if Instant::now() > deadline {
                state.exhausted = true;
                return false;
            }
        }
    }
    let var = order[depth];
    for &value in &[0u8, 1u8] {
        // apply
        let mut decided_sat = 0usize;
        let mut decided_unsat = 0usize;
        for &ri in &var_rows[var] {
            let ri = ri as usize;
            state.remaining[ri] -= 1;
            state.parity[ri] ^= value;
            if state.remaining[ri] == 0 {
                if state.parity[ri] == 0 {
                    decided_sat += 1;
                } else {
                    decided_unsat += 1;
                }
            }
        }
        state.satisfied += decided_sat;
        state.violated += decided_unsat;
        if value == 1 {
            gf2::set_bit(assignment, var, true);
        }
        if branch(
            system, order, var_rows, depth + 1, low, high, state, assignment,
        ) {
            return true;
        }
        // undo
        state.satisfied -= decided_sat;
        state.violated -= decided_unsat;
        for &ri in &var_rows[var] {
            let ri = ri as usize;
            state.remaining[ri] += 1;
            state.parity[ri] ^= value;
        }
        if value == 1 {
            gf2::set_bit(assignment, var, false);
        }
        if state.exhausted {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{doily, grids, two_spreads};
    use crate::incidence::build_incidence;

    #[test]
    fn branch_bound_degree_matches_known_values() {
        let d = doily(2, &[]).unwrap();
        let sys = build_incidence(&d);
        let mut oracle = BranchBoundOracle::default();
        let r = degree_via_threshold(&sys, &mut oracle).unwrap();
        assert_eq!(r.status, DegreeStatus::Exact);
        assert_eq!(r.d, 3);

        for g in grids() {
            let sys = build_incidence(&g);
            let r = degree_via_threshold(&sys, &mut BranchBoundOracle::default()).unwrap();
            assert_eq!(r.d, 1);
        }

        for t in two_spreads(&d).unwrap() {
            let sys = build_incidence(&t);
            let r = degree_via_threshold(&sys, &mut BranchBoundOracle::default()).unwrap();
            assert_eq!(r.d, 1);
        }
    }

    #[test]
    fn branch_bound_agrees_with_coset_search() {
        let sys = build_incidence(&doily(3, &[1]).unwrap());
        let bb = degree_via_threshold(&sys, &mut BranchBoundOracle::default()).unwrap();
        let exact = super::super::degree_exact(&sys, &SolveBudget::default());
        assert_eq!(bb.d, exact.d);
    }

    #[test]
    fn budget_exhaustion_degrades_to_upper_bound() {
        let sys = build_incidence(&doily(2, &[]).unwrap());
        let mut oracle = BranchBoundOracle {
            node_limit: 5,
            time_limit: None,
        };
        let r = degree_via_threshold(&sys, &mut oracle).unwrap();
        assert_eq!(r.status, DegreeStatus::UpperBound);
        assert!(r.d >= 3);
        assert_eq!(sys.n_match(&r.witness).unwrap(), sys.contexts() - r.d);
    }
}
