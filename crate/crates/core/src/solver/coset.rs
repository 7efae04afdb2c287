//! Exact minimum-weight coset search.
//!
//! The degree of a contextual system is the minimum weight over the coset
//! `E + Im(A)`. Every coset vector is determined by its restriction to any
//! full-rank set of rows (an information set). We greedily partition the
//! rows into disjoint sets and enumerate restriction patterns by increasing
//! weight `t` on each set. A set whose own rows only reach rank `rank - d`
//! is completed by `d` extra rows borrowed from elsewhere; the borrowed
//! coordinates are enumerated exhaustively (cost factor `2^d`), so the set
//! still rules out any coset vector of restriction weight <= `t` on its own
//! disjoint rows. After finishing level `t` with `m` sets, every remaining
//! coset vector has weight > `t` on each of the `m` disjoint row sets, hence
//! total weight >= `m(t+1)`; once that reaches the best weight found, the
//! best is proven minimal. The first set is always full-rank, so raising `t`
//! to the rank visits the whole coset and the search is exact whenever the
//! budget suffices.

use super::{DegreeStatus, SolveBudget};
use crate::gf2::{self, BitMatrix};
use crate::incidence::IncidenceSystem;
use std::time::Instant;

/// Largest tolerated rank deficiency of a carved row set; each deficient
/// set multiplies its enumeration cost by `2^deficiency`.
const MAX_DEFICIENCY: usize = 4;

struct InfoSet {
    /// Number of leading coordinates owned exclusively by this set; the
    /// remaining `rank - free` coordinates are borrowed completion rows.
    free: usize,
    /// Coset vector whose restriction to this set's rows is zero.
    v0: Vec<u64>,
    /// Reduced assignment producing `v0`.
    x0: Vec<u64>,
    /// Effect on the coset vector of flipping restriction bit j.
    dcols: Vec<Vec<u64>>,
    /// Effect on the reduced assignment of flipping restriction bit j.
    bcols: Vec<Vec<u64>>,
}

struct SearchState<'a> {
    best_weight: usize,
    best_x: Vec<u64>,
    leaves: u64,
    budget: &'a SolveBudget,
    started: Instant,
    aborted: bool,
}

impl SearchState<'_> {
    fn check_budget(&mut self) -> bool {
        if self.leaves > self.budget.iteration_limit {
            self.aborted = true;
        } else if self.leaves.is_multiple_of(65_536) {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() > limit {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    /// Enumerates every restriction pattern of weight `t` on the set's own
    /// coordinates, under every pattern of the borrowed completion
    /// coordinates, keeping the coset vector up to date incrementally.
    fn level(&mut self, set: &InfoSet, t: usize) {
        if t > set.free {
            return;
        }
        let deficiency = set.dcols.len() - set.free;
        let mut chosen = Vec::with_capacity(t + deficiency);
        for borrow in 0u64..(1 << deficiency) {
            let mut v = set.v0.clone();
            chosen.clear();
            for b in 0..deficiency {
                if borrow >> b & 1 == 1 {
                    let j = set.free + b;
                    gf2::xor_into(&mut v, &set.dcols[j]);
                    chosen.push(j);
                }
            }
            self.combos(set, t, 0, &mut v, &mut chosen);
            if self.aborted {
                return;
            }
        }
    }

    fn combos(
        &mut self,
        set: &InfoSet,
        remaining: usize,
        from: usize,
        v: &mut [u64],
        chosen: &mut Vec<usize>,
    ) {
        if remaining == 0 {
            self.leaves += 1;
            let weight = gf2::weight(v);
            if weight < self.best_weight {
                let mut x = set.x0.clone();
                for &j in chosen.iter() {
                    gf2::xor_into(&mut x, &set.bcols[j]);
                }
                self.best_weight = weight;
                self.best_x = x;
            }
            return;
        }
        if self.check_budget() {
            return;
        }
        for j in from..=(set.free - remaining) {
            gf2::xor_into(v, &set.dcols[j]);
            chosen.push(j);
            self.combos(set, remaining - 1, j + 1, v, chosen);
            chosen.pop();
            gf2::xor_into(v, &set.dcols[j]);
            if self.aborted {
                return;
            }
        }
    }
}

fn first_set_bit(v: &[u64]) -> Option<usize> {
    for (w, &word) in v.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

/// Incrementally built GF(2) row basis with stored pivot positions.
struct RowBasis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowBasis {
    fn new() -> Self {
        RowBasis { rows: Vec::new() }
    }

    /// Reduces `v` against the basis; adds it and returns true when
    /// independent.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        for (head, bv) in &self.rows {
            if gf2::get_bit(&v, *head) {
                gf2::xor_into(&mut v, bv);
            }
        }
        match first_set_bit(&v) {
            Some(head) => {
                self.rows.push((head, v));
                true
            }
            None => false,
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Returns the minimum coset weight witness (as a full-length assignment)
/// and whether minimality was proven within the budget.
pub(crate) fn min_weight_coset(
    system: &IncidenceSystem,
    budget: &SolveBudget,
) -> (DegreeStatus, Vec<u64>) {
    let l = system.contexts();
    let p = system.observables();
    let l_words = gf2::words_for(l);

    // rank profile: independent columns of A
    let mut echelon = system.matrix().clone();
    let pivots = echelon.eliminate();
    let rank = pivots.len();
    let expand = |x_red: &[u64]| -> Vec<u64> {
        let mut x = vec![0u64; gf2::words_for(p)];
        for (c, &j) in pivots.iter().enumerate() {
            if gf2::get_bit(x_red, c) {
                gf2::set_bit(&mut x, j, true);
            }
        }
        x
    };

    if rank == 0 {
        // coset is {E}; reachable only for degenerate inputs
        return (DegreeStatus::Exact, vec![0u64; gf2::words_for(p)]);
    }
    let r_words = gf2::words_for(rank);

    // reduced column masks (l bits each)
    let cols: Vec<Vec<u64>> = pivots
        .iter()
        .map(|&j| {
            let mut col = vec![0u64; l_words];
            for i in 0..l {
                if system.matrix().get(i, j) {
                    gf2::set_bit(&mut col, i, true);
                }
            }
            col
        })
        .collect();

    // row restrictions to the independent columns (rank bits each)
    let row_red: Vec<Vec<u64>> = (0..l)
        .map(|i| {
            let mut row = vec![0u64; r_words];
            for (c, &j) in pivots.iter().enumerate() {
                if system.matrix().get(i, j) {
                    gf2::set_bit(&mut row, c, true);
                }
            }
            row
        })
        .collect();

    // Greedily carve disjoint row sets. Each set's own rows must reach rank
    // at least `rank - MAX_DEFICIENCY`; missing dimensions are completed by
    // borrowing rows from the rest of the system.
    let mut used = vec![false; l];
    let mut row_sets: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    loop {
        let mut basis = RowBasis::new();
        let mut own = Vec::new();
        for i in 0..l {
            if !used[i] && basis.insert(row_red[i].clone()) {
                own.push(i);
                if own.len() == rank {
                    break;
                }
            }
        }
        if own.is_empty() || rank - own.len() > MAX_DEFICIENCY {
            break;
        }
        let mut borrowed = Vec::new();
        for (i, row) in row_red.iter().enumerate() {
            if basis.rank() == rank {
                break;
            }
            if basis.insert(row.clone()) {
                borrowed.push(i);
            }
        }
        debug_assert_eq!(basis.rank(), rank);
        for &i in &own {
            used[i] = true;
        }
        row_sets.push((own, borrowed));
    }
    debug_assert!(!row_sets.is_empty());
    debug_assert_eq!(row_sets[0].1.len(), 0, "first set is full-rank");

    let e = system.valuation();
    // A' x for a reduced assignment
    let image = |x_red: &[u64]| -> Vec<u64> {
        let mut v = vec![0u64; l_words];
        for (c, col) in cols.iter().enumerate() {
            if gf2::get_bit(x_red, c) {
                gf2::xor_into(&mut v, col);
            }
        }
        v
    };

    let mut sets = Vec::with_capacity(row_sets.len());
    for (own, borrowed) in &row_sets {
        let rows: Vec<usize> = own.iter().chain(borrowed).copied().collect();
        let mut a_i = BitMatrix::zero(rank, rank);
        for (k, &i) in rows.iter().enumerate() {
            for c in 0..rank {
                if gf2::get_bit(&row_red[i], c) {
                    a_i.set(k, c, true);
                }
            }
        }
        let b = a_i.inverted().expect("information set rows are independent");
        let mut e_i = vec![0u64; r_words];
        for (k, &i) in rows.iter().enumerate() {
            if gf2::get_bit(e, i) {
                gf2::set_bit(&mut e_i, k, true);
            }
        }
        let x0 = b.mul_vec(&e_i);
        let mut v0 = image(&x0);
        gf2::xor_into(&mut v0, e);
        debug_assert!(rows.iter().all(|&i| !gf2::get_bit(&v0, i)));
        let mut bcols = Vec::with_capacity(rank);
        let mut dcols = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut unit = vec![0u64; r_words];
            gf2::set_bit(&mut unit, j, true);
            let bcol = b.mul_vec(&unit);
            let dcol = image(&bcol);
            bcols.push(bcol);
            dcols.push(dcol);
        }
        sets.push(InfoSet {
            free: own.len(),
            v0,
            x0,
            dcols,
            bcols,
        });
    }

    let mut search = SearchState {
        best_weight: gf2::weight(e),
        best_x: vec![0u64; r_words],
        leaves: 0,
        budget,
        started: Instant::now(),
        aborted: false,
    };

    let m = sets.len();
    let mut proven = false;
    let mut t = 0;
    while !proven && t <= rank && !search.aborted {
        for set in &sets {
            search.level(set, t);
            if search.aborted {
                break;
            }
        }
        if !search.aborted && (m * (t + 1) >= search.best_weight || t == rank) {
            proven = true;
        }
        t += 1;
    }

    let witness = expand(&search.best_x);
    let status = if proven {
        DegreeStatus::Exact
    } else {
        DegreeStatus::UpperBound
    };
    (status, witness)
}
