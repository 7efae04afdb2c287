//! Randomized upper-bound search: restarts of steepest descent over single
//! observable flips, with bounded plateau walks to escape flat regions.
//!
//! Restarts are independent and seeded individually, so results are
//! reproducible and independent of how restarts are scheduled over threads.

use super::SolveBudget;
use crate::gf2;
use crate::incidence::IncidenceSystem;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

const MAX_RESTARTS: u64 = 100_000;
const PLATEAU_LIMIT: usize = 1_500;

pub(crate) fn best_assignment(system: &IncidenceSystem, budget: &SolveBudget) -> Vec<u64> {
    let l = system.contexts();
    let p = system.observables();
    let l_words = gf2::words_for(l);
    let p_words = gf2::words_for(p);

    // column masks of A
    let cols: Vec<Vec<u64>> = (0..p)
        .map(|j| {
            let mut col = vec![0u64; l_words];
            for i in 0..l {
                if system.matrix().get(i, j) {
                    gf2::set_bit(&mut col, i, true);
                }
            }
            col
        })
        .collect();
    let e = system.valuation();
    let started = Instant::now();
    let restarts = budget.iteration_limit.min(MAX_RESTARTS);
    let step_limit = 4 * l.max(p) + 2 * PLATEAU_LIMIT;

    let baseline = (gf2::weight(e), u64::MAX, vec![0u64; p_words]);
    let best = (0..restarts)
        .into_par_iter()
        .map(|restart| {
            if let Some(limit) = budget.time_limit {
                if started.elapsed() > limit {
                    return baseline.clone();
                }
            }
            let mut rng =
                ChaCha8Rng::seed_from_u64(budget.seed ^ (restart + 1).wrapping_mul(0x9e3779b97f4a7c15));
            let mut x = vec![0u64; p_words];
            for w in x.iter_mut() {
                *w = rng.gen();
            }
            if !p.is_multiple_of(64) {
                x[p_words - 1] &= (1u64 << (p % 64)) - 1;
            }
            let mut v = e.to_vec();
            for (j, col) in cols.iter().enumerate() {
                if gf2::get_bit(&x, j) {
                    gf2::xor_into(&mut v, col);
                }
            }
            let mut weight = gf2::weight(&v);
            let mut best_weight = weight;
            let mut best_x = x.clone();
            let mut plateau = 0usize;
            let mut ties: Vec<usize> = Vec::with_capacity(p);
            for _ in 0..step_limit {
                // improvement of flipping column j: 2*|v & col| - |col|
                let mut best_gain = i64::MIN;
                ties.clear();
                for (j, col) in cols.iter().enumerate() {
                    let overlap: usize = v.iter().zip(col).map(|(a, b)| (a & b).count_ones() as usize).sum();
                    let gain = 2 * overlap as i64 - gf2::weight(col) as i64;
                    if gain > best_gain {
                        best_gain = gain;
                        ties.clear();
                        ties.push(j);
                    } else if gain == best_gain {
                        ties.push(j);
                    }
                }
                if best_gain < 0 {
                    break;
                }
                if best_gain == 0 {
                    plateau += 1;
                    if plateau > PLATEAU_LIMIT {
                        break;
                    }
                } else {
                    plateau = 0;
                }
                let j = ties[rng.gen_range(0..ties.len())];
                gf2::flip_bit(&mut x, j);
                gf2::xor_into(&mut v, &cols[j]);
                weight = (weight as i64 - best_gain) as usize;
                debug_assert_eq!(weight, gf2::weight(&v));
                if weight < best_weight {
                    best_weight = weight;
                    best_x = x.clone();
                }
            }
            (best_weight, restart, best_x)
        })
        .reduce(
            || baseline.clone(),
            |a, b| {
                if (b.0, b.1) < (a.0, a.1) {
                    b
                } else {
                    a
                }
            },
        );
    best.2
}
