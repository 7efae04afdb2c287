//! Streaming enumeration of totally isotropic subspaces.
//!
//! Candidate points are visited in lexicographic order; a candidate `p`
//! extends the current subspace `S` when it is orthogonal to every point of
//! `S` and every new point `p+q` stays above `p` in the order. This makes
//! each subspace appear exactly once, with the smallest point of maximal
//! effective size chosen last.

use super::Subspace;
use crate::error::{Error, Result};
use crate::pauli::{form_bits, low_mask, Point};
use rayon::prelude::*;

fn check_params(n: usize, k: usize) -> Result<()> {
    if !(2..=crate::pauli::MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange(n));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::DimensionOutOfRange { n, k });
    }
    Ok(())
}

/// Extends `pts` by `p` and the coset `S+p`, recursing until `k+1` basis
/// points have been placed. `visit` receives the points in generation order
/// (not sorted).
fn recurse<F: FnMut(&[u64])>(
    full: u64,
    n: usize,
    k: usize,
    pts: &mut Vec<u64>,
    level: usize,
    max: u64,
    visit: &mut F,
) {
    if level == k + 1 {
        visit(pts);
        return;
    }
    let mut p = max + 1;
    while p <= full {
        let mut valid = true;
        for &q in pts.iter() {
            if form_bits(p, q, n) == 1 || (p ^ q) < p {
                valid = false;
                break;
            }
        }
        if valid {
            let old_len = pts.len();
            pts.push(p);
            for i in 0..old_len {
                let q = pts[i];
                pts.push(p ^ q);
            }
            let new_max = pts[old_len..].iter().copied().max().unwrap();
            recurse(full, n, k, pts, level + 1, new_max, visit);
            pts.truncate(old_len);
        }
        p += 1;
    }
}

/// Sequentially enumerates every totally isotropic k-subspace of
/// $\mathcal{W}_N$ exactly once, in a deterministic order.
pub fn enumerate_subspaces<F: FnMut(&Subspace)>(n: usize, k: usize, mut visit: F) -> Result<()> {
    check_params(n, k)?;
    let full = low_mask(2 * n);
    let mut pts = Vec::with_capacity((1 << (k + 1)) - 1);
    recurse(full, n, k, &mut pts, 0, 0, &mut |raw| {
        let mut points: Vec<Point> = raw
            .iter()
            .map(|&b| Point::new(b, n).expect("enumeration emits valid points"))
            .collect();
        points.sort();
        visit(&Subspace::from_sorted_points(n, k, points));
    });
    Ok(())
}

/// Collects all k-subspaces into memory. Intended for small ranks; large
/// enumerations should stream through [`enumerate_subspaces`] or
/// [`par_fold_subspaces`].
pub fn subspaces(n: usize, k: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    enumerate_subspaces(n, k, |s| out.push(s.clone()))?;
    Ok(out)
}

/// Parallel fold over all k-subspaces. Branches rooted at distinct first
/// points run independently; `step` receives the raw point bitvectors of one
/// subspace (in generation order) and folds them into a per-worker
/// accumulator, which `merge` then combines. The merge must be associative
/// and order-independent.
pub fn par_fold_subspaces<T, I, S, M>(n: usize, k: usize, identity: I, step: S, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    S: Fn(&mut T, &[u64]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_params(n, k)?;
    let full = low_mask(2 * n);
    Ok((1..=full)
        .into_par_iter()
        .fold(&identity, |mut acc, first| {
            let mut pts = vec![first];
            recurse(full, n, k, &mut pts, 1, first, &mut |raw| step(&mut acc, raw));
            acc
        })
        .reduce(&identity, &merge))
}

/// Closure of a linearly independent, pairwise orthogonal basis: all nonzero
/// GF(2) combinations, sorted.
pub fn closure(basis: &[Point]) -> Result<Subspace> {
    let Some(first) = basis.first() else {
        return Err(Error::BadBasis);
    };
    let n = first.qubits();
    for (i, &p) in basis.iter().enumerate() {
        if p.qubits() != n {
            return Err(Error::QubitMismatch(p.qubits(), n));
        }
        for &q in &basis[i + 1..] {
            if form_bits(p.bits(), q.bits(), n) == 1 {
                return Err(Error::BadBasis);
            }
        }
    }
    let mut bits = vec![0u64];
    for &p in basis {
        let prev = bits.clone();
        for b in prev {
            bits.push(b ^ p.bits());
        }
    }
    bits.sort_unstable();
    bits.dedup();
    if bits.len() != 1 << basis.len() {
        return Err(Error::BadBasis); // dependent basis
    }
    let points = bits[1..]
        .iter()
        .map(|&b| Point::new(b, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::from_sorted_points(n, basis.len() - 1, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{subspace_count, CountParams, Sign};
    use num_bigint::BigUint;
    use std::collections::HashSet;

    fn p(s: &str) -> Point {
        Point::encode(s).unwrap()
    }

    #[test]
    fn two_qubit_lines() {
        let lines = subspaces(2, 1).unwrap();
        assert_eq!(lines.len(), 15);
        let negative = lines.iter().filter(|l| l.sign() == Sign::Minus).count();
        assert_eq!(negative, 3);
    }

    #[test]
    fn three_qubit_generators() {
        let gens = subspaces(3, 2).unwrap();
        assert_eq!(gens.len(), 135);
        let negative = gens.iter().filter(|g| g.sign() == Sign::Minus).count();
        assert_eq!(negative, 54);
    }

    #[test]
    fn no_duplicates_and_counts_match_formula() {
        for n in 2..=4 {
            for k in 1..n {
                let all = subspaces(n, k).unwrap();
                let expected = subspace_count(CountParams { q: 2, n, k }).unwrap();
                assert_eq!(BigUint::from(all.len()), expected, "N={n} k={k}");
                let distinct: HashSet<_> = all.iter().map(|s| s.points().to_vec()).collect();
                assert_eq!(distinct.len(), all.len(), "duplicate subspace at N={n} k={k}");
            }
        }
    }

    #[test]
    fn subspaces_are_totally_isotropic_and_closed() {
        enumerate_subspaces(3, 1, |s| {
            let pts = s.points();
            assert_eq!(pts.len(), 3);
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    assert_eq!(form_bits(a.bits(), b.bits(), 3), 0);
                }
            }
            assert_eq!(pts[0].bits() ^ pts[1].bits(), pts[2].bits());
        })
        .unwrap();
    }

    #[test]
    fn parallel_fold_agrees_with_sequential() {
        let seq = subspaces(4, 2).unwrap().len();
        let par = par_fold_subspaces(4, 2, || 0u64, |acc, _| *acc += 1, |a, b| a + b).unwrap();
        assert_eq!(par, seq as u64);
        assert_eq!(par, 11475);
    }

    #[test]
    fn closure_examples() {
        let s = closure(&[p("XX"), p("YY")]).unwrap();
        // points come back sorted by bit encoding: XX=0011, ZZ=1100, YY=1111
        assert_eq!(s.points(), &[p("XX"), p("ZZ"), p("YY")]);
        let single = closure(&[p("XI")]).unwrap();
        assert_eq!(single.points(), &[p("XI")]);
        let rank2 = closure(&[p("XI"), p("IX")]).unwrap();
        assert_eq!(rank2.points(), &[p("IX"), p("XI"), p("XX")]);
        assert!(closure(&[p("X"), p("Z")]).is_err()); // not isotropic
        assert!(closure(&[p("XX"), p("YY"), p("ZZ")]).is_err()); // dependent
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(enumerate_subspaces(3, 0, |_| ()).is_err());
        assert!(enumerate_subspaces(3, 3, |_| ()).is_err());
        assert!(enumerate_subspaces(1, 1, |_| ()).is_err());
    }
}
