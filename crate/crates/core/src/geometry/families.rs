//! Derived configurations: perpsets, quadrics, doilies, spreads,
//! two-spreads and Mermin-Peres grids.

use super::{Configuration, Context};
use crate::error::{Error, Result};
use crate::pauli::{
    context_sign_unchecked, form_bits, low_mask, quadratic_form_bits, Point,
};

/// Lines of $\mathcal{W}_N$ entirely contained in a set of points, as sorted
/// triples of bitvectors.
fn lines_in_set(bits: &[u64], n: usize) -> Vec<[u64; 3]> {
    let full = low_mask(2 * n) as usize;
    let mut member = vec![false; full + 1];
    for &b in bits {
        member[b as usize] = true;
    }
    let mut lines = Vec::new();
    for (i, &a) in bits.iter().enumerate() {
        for &b in &bits[i + 1..] {
            let c = a ^ b;
            if c > b && form_bits(a, b, n) == 0 && member[c as usize] {
                lines.push([a, b, c]);
            }
        }
    }
    lines
}

fn configuration_from_lines(
    n: usize,
    family: &str,
    point_bits: Vec<u64>,
    lines: Vec<[u64; 3]>,
) -> Result<Configuration> {
    let mut sorted = point_bits;
    sorted.sort_unstable();
    let points = sorted
        .iter()
        .map(|&b| Point::new(b, n))
        .collect::<Result<Vec<_>>>()?;
    let index = |b: u64| sorted.binary_search(&b).expect("line point in set");
    let contexts = lines
        .into_iter()
        .map(|line| {
            let pts: Vec<Point> = line.iter().map(|&b| points[index(b)]).collect();
            Context {
                points: line.iter().map(|&b| index(b)).collect(),
                sign: context_sign_unchecked(&pts),
            }
        })
        .collect();
    Ok(Configuration::new_unchecked(
        n,
        family.to_string(),
        points,
        contexts,
    ))
}

/// Perpset of `p`: all points commuting with `p`, with the lines through `p`
/// as contexts.
pub fn perpset(n: usize, p: Point) -> Result<Configuration> {
    if p.qubits() != n {
        return Err(Error::QubitMismatch(p.qubits(), n));
    }
    let full = low_mask(2 * n);
    let pb = p.bits();
    let point_bits: Vec<u64> = (1..=full).filter(|&q| form_bits(pb, q, n) == 0).collect();
    let mut lines = Vec::new();
    for &q in &point_bits {
        if q == pb {
            continue;
        }
        let r = pb ^ q;
        if q < r {
            let mut line = [pb, q, r];
            line.sort_unstable();
            lines.push(line);
        }
    }
    configuration_from_lines(n, "perpset", point_bits, lines)
}

/// Type of a quadric of $\mathcal{W}_N$.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadricType {
    Hyperbolic,
    Elliptic,
}

impl QuadricType {
    pub fn family_name(self) -> &'static str {
        match self {
            QuadricType::Hyperbolic => "hyperbolic",
            QuadricType::Elliptic => "elliptic",
        }
    }
}

/// Quadric indexed by `q_bits` (zero allowed): the points `x` with
/// $Q_0(x) + \langle x|q\rangle = 0$, with all fully contained lines as
/// contexts. Hyperbolic iff $Q_0(q) = 0$.
pub fn quadric(n: usize, q_bits: u64) -> Result<(Configuration, QuadricType)> {
    if n == 0 || n > crate::pauli::MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange(n));
    }
    let full = low_mask(2 * n);
    if q_bits > full {
        return Err(Error::BitsOutOfRange {
            bits: q_bits,
            qubits: n,
        });
    }
    let kind = if quadratic_form_bits(q_bits, n) == 0 {
        QuadricType::Hyperbolic
    } else {
        QuadricType::Elliptic
    };
    let point_bits: Vec<u64> = (1..=full)
        .filter(|&x| quadratic_form_bits(x, n) ^ form_bits(x, q_bits, n) == 0)
        .collect();
    let lines = lines_in_set(&point_bits, n);
    let cfg = configuration_from_lines(n, kind.family_name(), point_bits, lines)?;
    Ok((cfg, kind))
}

/// Identity-padded N-qubit doily. `embedding` lists the N-2 qubit slots
/// (1-based) that receive an identity factor; the remaining slots host the
/// two-qubit doily observables in order.
pub fn doily(n: usize, embedding: &[usize]) -> Result<Configuration> {
    if !(2..=crate::pauli::MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange(n));
    }
    if embedding.len() != n - 2 {
        return Err(Error::BadEmbedding(embedding.len(), n));
    }
    let mut pad = vec![false; n];
    for &slot in embedding {
        if slot == 0 || slot > n || pad[slot - 1] {
            return Err(Error::BadEmbedding(slot, n));
        }
        pad[slot - 1] = true;
    }
    let embed = |p: Point| -> Point {
        let small = p.decode();
        let mut chars = small.chars();
        let padded: String = pad
            .iter()
            .map(|&is_pad| if is_pad { 'I' } else { chars.next().unwrap() })
            .collect();
        Point::encode(&padded).expect("padded doily observable is nontrivial")
    };
    let mut contexts = Vec::with_capacity(15);
    super::enumerate_subspaces(2, 1, |line| {
        contexts.push(line.points().iter().map(|&p| embed(p)).collect::<Vec<_>>());
    })?;
    Configuration::from_contexts(n, "doily", contexts)
}

fn check_doily_shape(c: &Configuration) -> Result<()> {
    if c.points().len() != 15 || c.contexts().len() != 15 {
        return Err(Error::NotADoily(format!(
            "{} points, {} contexts",
            c.points().len(),
            c.contexts().len()
        )));
    }
    let mut per_point = [0usize; 15];
    for ctx in c.contexts() {
        if ctx.points.len() != 3 {
            return Err(Error::NotADoily(format!(
                "context with {} points",
                ctx.points.len()
            )));
        }
        for &j in &ctx.points {
            per_point[j] += 1;
        }
    }
    if per_point.iter().any(|&d| d != 3) {
        return Err(Error::NotADoily("a point not on exactly 3 lines".into()));
    }
    Ok(())
}

/// The spreads of a doily: all sets of 5 pairwise disjoint lines covering
/// the 15 points. Every doily has exactly six.
pub fn spreads(c: &Configuration) -> Result<Vec<Vec<usize>>> {
    check_doily_shape(c)?;
    let masks: Vec<u16> = c
        .contexts()
        .iter()
        .map(|ctx| ctx.points.iter().fold(0u16, |m, &j| m | 1 << j))
        .collect();
    let mut found = Vec::new();
    let mut chosen = Vec::new();
    fn search(
        masks: &[u16],
        start: usize,
        covered: u16,
        chosen: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == 5 {
            if covered == 0x7fff {
                found.push(chosen.clone());
            }
            return;
        }
        for i in start..masks.len() {
            if covered & masks[i] == 0 {
                chosen.push(i);
                search(masks, i + 1, covered | masks[i], chosen, found);
                chosen.pop();
            }
        }
    }
    search(&masks, 0, 0, &mut chosen, &mut found);
    Ok(found)
}

/// The six two-spreads of a doily: remove one spread of lines, keep all
/// points.
pub fn two_spreads(c: &Configuration) -> Result<Vec<Configuration>> {
    Ok(spreads(c)?
        .into_iter()
        .map(|spread| c.without_contexts(&spread, "two-spread"))
        .collect())
}

/// The ten Mermin-Peres grids of $\mathcal{W}_2$: the hyperbolic-quadric
/// configurations (9 points, 6 lines).
pub fn grids() -> Vec<Configuration> {
    (0..16u64)
        .filter(|&q| quadratic_form_bits(q, 2) == 0)
        .map(|q| {
            let (mut cfg, kind) = quadric(2, q).expect("two-qubit quadric");
            debug_assert_eq!(kind, QuadricType::Hyperbolic);
            cfg.family = "grid".to_string();
            cfg
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Sign;

    fn p(s: &str) -> Point {
        Point::encode(s).unwrap()
    }

    #[test]
    fn perpset_counts() {
        let c = perpset(2, p("XI")).unwrap();
        assert_eq!(c.points().len(), 7);
        assert_eq!(c.contexts().len(), 3);
        let c3 = perpset(3, p("YXZ")).unwrap();
        assert_eq!(c3.points().len(), 31);
        assert_eq!(c3.contexts().len(), 15);
    }

    #[test]
    fn perpset_negative_census_three_qubits() {
        let full = low_mask(6);
        for bits in 1..=full {
            let c = perpset(3, Point::new(bits, 3).unwrap()).unwrap();
            let neg = c.negative_contexts();
            assert!(
                neg == 0 || neg == 4 || neg == 6,
                "perpset of {} has {} negative lines",
                Point::new(bits, 3).unwrap(),
                neg
            );
        }
    }

    #[test]
    fn perpset_non_center_points_on_one_line() {
        let center = p("XZ");
        let c = perpset(2, center).unwrap();
        let mut line_count = vec![0usize; c.points().len()];
        for ctx in c.contexts() {
            for &j in &ctx.points {
                line_count[j] += 1;
            }
        }
        for (j, q) in c.points().iter().enumerate() {
            if *q == center {
                assert_eq!(line_count[j], c.contexts().len());
            } else {
                assert_eq!(line_count[j], 1, "point {q} not on exactly one line");
            }
        }
    }

    #[test]
    fn quadric_counts_two_and_three_qubits() {
        let (hyper, kind) = quadric(2, 0).unwrap();
        assert_eq!(kind, QuadricType::Hyperbolic);
        assert_eq!(hyper.points().len(), 9);
        assert_eq!(hyper.contexts().len(), 6);

        let mut hyper_count = 0;
        let mut elliptic_count = 0;
        for q in 0..64u64 {
            let (cfg, kind) = quadric(3, q).unwrap();
            match kind {
                QuadricType::Hyperbolic => {
                    hyper_count += 1;
                    assert_eq!(cfg.points().len(), 35);
                    assert_eq!(cfg.contexts().len(), 105);
                    let neg = cfg.negative_contexts();
                    assert!(neg == 27 || neg == 39, "hyperbolic neg = {neg}");
                }
                QuadricType::Elliptic => {
                    elliptic_count += 1;
                    assert_eq!(cfg.points().len(), 27);
                    assert_eq!(cfg.contexts().len(), 45);
                    let neg = cfg.negative_contexts();
                    assert!(neg == 9 || neg == 13, "elliptic neg = {neg}");
                }
            }
        }
        assert_eq!(hyper_count, 36);
        assert_eq!(elliptic_count, 28);
    }

    #[test]
    fn two_qubit_elliptic_has_no_lines() {
        let q = (0..16u64).find(|&q| quadratic_form_bits(q, 2) == 1).unwrap();
        let (cfg, kind) = quadric(2, q).unwrap();
        assert_eq!(kind, QuadricType::Elliptic);
        assert_eq!(cfg.points().len(), 5);
        assert_eq!(cfg.contexts().len(), 0);
    }

    #[test]
    fn doily_basics() {
        let d = doily(2, &[]).unwrap();
        assert_eq!(d.points().len(), 15);
        assert_eq!(d.contexts().len(), 15);
        assert_eq!(d.negative_contexts(), 3);

        let d3 = doily(3, &[3]).unwrap();
        assert_eq!(d3.points().len(), 15);
        assert_eq!(d3.negative_contexts(), 3);
        assert!(d3.points().iter().all(|p| p.decode().ends_with('I')));
    }

    #[test]
    fn doily_rejects_bad_embedding() {
        assert!(doily(3, &[]).is_err());
        assert!(doily(3, &[4]).is_err());
        assert!(doily(4, &[2, 2]).is_err());
    }

    #[test]
    fn doily_has_six_spreads() {
        let d = doily(2, &[]).unwrap();
        let s = spreads(&d).unwrap();
        assert_eq!(s.len(), 6);
        for spread in &s {
            let mut covered = 0u16;
            for &i in spread {
                for &j in &d.contexts()[i].points {
                    assert_eq!(covered & (1 << j), 0, "spread lines overlap");
                    covered |= 1 << j;
                }
            }
            assert_eq!(covered, 0x7fff);
        }
    }

    #[test]
    fn spread_parity_matches_doily_parity() {
        let d = doily(2, &[]).unwrap();
        let doily_neg = d.negative_contexts();
        for spread in spreads(&d).unwrap() {
            let neg_in_spread = spread
                .iter()
                .filter(|&&i| d.contexts()[i].sign == Sign::Minus)
                .count();
            if doily_neg % 2 == 1 {
                assert_eq!(neg_in_spread % 2, 0);
            } else {
                assert_eq!(neg_in_spread % 2, 1);
            }
        }
    }

    #[test]
    fn two_spreads_shape() {
        for n in 2..=4 {
            let emb: Vec<usize> = (3..=n).collect();
            let d = doily(n, &emb).unwrap();
            let ts = two_spreads(&d).unwrap();
            assert_eq!(ts.len(), 6);
            for t in &ts {
                assert_eq!(t.points().len(), 15);
                assert_eq!(t.contexts().len(), 10);
                let neg = t.negative_contexts();
                assert_eq!(neg % 2, 1, "two-spread must have odd negative count");
                let mut per_point = [0usize; 15];
                for ctx in t.contexts() {
                    for &j in &ctx.points {
                        per_point[j] += 1;
                    }
                }
                assert!(per_point.iter().all(|&d| d == 2));
            }
        }
    }

    #[test]
    fn grid_census() {
        let gs = grids();
        assert_eq!(gs.len(), 10);
        for g in &gs {
            assert_eq!(g.points().len(), 9);
            assert_eq!(g.contexts().len(), 6);
            let neg = g.negative_contexts();
            assert!(neg == 1 || neg == 3 || neg == 5, "grid neg = {neg}");
            let mut per_point = [0usize; 9];
            for ctx in g.contexts() {
                assert_eq!(ctx.points.len(), 3);
                for &j in &ctx.points {
                    per_point[j] += 1;
                }
            }
            assert!(per_point.iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn spreads_rejects_non_doily() {
        let g = &grids()[0];
        assert!(matches!(spreads(g), Err(Error::NotADoily(_))));
    }
}
