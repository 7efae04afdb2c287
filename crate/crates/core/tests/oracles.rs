//! Cross-validation of the bit-packed fast paths against independent
//! oracles: dense matrix algebra for signs and commutation, exhaustive
//! assignment enumeration for degrees, and a toy DPLL for CNF encodings.

mod common;

use common::{brute_force_degree, dense_commutes, dense_sign, dpll_sat, XorShift};
use contextuality::geometry::{doily, grids, perpset, subspaces, two_spreads};
use contextuality::gf2::{self, BitMatrix};
use contextuality::satbridge::to_dimacs;
use contextuality::{
    build_incidence, commutes, context_sign, degree_exact, IncidenceSystem, Point, Sign,
    SolveBudget,
};

fn all_points(n: usize) -> Vec<Point> {
    (1..1u64 << (2 * n))
        .map(|bits| Point::new(bits, n).unwrap())
        .collect()
}

#[test]
fn commutation_matches_dense_oracle_exhaustively() {
    for n in 1..=2 {
        let pts = all_points(n);
        for a in &pts {
            for b in &pts {
                assert_eq!(
                    commutes(*a, *b).unwrap(),
                    dense_commutes(a, b),
                    "{} vs {}",
                    a.decode(),
                    b.decode()
                );
            }
        }
    }
}

#[test]
fn commutation_matches_dense_oracle_on_random_three_qubit_pairs() {
    let pts = all_points(3);
    let mut rng = XorShift(0x1234_5678_9abc_def1);
    for _ in 0..1000 {
        let a = &pts[(rng.next_u64() % pts.len() as u64) as usize];
        let b = &pts[(rng.next_u64() % pts.len() as u64) as usize];
        assert_eq!(commutes(*a, *b).unwrap(), dense_commutes(a, b));
    }
}

#[test]
fn all_three_qubit_line_signs_match_dense_oracle() {
    let lines = subspaces(3, 1).unwrap();
    assert_eq!(lines.len(), 315);
    let mut negative = 0;
    for line in &lines {
        let sign = context_sign(line.points()).unwrap();
        let dense = dense_sign(line.points()).expect("line product is +/- identity");
        assert_eq!(sign.as_i8(), dense);
        if sign == Sign::Minus {
            negative += 1;
        }
    }
    assert_eq!(negative, 90);
}

#[test]
fn exact_degrees_match_exhaustive_enumeration() {
    let budget = SolveBudget::default();
    let mut corpus: Vec<IncidenceSystem> = Vec::new();
    let d2 = doily(2, &[]).unwrap();
    corpus.push(build_incidence(&d2));
    for g in grids() {
        corpus.push(build_incidence(&g));
    }
    for t in two_spreads(&d2).unwrap() {
        corpus.push(build_incidence(&t));
    }
    corpus.push(build_incidence(
        &perpset(2, Point::encode("XY").unwrap()).unwrap(),
    ));
    for sys in &corpus {
        assert!(sys.observables() <= 20);
        let exact = degree_exact(sys, &budget);
        assert_eq!(exact.d, brute_force_degree(sys));
        assert_eq!(exact.unsatisfied.len(), exact.d);
    }
}

fn random_system(rng: &mut XorShift, l: usize, p: usize) -> IncidenceSystem {
    let mut a = BitMatrix::zero(l, p);
    let mut e = vec![0u64; gf2::words_for(l)];
    for i in 0..l {
        let mut row = rng.next_u64() % (1 << p);
        if row == 0 {
            row = 1 + rng.next_u64() % ((1 << p) - 1);
        }
        for j in 0..p {
            if row >> j & 1 == 1 {
                a.set(i, j, true);
            }
        }
        if rng.next_u64() & 1 == 1 {
            gf2::set_bit(&mut e, i, true);
        }
    }
    IncidenceSystem::new(a, e)
}

#[test]
fn cnf_models_agree_with_brute_force_threshold_sets() {
    let mut rng = XorShift(0xfeed_beef_cafe_0001);
    for _ in 0..5 {
        let l = 2 + (rng.next_u64() % 7) as usize; // 2..=8
        let p = 3 + (rng.next_u64() % 8) as usize; // 3..=10
        let sys = random_system(&mut rng, l, p);
        for low in 0..=l {
            let enc = to_dimacs(&sys, low, l);
            for x in 0u64..(1 << p) {
                let mut clauses = enc.clauses.clone();
                for j in 0..p {
                    let var = enc.var_map[j] ;
                    clauses.push(vec![if x >> j & 1 == 1 { var } else { -var }]);
                }
                let cnf_sat = dpll_sat(enc.variables, &clauses).is_some();
                let enough = sys.n_match(&[x]).unwrap() >= low;
                assert_eq!(cnf_sat, enough, "l={l} p={p} low={low} x={x:b}");
            }
        }
    }
}

#[test]
fn cnf_doily_thresholds_bracket_the_degree() {
    let sys = build_incidence(&doily(2, &[]).unwrap());

    let enc = to_dimacs(&sys, 12, sys.contexts());
    let model = dpll_sat(enc.variables, &enc.clauses).expect("12 satisfied is reachable");
    let mut x = vec![0u64];
    for j in 0..sys.observables() {
        gf2::set_bit(&mut x, j, model[enc.var_map[j] as usize]);
    }
    assert!(sys.n_match(&x).unwrap() >= 12);

    let enc = to_dimacs(&sys, 13, sys.contexts());
    assert!(
        dpll_sat(enc.variables, &enc.clauses).is_none(),
        "satisfying 13 of 15 doily contexts would contradict degree 3"
    );
}
