// Each integration test target compiles this module separately and uses a
// different subset of the oracles, so unused-code lints are off.
#![allow(dead_code)]

//! Independent oracles used to validate the library: a dense-matrix model
//! of Pauli products over Gaussian integers, an exhaustive degree
//! minimizer, and a toy DPLL SAT solver for checking CNF encodings.

use contextuality::{IncidenceSystem, Point};

/// Gaussian integer a + bi; Pauli matrix entries never leave this ring.
pub type C = (i64, i64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

pub type Matrix = Vec<Vec<C>>;

fn single_qubit(c: char) -> Matrix {
    let z = (0, 0);
    let o = (1, 0);
    match c {
        'I' => vec![vec![o, z], vec![z, o]],
        'X' => vec![vec![z, o], vec![o, z]],
        'Y' => vec![vec![z, (0, -1)], vec![(0, 1), z]],
        'Z' => vec![vec![o, z], vec![z, (-1, 0)]],
        _ => panic!("not a Pauli letter: {c}"),
    }
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.len(), a[0].len());
    let (rb, cb) = (b.len(), b[0].len());
    let mut out = vec![vec![(0, 0); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = cmul(a[i][j], b[k][l]);
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![(0, 0); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = (0, 0);
            for t in 0..k {
                acc = cadd(acc, cmul(a[i][t], b[t][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Dense matrix of an N-qubit Pauli observable (2^N x 2^N).
pub fn pauli_matrix(p: &Point) -> Matrix {
    p.decode()
        .chars()
        .map(single_qubit)
        .reduce(|acc, m| kron(&acc, &m))
        .expect("at least one qubit")
}

fn scalar_of_identity(m: &Matrix) -> Option<C> {
    let s = m[0][0];
    for (i, row) in m.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            let want = if i == j { s } else { (0, 0) };
            if e != want {
                return None;
            }
        }
    }
    Some(s)
}

/// Sign of a context by explicit matrix multiplication: +1 or -1 when the
/// product is plus or minus the identity, `None` otherwise.
pub fn dense_sign(points: &[Point]) -> Option<i8> {
    let product = points
        .iter()
        .map(pauli_matrix)
        .reduce(|acc, m| matmul(&acc, &m))?;
    match scalar_of_identity(&product) {
        Some((1, 0)) => Some(1),
        Some((-1, 0)) => Some(-1),
        _ => None,
    }
}

/// Commutation by explicit matrix multiplication: AB == BA.
pub fn dense_commutes(a: &Point, b: &Point) -> bool {
    let ma = pauli_matrix(a);
    let mb = pauli_matrix(b);
    matmul(&ma, &mb) == matmul(&mb, &ma)
}

/// Exhaustive contextuality degree: minimum violations over all 2^p
/// assignments. Only usable for p <= 25 or so.
pub fn brute_force_degree(system: &IncidenceSystem) -> usize {
    let p = system.observables();
    assert!(p <= 25, "exhaustive oracle limited to small systems");
    let l = system.contexts();
    let mut best = l;
    for mask in 0u64..(1u64 << p) {
        let packed = [mask];
        best = best.min(l - system.n_match(&packed).unwrap());
    }
    best
}

/// Plain DPLL with unit propagation; branches on the lowest-index
/// unassigned variable. Returns a total model when satisfiable.
pub fn dpll_sat(num_vars: usize, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    let mut assign: Vec<Option<bool>> = vec![None; num_vars + 1];
    dpll(&mut assign, clauses).then(|| {
        assign
            .iter()
            .map(|v| v.unwrap_or(false))
            .collect()
    })
}

fn dpll(assign: &mut Vec<Option<bool>>, clauses: &[Vec<i32>]) -> bool {
    // unit propagation to fixpoint
    let mut trail: Vec<usize> = Vec::new();
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut satisfied = false;
            let mut unassigned: Option<i32> = None;
            let mut open = 0;
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                match assign[var] {
                    Some(v) if v == (lit > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some(lit);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => {
                    for &var in &trail {
                        assign[var] = None;
                    }
                    return false;
                }
                (1, Some(lit)) => {
                    let var = lit.unsigned_abs() as usize;
                    assign[var] = Some(lit > 0);
                    trail.push(var);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch_var = (1..assign.len()).find(|&v| assign[v].is_none());
    let result = match branch_var {
        None => true,
        Some(var) => [true, false].iter().any(|&value| {
            assign[var] = Some(value);
            let ok = dpll(assign, clauses);
            if !ok {
                assign[var] = None;
            }
            ok
        }),
    };
    if !result {
        for &var in &trail {
            assign[var] = None;
        }
    }
    result
}

/// Tiny deterministic xorshift generator so oracle tests need no RNG crate.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}
