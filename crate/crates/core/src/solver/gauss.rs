//! Contextuality decision by Gaussian elimination.

use crate::gf2;
use crate::incidence::IncidenceSystem;

/// Outcome of the consistency check for `A x = E`.
#[derive(Clone, Debug)]
pub enum Consistency {
    /// A noncontextual assignment exists; `solution` solves the system.
    Consistent { solution: Vec<u64> },
    /// The system is inconsistent; `certificate` is a row combination y with
    /// yᵀA = 0 and yᵀE = 1, bit-packed over the contexts.
    Inconsistent { certificate: Vec<u64> },
}

/// Decides contextuality: `true` iff `A x = E` has no solution.
/// Always returns a checkable certificate either way.
pub fn is_contextual(system: &IncidenceSystem) -> (bool, Consistency) {
    if let Some(solution) = system.matrix().solve(system.valuation()) {
        return (false, Consistency::Consistent { solution });
    }
    // Find y with yᵀA = 0 and yᵀE = 1 by solving the transposed system
    // [Aᵀ; Eᵀ] y = (0,...,0,1), which is consistent exactly when Ax=E is not.
    let l = system.contexts();
    let p = system.observables();
    let mut m = system.matrix().transposed();
    let mut e_row = vec![0u64; gf2::words_for(l)];
    e_row.copy_from_slice(system.valuation());
    m.push_row(&e_row);
    let mut rhs = vec![0u64; gf2::words_for(p + 1)];
    gf2::set_bit(&mut rhs, p, true);
    let certificate = m
        .solve(&rhs)
        .expect("dual system is consistent when the primal is not");
    (true, Consistency::Inconsistent { certificate })
}

/// Checks an inconsistency certificate: yᵀA = 0 and yᵀE = 1.
pub fn verify_certificate(system: &IncidenceSystem, certificate: &[u64]) -> bool {
    let mut row_sum = vec![0u64; gf2::words_for(system.observables())];
    let mut e_parity = 0u32;
    for i in 0..system.contexts() {
        if gf2::get_bit(certificate, i) {
            gf2::xor_into(&mut row_sum, system.matrix().row(i));
            if gf2::get_bit(system.valuation(), i) {
                e_parity ^= 1;
            }
        }
    }
    row_sum.iter().all(|&w| w == 0) && e_parity == 1
}
