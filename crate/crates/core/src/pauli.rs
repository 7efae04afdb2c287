//! Encodings between N-qubit Pauli observables and bitvectors of
//! $\mathbb{F}_2^{2N}$, the symplectic form, phase-tracked products,
//! context signs and subspace counting.
//!
//! An observable $G_1 G_2 \cdots G_N$ with $G_j \in \{I,X,Y,Z\}$ maps to the
//! bitvector $(g_1,\dots,g_{2N})$ with $G_j \leftrightarrow (g_j, g_{j+N})$
//! and $I \leftrightarrow (0,0)$, $X \leftrightarrow (0,1)$,
//! $Y \leftrightarrow (1,1)$, $Z \leftrightarrow (1,0)$.
//!
//! Bits are packed into a single `u64` with $g_1$ most significant, so the
//! natural integer order on the packed word is the lexicographic order on
//! bitvectors required by the subspace enumeration.

use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Maximum supported rank (qubit count); 2N bits must fit in a `u64`.
pub const MAX_QUBITS: usize = 32;

/// Symplectic form of two raw bitvectors over `n` qubits.
///
/// Returns $\sum_i x_i y_{N+i} + x_{N+i} y_i \bmod 2$.
#[inline]
pub fn form_bits(x: u64, y: u64, n: usize) -> u8 {
    let mask = low_mask(n);
    let (xz, xx) = (x >> n, x & mask);
    let (yz, yx) = (y >> n, y & mask);
    (((xz & yx).count_ones() + (xx & yz).count_ones()) & 1) as u8
}

/// Standard quadratic form $Q_0(x) = \sum_i x_i x_{N+i} \bmod 2$, which
/// polarizes the symplectic form.
#[inline]
pub fn quadratic_form_bits(x: u64, n: usize) -> u8 {
    (((x >> n) & x & low_mask(n)).count_ones() & 1) as u8
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A nonzero point of the symplectic polar space $\mathcal{W}_N$, i.e. a
/// nontrivial N-qubit Pauli observable up to phase.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    qubits: usize,
    bits: u64,
}

impl Point {
    /// Builds a point from a packed bitvector. The zero vector is rejected.
    pub fn new(bits: u64, qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(qubits));
        }
        if bits == 0 {
            return Err(Error::ZeroPoint);
        }
        if bits > low_mask(2 * qubits) {
            return Err(Error::BitsOutOfRange { bits, qubits });
        }
        Ok(Point { qubits, bits })
    }

    /// Parses an observable string over {I,X,Y,Z}, e.g. `"YX"`.
    pub fn encode(observable: &str) -> Result<Self> {
        let n = observable.chars().count();
        if n == 0 {
            return Err(Error::EmptyObservable);
        }
        if n > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n));
        }
        let mut bits = 0u64;
        for (j, c) in observable.chars().enumerate() {
            let (z, x) = match c {
                'I' => (0, 0),
                'X' => (0, 1),
                'Y' => (1, 1),
                'Z' => (1, 0),
                other => return Err(Error::InvalidCharacter(other)),
            };
            // g_j at position 2N-1-j, g_{N+j} at position N-1-j (0-based j)
            bits |= z << (2 * n - 1 - j);
            bits |= x << (n - 1 - j);
        }
        if bits == 0 {
            return Err(Error::ZeroPoint);
        }
        Ok(Point { qubits: n, bits })
    }

    /// Inverse of [`Point::encode`].
    pub fn decode(&self) -> String {
        let n = self.qubits;
        (0..n)
            .map(|j| {
                let z = (self.bits >> (2 * n - 1 - j)) & 1;
                let x = (self.bits >> (n - 1 - j)) & 1;
                match (z, x) {
                    (0, 0) => 'I',
                    (0, 1) => 'X',
                    (1, 1) => 'Y',
                    _ => 'Z',
                }
            })
            .collect()
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Point({})", self.decode())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.decode())
    }
}

/// Symplectic form of two points over GF(2).
pub fn symplectic_form(x: Point, y: Point) -> Result<u8> {
    if x.qubits != y.qubits {
        return Err(Error::QubitMismatch(x.qubits, y.qubits));
    }
    Ok(form_bits(x.bits, y.bits, x.qubits))
}

/// Two observables commute iff their encodings are orthogonal.
pub fn commutes(x: Point, y: Point) -> Result<bool> {
    Ok(symplectic_form(x, y)? == 0)
}

/// Phase exponents of single-qubit Pauli products: `PHASE[a][b]` is the k in
/// sigma_a . sigma_b = i^k . sigma_{a xor b}, with operators indexed by
/// 2*z + x (0=I, 1=X, 2=Z, 3=Y).
const PHASE: [[u8; 4]; 4] = [
    [0, 0, 0, 0],
    [0, 0, 3, 1], // X.Z = -iY, X.Y = iZ
    [0, 1, 0, 3], // Z.X = iY,  Z.Y = -iX
    [0, 3, 1, 0], // Y.X = -iZ, Y.Z = iX
];

/// A Pauli group element: a (possibly trivial) bitvector together with a
/// global phase $i^k$.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhasedPauli {
    qubits: usize,
    bits: u64,
    phase_exponent: u8,
}

impl PhasedPauli {
    /// The identity observable $\mathcal{I}_N$.
    pub fn identity(qubits: usize) -> Self {
        PhasedPauli {
            qubits,
            bits: 0,
            phase_exponent: 0,
        }
    }

    pub fn from_point(p: Point) -> Self {
        PhasedPauli {
            qubits: p.qubits,
            bits: p.bits,
            phase_exponent: 0,
        }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Exponent k of the accumulated global phase $i^k$.
    #[inline]
    pub fn phase_exponent(&self) -> u8 {
        self.phase_exponent
    }

    /// Product of two phased Paulis; the bitvector parts add (XOR) and the
    /// phase accumulates qubit by qubit.
    pub fn product(self, other: PhasedPauli) -> Result<PhasedPauli> {
        if self.qubits != other.qubits {
            return Err(Error::QubitMismatch(self.qubits, other.qubits));
        }
        Ok(self.product_unchecked(other))
    }

    #[inline]
    pub(crate) fn product_unchecked(self, other: PhasedPauli) -> PhasedPauli {
        let n = self.qubits;
        let mut phase = self.phase_exponent;
        for j in 0..n {
            let a = (((self.bits >> (2 * n - 1 - j)) & 1) << 1) | ((self.bits >> (n - 1 - j)) & 1);
            let b =
                (((other.bits >> (2 * n - 1 - j)) & 1) << 1) | ((other.bits >> (n - 1 - j)) & 1);
            phase += PHASE[a as usize][b as usize];
        }
        PhasedPauli {
            qubits: n,
            bits: self.bits ^ other.bits,
            phase_exponent: (phase + other.phase_exponent) & 3,
        }
    }
}

/// Sign of a context: the product of its observables is $\pm\mathcal{I}_N$.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Sign of a context given as a list of points.
///
/// Validates that the points pairwise commute and multiply to
/// $\pm\mathcal{I}_N$; the result is independent of the ordering.
pub fn context_sign(points: &[Point]) -> Result<Sign> {
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            if !commutes(p, q)? {
                return Err(Error::NonCommuting(p.decode(), q.decode()));
            }
        }
    }
    let n = points.first().map(|p| p.qubits).unwrap_or(1);
    let product = points
        .iter()
        .fold(PhasedPauli::identity(n), |acc, &p| {
            acc.product_unchecked(PhasedPauli::from_point(p))
        });
    if product.bits != 0 {
        return Err(Error::ProductNotIdentity(
            Point::new(product.bits, n).map(|p| p.decode()).unwrap_or_default(),
        ));
    }
    match product.phase_exponent {
        0 => Ok(Sign::Plus),
        2 => Ok(Sign::Minus),
        k => Err(Error::ImaginaryPhase(k)),
    }
}

/// Sign of a context known to be valid by construction (e.g. a full subspace
/// point set emitted by the enumeration). Skips the commutation check.
pub fn context_sign_unchecked(points: &[Point]) -> Sign {
    let n = points.first().map(|p| p.qubits).unwrap_or(1);
    let product = points
        .iter()
        .fold(PhasedPauli::identity(n), |acc, &p| {
            acc.product_unchecked(PhasedPauli::from_point(p))
        });
    debug_assert_eq!(product.bits, 0);
    debug_assert!(product.phase_exponent % 2 == 0);
    if product.phase_exponent == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Parameters of the subspace-count formula for $W(2N-1,q)$.
#[derive(Clone, Copy, Debug)]
pub struct CountParams {
    /// Field order (2 in all quantum uses).
    pub q: u64,
    /// Rank of the polar space.
    pub n: usize,
    /// Projective dimension of the counted subspaces.
    pub k: usize,
}

/// Gaussian binomial coefficient $\binom{n}{k}_q$.
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u8);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 1..=k {
        num *= q.pow((n - k + i) as u32) - &one;
        den *= q.pow(i as u32) - &one;
    }
    num / den
}

/// Number of k-dimensional (projective) totally isotropic subspaces of
/// $W(2N-1,q)$: $\binom{N}{k+1}_q \prod_{i=1}^{k+1} (q^{N+1-i}+1)$.
pub fn subspace_count(params: CountParams) -> Result<BigUint> {
    let CountParams { q, n, k } = params;
    if k >= n {
        return Err(Error::DimensionOutOfRange { n, k });
    }
    let qb = BigUint::from(q);
    let one = BigUint::from(1u8);
    let mut count = gaussian_binomial(q, n, k + 1);
    for i in 1..=(k + 1) {
        count *= qb.pow((n + 1 - i) as u32) + &one;
    }
    Ok(count)
}
