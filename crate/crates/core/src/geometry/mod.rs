//! Totally isotropic subspaces of $\mathcal{W}_N$ and the derived
//! configurations: perpsets, quadrics, doilies, spreads, two-spreads and
//! Mermin-Peres grids.

mod families;
mod format;
mod subspaces;

pub use families::{doily, grids, perpset, quadric, spreads, two_spreads, QuadricType};
pub use format::{read_configuration, write_configuration};
pub use subspaces::{closure, enumerate_subspaces, par_fold_subspaces, subspaces};

use crate::error::{Error, Result};
use crate::pauli::{context_sign, Point, Sign};
use std::collections::BTreeMap;

/// A totally isotropic subspace of projective dimension `dim`, given by its
/// $2^{dim+1}-1$ points in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    qubits: usize,
    dim: usize,
    points: Vec<Point>,
}

impl Subspace {
    pub(crate) fn from_sorted_points(qubits: usize, dim: usize, points: Vec<Point>) -> Self {
        debug_assert_eq!(points.len(), (1 << (dim + 1)) - 1);
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Subspace {
            qubits,
            dim,
            points,
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn sign(&self) -> Sign {
        crate::pauli::context_sign_unchecked(&self.points)
    }
}

/// A context of a configuration: indices into the point list plus the sign
/// of the observable product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub points: Vec<usize>,
    pub sign: Sign,
}

/// A quantum configuration: a finite set of observables together with a
/// finite set of signed contexts over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    qubits: usize,
    family: String,
    points: Vec<Point>,
    contexts: Vec<Context>,
}

impl Configuration {
    /// Builds a configuration from explicit contexts given as point lists.
    /// The observable set is the sorted union of the context points; signs
    /// are evaluated from the observable products.
    pub fn from_contexts(
        qubits: usize,
        family: impl Into<String>,
        contexts: Vec<Vec<Point>>,
    ) -> Result<Self> {
        let mut index: BTreeMap<Point, usize> = BTreeMap::new();
        for ctx in &contexts {
            for &p in ctx {
                if p.qubits() != qubits {
                    return Err(Error::QubitMismatch(p.qubits(), qubits));
                }
                index.insert(p, 0);
            }
        }
        let points: Vec<Point> = index.keys().copied().collect();
        for (i, p) in points.iter().enumerate() {
            *index.get_mut(p).unwrap() = i;
        }
        let contexts = contexts
            .into_iter()
            .map(|ctx| {
                let sign = context_sign(&ctx)?;
                Ok(Context {
                    points: ctx.iter().map(|p| index[p]).collect(),
                    sign,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration {
            qubits,
            family: family.into(),
            points,
            contexts,
        })
    }

    /// Builds a configuration with an explicit point list (possibly larger
    /// than the union of context points, e.g. a point set with no lines).
    pub fn with_points(
        qubits: usize,
        family: impl Into<String>,
        points: Vec<Point>,
        contexts: Vec<Vec<Point>>,
    ) -> Result<Self> {
        let mut cfg = Configuration::from_contexts(qubits, family, contexts)?;
        let mut all: Vec<Point> = points;
        all.sort();
        all.dedup();
        if all != cfg.points {
            // remap context indices onto the larger point list
            let index: BTreeMap<Point, usize> =
                all.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            for ctx in &mut cfg.contexts {
                for idx in &mut ctx.points {
                    let p = cfg.points[*idx];
                    *idx = *index
                        .get(&p)
                        .ok_or(Error::BadBasis)?;
                }
            }
            cfg.points = all;
        }
        Ok(cfg)
    }

    pub(crate) fn new_unchecked(
        qubits: usize,
        family: String,
        points: Vec<Point>,
        contexts: Vec<Context>,
    ) -> Self {
        Configuration {
            qubits,
            family,
            points,
            contexts,
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    /// Number of negative contexts (the weight of the valuation vector E).
    pub fn negative_contexts(&self) -> usize {
        self.contexts.iter().filter(|c| c.sign.is_negative()).count()
    }

    /// Context point lists as concrete points.
    pub fn context_points(&self, i: usize) -> Vec<Point> {
        self.contexts[i]
            .points
            .iter()
            .map(|&j| self.points[j])
            .collect()
    }

    /// Indices of points that appear in no context.
    pub fn isolated_points(&self) -> Vec<usize> {
        let mut used = vec![false; self.points.len()];
        for ctx in &self.contexts {
            for &j in &ctx.points {
                used[j] = true;
            }
        }
        (0..self.points.len()).filter(|&j| !used[j]).collect()
    }

    /// Removes the given context indices, keeping all points.
    pub fn without_contexts(&self, drop: &[usize], family: impl Into<String>) -> Configuration {
        let contexts = self
            .contexts
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, c)| c.clone())
            .collect();
        Configuration {
            qubits: self.qubits,
            family: family.into(),
            points: self.points.clone(),
            contexts,
        }
    }
}

/// Parameters selecting a configuration family to generate.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    /// All totally isotropic subspaces of projective dimension `k`.
    Subspaces { qubits: usize, k: usize },
    /// Perpset of the anchor point.
    Perpset { qubits: usize, anchor: Point },
    /// Quadric indexed by a (possibly zero) bitvector.
    Quadric { qubits: usize, anchor_bits: u64 },
    /// Identity-padded two-qubit doily.
    Doily {
        qubits: usize,
        embedding: Vec<usize>,
    },
    /// The six two-spreads of an identity-padded doily.
    TwoSpreads {
        qubits: usize,
        embedding: Vec<usize>,
    },
    /// The ten Mermin-Peres grids of the two-qubit space.
    Grids,
}
