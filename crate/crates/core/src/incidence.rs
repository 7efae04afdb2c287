//! Linear-system view of a configuration: the incidence matrix A over GF(2)
//! and the valuation vector E, plus validation and summary statistics.

use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::gf2::{self, BitMatrix};
use crate::pauli::{commutes, context_sign, Sign};
use std::io::{BufRead, Write};

/// Bit-packed system `A x = E`: one row per context, one column per
/// observable, `E_i = 1` for negative contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSystem {
    a: BitMatrix,
    e: Vec<u64>,
}

impl IncidenceSystem {
    pub fn new(a: BitMatrix, e: Vec<u64>) -> Self {
        debug_assert_eq!(e.len(), gf2::words_for(a.rows()));
        IncidenceSystem { a, e }
    }

    /// Number of contexts (rows).
    pub fn contexts(&self) -> usize {
        self.a.rows()
    }

    /// Number of observables (columns).
    pub fn observables(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.a
    }

    pub fn valuation(&self) -> &[u64] {
        &self.e
    }

    pub fn negative_contexts(&self) -> usize {
        gf2::weight(&self.e)
    }

    /// Number of contexts satisfied by the assignment `x` (bit-packed over
    /// the observables): rows i with `(Ax)_i = E_i`.
    pub fn n_match(&self, x: &[u64]) -> Result<usize> {
        if x.len() != gf2::words_for(self.observables()) {
            return Err(Error::AssignmentLength(
                x.len() * 64,
                self.observables(),
            ));
        }
        let mut ax = self.a.mul_vec(x);
        gf2::xor_into(&mut ax, &self.e);
        Ok(self.contexts() - gf2::weight(&ax))
    }

    /// Context indices unsatisfied by `x`: rows where `(Ax)_i != E_i`.
    pub fn unsatisfied_contexts(&self, x: &[u64]) -> Result<Vec<usize>> {
        if x.len() != gf2::words_for(self.observables()) {
            return Err(Error::AssignmentLength(
                x.len() * 64,
                self.observables(),
            ));
        }
        let mut ax = self.a.mul_vec(x);
        gf2::xor_into(&mut ax, &self.e);
        Ok((0..self.contexts())
            .filter(|&i| gf2::get_bit(&ax, i))
            .collect())
    }

    /// Writes `A` and `E` as plain text: a `l p` header, then one line per
    /// context with the p row bits, a space and the E bit.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.contexts(), self.observables())?;
        for i in 0..self.contexts() {
            let row: String = (0..self.observables())
                .map(|j| if self.a.get(i, j) { '1' } else { '0' })
                .collect();
            let e = if gf2::get_bit(&self.e, i) { '1' } else { '0' };
            writeln!(out, "{row} {e}")?;
        }
        Ok(())
    }

    /// Parses the [`write_text`](Self::write_text) format.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "empty input".into(),
            })??;
        let mut parts = header.split_whitespace();
        let (l, p) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(p), None) => (
                l.parse::<usize>().map_err(|_| bad_header())?,
                p.parse::<usize>().map_err(|_| bad_header())?,
            ),
            _ => return Err(bad_header()),
        };
        let mut a = BitMatrix::zero(l, p);
        let mut e = vec![0u64; gf2::words_for(l)];
        for i in 0..l {
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: i + 2,
                message: "missing matrix row".into(),
            })??;
            let mut toks = line.split_whitespace();
            let (row, eb) = match (toks.next(), toks.next(), toks.next()) {
                (Some(r), Some(e), None) => (r, e),
                _ => {
                    return Err(Error::Parse {
                        line: i + 2,
                        message: "expected row bits and an E bit".into(),
                    })
                }
            };
            if row.len() != p {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("row has {} bits, expected {p}", row.len()),
                });
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => a.set(i, j, true),
                    _ => {
                        return Err(Error::Parse {
                            line: i + 2,
                            message: format!("bad bit {c:?}"),
                        })
                    }
                }
            }
            match eb {
                "0" => {}
                "1" => gf2::set_bit(&mut e, i, true),
                _ => {
                    return Err(Error::Parse {
                        line: i + 2,
                        message: format!("bad E bit {eb:?}"),
                    })
                }
            }
        }
        Ok(IncidenceSystem { a, e })
    }
}

fn bad_header() -> Error {
    Error::Parse {
        line: 1,
        message: "expected header `l p`".into(),
    }
}

/// Builds the incidence system of a validated configuration. Column order
/// follows the configuration's point order, row order its context order.
pub fn build_incidence(cfg: &Configuration) -> IncidenceSystem {
    let l = cfg.contexts().len();
    let p = cfg.points().len();
    let mut a = BitMatrix::zero(l, p);
    let mut e = vec![0u64; gf2::words_for(l)];
    for (i, ctx) in cfg.contexts().iter().enumerate() {
        for &j in &ctx.points {
            a.set(i, j, true);
        }
        if ctx.sign == Sign::Minus {
            gf2::set_bit(&mut e, i, true);
        }
    }
    IncidenceSystem::new(a, e)
}

/// A structural defect found in a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Two observables of the context anticommute.
    NonCommuting {
        context: usize,
        first: String,
        second: String,
    },
    /// The context's points do not XOR to zero, so its sign is undefined.
    SignUndefined { context: usize, product: String },
    /// The stored sign differs from the evaluated product sign.
    SignMismatch { context: usize, expected: Sign },
    /// The point belongs to no context.
    IsolatedPoint { point: usize },
}

/// Exhaustively checks the configuration conditions: pairwise commuting
/// contexts with well-defined, correctly stored signs. Violations are data,
/// not errors.
pub fn validate(cfg: &Configuration) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, ctx) in cfg.contexts().iter().enumerate() {
        let pts = cfg.context_points(i);
        let mut commuting = true;
        for (a, &pa) in pts.iter().enumerate() {
            for &pb in &pts[a + 1..] {
                if !commutes(pa, pb).unwrap_or(false) {
                    commuting = false;
                    out.push(Violation::NonCommuting {
                        context: i,
                        first: pa.decode(),
                        second: pb.decode(),
                    });
                }
            }
        }
        let product_bits = pts.iter().fold(0u64, |acc, p| acc ^ p.bits());
        if product_bits != 0 {
            out.push(Violation::SignUndefined {
                context: i,
                product: crate::pauli::Point::new(product_bits, cfg.qubits())
                    .expect("nonzero product")
                    .decode(),
            });
        } else if commuting {
            if let Ok(sign) = context_sign(&pts) {
                if sign != ctx.sign {
                    out.push(Violation::SignMismatch {
                        context: i,
                        expected: sign,
                    });
                }
            }
        }
    }
    for point in cfg.isolated_points() {
        out.push(Violation::IsolatedPoint { point });
    }
    out
}

/// Summary statistics of an incidence system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfigStats {
    pub contexts: usize,
    pub observables: usize,
    pub negative: usize,
    pub positive: usize,
    pub rank: usize,
}

pub fn stats(system: &IncidenceSystem) -> ConfigStats {
    let negative = system.negative_contexts();
    ConfigStats {
        contexts: system.contexts(),
        observables: system.observables(),
        negative,
        positive: system.contexts() - negative,
        rank: system.matrix().rank(),
    }
}
