//! Text format for configurations.
//!
//! First line: `qubits=N family=<name>`. Then one line per context: the
//! observable strings of the context followed by `+` or `-` for its sign.
//! The observable set of a parsed file is the sorted union of the context
//! observables, matching the order produced by the generators.

use super::{Configuration, Context};
use crate::error::{Error, Result};
use crate::pauli::{Point, Sign};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

pub fn write_configuration<W: Write>(cfg: &Configuration, mut out: W) -> Result<()> {
    writeln!(out, "qubits={} family={}", cfg.qubits(), cfg.family())?;
    for ctx in cfg.contexts() {
        for &j in &ctx.points {
            write!(out, "{} ", cfg.points()[j])?;
        }
        writeln!(out, "{}", ctx.sign)?;
    }
    Ok(())
}

pub fn read_configuration<R: BufRead>(input: R) -> Result<Configuration> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let mut qubits = None;
    let mut family = None;
    for token in header.split_whitespace() {
        if let Some(v) = token.strip_prefix("qubits=") {
            qubits = Some(
                v.parse::<usize>()
                    .map_err(|_| parse_err(1, "bad qubits value"))?,
            );
        } else if let Some(v) = token.strip_prefix("family=") {
            family = Some(v.to_string());
        } else {
            return Err(parse_err(1, &format!("unexpected header token {token:?}")));
        }
    }
    let qubits = qubits.ok_or_else(|| parse_err(1, "missing qubits= in header"))?;
    let family = family.ok_or_else(|| parse_err(1, "missing family= in header"))?;

    let mut raw_contexts: Vec<(Vec<Point>, Sign)> = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let (sign_tok, obs) = tokens.split_last().unwrap();
        let sign = match *sign_tok {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            other => return Err(parse_err(lineno, &format!("bad sign token {other:?}"))),
        };
        if obs.is_empty() {
            return Err(parse_err(lineno, "context with no observables"));
        }
        let mut pts = Vec::with_capacity(obs.len());
        for o in obs {
            let p = Point::encode(o)
                .map_err(|e| parse_err(lineno, &format!("bad observable {o:?}: {e}")))?;
            if p.qubits() != qubits {
                return Err(parse_err(
                    lineno,
                    &format!("observable {o:?} has {} qubits, expected {qubits}", p.qubits()),
                ));
            }
            pts.push(p);
        }
        raw_contexts.push((pts, sign));
    }

    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    for (pts, _) in &raw_contexts {
        for &p in pts {
            index.insert(p, 0);
        }
    }
    let points: Vec<Point> = index.keys().copied().collect();
    for (i, p) in points.iter().enumerate() {
        *index.get_mut(p).unwrap() = i;
    }
    let contexts = raw_contexts
        .into_iter()
        .map(|(pts, sign)| Context {
            points: pts.iter().map(|p| index[p]).collect(),
            sign,
        })
        .collect();
    Ok(Configuration::new_unchecked(qubits, family, points, contexts))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}
