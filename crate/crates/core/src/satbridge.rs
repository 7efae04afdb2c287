//! Bridge to external SAT solvers.
//!
//! A threshold query "satisfy at least `low` and at most `high` of the `l`
//! XOR constraints" is expressed either as boolean-circuit text (the
//! `BC1.1 ASSIGN[low,high](...)` grammar) or as DIMACS CNF: every context
//! XOR is Tseitin-chained into an indicator variable and a totalizer encodes
//! the cardinality band over the indicators. CNF instances can be handed to
//! any solver that reads a DIMACS file argument and prints SAT-competition
//! `s`/`v` output.

use crate::error::{Error, Result};
use crate::gf2;
use crate::incidence::IncidenceSystem;
use crate::solver::ThresholdOracle;
use std::io::Write;
use std::process::Command;

/// A band-constrained satisfaction problem over the XOR rows of an
/// incidence system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorThresholdProblem {
    pub system: IncidenceSystem,
    /// Minimum number of contexts to satisfy.
    pub low: usize,
    /// Maximum number of contexts to satisfy.
    pub high: usize,
}

impl XorThresholdProblem {
    pub fn new(system: IncidenceSystem, low: usize, high: usize) -> Self {
        XorThresholdProblem { system, low, high }
    }

    pub fn to_bc_text(&self) -> String {
        to_bc_text(&self.system, self.low, self.high)
    }

    pub fn to_dimacs(&self) -> DimacsEncoding {
        to_dimacs(&self.system, self.low, self.high)
    }
}

/// A solver model projected back onto the original observables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverModel {
    /// Truth value per observable, bit-packed.
    pub assignment: Vec<u64>,
    /// Number of contexts the assignment satisfies.
    pub satisfied_count: usize,
}

/// Renders the boolean-circuit text form: header `BC1.1`, an
/// `ASSIGN[low,high](` clause with one XOR constraint per context
/// (`== F` for positive contexts, `== T` for negative ones), closed by `);`.
pub fn to_bc_text(system: &IncidenceSystem, low: usize, high: usize) -> String {
    let l = system.contexts();
    let mut out = String::from("BC1.1\n");
    out.push_str(&format!("ASSIGN[{low},{high}](\n"));
    for i in 0..l {
        let terms: Vec<String> = (0..system.observables())
            .filter(|&j| system.matrix().get(i, j))
            .map(|j| format!("v{}", j + 1))
            .collect();
        debug_assert!(!terms.is_empty(), "context without observables");
        let target = if gf2::get_bit(system.valuation(), i) {
            'T'
        } else {
            'F'
        };
        let sep = if i + 1 < l { "," } else { "" };
        out.push_str(&format!("{} == {target}{sep}\n", terms.join(" ^ ")));
    }
    out.push_str(");\n");
    out
}

/// Parses [`to_bc_text`] output back into a problem. The variable count is
/// the largest index mentioned.
pub fn parse_bc_text(text: &str) -> Result<XorThresholdProblem> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut rest = text.trim_start();
    rest = rest
        .strip_prefix("BC1.1")
        .ok_or_else(|| parse_err(1, "expected header `BC1.1`".into()))?
        .trim_start();
    rest = rest
        .strip_prefix("ASSIGN[")
        .ok_or_else(|| parse_err(2, "expected `ASSIGN[low,high](`".into()))?;
    let close = rest
        .find(']')
        .ok_or_else(|| parse_err(2, "unterminated `[low,high]`".into()))?;
    let mut bounds = rest[..close].split(',');
    let (low, high) = match (bounds.next(), bounds.next(), bounds.next()) {
        (Some(a), Some(b), None) => (
            a.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(2, format!("bad lower bound {a:?}")))?,
            b.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(2, format!("bad upper bound {b:?}")))?,
        ),
        _ => return Err(parse_err(2, "expected two bounds".into())),
    };
    rest = rest[close + 1..].trim_start();
    rest = rest
        .strip_prefix('(')
        .ok_or_else(|| parse_err(2, "expected `(` after bounds".into()))?;
    let end = rest
        .find(");")
        .ok_or_else(|| parse_err(2, "missing closing `);`".into()))?;
    let body = &rest[..end];

    let mut rows: Vec<(Vec<usize>, bool)> = Vec::new();
    let mut max_var = 0usize;
    for (k, constraint) in body.split(',').enumerate() {
        let constraint = constraint.trim();
        let line = k + 3; // constraints start on the third emitted line
        if constraint.is_empty() {
            return Err(parse_err(line, "empty constraint".into()));
        }
        let (lhs, rhs) = constraint
            .split_once("==")
            .ok_or_else(|| parse_err(line, format!("missing `==` in {constraint:?}")))?;
        let target = match rhs.trim() {
            "F" => false,
            "T" => true,
            other => return Err(parse_err(line, format!("bad target {other:?}"))),
        };
        let mut vars = Vec::new();
        for term in lhs.split('^') {
            let term = term.trim();
            let idx = term
                .strip_prefix('v')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| parse_err(line, format!("bad variable {term:?}")))?;
            vars.push(idx - 1);
            max_var = max_var.max(idx);
        }
        rows.push((vars, target));
    }

    let l = rows.len();
    let mut a = gf2::BitMatrix::zero(l, max_var);
    let mut e = vec![0u64; gf2::words_for(l)];
    for (i, (vars, target)) in rows.into_iter().enumerate() {
        for j in vars {
            a.set(i, j, true);
        }
        if target {
            gf2::set_bit(&mut e, i, true);
        }
    }
    Ok(XorThresholdProblem::new(IncidenceSystem::new(a, e), low, high))
}

/// A DIMACS CNF instance together with its variable mapping.
#[derive(Clone, Debug)]
pub struct DimacsEncoding {
    /// Complete DIMACS text (`p cnf` header, mapping comments, clauses).
    pub cnf: String,
    /// CNF variable of each original observable (1-based DIMACS indices).
    pub var_map: Vec<i32>,
    /// CNF indicator variable per context ("this context is satisfied").
    pub indicator_map: Vec<i32>,
    pub variables: usize,
    pub clauses: Vec<Vec<i32>>,
}

/// Encodes the threshold problem as CNF. Each context XOR is chained through
/// auxiliary variables into an indicator `s_i` equivalent to "context `i`
/// holds"; a totalizer over the indicators enforces `low <= sum s_i <= high`.
pub fn to_dimacs(system: &IncidenceSystem, low: usize, high: usize) -> DimacsEncoding {
    let l = system.contexts();
    let p = system.observables();
    let mut next_var = p as i32;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let var_map: Vec<i32> = (1..=p as i32).collect();

    let mut fresh = |clauses: &mut Vec<Vec<i32>>| {
        let _ = clauses;
        next_var += 1;
        next_var
    };

    let mut indicator_map = Vec::with_capacity(l);
    for i in 0..l {
        let members: Vec<i32> = (0..p)
            .filter(|&j| system.matrix().get(i, j))
            .map(|j| j as i32 + 1)
            .collect();
        let target = gf2::get_bit(system.valuation(), i);
        let s = match members.split_first() {
            None => {
                // empty XOR is 0: the indicator is the constant `!target`
                let s = fresh(&mut clauses);
                clauses.push(vec![if target { -s } else { s }]);
                s
            }
            Some((&first, rest)) => {
                // chain the parity into `cur`
                let mut cur = first;
                for &v in rest {
                    let t = fresh(&mut clauses);
                    // t <-> cur xor v
                    clauses.push(vec![-cur, -v, -t]);
                    clauses.push(vec![cur, v, -t]);
                    clauses.push(vec![cur, -v, t]);
                    clauses.push(vec![-cur, v, t]);
                    cur = t;
                }
                // s <-> (parity == target)
                let lit = if target { cur } else { -cur };
                let s = fresh(&mut clauses);
                clauses.push(vec![-s, lit]);
                clauses.push(vec![s, -lit]);
                s
            }
        };
        indicator_map.push(s);
    }

    if low > l {
        clauses.push(Vec::new()); // unsatisfiable band
    } else if low > 0 || high < l {
        let outputs = totalizer(&indicator_map, &mut next_var, &mut clauses);
        if low > 0 {
            clauses.push(vec![outputs[low - 1]]);
        }
        if high < l {
            clauses.push(vec![-outputs[high]]);
        }
    }

    let variables = next_var as usize;
    let mut cnf = String::new();
    cnf.push_str(&format!("p cnf {} {}\n", variables, clauses.len()));
    for (j, &v) in var_map.iter().enumerate() {
        cnf.push_str(&format!("c vmap {} {v}\n", j + 1));
    }
    for (i, &s) in indicator_map.iter().enumerate() {
        cnf.push_str(&format!("c smap {} {s}\n", i + 1));
    }
    for clause in &clauses {
        for &lit in clause {
            cnf.push_str(&format!("{lit} "));
        }
        cnf.push_str("0\n");
    }
    DimacsEncoding {
        cnf,
        var_map,
        indicator_map,
        variables,
        clauses,
    }
}

/// Totalizer over `lits`: returns sorted outputs `o[0..n]` where `o[k]` is
/// true iff at least `k+1` inputs are true (both implication directions are
/// clausified).
fn totalizer(lits: &[i32], next_var: &mut i32, clauses: &mut Vec<Vec<i32>>) -> Vec<i32> {
    if lits.len() == 1 {
        return vec![lits[0]];
    }
    let (l, r) = lits.split_at(lits.len() / 2);
    let left = totalizer(l, next_var, clauses);
    let right = totalizer(r, next_var, clauses);
    let n1 = left.len();
    let n2 = right.len();
    let outputs: Vec<i32> = (0..n1 + n2)
        .map(|_| {
            *next_var += 1;
            *next_var
        })
        .collect();
    for a in 0..=n1 {
        for b in 0..=n2 {
            // a true on the left and b on the right force at least a+b
            if a + b >= 1 {
                let mut clause = Vec::with_capacity(3);
                if a > 0 {
                    clause.push(-left[a - 1]);
                }
                if b > 0 {
                    clause.push(-right[b - 1]);
                }
                clause.push(outputs[a + b - 1]);
                clauses.push(clause);
            }
            // at most a on the left and b on the right cap the sum at a+b
            if a + b < n1 + n2 {
                let mut clause = Vec::with_capacity(3);
                if a < n1 {
                    clause.push(left[a]);
                }
                if b < n2 {
                    clause.push(right[b]);
                }
                clause.push(-outputs[a + b]);
                clauses.push(clause);
            }
        }
    }
    outputs
}

/// Outcome of an external solver run over the CNF variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawOutcome {
    /// Truth value per CNF variable (index 0 unused).
    Sat(Vec<bool>),
    Unsat,
    /// Timeout, crash or unparseable output.
    Unknown,
}

/// Writes the CNF to a temporary file, runs `command` with the file path
/// appended, and parses SAT-competition `s`/`v` output.
pub fn run_external(cnf: &str, command: &[String]) -> Result<RawOutcome> {
    let (program, args) = command
        .split_first()
        .ok_or_else(|| Error::Solver("empty solver command".into()))?;
    let mut file = tempfile::Builder::new()
        .prefix("threshold-")
        .suffix(".cnf")
        .tempfile()?;
    file.write_all(cnf.as_bytes())?;
    file.flush()?;
    let output = Command::new(program)
        .args(args)
        .arg(file.path())
        .output()
        .map_err(|e| Error::Solver(format!("cannot run {program:?}: {e}")))?;
    let stdout = String::from_utf8_lossy(&output.stdout);

    let mut status: Option<bool> = None;
    let mut model: Vec<i64> = Vec::new();
    for line in stdout.lines() {
        if let Some(s) = line.strip_prefix("s ") {
            match s.trim() {
                "SATISFIABLE" => status = Some(true),
                "UNSATISFIABLE" => status = Some(false),
                _ => {}
            }
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                match tok.parse::<i64>() {
                    Ok(lit) => model.push(lit),
                    Err(_) => return Ok(RawOutcome::Unknown),
                }
            }
        }
    }
    match status {
        Some(false) => Ok(RawOutcome::Unsat),
        Some(true) => {
            let max_var = model.iter().map(|l| l.unsigned_abs() as usize).max();
            match max_var {
                None => Ok(RawOutcome::Unknown),
                Some(max_var) => {
                    let mut values = vec![false; max_var + 1];
                    for &lit in &model {
                        if lit > 0 {
                            values[lit as usize] = true;
                        }
                    }
                    Ok(RawOutcome::Sat(values))
                }
            }
        }
        None => Ok(RawOutcome::Unknown),
    }
}

/// Projects a CNF model onto the original observables and counts the
/// contexts it satisfies.
pub fn project_model(
    system: &IncidenceSystem,
    encoding: &DimacsEncoding,
    values: &[bool],
) -> Result<SolverModel> {
    let p = system.observables();
    let mut assignment = vec![0u64; gf2::words_for(p)];
    for (j, &v) in encoding.var_map.iter().enumerate() {
        let set = values.get(v as usize).copied().unwrap_or(false);
        gf2::set_bit(&mut assignment, j, set);
    }
    let satisfied_count = system.n_match(&assignment)?;
    Ok(SolverModel {
        assignment,
        satisfied_count,
    })
}

/// Threshold oracle backed by an external SAT solver process.
pub struct ExternalSatOracle {
    pub command: Vec<String>,
}

impl ExternalSatOracle {
    pub fn new(command: Vec<String>) -> Self {
        ExternalSatOracle { command }
    }

    /// Reads the solver command from the `CONTEXT_SAT_SOLVER` environment
    /// variable (whitespace-tokenized).
    pub fn from_env() -> Option<Self> {
        let raw = std::env::var("CONTEXT_SAT_SOLVER").ok()?;
        let command: Vec<String> = raw.split_whitespace().map(str::to_owned).collect();
        (!command.is_empty()).then_some(ExternalSatOracle { command })
    }
}

impl ThresholdOracle for ExternalSatOracle {
    fn solve(
        &mut self,
        system: &IncidenceSystem,
        low: usize,
        high: usize,
    ) -> Result<Option<Vec<u64>>> {
        let encoding = to_dimacs(system, low, high);
        match run_external(&encoding.cnf, &self.command)? {
            RawOutcome::Sat(values) => {
                let model = project_model(system, &encoding, &values)?;
                if model.satisfied_count < low || model.satisfied_count > high {
                    return Err(Error::Solver(format!(
                        "model satisfies {} contexts, outside [{low},{high}]",
                        model.satisfied_count
                    )));
                }
                Ok(Some(model.assignment))
            }
            RawOutcome::Unsat => Ok(None),
            RawOutcome::Unknown => Err(Error::BudgetExhausted),
        }
    }
}
