//! DIMACS CNF reading and writing.
//!
//! Variable `i` binds to qubit `i - 1`, i.e. the `i`-th character of a
//! bitstring counted from the left.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::argument("formula needs at least one variable"));
        }
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::argument(format!("clause {} is empty", i + 1)));
            }
            if let Some(lit) = clause
                .iter()
                .find(|l| **l == 0 || l.unsigned_abs() as usize > n_vars)
            {
                return Err(Error::argument(format!(
                    "literal {lit} out of range for {n_vars} variables"
                )));
            }
        }
        Ok(Self { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Clause-by-clause evaluation; `assignment[i]` is the value of variable `i + 1`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.n_vars, "assignment width mismatch");
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF text. Errors carry the 1-based line number.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            // SATLIB end-of-data marker
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let (n_vars, _) =
            header.ok_or_else(|| Error::parse(line_no, "clause before 'p cnf' header"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid literal '{tok}'")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::parse(line_no, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > n_vars {
                    return Err(Error::parse(
                        line_no,
                        format!("literal {lit} exceeds declared {n_vars} variables"),
                    ));
                }
                current.push(lit as i32);
            }
        }
    }

    let (n_vars, n_clauses) = header
        .ok_or_else(|| Error::parse(last_line.max(1), "missing 'p cnf <vars> <clauses>' header"))?;
    if !current.is_empty() {
        // tolerate a final clause without the terminating 0
        clauses.push(current);
    }
    if clauses.len() != n_clauses {
        return Err(Error::parse(
            last_line.max(1),
            format!(
                "header declares {n_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    Ok(CnfFormula { n_vars, clauses })
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", vars, clauses] => {
            let vars: usize = vars
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid variable count '{vars}'")))?;
            let clauses: usize = clauses
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid clause count '{clauses}'")))?;
            if vars == 0 {
                return Err(Error::parse(line_no, "variable count must be positive"));
            }
            if vars > i32::MAX as usize {
                return Err(Error::parse(line_no, "variable count too large"));
            }
            Ok((vars, clauses))
        }
        _ => Err(Error::parse(
            line_no,
            "malformed problem line, expected 'p cnf <vars> <clauses>'",
        )),
    }
}
