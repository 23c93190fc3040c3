//! Truth-table files: one solution bitstring per line, `#` starts a comment,
//! and every bitstring has the same width.

use crate::error::{Error, Result};
use crate::state::BasisState;

use super::{Oracle, SolutionSet};

pub fn parse_truth_table(text: &str) -> Result<Oracle> {
    let mut width: Option<usize> = None;
    let mut solutions = SolutionSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let state: BasisState = line
            .parse()
            .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        match width {
            None => width = Some(state.n_qubits()),
            Some(w) if w != state.n_qubits() => {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "bitstring '{line}' has width {}, expected {w}",
                        state.n_qubits()
                    ),
                ))
            }
            Some(_) => {}
        }
        solutions.insert(state)?;
    }
    let n_vars = width.ok_or_else(|| {
        Error::parse(
            text.lines().count().max(1),
            "truth table lists no bitstrings; width cannot be inferred",
        )
    })?;
    Oracle::from_truth_table(&solutions, n_vars)
}

pub fn to_truth_table(solutions: &SolutionSet) -> String {
    solutions.iter().map(|s| format!("{s}\n")).collect()
}
