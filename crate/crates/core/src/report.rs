//! Machine-readable output.
//!
//! JSON is written by hand so that key order and number formatting are fixed:
//! floating-point fields carry 12 significant digits, and identical reports
//! serialize to identical bytes. CSV numbers carry 9 significant digits.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::enumeration::{EnumerationReport, RoundRecord, Termination};
use crate::error::{Error, Result};
use crate::interferometer::InterferenceOutcome;
use crate::oracle::{Oracle, SolutionSet};
use crate::robustness::{GroverShots, SweepResult};
use crate::state::BasisState;

pub const JSON_DIGITS: usize = 12;
pub const CSV_DIGITS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// `x` with `digits` significant digits; positional unless the exponent is
/// below −6 or at least `digits`.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if exp < -6 || exp >= digits as i32 {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn json_f(x: f64) -> String {
    format_sig(x, JSON_DIGITS)
}

fn json_state(m: &Option<BasisState>) -> String {
    match m {
        Some(s) => format!("\"{s}\""),
        None => "null".to_string(),
    }
}

fn json_found(found: &SolutionSet) -> String {
    let items: Vec<String> = found.iter().map(|s| format!("\"{s}\"")).collect();
    format!("[{}]", items.join(", "))
}

fn json_header(out: &mut String, algorithm: &str, n_qubits: usize, seed: u64) {
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"algorithm\": \"{algorithm}\",").unwrap();
    writeln!(out, "  \"n_qubits\": {n_qubits},").unwrap();
    writeln!(out, "  \"seed\": {seed},").unwrap();
}

fn json_array<T>(out: &mut String, key: &str, items: &[T], row: impl Fn(&T) -> String) {
    if items.is_empty() {
        writeln!(out, "  \"{key}\": [],").unwrap();
        return;
    }
    writeln!(out, "  \"{key}\": [").unwrap();
    for (i, item) in items.iter().enumerate() {
        let sep = if i + 1 == items.len() { "" } else { "," };
        writeln!(out, "    {}{sep}", row(item)).unwrap();
    }
    writeln!(out, "  ],").unwrap();
}

pub const ENUMERATION_ALGORITHM: &str = "interference-enumeration";

pub fn enumeration_json(report: &EnumerationReport) -> String {
    let mut out = String::new();
    json_header(
        &mut out,
        ENUMERATION_ALGORITHM,
        report.n_qubits,
        report.seed,
    );
    writeln!(out, "  \"found\": {},", json_found(&report.found)).unwrap();
    json_array(&mut out, "rounds", &report.rounds, |r| {
        format!(
            "{{\"round\": {}, \"success_probability\": {}, \"post_selected\": {}, \"measured\": {}, \"verified\": {}}}",
            r.round,
            json_f(r.success_probability),
            r.post_selected,
            json_state(&r.measured),
            r.verified
        )
    });
    writeln!(
        out,
        "  \"termination\": \"{}\"",
        report.termination.as_str()
    )
    .unwrap();
    out.push_str("}\n");
    out
}

pub fn enumeration_csv(report: &EnumerationReport) -> String {
    let mut out = String::from("round,success_probability,post_selected,measured,verified\n");
    for r in &report.rounds {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.round,
            format_sig(r.success_probability, CSV_DIGITS),
            r.post_selected,
            r.measured.map(|m| m.to_string()).unwrap_or_default(),
            r.verified
        )
        .unwrap();
    }
    out
}

#[derive(Deserialize)]
struct RoundJson {
    round: u64,
    success_probability: f64,
    post_selected: bool,
    measured: Option<String>,
    verified: bool,
}

#[derive(Deserialize)]
struct EnumerationJson {
    algorithm: String,
    n_qubits: usize,
    seed: u64,
    found: Vec<String>,
    rounds: Vec<RoundJson>,
    termination: String,
}

/// Reads back the output of [`enumeration_json`]. Probabilities come back
/// rounded to 12 significant digits.
pub fn parse_enumeration_json(text: &str) -> Result<EnumerationReport> {
    let raw: EnumerationJson =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    if raw.algorithm != ENUMERATION_ALGORITHM {
        return Err(Error::argument(format!(
            "unexpected algorithm '{}'",
            raw.algorithm
        )));
    }
    let parse_state = |s: &str| -> Result<BasisState> {
        let b: BasisState = s.parse()?;
        if b.n_qubits() != raw.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: raw.n_qubits,
                found: b.n_qubits(),
            });
        }
        Ok(b)
    };
    let found = SolutionSet::from_states(
        raw.found
            .iter()
            .map(|s| parse_state(s))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let rounds = raw
        .rounds
        .iter()
        .map(|r| {
            Ok(RoundRecord {
                round: r.round,
                success_probability: r.success_probability,
                post_selected: r.post_selected,
                measured: r.measured.as_deref().map(parse_state).transpose()?,
                verified: r.verified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumerationReport {
        n_qubits: raw.n_qubits,
        seed: raw.seed,
        found,
        rounds,
        termination: raw.termination.parse::<Termination>()?,
    })
}

/// Repeated single interference runs on one oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecords {
    pub n_qubits: usize,
    pub seed: u64,
    pub outcomes: Vec<InterferenceOutcome>,
}

pub fn run_json(records: &RunRecords) -> String {
    let mut out = String::new();
    json_header(&mut out, "interference-run", records.n_qubits, records.seed);
    let numbered: Vec<(usize, &InterferenceOutcome)> =
        records.outcomes.iter().enumerate().collect();
    json_array(&mut out, "shots", &numbered, |(i, o)| {
        format!(
            "{{\"shot\": {}, \"success_probability\": {}, \"post_selected\": {}, \"measured\": {}}}",
            i + 1,
            json_f(o.success_probability),
            o.post_selected,
            json_state(&o.measured)
        )
    });
    let post = records.outcomes.iter().filter(|o| o.post_selected).count();
    writeln!(out, "  \"post_selected\": {post}").unwrap();
    out.push_str("}\n");
    out
}

pub fn run_csv(records: &RunRecords) -> String {
    let mut out = String::from("shot,success_probability,post_selected,measured\n");
    for (i, o) in records.outcomes.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            format_sig(o.success_probability, CSV_DIGITS),
            o.post_selected,
            o.measured.map(|m| m.to_string()).unwrap_or_default()
        )
        .unwrap();
    }
    out
}

pub const SWEEP_CSV_HEADER: &str = "model,magnitude,trials,post_rate,hit_rate";

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = format!("{SWEEP_CSV_HEADER}\n");
    for p in &result.points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.noise.model(),
            format_sig(p.noise.magnitude(), CSV_DIGITS),
            p.trials,
            format_sig(p.post_rate(), CSV_DIGITS),
            format_sig(p.hit_rate(), CSV_DIGITS)
        )
        .unwrap();
    }
    out
}

pub fn sweep_json(result: &SweepResult, n_qubits: usize) -> String {
    let mut out = String::new();
    json_header(&mut out, "noise-sweep", n_qubits, result.seed);
    writeln!(out, "  \"insertion\": \"{}\",", result.insertion).unwrap();
    json_array(&mut out, "points", &result.points, |p| {
        format!(
            "{{\"model\": \"{}\", \"magnitude\": {}, \"trials\": {}, \"post_rate\": {}, \"hit_rate\": {}}}",
            p.noise.model(),
            json_f(p.noise.magnitude()),
            p.trials,
            json_f(p.post_rate()),
            json_f(p.hit_rate())
        )
    });
    out.truncate(out.trim_end_matches(",\n").len());
    out.push_str("\n}\n");
    out
}

pub fn grover_json(shots: &GroverShots, n_qubits: usize, seed: u64) -> String {
    let mut out = String::new();
    json_header(&mut out, "grover", n_qubits, seed);
    writeln!(out, "  \"iterations\": {},", shots.iterations).unwrap();
    writeln!(
        out,
        "  \"success_probability\": {},",
        json_f(shots.success_probability)
    )
    .unwrap();
    writeln!(
        out,
        "  \"simulated_probability\": {},",
        json_f(shots.simulated_probability)
    )
    .unwrap();
    writeln!(out, "  \"shots\": {},", shots.histogram.total_shots).unwrap();
    writeln!(out, "  \"hits\": {},", shots.hits).unwrap();
    let counts: Vec<String> = shots
        .histogram
        .counts
        .iter()
        .map(|(s, c)| format!("\"{s}\": {c}"))
        .collect();
    writeln!(out, "  \"counts\": {{{}}}", counts.join(", ")).unwrap();
    out.push_str("}\n");
    out
}

pub fn grover_csv(shots: &GroverShots, o: &Oracle) -> String {
    let mut out = String::from("state,count,solution\n");
    for (s, c) in &shots.histogram.counts {
        writeln!(out, "{s},{c},{}", !o.flips_index(s.index())).unwrap();
    }
    out
}
