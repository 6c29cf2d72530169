//! Command-line front end: parse, propagate, print, optionally cross-check.
//!
//! Exit codes: `0` done and no emptiness, `1` some domain or relation
//! became empty, `2` usage or parse error, `3` internal invariant violation
//! or oracle mismatch.

use std::path::PathBuf;

use clap::Parser;

use crate::algorithms::{run as run_algorithm, Algorithm, AlgorithmError, Outcome, RunOptions};
use crate::csp::{normalize, Csp, CspError, VariableOrder};
use crate::engine::{EngineConfig, PolicyKind, DEFAULT_STEP_LIMIT};
use crate::format::{parse_csp, render_domains, render_normalized};
use crate::oracle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Reduce a constraint satisfaction problem to a local-consistency closure.
#[derive(Debug, Parser)]
#[command(name = "cprop", version)]
pub struct Args {
    /// hyperarc, ac3, path, pc2, darc, dac, dpath or dpc.
    #[arg(long, short)]
    pub algorithm: Algorithm,
    /// Variable order for directional algorithms, e.g. `x,y,z`.
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<String>>,
    /// Worklist update policy: full, idem, comm or both.
    #[arg(long)]
    pub policy: Option<PolicyKind>,
    /// Print one line per function application on stderr.
    #[arg(long)]
    pub trace: bool,
    /// Compare the result with the brute-force closure.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = DEFAULT_STEP_LIMIT, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub step_limit: usize,
    /// Input file; standard input when absent.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub order: Option<Vec<String>>,
    pub policy: Option<PolicyKind>,
    pub trace: bool,
    pub oracle_check: bool,
    pub step_limit: usize,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        RunConfig {
            algorithm,
            order: None,
            policy: None,
            trace: false,
            oracle_check: false,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

impl From<&Args> for RunConfig {
    fn from(a: &Args) -> Self {
        RunConfig {
            algorithm: a.algorithm,
            order: a.order.clone(),
            policy: a.policy,
            trace: a.trace,
            oracle_check: a.oracle,
            step_limit: a.step_limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn fail(code: i32, message: String) -> Self {
        RunOutput {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn oracle_matches(
    algorithm: Algorithm,
    p: &Csp,
    order: &VariableOrder,
    outcome: &Outcome,
) -> Result<bool, String> {
    let err = |e: oracle::OracleError| e.to_string();
    Ok(match outcome {
        Outcome::Domains(r) => {
            let want = match algorithm {
                Algorithm::Darc | Algorithm::Dac => oracle::dir_arc_closure(p, order).map_err(err)?,
                _ => oracle::arc_closure(p).map_err(err)?,
            };
            want.domains() == r.problem.domains()
        }
        Outcome::Relations(r) => {
            let n = normalize(p).map_err(|e| e.to_string())?;
            let want = match algorithm {
                Algorithm::Dpath | Algorithm::Dpc => oracle::dir_path_closure(&n, order).map_err(err)?,
                _ => oracle::path_closure(&n).map_err(err)?,
            };
            want == r.problem
        }
    })
}

/// Runs one invocation against `input`, returning what would be printed
/// and the exit code.
pub fn run(config: &RunConfig, input: &str) -> RunOutput {
    let p = match parse_csp(input) {
        Ok(p) => p,
        Err(e) => return RunOutput::fail(EXIT_USAGE, format!("parse error at {e}")),
    };
    let order = match (&config.order, config.algorithm.needs_order()) {
        (None, true) => {
            return RunOutput::fail(
                EXIT_USAGE,
                format!("--algorithm {} requires --order <v1,v2,...>", config.algorithm),
            )
        }
        (None, false) => None,
        (Some(names), _) => match VariableOrder::from_names(p.variables(), names) {
            Ok(o) => Some(o),
            Err(e) => return RunOutput::fail(EXIT_USAGE, format!("--order: {e}")),
        },
    };
    let mut stderr = String::new();
    if config.policy.is_some() && !config.algorithm.is_engine_driven() {
        stderr.push_str(&format!(
            "warning: --policy has no effect on {}\n",
            config.algorithm
        ));
    }
    let options = RunOptions {
        policy: config.policy,
        engine: EngineConfig {
            step_limit: config.step_limit,
            ..EngineConfig::default()
        },
        ..RunOptions::default()
    };
    let outcome = match run_algorithm(config.algorithm, &p, order.as_ref(), &options) {
        Ok(o) => o,
        Err(AlgorithmError::Csp(e @ (CspError::Unsupported(_) | CspError::NotAPermutation(_)))) => {
            return RunOutput::fail(EXIT_USAGE, e.to_string())
        }
        Err(e) => return RunOutput::fail(EXIT_INTERNAL, e.to_string()),
    };
    if config.trace {
        stderr.push_str(&outcome.trace().render());
    }
    let stdout = match &outcome {
        Outcome::Domains(r) => render_domains(&r.problem),
        Outcome::Relations(r) => render_normalized(&r.problem),
    };
    let mut code = if outcome.consistent_hint() { EXIT_OK } else { EXIT_EMPTY };
    if config.oracle_check {
        let identity = VariableOrder::identity(p.len());
        let order = order.as_ref().unwrap_or(&identity);
        match oracle_matches(config.algorithm, &p, order, &outcome) {
            Ok(true) => stderr.push_str("oracle: MATCH\n"),
            Ok(false) => {
                stderr.push_str("oracle: MISMATCH\n");
                code = EXIT_INTERNAL;
            }
            Err(e) => {
                stderr.push_str(&format!("oracle: error: {e}\n"));
                code = EXIT_INTERNAL;
            }
        }
    }
    RunOutput { code, stdout, stderr }
}
