//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse or validation failure (including an
//! audit whose requested predicates fail), 2 usage errors, 3 enumeration
//! cap exceeded.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::audit::{audit, Predicate};
use crate::envy_algorithms::{ef1m_nonwasteful, two_agent_efxm_charity};
use crate::error::Error;
use crate::io::{
    allocation_value, generate, parse_allocation, parse_instance, serialize_allocation, serialize_instance,
    AllocationDocument, GenParams, IoError,
};
use crate::mms::mms_all;
use crate::mms_algorithms::{n_agent_half, solve_two_agent, three_agent_two_thirds};
use crate::model::{AlgoTrace, Allocation, Instance};
use crate::oracle::{
    best_alpha, exists_efm_nonwasteful, fixture, mnw_integral, FixtureParams, DEFAULT_ORACLE_CAP,
};
use crate::rational::{format_rational, parse_rational, Rational};

/// Version tag on the first trace line.
pub const TRACE_VERSION: &str = "v1";

#[derive(Parser, Debug)]
#[command(name = "subjdiv", version, about = "Fair division with subjective divisibility")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact maximin share of every agent.
    Mms {
        /// Inline JSON, a file path, or `-` for stdin.
        instance: String,
    },
    /// Run an allocation algorithm.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        instance: String,
        #[arg(long)]
        trace: bool,
    },
    /// Check fairness and efficiency of an allocation.
    Audit {
        instance: String,
        allocation: String,
        /// Also report the MMS approximation ratio.
        #[arg(long)]
        alpha: bool,
        /// Exit 1 unless these predicates hold.
        #[arg(long, value_enum, value_delimiter = ',')]
        require: Vec<Check>,
        /// Exit 1 unless the ratio is at least this value.
        #[arg(long, value_name = "P/Q")]
        min_alpha: Option<String>,
    },
    /// Brute-force ground truth.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        instance: String,
        #[arg(long, value_name = "K")]
        cap: Option<u128>,
    },
    /// Random instance.
    Gen {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        goods: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1/2", value_name = "P/Q")]
        div_prob: String,
        #[arg(long, default_value_t = 8)]
        max_value: u64,
    },
    /// Named instance from the literature.
    Fixture {
        name: String,
        #[arg(long, value_name = "P/Q")]
        eps: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Algo {
    Mms2,
    Mms3,
    Mmsn,
    Efxm2,
    Ef1m,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Ef,
    Ef1m,
    Efm,
    Efxm,
    NonWasteful,
}

impl From<Check> for Predicate {
    fn from(c: Check) -> Predicate {
        match c {
            Check::Ef => Predicate::Ef,
            Check::Ef1m => Predicate::Ef1m,
            Check::Efm => Predicate::Efm,
            Check::Efxm => Predicate::Efxm,
            Check::NonWasteful => Predicate::NonWasteful,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OracleKind {
    BestAlpha,
    EfmExists,
    Mnw,
}

/// What a CLI invocation printed and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } => 3,
            Error::Domain(_) | Error::Unsupported(_) | Error::UnknownFixture(_) => 2,
            Error::Precondition(_) | Error::Invariant(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Runs the CLI on `args` (including the program name).
pub fn run(args: &[String], stdin: &mut dyn Read) -> CliOutput {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput { code: 2, stdout: String::new(), stderr: text }
            } else {
                CliOutput { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command, stdin) {
        Ok((code, stdout)) => CliOutput { code, stdout, stderr: String::new() },
        Err(f) => CliOutput { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn read_source(arg: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure { code: 1, message: format!("cannot read stdin: {e}") })?;
        return Ok(text);
    }
    std::fs::read_to_string(arg).map_err(|e| Failure { code: 1, message: format!("cannot read {arg}: {e}") })
}

fn load_instance(arg: &str, stdin: &mut dyn Read) -> Result<Instance, Failure> {
    Ok(parse_instance(&read_source(arg, stdin)?)?)
}

fn parse_rational_arg(text: &str, what: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| usage(format!("{what}: {e}")))
}

fn line(v: &Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("json values serialize"))
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"))
}

fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Result<(i32, String), Failure> {
    match command {
        Command::Mms { instance } => {
            let inst = load_instance(&instance, stdin)?;
            let results = mms_all(&inst)?;
            let agents: Vec<Value> = results
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let partition: Vec<Vec<String>> = r.partition.iter().map(|b| rationals(b)).collect();
                    json!({
                        "name": inst.agent_names()[i],
                        "mms": format_rational(&r.value),
                        "partition": partition,
                    })
                })
                .collect();
            Ok((0, line(&json!({ "agents": agents }))))
        }
        Command::Solve { algo, instance, trace } => {
            let inst = load_instance(&instance, stdin)?;
            let (allocation, steps) = solve(algo, &inst)?;
            let trace = trace.then(|| {
                let mut lines = vec![format!("trace {TRACE_VERSION} {}", algo_name(algo))];
                lines.extend(steps.lines());
                lines
            });
            let doc = AllocationDocument { allocation, trace };
            Ok((0, format!("{}\n", serialize_allocation(&doc))))
        }
        Command::Audit { instance, allocation, alpha, require, min_alpha } => {
            let inst = load_instance(&instance, stdin)?;
            let doc = parse_allocation(&read_source(&allocation, stdin)?, &inst)?;
            let min_alpha = min_alpha.map(|t| parse_rational_arg(&t, "--min-alpha")).transpose()?;
            let mms = if alpha || min_alpha.is_some() {
                Some(mms_all(&inst)?.into_iter().map(|r| r.value).collect::<Vec<_>>())
            } else {
                None
            };
            let report = audit(&inst, &doc.allocation, mms.as_deref())?;
            let mut ok = require.iter().all(|&c| report.holds(c.into()));
            if let (Some(threshold), Some(ratio)) = (&min_alpha, &report.alpha_mms) {
                ok &= ratio.at_least(threshold);
            }
            let value = serde_json::to_value(&report).expect("report serializes");
            Ok((if ok { 0 } else { 1 }, pretty(&value)))
        }
        Command::Oracle { kind, instance, cap } => {
            let inst = load_instance(&instance, stdin)?;
            let cap = cap.unwrap_or(DEFAULT_ORACLE_CAP);
            let value = match kind {
                OracleKind::BestAlpha => {
                    let res = best_alpha(&inst, cap)?;
                    json!({ "alpha": res.alpha.to_string(), "allocation": allocation_value(&res.allocation) })
                }
                OracleKind::EfmExists => {
                    let found = exists_efm_nonwasteful(&inst, cap)?;
                    json!({
                        "exists": found.is_some(),
                        "witness": found.as_ref().map(allocation_value),
                    })
                }
                OracleKind::Mnw => {
                    let res = mnw_integral(&inst, cap)?;
                    json!({
                        "allocation": allocation_value(&res.allocation),
                        "product": format_rational(&res.product),
                        "positive_agents": res.positive_agents,
                        "positive_product": format_rational(&res.positive_product),
                        "integral_only": true,
                    })
                }
            };
            Ok((0, line(&value)))
        }
        Command::Gen { agents, goods, seed, div_prob, max_value } => {
            let div_prob = parse_rational_arg(&div_prob, "--div-prob")?;
            let inst = generate(&GenParams { agents, goods, seed, div_prob, max_value })?;
            Ok((0, format!("{}\n", serialize_instance(&inst))))
        }
        Command::Fixture { name, eps, n } => {
            let eps = eps.map(|t| parse_rational_arg(&t, "--eps")).transpose()?;
            let inst = fixture(&name, &FixtureParams { eps, n })?;
            Ok((0, format!("{}\n", serialize_instance(&inst))))
        }
    }
}

fn algo_name(algo: Algo) -> &'static str {
    match algo {
        Algo::Mms2 => "mms2",
        Algo::Mms3 => "mms3",
        Algo::Mmsn => "mmsn",
        Algo::Efxm2 => "efxm2",
        Algo::Ef1m => "ef1m",
    }
}

fn solve(algo: Algo, inst: &Instance) -> Result<(Allocation, AlgoTrace), Failure> {
    let need = match algo {
        Algo::Mms2 | Algo::Efxm2 => Some(2),
        Algo::Mms3 => Some(3),
        Algo::Mmsn | Algo::Ef1m => None,
    };
    if let Some(k) = need {
        if inst.agents() != k {
            return Err(usage(format!("{} needs {k} agents, got {}", algo_name(algo), inst.agents())));
        }
    }
    let out = match algo {
        Algo::Mms2 => solve_two_agent(inst)?,
        Algo::Mms3 => three_agent_two_thirds(inst)?,
        Algo::Mmsn => n_agent_half(inst)?,
        Algo::Efxm2 => {
            let (res, trace) = two_agent_efxm_charity(inst)?;
            (res.allocation, trace)
        }
        Algo::Ef1m => ef1m_nonwasteful(inst)?,
    };
    Ok(out)
}
