//! JSON documents and random instance generation.
//!
//! Rationals travel as strings (`"p/q"`, integers or decimals), never as
//! JSON floats. Errors carry a stable code and the JSON path at fault.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::error::{domain, Result};
use crate::model::{validate_allocation, validate_instance, Allocation, Instance, Violation};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IoError {
    MalformedJson(String),
    Schema { path: String, message: String },
    Dimension { path: String, message: String },
    Invariant { path: String, message: String },
}

impl IoError {
    pub fn code(&self) -> &'static str {
        match self {
            IoError::MalformedJson(_) => "malformed-json",
            IoError::Schema { .. } => "schema",
            IoError::Dimension { .. } => "dimension",
            IoError::Invariant { .. } => "invariant",
        }
    }

    pub fn path(&self) -> &str {
        match self {
            IoError::MalformedJson(_) => "$",
            IoError::Schema { path, .. }
            | IoError::Dimension { path, .. }
            | IoError::Invariant { path, .. } => path,
        }
    }
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::MalformedJson(msg) => write!(f, "malformed-json: {msg}"),
            IoError::Schema { path, message }
            | IoError::Dimension { path, message }
            | IoError::Invariant { path, message } => write!(f, "{} at {path}: {message}", self.code()),
        }
    }
}

impl std::error::Error for IoError {}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema { path: path.into(), message: message.into() }
}

fn dimension(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Dimension { path: path.into(), message: message.into() }
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn string(v: &Value, path: &str) -> Result<String, IoError> {
    v.as_str().map(str::to_string).ok_or_else(|| schema(path, "expected a string"))
}

fn rational(v: &Value, path: &str) -> Result<Rational, IoError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(schema(path, "expected a rational string")),
    };
    parse_rational(&text).map_err(|e| schema(path, e.to_string()))
}

fn rationals(v: &Value, path: &str) -> Result<Vec<Rational>, IoError> {
    array(v, path)?.iter().enumerate().map(|(k, x)| rational(x, &format!("{path}[{k}]"))).collect()
}

fn parse_json(text: &str) -> Result<Value, IoError> {
    let v: Value = serde_json::from_str(text).map_err(|e| IoError::MalformedJson(e.to_string()))?;
    if !v.is_object() {
        return Err(schema("$", "expected an object"));
    }
    Ok(v)
}

fn violation_path(v: &Violation) -> String {
    match v {
        Violation::NoAgents => "$.agents".into(),
        Violation::NegativeValue { agent, good } => format!("$.agents[{agent}].values[{good}]"),
        Violation::UnvaluedGood { good } => format!("$.goods[{good}]"),
        Violation::ZeroValuedDivisible { agent, good } => format!("$.agents[{agent}].divisible[{good}]"),
        Violation::ShareOutOfRange { agent, good } => format!("$.shares[{agent}][{good}]"),
        Violation::CharityOutOfRange { good } => format!("$.charity[{good}]"),
        Violation::Overallocated { good, .. } | Violation::Incomplete { good, .. } => {
            format!("$.shares[*][{good}]")
        }
    }
}

fn violation_error(v: &Violation) -> IoError {
    IoError::Invariant { path: violation_path(v), message: v.to_string() }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let root = parse_json(text)?;
    let goods_v = array(field(&root, "goods", "$")?, "$.goods")?;
    let goods = goods_v
        .iter()
        .enumerate()
        .map(|(g, v)| string(v, &format!("$.goods[{g}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let agents_v = array(field(&root, "agents", "$")?, "$.agents")?;
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut divisible = Vec::new();
    for (i, agent) in agents_v.iter().enumerate() {
        let path = format!("$.agents[{i}]");
        if !agent.is_object() {
            return Err(schema(path, "expected an object"));
        }
        names.push(string(field(agent, "name", &path)?, &format!("{path}.name"))?);
        let vpath = format!("{path}.values");
        let row = rationals(field(agent, "values", &path)?, &vpath)?;
        if row.len() != goods.len() {
            return Err(dimension(vpath, format!("{} values for {} goods", row.len(), goods.len())));
        }
        values.push(row);
        let dpath = format!("{path}.divisible");
        let flags = array(field(agent, "divisible", &path)?, &dpath)?
            .iter()
            .enumerate()
            .map(|(g, v)| v.as_bool().ok_or_else(|| schema(format!("{dpath}[{g}]"), "expected a boolean")))
            .collect::<Result<Vec<bool>, _>>()?;
        if flags.len() != goods.len() {
            return Err(dimension(dpath, format!("{} flags for {} goods", flags.len(), goods.len())));
        }
        divisible.push(flags);
    }
    let inst = Instance::from_parts(names, goods, values, divisible)
        .map_err(|e| dimension("$", e.to_string()))?;
    if let Some(v) = validate_instance(&inst).first() {
        return Err(violation_error(v));
    }
    Ok(inst)
}

#[derive(Serialize)]
struct AgentDoc<'a> {
    name: &'a str,
    values: Vec<String>,
    divisible: &'a [bool],
}

#[derive(Serialize)]
struct InstanceDoc<'a> {
    goods: &'a [String],
    agents: Vec<AgentDoc<'a>>,
}

/// Compact one-line JSON.
pub fn serialize_instance(inst: &Instance) -> String {
    let doc = InstanceDoc {
        goods: inst.good_names(),
        agents: (0..inst.agents())
            .map(|i| AgentDoc {
                name: &inst.agent_names()[i],
                values: inst.values(i).iter().map(format_rational).collect(),
                divisible: inst.divisible_row(i),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// An allocation plus the trace lines that produced it, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationDocument {
    pub allocation: Allocation,
    pub trace: Option<Vec<String>>,
}

#[derive(Serialize)]
struct AllocationDoc<'a> {
    shares: Vec<Vec<String>>,
    charity: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a [String]>,
}

fn strings(row: &[Rational]) -> Vec<String> {
    row.iter().map(format_rational).collect()
}

pub fn allocation_value(alloc: &Allocation) -> Value {
    serde_json::to_value(AllocationDoc {
        shares: alloc.shares.iter().map(|r| strings(r)).collect(),
        charity: strings(&alloc.charity),
        trace: None,
    })
    .expect("plain data serializes")
}

pub fn serialize_allocation(doc: &AllocationDocument) -> String {
    let out = AllocationDoc {
        shares: doc.allocation.shares.iter().map(|r| strings(r)).collect(),
        charity: strings(&doc.allocation.charity),
        trace: doc.trace.as_deref(),
    };
    serde_json::to_string(&out).expect("plain data serializes")
}

/// Parses an allocation for `inst`; masses must stay within `[0,1]` and
/// never over-allocate a good, but leftovers are allowed.
pub fn parse_allocation(text: &str, inst: &Instance) -> Result<AllocationDocument, IoError> {
    let root = parse_json(text)?;
    let rows = array(field(&root, "shares", "$")?, "$.shares")?;
    if rows.len() != inst.agents() {
        return Err(dimension("$.shares", format!("{} rows for {} agents", rows.len(), inst.agents())));
    }
    let mut shares = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let path = format!("$.shares[{i}]");
        let row = rationals(row, &path)?;
        if row.len() != inst.goods() {
            return Err(dimension(path, format!("{} entries for {} goods", row.len(), inst.goods())));
        }
        shares.push(row);
    }
    let charity = match root.get("charity") {
        Some(v) => rationals(v, "$.charity")?,
        None => return Err(schema("$", "missing field `charity`")),
    };
    if charity.len() != inst.goods() {
        return Err(dimension("$.charity", format!("{} entries for {} goods", charity.len(), inst.goods())));
    }
    let trace = match root.get("trace") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            array(v, "$.trace")?
                .iter()
                .enumerate()
                .map(|(k, x)| string(x, &format!("$.trace[{k}]")))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let allocation = Allocation { shares, charity };
    let violations = validate_allocation(inst, &allocation, false).map_err(|e| dimension("$", e.to_string()))?;
    if let Some(v) = violations.first() {
        return Err(violation_error(v));
    }
    Ok(AllocationDocument { allocation, trace })
}

/// Parameters of [`generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub agents: usize,
    pub goods: usize,
    pub seed: u64,
    /// Probability that an agent sees a positively valued good as divisible.
    pub div_prob: Rational,
    pub max_value: u64,
}

/// Seeded random instance with integer values in `[0, max_value]`.
pub fn generate(params: &GenParams) -> Result<Instance> {
    if params.agents == 0 || params.goods == 0 {
        return Err(domain("need at least one agent and one good"));
    }
    if params.max_value == 0 {
        return Err(domain("max value must be positive"));
    }
    let p = &params.div_prob;
    if *p < Rational::zero() || *p > Rational::from_integer(1.into()) {
        return Err(domain("divisibility probability must lie in [0,1]"));
    }
    let (Some(num), Some(den)) = (p.numer().to_u64(), p.denom().to_u64()) else {
        return Err(domain("divisibility probability has too large a denominator"));
    };
    let (n, m) = (params.agents, params.goods);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut values = vec![vec![Rational::zero(); m]; n];
    let mut divisible = vec![vec![false; m]; n];
    for g in 0..m {
        let column: Vec<u64> = loop {
            let column: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=params.max_value)).collect();
            if column.iter().any(|&v| v > 0) {
                break column;
            }
        };
        for i in 0..n {
            let flag = rng.gen_range(0..den) < num;
            values[i][g] = Rational::from_integer(column[i].into());
            divisible[i][g] = flag && column[i] > 0;
        }
    }
    Instance::with_default_names(values, divisible)
}
