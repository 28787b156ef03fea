//! Report assembly shared by the subcommands.

use obstruct_core::abelian::FgAbGroup;
use obstruct_core::laurent::{ExtValue, LimitInvariants, Order};
use obstruct_core::{Int, IntMatrix};
use serde_json::{json, Map, Value};

pub const SCHEMA: u32 = 1;

/// How a finished command should exit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done,
    /// The question was left open by the search bounds.
    Inconclusive,
}

pub struct Report {
    pub command: &'static str,
    pub fields: Map<String, Value>,
    pub text: Vec<String>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            fields: Map::new(),
            text: Vec::new(),
            outcome: Outcome::Done,
        }
    }

    pub fn field(&mut self, key: &str, value: Value) {
        self.fields.insert(key.to_string(), value);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn to_json(&self) -> String {
        let mut m = self.fields.clone();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.text.join("\n");
        s.push('\n');
        s
    }
}

/// Exact integer as a JSON number.
pub fn int(i: &Int) -> Value {
    serde_json::from_str(&i.to_string()).expect("integer literal")
}

pub fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(&m.row(i))).collect())
}

pub fn group(g: &FgAbGroup) -> Value {
    ints(g.invariant_factors())
}

pub fn order(o: &Order) -> Value {
    match o {
        Order::Finite(n) => int(n),
        Order::Infinite => json!("infinite"),
    }
}

fn limit(l: &LimitInvariants) -> Value {
    let primes: Vec<Value> = l.p_ranks.iter().map(|(p, r)| json!([int(p), r])).collect();
    json!({ "torsion": ints(&l.torsion), "rank": l.rank, "p_ranks": primes })
}

/// A group as invariant factors; direct limits that are not finitely
/// generated carry their limit invariants instead.
pub fn ext_value(e: &ExtValue) -> Value {
    match e {
        ExtValue::Group(g) => json!({ "invariant_factors": group(g) }),
        ExtValue::Limit(l) => {
            let inv = l.invariants();
            if inv.is_finitely_generated() {
                let mut f = inv.torsion.clone();
                f.extend(std::iter::repeat_n(Int::from(0), inv.rank));
                json!({ "invariant_factors": ints(&f) })
            } else {
                json!({ "limit": limit(&inv) })
            }
        }
    }
}

pub fn matrix_text(m: &IntMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("  ({}x{})", m.rows(), m.cols());
    }
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            let r: Vec<String> = r.iter().map(|c| format!("{c:>w$}")).collect();
            format!("  [{}]", r.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}
