//! Report assembly and serialization.
//!
//! Reports serialize to JSON with alphabetically ordered keys (serde_json's
//! default map is a BTreeMap) and shortest-round-trip floats, so identical
//! runs produce byte-identical output. CSV emits a header row plus one row
//! per record; spectrum commands use (index, computed, reference, deviation)
//! records, everything else assertion or residual rows.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    AtMost,
    AtLeast,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::AtMost => "<=",
            Op::AtLeast => ">=",
        }
    }
}

/// One named check: `value op threshold`.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub op: Op,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub results: Value,
    pub assertions: Vec<Assertion>,
    /// Spectrum-style rows for CSV output: (index, computed, reference, deviation).
    pub csv_rows: Vec<(usize, f64, f64, f64)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            params: Map::new(),
            tolerances: Map::new(),
            results: Value::Null,
            assertions: Vec::new(),
            csv_rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    /// Record a check; the threshold has already been scaled by --tol-scale.
    pub fn assert_check(&mut self, name: &str, value: f64, op: Op, threshold: f64) {
        let pass = match op {
            Op::AtMost => value <= threshold,
            Op::AtLeast => value >= threshold,
        };
        self.tolerances
            .insert(name.to_string(), json!(threshold));
        self.assertions.push(Assertion {
            name: name.to_string(),
            value,
            op,
            threshold,
            pass,
        });
    }

    pub fn pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        let assertions: Vec<Value> = self
            .assertions
            .iter()
            .map(|a| {
                json!({
                    "name": a.name,
                    "value": a.value,
                    "op": a.op.symbol(),
                    "threshold": a.threshold,
                    "pass": a.pass,
                })
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "params": self.params,
            "version": env!("CARGO_PKG_VERSION"),
            "tolerances": self.tolerances,
            "results": self.results,
            "assertions": assertions,
            "pass": self.pass(),
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.csv_rows.is_empty() {
            out.push_str("index,computed,reference,deviation\n");
            for &(i, c, r, d) in &self.csv_rows {
                out.push_str(&format!("{i},{c},{r},{d}\n"));
            }
        } else {
            out.push_str("name,value,op,threshold,pass\n");
            for a in &self.assertions {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    a.name,
                    a.value,
                    a.op.symbol(),
                    a.threshold,
                    a.pass
                ));
            }
        }
        out
    }
}
