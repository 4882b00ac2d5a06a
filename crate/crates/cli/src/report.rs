//! JSON and text rendering for command results. Rationals are serialized
//! as `p/q` strings (plain `p` for integers), weights as coordinate arrays,
//! Weyl elements as reduced words; key order is fixed by insertion.

use gkrs::ratio::{format_rat, Rat};
use gkrs::rootsystem::Weight;
use serde_json::{json, Map, Value};

pub fn rat_value(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn weight_value(w: &Weight) -> Value {
    Value::Array(w.0.iter().map(rat_value).collect())
}

pub fn weights_value<'a>(ws: impl IntoIterator<Item = &'a Weight>) -> Value {
    Value::Array(ws.into_iter().map(weight_value).collect())
}

pub fn word_value(word: &[usize]) -> Value {
    Value::Array(word.iter().map(|&i| json!(i)).collect())
}

/// Ordered JSON object builder.
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new(command: &str) -> Self {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        Obj(m)
    }

    pub fn field(mut self, key: &str, value: Value) -> Self {
        self.0.insert(key.into(), value);
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

/// A finished command result: the JSON document, the plain-text lines, and
/// whether a verification-style command succeeded.
pub struct Report {
    pub json: Value,
    pub text: Vec<String>,
    /// `Some(false)` makes the process exit with status 1.
    pub verified: Option<bool>,
}

impl Report {
    pub fn new(json: Value, text: Vec<String>) -> Self {
        Report {
            json,
            text,
            verified: None,
        }
    }

    pub fn with_verified(mut self, ok: bool) -> Self {
        self.verified = Some(ok);
        self
    }

    pub fn render(&self, json_output: bool) -> String {
        if json_output {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = self.text.join("\n");
            s.push('\n');
            s
        }
    }
}

pub fn weight_text(w: &Weight) -> String {
    w.to_string()
}

pub fn sign_text(sign: i64) -> &'static str {
    if sign >= 0 {
        "+"
    } else {
        "-"
    }
}
