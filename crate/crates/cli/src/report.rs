use std::fmt::Write as _;

use agw_core::{formulas, CodeParams};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsInfo {
    pub q: u64,
    pub l: usize,
    pub lp: usize,
    pub m: usize,
    pub h: usize,
    pub delta: usize,
    pub n: u128,
    pub k: usize,
    pub d: Option<u128>,
    pub mu_prime: usize,
    pub mu: usize,
    pub modulus: Option<Vec<u32>>,
}

impl ParamsInfo {
    pub fn new(p: &CodeParams) -> Self {
        ParamsInfo {
            q: p.q(),
            l: p.rows(),
            lp: p.cols(),
            m: p.m(),
            h: p.level(),
            delta: p.delta(),
            n: p.length(),
            k: p.dimension(),
            d: formulas::min_distance_formula(p).ok(),
            mu_prime: p.mu_prime(),
            mu: p.mu(),
            modulus: p.field().modulus_coefficients(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub kind: String,
    pub r_or_s: u128,
    pub value: u128,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<u16>>>,
}

impl Row {
    pub fn new(kind: &str, r_or_s: u128, value: u128, method: impl Into<String>) -> Self {
        Row {
            kind: kind.into(),
            r_or_s,
            value,
            method: method.into(),
            q: None,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl Check {
    pub fn eq<T: Serialize + PartialEq>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let pass = expected == actual;
        Check {
            name: name.into(),
            expected: serde_json::to_value(expected).unwrap_or(Value::Null),
            actual: serde_json::to_value(actual).unwrap_or(Value::Null),
            pass,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub params: Option<ParamsInfo>,
    pub results: Vec<Row>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn for_params(p: &CodeParams) -> Self {
        Report {
            params: Some(ParamsInfo::new(p)),
            ..Default::default()
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        if self.results.is_empty() && self.checks.is_empty() {
            if let Some(p) = &self.params {
                out.push_str("q,l,lp,m,h,delta,n,k,d\n");
                let d = p.d.map(|d| d.to_string()).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{d}",
                    p.q, p.l, p.lp, p.m, p.h, p.delta, p.n, p.k
                );
            }
        }
        if !self.results.is_empty() {
            out.push_str("kind,r_or_s,value,method,q,witness\n");
            for r in &self.results {
                let q = r.q.map(|q| q.to_string()).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{q},{}",
                    r.kind,
                    r.r_or_s,
                    r.value,
                    csv_field(&r.method),
                    r.witness.as_deref().map(witness_text).unwrap_or_default()
                );
            }
        }
        if !self.checks.is_empty() {
            if !self.results.is_empty() {
                out.push('\n');
            }
            out.push_str("name,expected,actual,pass\n");
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(&c.name),
                    csv_field(&value_text(&c.expected)),
                    csv_field(&value_text(&c.actual)),
                    c.pass
                );
            }
        }
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.params {
            let _ = writeln!(
                out,
                "C^A({}, {}; {}) over GF({}): l' = {}, n = {}, k = {}",
                p.l, p.m, p.h, p.q, p.lp, p.n, p.k
            );
            if self.results.is_empty() && self.checks.is_empty() {
                let d = p.d.map(|d| d.to_string()).unwrap_or_else(|| "?".into());
                let _ = writeln!(out, "delta = {}, d = {d}, mu' = {}, mu = {}", p.delta, p.mu_prime, p.mu);
                if let Some(m) = &p.modulus {
                    let _ = writeln!(out, "modulus coefficients = {m:?}");
                }
            }
        }
        for r in &self.results {
            let label = match r.kind.as_str() {
                "d" => format!("d_{}", r.r_or_s),
                "dual-initial" => format!("d_{}(dual)", r.r_or_s),
                "dual-terminal" => format!("d_{{n-k-{}}}(dual)", r.r_or_s),
                other => format!("{other} {}", r.r_or_s),
            };
            let q = r.q.map(|q| format!(" q={q}")).unwrap_or_default();
            let _ = writeln!(out, "{label} = {}{q}  [{}]", r.value, r.method);
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "    witness: {}", witness_text(w));
            }
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{tag} {}: expected {}, actual {}",
                c.name,
                value_text(&c.expected),
                value_text(&c.actual)
            );
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        }
        out
    }
}

fn witness_text(rows: &[Vec<u16>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
