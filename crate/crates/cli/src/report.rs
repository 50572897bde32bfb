use std::time::Instant;

use num_traits::ToPrimitive;
use probrec::check::Verdict;
use probrec::{AnyDist, Prob};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// What every evaluating command prints.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_digest: String,
    pub distribution: Value,
    pub deficit: String,
    pub wall_time_ms: f64,
    pub budget: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<Vec<Approx>>,
}

#[derive(Debug, Serialize)]
pub struct Approx {
    pub key: String,
    pub decimal: String,
}

/// SHA-256 over the input texts, each followed by a NUL.
pub fn digest<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    format!("{:x}", h.finalize())
}

pub fn decimal(p: &Prob, places: usize) -> String {
    format!("{:.*}", places, p.to_f64().unwrap_or(f64::NAN))
}

pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

impl RunReport {
    pub fn new(input_digest: String, d: &AnyDist, budget: Value, timer: &Timer) -> Self {
        let distribution = d.to_json_value();
        let deficit = distribution["deficit"].as_str().unwrap_or_default().to_string();
        RunReport {
            command: std::env::args().collect(),
            input_digest,
            distribution,
            deficit,
            wall_time_ms: timer.ms(),
            budget,
            verdict: None,
            approx: None,
        }
    }

    pub fn with_decimals(mut self, d: &AnyDist, places: Option<usize>) -> Self {
        self.approx = places.map(|n| {
            let mut rows: Vec<Approx> = entries(d)
                .into_iter()
                .map(|(key, p)| Approx { key, decimal: decimal(&p, n) })
                .collect();
            rows.push(Approx {
                key: probrec::check::UNDEFINED.into(),
                decimal: decimal(&(Prob::from_integer(1.into()) - d.mass()), n),
            });
            rows
        });
        self
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Json => outln!("{}", serde_json::to_string_pretty(self).expect("report serializes")),
            Format::Text => out!("{}", self.text()),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let approx = |k: &str| {
            self.approx
                .as_ref()
                .and_then(|a| a.iter().find(|r| r.key == k))
                .map(|r| format!("\t{}", r.decimal))
                .unwrap_or_default()
        };
        if let Some(es) = self.distribution["entries"].as_array() {
            for e in es {
                let k = e["key"].as_str().unwrap_or_default();
                let shown = if self.distribution["keyspace"] == "word" { format!("{k:?}") } else { k.to_string() };
                out += &format!("{shown}\t{}{}\n", e["p"].as_str().unwrap_or_default(), approx(k));
            }
        }
        out += &format!("{}\t{}{}\n", probrec::check::UNDEFINED, self.deficit, approx(probrec::check::UNDEFINED));
        if let Some(v) = &self.verdict {
            out += &format!("verdict\t{}\n", serde_json::to_string(v).expect("verdict serializes"));
        }
        out
    }
}

/// Entries of either key space, keys encoded as in the JSON schema.
pub fn entries(d: &AnyDist) -> Vec<(String, Prob)> {
    use probrec::Key;
    match d {
        AnyDist::Nat(d) => d.iter().map(|(k, p)| (k.encode(), p.clone())).collect(),
        AnyDist::Word(d) => d.iter().map(|(k, p)| (k.encode(), p.clone())).collect(),
    }
}
