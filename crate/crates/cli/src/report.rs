use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use resistive_walks::verify::Verdict;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Error => 1,
        }
    }
}

/// One quantity seen three ways.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub closed_form: Option<f64>,
    pub solver_value: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_std_err: Option<f64>,
    pub verdict: Option<Verdict>,
}

impl Row {
    pub fn new(quantity: impl Into<String>) -> Self {
        Row { quantity: quantity.into(), ..Row::default() }
    }

    pub fn closed(mut self, v: f64) -> Self {
        self.closed_form = Some(v);
        self
    }

    pub fn solver(mut self, v: f64) -> Self {
        self.solver_value = Some(v);
        self
    }

    pub fn verdict(mut self, ok: bool) -> Self {
        self.verdict = Some(if ok { Verdict::Pass } else { Verdict::Fail });
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == Some(Verdict::Fail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport<R: Serialize> {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Vec<R>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, Value>,
    pub exit_status: Status,
}

impl<R: Serialize> RunReport<R> {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_owned(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            metadata: BTreeMap::new(),
            exit_status: Status::Pass,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(key.to_owned(), serde_json::to_value(value).expect("input serialises"));
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) {
        self.metadata.insert(key.to_owned(), serde_json::to_value(value).expect("metadata serialises"));
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "# command: {}", self.command)?;
                for (k, v) in &self.inputs {
                    writeln!(out, "# input {k}: {v}")?;
                }
                for (k, v) in &self.metadata {
                    writeln!(out, "# meta {k}: {v}")?;
                }
                {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    for row in &self.results {
                        w.serialize(row)?;
                    }
                    w.flush()?;
                }
                writeln!(out, "# exit_status: {}", serde_json::to_value(self.exit_status)?.as_str().unwrap_or(""))?;
            }
        }
        Ok(())
    }
}
