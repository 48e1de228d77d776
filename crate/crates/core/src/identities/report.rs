use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finmon::{Assignment, FinMonoid};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Satisfied,
    Refuted,
    /// Sampling found nothing; not a proof.
    Inconclusive,
    Confirmed,
    Falsified,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Satisfied => "satisfied",
            Outcome::Refuted => "refuted",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Confirmed => "confirmed",
            Outcome::Falsified => "falsified",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub identity: String,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Wall time, only filled in when timing is requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<u64>,
}

impl ReportRow {
    pub fn new(instance: impl Into<String>, identity: impl Into<String>, verdict: Outcome) -> Self {
        ReportRow {
            instance: instance.into(),
            identity: identity.into(),
            verdict,
            witness: None,
            seed: None,
            samples: None,
            time_ms: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

/// Result of one experiment: the claim being tested, per-instance rows
/// and experiment-specific details.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SeparationReport {
    pub experiment: String,
    pub claim: String,
    /// `Confirmed`, `Falsified` or `Inconclusive`.
    pub status: Outcome,
    pub rows: Vec<ReportRow>,
    pub details: serde_json::Value,
}

const COLUMNS: [&str; 6] = ["instance", "identity", "verdict", "witness", "seed", "time"];

impl SeparationReport {
    fn cells(row: &ReportRow) -> [String; 6] {
        let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        [
            row.instance.clone(),
            row.identity.clone(),
            row.verdict.name().into(),
            opt(row.witness.clone()),
            opt(row.seed.map(|s| s.to_string())),
            opt(row.time_ms.map(|t| format!("{t}ms"))),
        ]
    }

    pub fn to_table(&self) -> String {
        let rows: Vec<[String; 6]> = self.rows.iter().map(Self::cells).collect();
        let mut width = COLUMNS.map(|c| c.chars().count());
        for r in &rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&width)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = format!(
            "{}: {} ({})\n",
            self.experiment,
            self.claim,
            self.status.name()
        );
        out.push_str(&line(&COLUMNS.map(String::from)));
        out.push('\n');
        for r in &rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| std::io::Error::other(e.to_string());
        w.write_record(COLUMNS).map_err(io)?;
        for r in &self.rows {
            w.write_record(Self::cells(r)).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// `x0=a, y=b` with element labels.
pub fn format_assignment(m: &FinMonoid, theta: &Assignment) -> String {
    theta
        .iter()
        .map(|(l, v)| format!("{l}={}", m.label(v)))
        .collect::<Vec<_>>()
        .join(", ")
}
