//! Artifact plumbing: provenance headers, JSON/CSV writers.
//!
//! Every JSON artifact has the shape `{"provenance": …, "result": …}` so a
//! run can always be traced back to the exact tool version, parameters,
//! seed, and topology (by content hash) that produced it. Wall-time fields
//! are the only part of an artifact that varies between identical
//! invocations.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use qsr_core::offline::LinkUtilization;
use qsr_core::online::DecisionSummary;
use qsr_core::Network;

use crate::CliError;

#[derive(Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub topology: String,
    pub topology_sha256: String,
    pub params: serde_json::Value,
}

pub fn provenance(
    command: &str,
    seed: u64,
    topology: &str,
    net: &Network,
    params: serde_json::Value,
) -> Provenance {
    let mut hasher = Sha256::new();
    hasher.update(net.to_canonical_json().as_bytes());
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Provenance {
        tool: "qsr".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        seed,
        topology: topology.to_string(),
        topology_sha256: hex,
        params,
    }
}

/// Uniform JSON artifact wrapper.
#[derive(Serialize)]
pub struct Artifact<T: Serialize> {
    pub provenance: Provenance,
    pub result: T,
}

pub fn json_string(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("artifact serializes")
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    write_text(path, &(json_string(value) + "\n"))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::File(format!("writing {}: {e}", path.display())))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::File(format!("creating {}: {e}", dir.display())))
}

fn csv_into_string<F>(fill: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).expect("in-memory csv write");
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
}

pub fn links_csv(rows: &[LinkUtilization]) -> String {
    csv_into_string(|w| {
        for row in rows {
            w.serialize(row)?;
        }
        Ok(())
    })
}

pub fn decisions_csv(rows: &[DecisionSummary]) -> String {
    csv_into_string(|w| {
        w.write_record([
            "request", "src", "dst", "demand", "accepted", "cost", "z", "sr_path",
        ])?;
        for d in rows {
            w.write_record([
                d.request.to_string(),
                d.src.clone(),
                d.dst.clone(),
                d.demand.to_string(),
                d.accepted.to_string(),
                d.cost.to_string(),
                d.z.to_string(),
                d.sr_path.join("|"),
            ])?;
        }
        Ok(())
    })
}

/// One sweep result row. The CSV schema is fixed:
/// `axis,value,lambda,acceptance_ratio,violation_ratio,wall_time_ms,normalized_time,status`
/// with empty cells for metrics a mode does not produce (or when the row
/// failed). `status` is `ok` or `failed`.
#[derive(Clone, Serialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: f64,
    pub lambda: Option<f64>,
    pub acceptance_ratio: Option<f64>,
    pub violation_ratio: Option<f64>,
    pub wall_time_ms: f64,
    pub normalized_time: Option<f64>,
    pub status: String,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    csv_into_string(|w| {
        for row in rows {
            w.serialize(row)?;
        }
        Ok(())
    })
}
