//! On-disk formats: instance JSON, witness sidecars and result CSV rows.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hamdec_core::{build_union, is_second_decomposition, HamCycle, Instance, Side, TwoFactorPair};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub directed: bool,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// generator that produced the file, `None` for hand-written instances
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, generator: Option<String>, seed: Option<u64>) -> Self {
        InstanceFile {
            n: inst.graph.n(),
            directed: inst.graph.is_directed(),
            x: inst.x.order().to_vec(),
            y: inst.y.order().to_vec(),
            generator,
            seed,
        }
    }

    /// Builds the union, checking both arrays are permutations of 1..n that start at 1.
    pub fn to_instance(&self) -> Result<Instance, CliError> {
        for (name, order) in [("x", &self.x), ("y", &self.y)] {
            if order.len() != self.n {
                return Err(CliError::Usage(format!(
                    "{name} has {} vertices, expected n = {}",
                    order.len(),
                    self.n
                )));
            }
            if order.first() != Some(&1) {
                return Err(CliError::Usage(format!("{name} must start with vertex 1")));
            }
        }
        let x = HamCycle::new(self.x.clone(), self.directed)?;
        let y = HamCycle::new(self.y.clone(), self.directed)?;
        Ok(Instance::from_cycles(x, y)?)
    }
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serialises");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub z: Vec<usize>,
    pub w: Vec<usize>,
}

/// Reads a witness and re-checks it against the instance: both cycles must
/// be Hamiltonian, partition the union and differ from `{x, y}`.
pub fn read_witness(path: &Path, instance: &InstanceFile) -> Result<WitnessFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let witness: WitnessFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    validate_witness(&witness, instance)?;
    Ok(witness)
}

pub fn validate_witness(witness: &WitnessFile, instance: &InstanceFile) -> Result<(), CliError> {
    let inst = instance.to_instance()?;
    let z = HamCycle::new(witness.z.clone(), instance.directed)?;
    let w = HamCycle::new(witness.w.clone(), instance.directed)?;
    let zw = build_union(&z, &w)?;
    let mut z_edges: Vec<_> = z.edge_multiset();
    let mut union_edges: Vec<_> = inst.graph.edge_ids().map(|e| inst.graph.key(e)).collect();
    let mut witness_edges: Vec<_> = zw.edge_ids().map(|e| zw.key(e)).collect();
    union_edges.sort();
    witness_edges.sort();
    if union_edges != witness_edges {
        return Err(CliError::Usage(
            "witness does not partition the union multigraph".into(),
        ));
    }
    // assign each z edge to one matching copy in the instance's union
    let mut sides = vec![Side::W; inst.graph.num_edges()];
    for e in inst.graph.edge_ids() {
        if let Some(i) = z_edges.iter().position(|&k| k == inst.graph.key(e)) {
            z_edges.swap_remove(i);
            sides[e.index()] = Side::Z;
        }
    }
    let pair = TwoFactorPair::new(&inst.graph, sides)?;
    if !is_second_decomposition(&pair, &inst.x, &inst.y) {
        return Err(CliError::Usage(
            "witness is not a second Hamiltonian decomposition".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance_id: String,
    pub generator: String,
    pub n: usize,
    pub directed: bool,
    pub algorithm: String,
    pub seed: u64,
    pub verdict: String,
    pub iterations: usize,
    pub cuts_added: usize,
    pub time_ms: u64,
    pub multi_edges: usize,
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(HEADER).expect("in-memory write");
    }
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

const HEADER: [&str; 11] = [
    "instance_id",
    "generator",
    "n",
    "directed",
    "algorithm",
    "seed",
    "verdict",
    "iterations",
    "cuts_added",
    "time_ms",
    "multi_edges",
];

/// Appends rows, writing the header only when the file is new or empty.
pub fn append_rows(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut text = rows_to_csv(rows);
    if !fresh {
        text = text
            .split_once('\n')
            .map(|(_, rest)| rest.to_string())
            .unwrap_or_default();
    }
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| CliError::io(path, e))
}

pub fn read_rows(path: &Path) -> Result<Vec<ResultRow>, CliError> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    r.deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// `<dir>/<instance_id>.<algorithm>.witness.json`
pub fn witness_path(dir: &Path, instance_id: &str, algorithm: &str) -> PathBuf {
    dir.join(format!("{instance_id}.{algorithm}.witness.json"))
}
