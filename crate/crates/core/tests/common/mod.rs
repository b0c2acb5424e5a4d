#![allow(dead_code)]

use std::path::PathBuf;

use mcisel::{ContingencyTable, GeneratingClass, VertexSet};
use serde_json::Value;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn reinis() -> ContingencyTable {
    let text = std::fs::read_to_string(fixture("reinis.csv")).unwrap();
    ContingencyTable::parse_counts_csv(&text).unwrap()
}

/// Values from the independent numpy/scipy recomputation (tests/oracle/reinis_oracle.py).
pub fn reference() -> Value {
    let text = std::fs::read_to_string(fixture("reinis_reference.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Letters `A`.. to a factor set.
pub fn set(letters: &str) -> VertexSet {
    letters.bytes().map(|b| (b - b'A') as usize).collect()
}

pub fn model(text: &str, table: &ContingencyTable) -> GeneratingClass {
    GeneratingClass::parse(text, table).unwrap()
}

pub fn edge_name(edge: (usize, usize)) -> String {
    format!("{}{}", (b'A' + edge.0 as u8) as char, (b'A' + edge.1 as u8) as char)
}
