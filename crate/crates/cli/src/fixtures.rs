//! Experimental columns of the printed tables, shipped for side-by-side display only.

use anyhow::{Context, Result};
use qcorr::reproduce::TableId;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct Measured {
    pub label: String,
    pub quantity: String,
    #[serde(skip_serializing)]
    pub theory: Option<f64>,
    pub source: String,
    pub value: f64,
    pub err: Option<f64>,
}

fn raw(id: TableId) -> Option<&'static str> {
    match id {
        TableId::NegTab => Some(include_str!("../data/negTab.csv")),
        TableId::ResultTable => Some(include_str!("../data/result-table.csv")),
        TableId::ResultTable1 => Some(include_str!("../data/result-table-1.csv")),
        TableId::TableCh5 => Some(include_str!("../data/table-ch5.csv")),
        TableId::FigFractions | TableId::MvDynamics | TableId::NpaVerdicts => None,
    }
}

/// Empty for tables without a printed experimental column.
pub fn load(id: TableId) -> Result<Vec<Measured>> {
    let Some(text) = raw(id) else {
        return Ok(Vec::new());
    };
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("fixture for {id}"))
}

/// `source=value±err` entries for one row, joined with `;`.
pub fn summary(found: &[&Measured]) -> String {
    found
        .iter()
        .map(|m| match m.err {
            Some(e) => format!("{}={}±{}", m.source, m.value, e),
            None => format!("{}={}", m.source, m.value),
        })
        .collect::<Vec<_>>()
        .join(";")
}
