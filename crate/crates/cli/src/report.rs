//! The machine-readable report emitted under `--json`, and small helpers for
//! the aligned human tables.

use serde::Serialize;
use tvcat_core::{AuditReport, Caps, Quantale, VMatrix};

pub const SCHEMA: &str = "tvcat-report/1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub instance: String,
    pub operation: String,
    pub verdict: String,
    pub witnesses: Vec<serde_json::Value>,
    pub caps: CapsOut,
    /// Milliseconds; populated only under `--timing` so that default output
    /// stays byte-identical across runs.
    pub timing_ms: Option<u128>,
    pub data: serde_json::Value,
}

#[derive(Debug, Serialize)]
pub struct CapsOut {
    pub carrier: usize,
    pub finite_v: usize,
    pub injective_b: usize,
    pub phiphi: usize,
    pub presheaf_space: usize,
}

impl From<&Caps> for CapsOut {
    fn from(c: &Caps) -> Self {
        CapsOut {
            carrier: c.carrier,
            finite_v: c.finite_v,
            injective_b: c.injective_b,
            phiphi: c.phiphi,
            presheaf_space: c.presheaf_space,
        }
    }
}

/// Renders a V-matrix as an aligned table with row/column labels; Lawvere
/// values print numerically with the reversed order flagged in the header.
pub fn matrix_table(m: &VMatrix, q: &Quantale) -> String {
    let mut out = String::new();
    if !q.is_finite() {
        out.push_str("quantale: lawvere (order: op; values numeric, join = min)\n");
    }
    let rows = m.src().size();
    let cols = m.dst().size();
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(rows + 1);
    let mut header = vec![String::new()];
    for j in 0..cols {
        header.push(m.dst().label(j).to_string());
    }
    cells.push(header);
    for i in 0..rows {
        let mut row = vec![m.src().label(i).to_string()];
        for j in 0..cols {
            row.push(q.label(m.get(i, j)));
        }
        cells.push(row);
    }
    let widths: Vec<usize> = (0..=cols)
        .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                let pad = widths[j].saturating_sub(cell.chars().count());
                format!("{}{}", cell, " ".repeat(pad))
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Renders an audit report as human text plus JSON witnesses.
pub fn audit_to_json(report: &AuditReport) -> Vec<serde_json::Value> {
    report
        .entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "law": e.law,
                "passed": e.passed,
                "witness": e.witness,
            })
        })
        .collect()
}
