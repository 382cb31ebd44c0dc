use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::engine::IterationTrace;
use crate::error::Result;

/// One line of the JSON-lines trace log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub support: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

pub fn trace_records(trace: &IterationTrace) -> Vec<TraceRecord> {
    trace
        .cardinalities
        .iter()
        .zip(&trace.residuals)
        .enumerate()
        .map(|(i, (&support, &residual))| TraceRecord {
            iter: i + 1,
            support,
            residual,
        })
        .collect()
}

pub fn write_trace<W: Write>(trace: &IterationTrace, mut w: W) -> Result<()> {
    for rec in trace_records(trace) {
        serde_json::to_writer(&mut w, &rec).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
