//! Trace CSV, snapshot JSONL and run summaries.

use crate::error::{Error, Result};
use crate::flow::TraceRecord;
use crate::geom::Vec2;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const TRACE_HEADER: &str = "t,n_vertices,length,weighted_length,area,r_min,r_max,max_abs_kpsi,int_kpsi2_dspsi,dt";

/// Writes the trace with every float in `{:.16e}`.
pub fn write_trace_csv<W: Write>(mut w: W, trace: &[TraceRecord]) -> std::io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in trace {
        writeln!(
            w,
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t,
            r.n_vertices,
            r.length,
            r.weighted_length,
            r.area,
            r.r_min,
            r.r_max,
            r.max_abs_kpsi,
            r.int_kpsi2_dspsi,
            r.dt
        )?;
    }
    Ok(())
}

pub fn trace_csv(trace: &[TraceRecord]) -> String {
    let mut buf = Vec::new();
    write_trace_csv(&mut buf, trace).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub vertices: Vec<Vec2>,
}

impl Snapshot {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("snapshot serializes")
    }
}

/// Parses JSON lines, skipping blank ones. An input with no snapshot is an
/// error.
pub fn read_snapshots(text: &str) -> Result<Vec<Snapshot>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let s: Snapshot = serde_json::from_str(line)
            .map_err(|e| Error::Parse { path: format!("line {}", i + 1), message: e.to_string() })?;
        out.push(s);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no snapshots in input".into()));
    }
    Ok(out)
}
