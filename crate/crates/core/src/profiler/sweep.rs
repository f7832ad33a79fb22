use serde::Serialize;

use super::report::OnlineReport;
use crate::error::{domain, Error, Result};

/// One CSV row of a sensitivity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub size: u64,
    pub party0_comm_ms: f64,
    pub party1_comm_ms: f64,
    pub party0_online_ms: f64,
    pub party1_online_ms: f64,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Set when a run failed; `rows` then holds the sizes completed before it.
    pub failure: Option<Error>,
}

impl SweepOutcome {
    pub fn is_partial(&self) -> bool {
        self.failure.is_some()
    }

    /// CSV with header `size,party0_comm_ms,party1_comm_ms,party0_online_ms,party1_online_ms`.
    /// A failed sweep ends with a `# partial: <error>` marker line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(["size", "party0_comm_ms", "party1_comm_ms", "party0_online_ms", "party1_online_ms"])
            .expect("write to Vec");
        for r in &self.rows {
            w.serialize(r).expect("write to Vec");
        }
        let mut s = String::from_utf8(w.into_inner().expect("flush to Vec")).expect("utf-8");
        if let Some(e) = &self.failure {
            s.push_str(&format!("# partial: {e}\n"));
        }
        s
    }
}

/// Runs `run(size)` for each size in ascending order. Stops at the first failure.
pub fn sweep(sizes: &[u64], mut run: impl FnMut(u64) -> Result<OnlineReport>) -> Result<SweepOutcome> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("sweep sizes must be strictly ascending"));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let report = match run(size) {
            Ok(r) => r,
            Err(e) => {
                return Ok(SweepOutcome {
                    rows,
                    failure: Some(e),
                })
            }
        };
        let cell = |p: u8| report.party(p).map(|s| s.cells);
        let (Some(c0), Some(c1)) = (cell(0), cell(1)) else {
            return Ok(SweepOutcome {
                rows,
                failure: Some(domain(format!("report for size {size} lacks a party"))),
            });
        };
        rows.push(SweepRow {
            size,
            party0_comm_ms: c0.communication_ms,
            party1_comm_ms: c1.communication_ms,
            party0_online_ms: c0.online_phase_ms,
            party1_online_ms: c1.online_phase_ms,
        });
    }
    Ok(SweepOutcome { rows, failure: None })
}

#[cfg(test)]
mod tests {
    use super::super::report::{aggregate, ReportMeta};
    use super::super::timings::StepTimings;
    use super::*;
    use crate::sharing::PartyId;

    fn fake(size: u64) -> Result<OnlineReport> {
        let mut t0 = StepTimings::zero(PartyId::P0);
        t0.communication_ms = size as f64;
        t0.online_phase_ms = 2.0 * size as f64;
        let t1 = StepTimings::zero(PartyId::P1);
        aggregate(&[t0, t1], ReportMeta::default())
    }

    #[test]
    fn rows_and_header() {
        let out = sweep(&[64], fake).unwrap();
        let csv = out.to_csv();
        assert_eq!(
            csv,
            "size,party0_comm_ms,party1_comm_ms,party0_online_ms,party1_online_ms\n64,64.0,0.0,128.0,0.0\n"
        );
    }

    #[test]
    fn partial_output_is_flagged() {
        let out = sweep(&[1, 2, 3], |s| if s == 3 { Err(domain("boom")) } else { fake(s) }).unwrap();
        assert!(out.is_partial());
        assert_eq!(out.rows.len(), 2);
        assert!(out.to_csv().ends_with("# partial: domain error: boom\n"));
    }

    #[test]
    fn sizes_must_ascend() {
        assert!(sweep(&[4, 2], fake).is_err());
    }
}
