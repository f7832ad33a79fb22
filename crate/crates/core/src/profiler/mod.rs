//! Clocks, heterogeneity emulation, timing aggregation and report rendering.

mod clock;
mod report;
mod sweep;
mod timings;

pub use clock::{
    apply_throttle, spin_for, virtual_exchange_stall, ClockKind, ClockMode, CostTable, StartLink, ThrottleConfig, VirtualLink,
};
pub use report::{aggregate, render_paired_table, render_report, Cells, Format, OnlineReport, PartyStats, ReportMeta};
pub use sweep::{sweep, SweepOutcome, SweepRow};
pub use timings::{PartyClock, Step, StepTimings};
