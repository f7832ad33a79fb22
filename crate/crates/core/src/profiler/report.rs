use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::timings::StepTimings;
use crate::circuit::World;
use crate::error::{domain, Error, Result};

/// The five timing cells of one party.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Cells {
    pub local_gates_ms: f64,
    pub interactive_gate_ms: f64,
    pub layer_finish_ms: f64,
    pub communication_ms: f64,
    pub online_phase_ms: f64,
}

impl Cells {
    fn from_timings(t: &StepTimings) -> Self {
        Self {
            local_gates_ms: t.local_gates_ms,
            interactive_gate_ms: t.interactive_gate_ms,
            layer_finish_ms: t.layer_finish_ms,
            communication_ms: t.communication_ms,
            online_phase_ms: t.online_phase_ms,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [
            self.local_gates_ms,
            self.interactive_gate_ms,
            self.layer_finish_ms,
            self.communication_ms,
            self.online_phase_ms,
        ]
    }

    fn from_array(v: [f64; 5]) -> Self {
        Self {
            local_gates_ms: v[0],
            interactive_gate_ms: v[1],
            layer_finish_ms: v[2],
            communication_ms: v[3],
            online_phase_ms: v[4],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub app: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub world: Option<World>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub throttles: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clock: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub latency_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub reps: usize,
    /// Reconstructed outputs, one entry per repetition.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartyStats {
    pub party: u8,
    pub cells: Cells,
    pub stddev: Cells,
}

/// Mean and sample standard deviation of every cell, per party.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineReport {
    pub meta: ReportMeta,
    pub parties: Vec<PartyStats>,
}

impl OnlineReport {
    pub fn party(&self, id: u8) -> Option<&PartyStats> {
        self.parties.iter().find(|p| p.party == id)
    }

    fn first_row_label(&self) -> &'static str {
        match self.meta.world {
            Some(World::Boolean) => "Boolean local gates(ms)",
            _ => "Arithmetic local gates(ms)",
        }
    }
}

/// Groups per-party timings from any number of runs and reduces them cellwise.
pub fn aggregate(runs: &[StepTimings], mut meta: ReportMeta) -> Result<OnlineReport> {
    if runs.is_empty() {
        return Err(domain("cannot aggregate zero runs"));
    }
    let mut ids: Vec<u8> = runs.iter().map(|t| t.party.index() as u8).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut parties = Vec::with_capacity(ids.len());
    let mut reps = 0;
    for id in ids {
        let rows: Vec<[f64; 5]> = runs
            .iter()
            .filter(|t| t.party.index() as u8 == id)
            .map(|t| Cells::from_timings(t).as_array())
            .collect();
        reps = reps.max(rows.len());
        let n = rows.len() as f64;
        let mut mean = [0.0; 5];
        let mut sd = [0.0; 5];
        for k in 0..5 {
            mean[k] = rows.iter().map(|r| r[k]).sum::<f64>() / n;
            if rows.len() > 1 {
                let ss: f64 = rows.iter().map(|r| (r[k] - mean[k]).powi(2)).sum();
                sd[k] = (ss / (n - 1.0)).sqrt();
            }
        }
        parties.push(PartyStats {
            party: id,
            cells: Cells::from_array(mean),
            stddev: Cells::from_array(sd),
        });
    }
    meta.reps = reps;
    Ok(OnlineReport { meta, parties })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Usage(format!("unknown report format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

const ROW_LABELS: [&str; 4] = [
    "Interactive gate(ms)",
    "Layer finish(ms)",
    "Communication(ms)",
    "Online phase(ms)",
];

pub fn render_report(r: &OnlineReport, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(render_columns(&title(r), r.first_row_label(), &columns(r, ""))),
        Format::Json => Ok(serde_json::to_string_pretty(r).map_err(|e| domain(e.to_string()))? + "\n"),
        Format::Csv => render_csv(r),
    }
}

/// One table with small/large column pairs, like the homogeneous-node tables.
pub fn render_paired_table(small: &OnlineReport, large: &OnlineReport) -> String {
    let mut cols = columns(small, "Small ");
    cols.extend(columns(large, "Large "));
    let head = format!("{} | small={} large={}", title_app(small), size_str(small), size_str(large));
    render_columns(&head, small.first_row_label(), &cols)
}

fn size_str(r: &OnlineReport) -> String {
    r.meta.size.map_or_else(|| "?".into(), |s| s.to_string())
}

fn title_app(r: &OnlineReport) -> String {
    let app = match r.meta.app.as_deref() {
        Some("innerproduct") => "Inner Product",
        Some("millionaire") => "Millionaire Probability",
        Some(other) => other,
        None => "Online phase",
    };
    let mut s = app.to_string();
    if let Some(v) = &r.meta.variant {
        write!(s, " ({v})").unwrap();
    }
    s
}

fn title(r: &OnlineReport) -> String {
    let m = &r.meta;
    let mut s = title_app(r);
    if let Some(n) = m.size {
        write!(s, " | size={n}").unwrap();
    }
    if let Some(l) = m.l {
        write!(s, " l={l}").unwrap();
    }
    write!(s, " | reps={}", m.reps).unwrap();
    if let Some(c) = &m.clock {
        write!(s, " | clock={c}").unwrap();
        if c == "virtual" {
            if let Some(lat) = m.latency_ms {
                write!(s, " latency={lat}ms").unwrap();
            }
        }
    }
    if !m.throttles.is_empty() {
        let t: Vec<String> = m.throttles.iter().map(|f| f.to_string()).collect();
        write!(s, " | throttle={}", t.join(",")).unwrap();
    }
    if let Some(seed) = m.seed {
        write!(s, " | seed={seed}").unwrap();
    }
    s
}

fn columns(r: &OnlineReport, prefix: &str) -> Vec<(String, [f64; 5])> {
    r.parties
        .iter()
        .map(|p| (format!("{prefix}P{}", p.party), p.cells.as_array()))
        .collect()
}

fn render_columns(title: &str, first_label: &str, cols: &[(String, [f64; 5])]) -> String {
    let labels: Vec<&str> = std::iter::once(first_label).chain(ROW_LABELS).collect();
    let lw = labels.iter().map(|l| l.len()).max().unwrap_or(0);
    let cells: Vec<Vec<String>> = cols
        .iter()
        .map(|(_, v)| v.iter().map(|x| format!("{x:.3}")).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .zip(&cells)
        .map(|((h, _), c)| c.iter().map(String::len).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    writeln!(out, "{title}").unwrap();
    let mut header = format!("{:lw$}", "");
    for ((h, _), w) in cols.iter().zip(&widths) {
        write!(header, " | {h:>w$}").unwrap();
    }
    writeln!(out, "{header}").unwrap();
    let mut rule = "-".repeat(lw);
    for w in &widths {
        write!(rule, "-+-{}", "-".repeat(*w)).unwrap();
    }
    writeln!(out, "{rule}").unwrap();
    for (row, label) in labels.iter().enumerate() {
        let mut line = format!("{label:lw$}");
        for (c, w) in cells.iter().zip(&widths) {
            write!(line, " | {:>w$}", c[row]).unwrap();
        }
        writeln!(out, "{line}").unwrap();
    }
    out
}

#[derive(Serialize)]
struct CsvRow<'a> {
    party: u8,
    local_gates_ms: f64,
    interactive_gate_ms: f64,
    layer_finish_ms: f64,
    communication_ms: f64,
    online_phase_ms: f64,
    local_gates_sd: f64,
    interactive_gate_sd: f64,
    layer_finish_sd: f64,
    communication_sd: f64,
    online_phase_sd: f64,
    app: &'a str,
    size: String,
    l: String,
    variant: &'a str,
    clock: &'a str,
    latency_ms: String,
    throttle: String,
    seed: String,
    reps: usize,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(r: &OnlineReport) -> Result<String> {
    let m = &r.meta;
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &r.parties {
        let throttle = m
            .throttles
            .get(usize::from(p.party))
            .or(m.throttles.first())
            .map(|f| f.to_string())
            .unwrap_or_default();
        w.serialize(CsvRow {
            party: p.party,
            local_gates_ms: p.cells.local_gates_ms,
            interactive_gate_ms: p.cells.interactive_gate_ms,
            layer_finish_ms: p.cells.layer_finish_ms,
            communication_ms: p.cells.communication_ms,
            online_phase_ms: p.cells.online_phase_ms,
            local_gates_sd: p.stddev.local_gates_ms,
            interactive_gate_sd: p.stddev.interactive_gate_ms,
            layer_finish_sd: p.stddev.layer_finish_ms,
            communication_sd: p.stddev.communication_ms,
            online_phase_sd: p.stddev.online_phase_ms,
            app: m.app.as_deref().unwrap_or(""),
            size: opt(m.size),
            l: opt(m.l),
            variant: m.variant.as_deref().unwrap_or(""),
            clock: m.clock.as_deref().unwrap_or(""),
            latency_ms: opt(m.latency_ms),
            throttle,
            seed: opt(m.seed),
            reps: m.reps,
        })
        .map_err(|e| domain(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharing::PartyId;

    fn t(party: PartyId, v: f64) -> StepTimings {
        StepTimings {
            party,
            local_gates_ms: v,
            interactive_gate_ms: v,
            layer_finish_ms: v,
            communication_ms: v,
            online_phase_ms: 4.0 * v,
        }
    }

    #[test]
    fn aggregate_single_and_constant() {
        let r = aggregate(&[t(PartyId::P0, 2.5)], ReportMeta::default()).unwrap();
        assert_eq!(r.meta.reps, 1);
        assert_eq!(r.parties[0].cells.communication_ms, 2.5);
        assert_eq!(r.parties[0].stddev, Cells::default());

        let runs = vec![t(PartyId::P1, 7.0); 5];
        let r = aggregate(&runs, ReportMeta::default()).unwrap();
        assert_eq!(r.parties[0].party, 1);
        assert_eq!(r.parties[0].cells.online_phase_ms, 28.0);
        assert_eq!(r.parties[0].stddev.online_phase_ms, 0.0);
    }

    #[test]
    fn aggregate_textbook_sample_sd() {
        let runs: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&v| t(PartyId::P0, v)).collect();
        let r = aggregate(&runs, ReportMeta::default()).unwrap();
        assert_eq!(r.parties[0].cells.local_gates_ms, 2.0);
        assert!((r.parties[0].stddev.local_gates_ms - 1.0).abs() < 1e-12);
        assert!(aggregate(&[], ReportMeta::default()).is_err());
    }

    #[test]
    fn row_order_and_labels() {
        let runs = [t(PartyId::P0, 1.0), t(PartyId::P1, 2.0)];
        let mut meta = ReportMeta {
            world: Some(World::Arithmetic),
            ..Default::default()
        };
        let r = aggregate(&runs, meta.clone()).unwrap();
        let table = render_report(&r, Format::Table).unwrap();
        let firsts: Vec<&str> = table.lines().skip(3).map(|l| l.split(" |").next().unwrap().trim_end()).collect();
        assert_eq!(
            firsts,
            [
                "Arithmetic local gates(ms)",
                "Interactive gate(ms)",
                "Layer finish(ms)",
                "Communication(ms)",
                "Online phase(ms)"
            ]
        );
        meta.world = Some(World::Boolean);
        let r = aggregate(&runs, meta).unwrap();
        let table = render_report(&r, Format::Table).unwrap();
        assert!(table.lines().nth(3).unwrap().starts_with("Boolean local gates(ms)"));
    }

    #[test]
    fn empty_meta_json_round_trip() {
        let r = aggregate(&[t(PartyId::P0, 0.1), t(PartyId::P1, 1.0 / 3.0)], ReportMeta::default()).unwrap();
        let js = render_report(&r, Format::Json).unwrap();
        let parsed: OnlineReport = serde_json::from_str(&js).unwrap();
        assert_eq!(parsed, r);
        let again: OnlineReport = serde_json::from_str(&render_report(&parsed, Format::Json).unwrap()).unwrap();
        assert_eq!(again, parsed);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert!(v["parties"][1]["cells"]["communication_ms"].is_number());
        assert!(v["parties"][1]["stddev"].is_object());
    }

    #[test]
    fn csv_full_precision() {
        let r = aggregate(&[t(PartyId::P0, 1.0 / 3.0)], ReportMeta::default()).unwrap();
        let csv = render_report(&r, Format::Csv).unwrap();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("party,local_gates_ms,interactive_gate_ms"));
        assert!(lines.next().unwrap().starts_with("0,0.3333333333333333,"));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("xml".parse::<Format>(), Err(Error::Usage(_))));
    }
}
