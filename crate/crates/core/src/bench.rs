//! Command-line orchestration: argument parsing, experiment and sweep drivers.

use std::fs::File;
use std::io::{BufReader, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::Parser;

use crate::circuit::{assign_layers, eval_plaintext, Circuit, MillionaireVariant};
use crate::error::{Error, Result};
use crate::preprocessing::{deal_for, read_pool, write_pool, TriplePool};
use crate::profiler::{
    aggregate, render_report, sweep, ClockKind, ClockMode, Format, OnlineReport, PartyClock, ReportMeta, StepTimings,
    SweepOutcome, ThrottleConfig,
};
use crate::ring::RingSpec;
use crate::runtime::{run_loopback, LoopbackConfig, Session, SessionOptions, TcpTransport, Transcript, Transport};
use crate::sharing::PartyId;
use crate::workload::{App, Workload};

/// Ripple comparators at or above this many bits draw a round-count warning.
pub const RIPPLE_WARN_BITS: usize = 4096;

const CONNECT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Parser)]
#[command(name = "mpc-bench", about = "Two-party online-phase benchmark with per-step timing")]
pub struct Cli {
    /// 0 (connects), 1 (listens) or loopback (both parties in-process)
    #[arg(long)]
    role: String,
    #[arg(long, default_value = "innerproduct")]
    app: String,
    /// Element count (innerproduct) or bit length (millionaire)
    #[arg(long)]
    size: Option<usize>,
    /// Ring bit length l (innerproduct) or comparator width (millionaire)
    #[arg(long)]
    bitlen: Option<usize>,
    #[arg(long, default_value = "tree")]
    variant: String,
    #[arg(long, value_name = "HOST:PORT")]
    connect: Option<String>,
    #[arg(long, value_name = "PORT")]
    listen: Option<u16>,
    /// F for one TCP party, F0,F1 in loopback
    #[arg(long)]
    throttle: Option<String>,
    #[arg(long, default_value = "real")]
    clock: String,
    #[arg(long)]
    latency_ms: Option<f64>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "table")]
    format: String,
    /// LO:HI, sizes 2^LO..=2^HI
    #[arg(long, value_name = "LO:HI")]
    sweep: Option<String>,
    #[arg(long)]
    time_input_sharing: bool,
    #[arg(long, value_name = "PATH")]
    dump_circuit: Option<PathBuf>,
    /// Directory holding p0.trip and p1.trip
    #[arg(long, value_name = "DIR")]
    triples: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Party(PartyId),
    Loopback,
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Role::Party(PartyId::P0)),
            "1" => Ok(Role::Party(PartyId::P1)),
            "loopback" => Ok(Role::Loopback),
            other => Err(Error::Usage(format!("--role: expected 0, 1 or loopback, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    InProcess,
    Connect(String),
    Listen(u16),
}

/// Where plaintext inputs come from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum InputSource {
    /// Uniform values derived from the seed, independently per party.
    #[default]
    Random,
    /// Party 1 receives party 0's seeded values.
    Equal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub role: Role,
    pub workload: Workload,
    pub endpoint: Endpoint,
    /// One factor per simulated party: two in loopback, one in TCP mode.
    pub throttles: Vec<f64>,
    pub clock: ClockMode,
    pub reps: usize,
    pub seed: u64,
    pub format: Format,
    /// Exponent range of sweep sizes.
    pub sweep: Option<(u32, u32)>,
    pub time_input_sharing: bool,
    pub dump_circuit: Option<PathBuf>,
    pub triples: Option<PathBuf>,
    pub inputs: InputSource,
    pub warnings: Vec<String>,
}

impl RunConfig {
    /// A loopback configuration with default flags.
    pub fn loopback(workload: Workload) -> Self {
        Self {
            role: Role::Loopback,
            workload,
            endpoint: Endpoint::InProcess,
            throttles: vec![1.0, 1.0],
            clock: ClockMode::real(),
            reps: 10,
            seed: 1,
            format: Format::Table,
            sweep: None,
            time_input_sharing: false,
            dump_circuit: None,
            triples: None,
            inputs: InputSource::Random,
            warnings: Vec::new(),
        }
    }

    fn meta(&self) -> ReportMeta {
        let w = &self.workload;
        ReportMeta {
            app: Some(w.app.name().into()),
            world: Some(w.app.world()),
            size: Some(w.size as u64),
            l: Some(w.ring.bit_length()),
            variant: (w.app == App::Millionaire).then(|| w.variant.to_string()),
            throttles: self.throttles.clone(),
            clock: Some(
                match self.clock.kind {
                    ClockKind::Real => "real",
                    ClockKind::Virtual => "virtual",
                }
                .into(),
            ),
            latency_ms: (self.clock.kind == ClockKind::Virtual).then_some(self.clock.latency_ms),
            seed: Some(self.seed),
            reps: self.reps,
            outputs: Vec::new(),
        }
    }

    fn throttle_configs(&self) -> Result<Vec<ThrottleConfig>> {
        self.throttles.iter().map(|&f| ThrottleConfig::new(f)).collect()
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// Parses and validates a full argument vector (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string().trim_end().to_string()))?;
    RunConfig::try_from(cli)
}

impl TryFrom<Cli> for RunConfig {
    type Error = Error;

    fn try_from(cli: Cli) -> Result<Self> {
        let role: Role = cli.role.parse()?;
        let app: App = cli.app.parse().map_err(|e: Error| usage(format!("--app: {e}")))?;
        let variant: MillionaireVariant = cli.variant.parse().map_err(|e: Error| usage(format!("--variant: {e}")))?;
        let clock_kind: ClockKind = cli.clock.parse()?;
        let format: Format = cli.format.parse()?;

        let endpoint = match (role, cli.connect, cli.listen) {
            (Role::Loopback, None, None) => Endpoint::InProcess,
            (Role::Loopback, _, _) => return Err(usage("--connect/--listen conflict with --role loopback")),
            (Role::Party(_), Some(_), Some(_)) => return Err(usage("--connect and --listen are mutually exclusive")),
            (Role::Party(PartyId::P0), Some(a), None) => Endpoint::Connect(a),
            (Role::Party(PartyId::P0), None, _) => return Err(usage("--role 0 requires --connect HOST:PORT")),
            (Role::Party(_), None, Some(p)) => Endpoint::Listen(p),
            (Role::Party(_), _, None) => return Err(usage("--role 1 requires --listen PORT")),
        };

        let throttles = match &cli.throttle {
            None if role == Role::Loopback => vec![1.0, 1.0],
            None => vec![1.0],
            Some(s) => s
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("--throttle: bad factor `{t}`"))))
                .collect::<Result<Vec<_>>>()?,
        };
        let want = if role == Role::Loopback { 2 } else { 1 };
        if throttles.len() != want {
            return Err(usage(if want == 2 {
                "--throttle: loopback needs both factors as F0,F1"
            } else {
                "--throttle: a TCP party takes one factor"
            }));
        }
        for &f in &throttles {
            ThrottleConfig::new(f).map_err(|e| usage(format!("--throttle: {e}")))?;
        }

        let clock = match clock_kind {
            ClockKind::Real => {
                if cli.latency_ms.is_some() {
                    return Err(usage("--latency-ms only applies with --clock virtual"));
                }
                ClockMode::real()
            }
            ClockKind::Virtual => {
                if role != Role::Loopback {
                    return Err(usage("--clock virtual requires --role loopback"));
                }
                let lat = cli.latency_ms.unwrap_or(ClockMode::DEFAULT_LATENCY_MS);
                if !(lat.is_finite() && lat >= 0.0) {
                    return Err(usage("--latency-ms must be a finite non-negative number"));
                }
                ClockMode::virtual_with_latency(lat)
            }
        };

        let mut warnings = Vec::new();
        let workload = match app {
            App::InnerProduct => {
                let l = cli.bitlen.unwrap_or(16);
                let ring = u32::try_from(l)
                    .map_err(|_| usage("--bitlen out of range"))
                    .and_then(|l| RingSpec::new(l).map_err(|e| usage(format!("--bitlen: {e}"))))?;
                Workload::inner_product(cli.size.unwrap_or(128), ring)
            }
            App::Millionaire => {
                let n = match (cli.size, cli.bitlen) {
                    (Some(s), Some(b)) if s != b => {
                        return Err(usage("--size and --bitlen disagree; for millionaire both name the comparator width"))
                    }
                    (s, b) => s.or(b).unwrap_or(32),
                };
                if variant == MillionaireVariant::Ripple && n >= RIPPLE_WARN_BITS {
                    warnings.push(format!(
                        "ripple comparator at {n} bits needs {} rounds; --variant tree needs far fewer",
                        n + 1
                    ));
                }
                Workload::millionaire(n, variant)
            }
        };
        if workload.size == 0 {
            return Err(usage("--size must be at least 1"));
        }
        if cli.reps == 0 {
            return Err(usage("--reps must be at least 1"));
        }

        let sweep = match cli.sweep.as_deref() {
            None => None,
            Some(s) => {
                if role != Role::Loopback {
                    return Err(usage("--sweep requires --role loopback"));
                }
                let bad = || usage(format!("--sweep: expected LO:HI exponents, got `{s}`"));
                let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
                let (lo, hi): (u32, u32) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
                if lo > hi || hi > 40 {
                    return Err(bad());
                }
                Some((lo, hi))
            }
        };

        Ok(RunConfig {
            role,
            workload,
            endpoint,
            throttles,
            clock,
            reps: cli.reps,
            seed: cli.seed,
            format,
            sweep,
            time_input_sharing: cli.time_input_sharing,
            dump_circuit: cli.dump_circuit,
            triples: cli.triples,
            inputs: InputSource::Random,
            warnings,
        })
    }
}

/// Everything one experiment produced.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: OnlineReport,
    /// Per repetition, per simulated party.
    pub outputs: Vec<Vec<Vec<u64>>>,
    /// Per repetition, the plaintext result.
    pub expected: Vec<Vec<u64>>,
    /// Loopback only: per repetition, both parties' frame transcripts.
    pub transcripts: Vec<[Transcript; 2]>,
    pub timings: Vec<StepTimings>,
}

impl Experiment {
    /// True when every party's output of every repetition equals the plaintext result.
    pub fn outputs_ok(&self) -> bool {
        self.outputs.len() == self.expected.len()
            && self
                .outputs
                .iter()
                .zip(&self.expected)
                .all(|(per_party, want)| per_party.iter().all(|o| o == want))
    }
}

fn plain_inputs(cfg: &RunConfig, rep: usize) -> [Vec<u64>; 2] {
    let x0 = cfg.workload.random_inputs(cfg.seed, rep, PartyId::P0);
    let x1 = match cfg.inputs {
        InputSource::Random => cfg.workload.random_inputs(cfg.seed, rep, PartyId::P1),
        InputSource::Equal => x0.clone(),
    };
    [x0, x1]
}

/// File name of one party's pool inside a `--triples` directory.
pub fn pool_file(dir: &Path, party: PartyId) -> PathBuf {
    dir.join(format!("p{}.trip", party.index()))
}

/// Writes both pools into `dir` in the layout `--triples` reads.
pub fn write_pool_dir(dir: &Path, pools: [&TriplePool; 2]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for p in PartyId::both() {
        let mut f = std::io::BufWriter::new(File::create(pool_file(dir, p))?);
        write_pool(pools[p.index()], &mut f)?;
        f.flush()?;
    }
    Ok(())
}

fn load_pool(cfg: &RunConfig, circuit: &Circuit, party: PartyId) -> Result<TriplePool> {
    match &cfg.triples {
        Some(dir) => {
            let path = pool_file(dir, party);
            let f = File::open(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let pool = read_pool(BufReader::new(f))?;
            if pool.world() != circuit.world() {
                return Err(Error::Config(format!("{} holds {:?} triples", path.display(), pool.world())));
            }
            Ok(pool)
        }
        None => {
            let (p0, p1) = deal_for(circuit, cfg.reps, cfg.seed);
            Ok(if party == PartyId::P0 { p0 } else { p1 })
        }
    }
}

/// Builds the circuit, deals triples, runs `cfg.reps` online executions and
/// aggregates their timings. Outputs are checked against the plaintext
/// evaluator but a mismatch is reported, not raised; see [`Experiment::outputs_ok`].
pub fn run_experiment(cfg: &RunConfig) -> Result<Experiment> {
    let circuit = cfg.workload.build()?;
    if let Some(path) = &cfg.dump_circuit {
        std::fs::write(path, circuit.dump())?;
    }
    let throttles = cfg.throttle_configs()?;
    let options = SessionOptions {
        time_input_sharing: cfg.time_input_sharing,
    };
    let expected = (0..cfg.reps)
        .map(|rep| {
            let [x0, x1] = plain_inputs(cfg, rep);
            eval_plaintext(&circuit, &x0, &x1)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut outputs = Vec::with_capacity(cfg.reps);
    let mut timings = Vec::new();
    let mut transcripts = Vec::new();
    match &cfg.role {
        Role::Loopback => {
            let mut pool0 = load_pool(cfg, &circuit, PartyId::P0)?;
            let mut pool1 = load_pool(cfg, &circuit, PartyId::P1)?;
            for rep in 0..cfg.reps {
                let [x0, x1] = plain_inputs(cfg, rep);
                let lb = LoopbackConfig {
                    throttles: [throttles[0], throttles[1]],
                    clock: cfg.clock,
                    options,
                    seed: cfg.seed,
                    rep,
                    hello: (rep == 0).then(|| cfg.workload.hello(cfg.seed)),
                };
                let run = run_loopback(&circuit, [&x0, &x1], [&mut pool0, &mut pool1], &lb)?;
                outputs.push(run.outputs.to_vec());
                timings.extend(run.timings);
                transcripts.push(run.transcripts);
            }
        }
        Role::Party(party) => {
            let party = *party;
            let mut transport = match &cfg.endpoint {
                Endpoint::Connect(addr) => TcpTransport::connect(addr.as_str(), CONNECT_TIMEOUT)?,
                Endpoint::Listen(port) => {
                    let listener = TcpListener::bind(("0.0.0.0", *port))?;
                    TcpTransport::accept(&listener)?
                }
                Endpoint::InProcess => return Err(usage("a TCP party needs --connect or --listen")),
            };
            let mut pool = load_pool(cfg, &circuit, party)?;
            let plan = assign_layers(&circuit)?;
            crate::runtime::handshake(&mut transport, &cfg.workload.hello(cfg.seed))?;
            for rep in 0..cfg.reps {
                let plain = &plain_inputs(cfg, rep)[party.index()];
                let clock = PartyClock::real(party, throttles[0]);
                let rng = crate::runtime::mask_rng(cfg.seed, rep, party);
                let outcome = Session::new(party, &mut transport, &circuit, &plan, &mut pool, clock, rng)
                    .with_options(options)
                    .run_online(plain)?;
                outputs.push(vec![outcome.outputs]);
                timings.push(outcome.timings);
            }
            transport.close()?;
        }
    }
    let mut meta = cfg.meta();
    meta.outputs = outputs.iter().map(|per_party| per_party[0].clone()).collect();
    let report = aggregate(&timings, meta)?;
    Ok(Experiment {
        report,
        outputs,
        expected,
        transcripts,
        timings,
    })
}

/// Sizes `2^lo ..= 2^hi` of a sweep specification.
pub fn sweep_sizes((lo, hi): (u32, u32)) -> Vec<u64> {
    (lo..=hi).map(|e| 1u64 << e).collect()
}

/// Runs one experiment per sweep size. A failing size, including an output
/// mismatch, ends the sweep with a partial marker.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutcome> {
    let range = cfg.sweep.ok_or_else(|| usage("run_sweep needs --sweep LO:HI"))?;
    sweep(&sweep_sizes(range), |size| {
        let mut c = cfg.clone();
        c.workload = c.workload.with_size(size as usize);
        c.dump_circuit = None;
        let e = run_experiment(&c)?;
        if !e.outputs_ok() {
            return Err(Error::Protocol(format!("outputs differ from the plaintext result at size {size}")));
        }
        Ok(e.report)
    })
}

/// Full command-line behavior. Returns the process exit code.
pub fn main_with(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    for w in &cfg.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    if cfg.sweep.is_some() {
        return match run_sweep(cfg) {
            Ok(s) => {
                let _ = out.write_all(s.to_csv().as_bytes());
                if let Some(e) = &s.failure {
                    let _ = writeln!(err, "error: {e}");
                    1
                } else {
                    0
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        };
    }
    let exp = match run_experiment(cfg) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    match render_report(&exp.report, cfg.format) {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    }
    if !exp.outputs_ok() {
        let _ = writeln!(err, "error: secure outputs differ from the plaintext result");
        return 1;
    }
    0
}

/// Exit code for a usage error.
pub const EXIT_USAGE: i32 = 2;

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig> {
        parse_args(std::iter::once("mpc-bench").chain(args.split_whitespace()))
    }

    #[test]
    fn defaults() {
        let c = parse("--role loopback --app innerproduct --size 128 --reps 10 --seed 1").unwrap();
        assert_eq!(c.workload, Workload::inner_product(128, RingSpec::default()));
        assert_eq!(c.workload.ring.bit_length(), 16);
        assert_eq!(c.workload.variant, MillionaireVariant::Tree);
        assert_eq!(c.clock.kind, ClockKind::Real);
        assert_eq!(c.throttles, vec![1.0, 1.0]);
        assert_eq!(c.reps, 10);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn role_zero_needs_connect() {
        let e = parse("--role 0").unwrap_err();
        assert!(matches!(&e, Error::Usage(m) if m.contains("--connect")), "{e}");
    }

    #[test]
    fn transport_conflicts() {
        assert!(parse("--role 1 --listen 9000 --connect a:1").is_err());
        assert!(parse("--role loopback --listen 9000").is_err());
        assert!(parse("--role 1").is_err());
        assert!(parse("--role 0 --connect 127.0.0.1:9 --clock virtual").is_err());
        assert!(parse("--role 0 --connect 127.0.0.1:9 --throttle 1,3").is_err());
        assert!(parse("--role loopback --throttle 3").is_err());
        assert!(parse("--role loopback --throttle 1,0.5").is_err());
        assert!(parse("--role loopback --bogus").is_err());
        assert!(parse("--app innerproduct").is_err());
        assert!(parse("--role loopback --reps 0").is_err());
        assert!(parse("--role loopback --latency-ms 2").is_err());
        let ok = parse("--role 1 --listen 9000 --throttle 3").unwrap();
        assert_eq!(ok.endpoint, Endpoint::Listen(9000));
        assert_eq!(ok.throttles, vec![3.0]);
    }

    #[test]
    fn ripple_warning() {
        let tree = parse("--role loopback --app millionaire --bitlen 32768 --variant tree").unwrap();
        assert_eq!(tree.workload.size, 32768);
        assert!(tree.warnings.is_empty());
        let ripple = parse("--role loopback --app millionaire --bitlen 32768 --variant ripple").unwrap();
        assert_eq!(ripple.warnings.len(), 1);
        assert!(ripple.warnings[0].contains("32769 rounds"));
        assert!(parse("--role loopback --app millionaire --size 8 --bitlen 16").is_err());
    }

    #[test]
    fn sweep_spec() {
        let c = parse("--role loopback --sweep 6:12 --throttle 1,3 --clock virtual").unwrap();
        assert_eq!(sweep_sizes(c.sweep.unwrap()).len(), 7);
        assert_eq!(c.clock.latency_ms, 0.1);
        assert!(parse("--role loopback --sweep 9:3").is_err());
        assert!(parse("--role loopback --sweep 3").is_err());
    }

    #[test]
    fn loopback_inner_product_matches_oracle() {
        let mut cfg = RunConfig::loopback(Workload::inner_product(128, RingSpec::default()));
        cfg.reps = 2;
        let e = run_experiment(&cfg).unwrap();
        assert!(e.outputs_ok());
        assert_eq!(e.report.parties.len(), 2);
        assert_eq!(e.timings.len(), 4);
    }

    #[test]
    fn equal_millionaire_inputs_give_zero() {
        let mut cfg = RunConfig::loopback(Workload::millionaire(32, MillionaireVariant::Tree));
        cfg.reps = 3;
        cfg.inputs = InputSource::Equal;
        let e = run_experiment(&cfg).unwrap();
        assert!(e.outputs_ok());
        assert!(e.outputs.iter().all(|r| r.iter().all(|o| o == &vec![0])));
    }
}
