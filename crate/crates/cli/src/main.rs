use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use urllc_phy::channel::{ChannelModel, SnrSpec};
use urllc_phy::coding::CRC_LEN;
use urllc_phy::grid::{build_minislot_map, ReClass, DATA_SYMBOLS};
use urllc_phy::harness::{
    emit_bler_csv, emit_latency_csv, median, run_bler, run_latency, run_latency_interleaved, BlerConfig, Estimator, LatencyReport,
    StopRule, TransportMode,
};
use urllc_phy::numerology::{mcs_table, MiniSlotConfig, OfdmConfig, Platform};
use urllc_phy::transport::{run_enb, run_ue, EnbConfig, UdpRx, UdpTx, UeConfig, UeReport};
use urllc_phy::Error;

mod ranges;

#[derive(Debug, Parser)]
#[command(name = "urllc", version, about = "Mini-slot URLLC downlink PHY simulator and emulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the MCS table (or the mini-slot grid layout).
    Tables {
        #[arg(long)]
        csv: bool,
        /// Show the resource grid layout instead.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = 25)]
        n_rb: usize,
    },
    /// Monte-Carlo BLER sweep, CSV output.
    Bler(BlerArgs),
    /// Latency profile, CSV output.
    Latency(LatencyArgs),
    /// Two-process eNB/UE emulation over UDP.
    Txrx {
        #[command(subcommand)]
        role: Role,
    },
}

#[derive(Debug, Args)]
struct BlerArgs {
    /// MCS index, range `a-b` or list `a,b,c`.
    #[arg(long, value_parser = ranges::parse_mcs_list)]
    mcs: ::std::vec::Vec<usize>,
    /// Es/N0 in dB: `start:stop:step`, a list, or one value.
    #[arg(long, allow_hyphen_values = true, value_parser = ranges::parse_snr_points)]
    snr: ::std::vec::Vec<f64>,
    /// awgn, rayleigh-flat or rayleigh-fs:<taps>.
    #[arg(long, default_value = "awgn")]
    channel: ChannelModel,
    #[arg(long, default_value_t = 1)]
    rx_antennas: usize,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Ls)]
    estimator: EstimatorArg,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_blocks: u64,
    #[arg(long, default_value_t = 2)]
    workers: usize,
    #[arg(long, default_value_t = 6)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Genie,
    Ls,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Inproc,
    Socket,
}

#[derive(Debug, Args)]
struct LatencyArgs {
    #[arg(long, value_parser = ranges::parse_mcs_list)]
    mcs: ::std::vec::Vec<usize>,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Inproc)]
    mode: ModeArg,
    /// Carry each mini-slot in a full 14-symbol transmission unit.
    #[arg(long)]
    air: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Role {
    /// Transmit mini-slots to a UE.
    Enb {
        #[arg(long)]
        peer: String,
        #[arg(long)]
        mcs: usize,
        #[arg(long)]
        slots: u64,
        /// 14-symbol transmission units with 10 idle symbols.
        #[arg(long)]
        air: bool,
        /// Mini-slot period on the wire in microseconds (0 = back to back).
        #[arg(long, default_value_t = 1000)]
        period_us: u64,
        /// Hold each IQ frame this long after timestamping it.
        #[arg(long, default_value_t = 0)]
        delay_us: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Receive and decode mini-slots.
    Ue {
        #[arg(long)]
        bind: String,
        /// Es/N0 in dB of noise added on reception; noiseless if omitted.
        #[arg(long, allow_hyphen_values = true)]
        snr: Option<f64>,
        /// Give up after this long without a frame.
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Per-slot latency CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self { code: e.code(), message: e.to_string() }
    }
}

impl CliError {
    fn io(context: &str, e: std::io::Error) -> Self {
        Self { code: "io", message: format!("{context}: {e}") }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(&path.display().to_string(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e)),
    }
}

fn tables(csv: bool, grid: bool, n_rb: usize) -> Result<(), CliError> {
    let map = build_minislot_map(n_rb)?;
    let e = map.pdsch_bits();
    let mut out = String::new();
    if grid {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let pcfich: Vec<usize> = map.pcfich().iter().map(|r| r.rb).collect();
        let _ = writeln!(out, "n_rb={} n_sc={} symbols={}", map.n_rb(), map.n_sc(), DATA_SYMBOLS);
        let _ = writeln!(out, "rs_symbol0={}", list(map.rs_subcarriers(0)?));
        let _ = writeln!(out, "rs_symbol3={}", list(map.rs_subcarriers(3)?));
        let _ = writeln!(out, "pcfich_rbs={}", list(&pcfich));
        let _ = writeln!(
            out,
            "rs_res={} control_res={} pdsch_res={} pdsch_bits={}",
            map.count(ReClass::Rs),
            map.count(ReClass::Control),
            map.pdsch_count(),
            e
        );
        let _ = writeln!(out, "\nRB 0 (R=RS P=PCFICH C=control D=PDSCH)\n{}", map.render_rb(0));
    } else if csv {
        let _ = writeln!(out, "mcs,tbs,qm,rate");
        for r in &mcs_table() {
            let _ = writeln!(out, "{},{},{},{:.4}", r.index, r.tbs, r.modulation_order, r.code_rate(e));
        }
    } else {
        let _ = writeln!(out, "{:>4} {:>6} {:>5} {:>3} {:>7}", "MCS", "TBS", "mod", "Qm", "rate");
        for r in &mcs_table() {
            let _ = writeln!(out, "{:>4} {:>6} {:>5} {:>3} {:>7.4}", r.index, r.tbs, "QPSK", r.modulation_order, r.code_rate(e));
        }
        let _ = writeln!(out, "rate = (TBS + {CRC_LEN}) / {e} coded bits at {n_rb} RB");
    }
    write_output(&None, &out)
}

fn bler(a: BlerArgs) -> Result<(), CliError> {
    let cfg = BlerConfig {
        model: a.channel,
        n_rx: a.rx_antennas,
        estimator: match a.estimator {
            EstimatorArg::Genie => Estimator::Genie,
            EstimatorArg::Ls => Estimator::LeastSquares,
        },
        stop: StopRule { min_errors: a.min_errors, max_blocks: a.max_blocks },
        seed: a.seed,
        workers: a.workers,
        max_iterations: a.max_iterations,
        ..BlerConfig::default()
    };
    let mut results = Vec::new();
    for &mcs in &a.mcs {
        results.extend(run_bler(mcs, &a.snr, &cfg)?);
    }
    write_output(&a.out, &emit_bler_csv(&results))
}

fn latency(a: LatencyArgs) -> Result<(), CliError> {
    let platform = MiniSlotConfig::new(if a.air { Platform::AirEmulation } else { Platform::Simulation });
    let mode = match a.mode {
        ModeArg::Inproc => TransportMode::InProcess,
        ModeArg::Socket => TransportMode::Socket,
    };
    let per_mcs = match mode {
        TransportMode::InProcess => run_latency_interleaved(&a.mcs, a.runs, platform, a.seed)?,
        TransportMode::Socket => {
            a.mcs.iter().map(|&mcs| run_latency(mcs, a.runs, platform, mode, a.seed)).collect::<Result<_, _>>()?
        }
    };
    let mut all = Vec::new();
    for (reports, s) in per_mcs {
        eprintln!(
            "mcs={} runs={} failures={} median_t_proc_enb_ns={} median_t_tx_ns={} median_t_proc_ue_ns={} median_t_sum_ns={} median_decode_ns={}",
            s.mcs, s.runs, s.failures, s.median_t_proc_enb_ns, s.median_t_tx_ns, s.median_t_proc_ue_ns, s.median_t_sum_ns, s.median_decode_ns
        );
        all.extend(reports);
    }
    write_output(&a.out, &emit_latency_csv(&all))
}

fn ue_summary(r: &UeReport) -> String {
    let ok: Vec<&LatencyReport> = r.slots.iter().map(|s| &s.latency).filter(|l| l.crc_ok).collect();
    let med = |f: fn(&LatencyReport) -> u64| median(&ok.iter().map(|l| f(l)).collect::<Vec<_>>()).unwrap_or(0);
    format!(
        "slots={} crc_pass={} crc_fail={} frame_errors={} seq_gaps={} out_of_order={} missing_control={} end={} \
         median_t_proc_enb_ns={} median_t_tx_ns={} median_t_proc_ue_ns={} median_t_sum_ns={}",
        r.slots.len(),
        r.crc_pass,
        r.crc_fail,
        r.frame_errors,
        r.seq_gaps,
        r.out_of_order,
        r.missing_control,
        r.end_received,
        med(LatencyReport::t_proc_enb),
        med(LatencyReport::t_tx),
        med(LatencyReport::t_proc_ue),
        med(LatencyReport::t_sum),
    )
}

fn txrx(role: Role) -> Result<(), CliError> {
    match role {
        Role::Enb { peer, mcs, slots, air, period_us, delay_us, seed } => {
            let cfg = EnbConfig {
                mcs,
                slots,
                platform: MiniSlotConfig::new(if air { Platform::AirEmulation } else { Platform::Simulation }),
                ofdm: OfdmConfig::default(),
                seed,
                period_ns: period_us * 1_000,
                delay_ns: delay_us * 1_000,
                ..EnbConfig::default()
            };
            let mut link = UdpTx::connect(peer.as_str())?;
            let s = run_enb(&mut link, &cfg)?;
            println!("slots_sent={} frames_sent={} last_seq={}", s.slots_sent, s.frames_sent, s.last_seq);
        }
        Role::Ue { bind, snr, timeout_ms, seed, out } => {
            let mut link = UdpRx::bind(bind.as_str(), Duration::from_millis(timeout_ms))?;
            eprintln!("listening {}", link.local_addr()?);
            let cfg = UeConfig {
                snr: snr.map(SnrSpec::db).unwrap_or_else(SnrSpec::noiseless),
                seed,
                ..UeConfig::default()
            };
            let report = run_ue(&mut link, &cfg)?;
            if let Some(path) = &out {
                let reports: Vec<LatencyReport> = report.slots.iter().map(|s| s.latency.clone()).collect();
                write_output(&Some(path.clone()), &emit_latency_csv(&reports))?;
            }
            println!("{}", ue_summary(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("error code=usage message={}", message.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Tables { csv, grid, n_rb } => tables(csv, grid, n_rb),
        Command::Bler(a) => bler(a),
        Command::Latency(a) => latency(a),
        Command::Txrx { role } => txrx(role),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error code={} message={}", e.code, e.message.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
