//! BLER sweeps, latency profiling and CSV output.

pub mod bler;
pub mod latency;
pub mod stats;

pub use bler::{run_bler, snr_at_bler, BlerConfig, BlerResult, Estimator, StopRule};
pub use latency::{
    run_latency, run_latency_interleaved, summarize, timed_receive, timed_transmit, EnbStages, LatencyReport, LatencySummary,
    TransportMode, UeStages,
};
pub use stats::{median, wilson_ci};

pub const BLER_HEADER: [&str; 9] =
    ["mcs", "snr_db", "blocks", "block_errors", "bler", "avg_iterations", "ci95_low", "ci95_high", "seed"];

pub const LATENCY_HEADER: [&str; 6] = ["mcs", "run", "t_proc_enb_ns", "t_tx_ns", "t_proc_ue_ns", "t_sum_ns"];

fn write_rows<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is ASCII")
}

/// BLER rows in the given order, header first.
pub fn emit_bler_csv(results: &[BlerResult]) -> String {
    write_rows(
        &BLER_HEADER,
        results.iter().map(|r| {
            vec![
                r.mcs.to_string(),
                r.snr_db.to_string(),
                r.blocks.to_string(),
                r.block_errors.to_string(),
                r.bler.to_string(),
                r.avg_iterations.to_string(),
                r.ci95.0.to_string(),
                r.ci95.1.to_string(),
                r.seed.to_string(),
            ]
        }),
    )
}

/// Latency rows in the given order, header first.
pub fn emit_latency_csv(reports: &[LatencyReport]) -> String {
    write_rows(
        &LATENCY_HEADER,
        reports.iter().map(|r| {
            vec![
                r.mcs.to_string(),
                r.run.to_string(),
                r.t_proc_enb().to_string(),
                r.t_tx().to_string(),
                r.t_proc_ue().to_string(),
                r.t_sum().to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BlerResult {
        BlerResult {
            mcs: 3,
            snr_db: -1.5,
            blocks: 1234,
            block_errors: 100,
            bler: 100.0 / 1234.0,
            avg_iterations: 2.25,
            ci95: wilson_ci(100, 1234),
            seed: 9,
        }
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(emit_bler_csv(&[]), format!("{}\n", BLER_HEADER.join(",")));
        assert_eq!(emit_latency_csv(&[]), format!("{}\n", LATENCY_HEADER.join(",")));
    }

    #[test]
    fn bler_round_trip() {
        let r = sample();
        let text = emit_bler_csv(std::slice::from_ref(&r));
        assert_eq!(text.lines().count(), 2);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let row = rd.records().next().unwrap().unwrap();
        let f = |i: usize| row[i].parse::<f64>().unwrap();
        assert_eq!(row[0].parse::<usize>().unwrap(), r.mcs);
        assert_eq!(f(1), r.snr_db);
        assert_eq!(row[2].parse::<u64>().unwrap(), r.blocks);
        assert_eq!(row[3].parse::<u64>().unwrap(), r.block_errors);
        assert_eq!(f(4), r.bler);
        assert_eq!(f(5), r.avg_iterations);
        assert_eq!((f(6), f(7)), r.ci95);
        assert_eq!(row[8].parse::<u64>().unwrap(), r.seed);
    }

    #[test]
    fn infinite_snr_is_parseable() {
        let r = BlerResult { snr_db: f64::INFINITY, ..sample() };
        let text = emit_bler_csv(&[r]);
        let field = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        assert_eq!(field.parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn latency_round_trip() {
        let r = LatencyReport {
            mcs: 4,
            run: 7,
            t_start_ns: 100,
            t_enb_done_ns: 150,
            t_rx_ns: 175,
            t_end_ns: 300,
            enb_stages: None,
            ue_stages: UeStages::default(),
            crc_ok: true,
            iterations: 1,
        };
        let text = emit_latency_csv(&[r]);
        assert_eq!(text.lines().nth(1).unwrap(), "4,7,50,25,125,200");
    }
}
