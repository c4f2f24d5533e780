use std::fs::File;

use epicube::harness::io::{read_summary, read_sweep, write_summary, write_sweep};
use epicube::harness::{noise_grid, run_noise_sweep, summarize, ExperimentConfig};

fn config() -> ExperimentConfig {
    ExperimentConfig { trials: 40, noise_levels: noise_grid(0.04, 3), seed: 99, ..Default::default() }
}

#[test]
fn summary_recomputed_from_the_raw_csv_matches() {
    let dir = tempfile::tempdir().unwrap();
    let (raw, agg) = (dir.path().join("sweep.csv"), dir.path().join("summary.csv"));
    let records = run_noise_sweep(&config()).unwrap();
    write_sweep(File::create(&raw).unwrap(), &records).unwrap();
    write_summary(File::create(&agg).unwrap(), &summarize(&records)).unwrap();

    let reread = read_sweep(File::open(&raw).unwrap()).unwrap();
    assert_eq!(reread.len(), records.len());
    let recomputed = summarize(&reread);
    let stored = read_summary(File::open(&agg).unwrap()).unwrap();
    assert_eq!(recomputed, stored);
    for row in &stored {
        assert_eq!(row.trials, 40);
    }
}

#[test]
fn serial_and_parallel_runs_emit_identical_bytes() {
    let cfg = config();
    let bytes = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let records = pool.install(|| run_noise_sweep(&cfg).unwrap());
        let mut buf = Vec::new();
        write_sweep(&mut buf, &records).unwrap();
        buf
    };
    assert_eq!(bytes(1), bytes(4));
}
