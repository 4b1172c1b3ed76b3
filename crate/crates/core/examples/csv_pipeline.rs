//! End-to-end file workflow: read a CSV cloud, run, write every artifact.
//! Without an input path a helix is generated first.
//!
//! cargo run --release --example csv_pipeline -- [input.csv] [out_dir]

use std::path::PathBuf;

use cdp::cli::{cmd_certify, cmd_run, InputSource, RunConfig};
use cdp::datasets::{generate, save_csv, DatasetKind, DatasetSpec};

fn main() -> cdp::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = match args.next() {
        Some(p) => PathBuf::from(p),
        None => {
            let p = std::env::temp_dir().join("cdp-helix.csv");
            save_csv(&generate(&DatasetSpec::new(DatasetKind::Helix, 600, 1))?, &p)?;
            p
        }
    };
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("cdp-run"));

    let mut config = RunConfig::new(InputSource::Csv(input.clone()), &out);
    config.emit_edges = true;
    let summary = cmd_run(&config)?;

    println!("input: {}", input.display());
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    for (stage, t) in &summary.timings {
        println!("{stage:>8}: {:.3}s", t.as_secs_f64());
    }
    println!();
    print!("{}", cmd_certify(&out)?);
    Ok(())
}
