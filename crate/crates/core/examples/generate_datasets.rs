//! Writes every synthetic generator to CSV and prints a short summary.
//!
//! cargo run --example generate_datasets -- [out_dir] [n]

use std::path::PathBuf;

use cdp::datasets::{generate, save_csv, DatasetKind, DatasetSpec, Shape};

fn main() -> cdp::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("cdp-datasets"));
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    std::fs::create_dir_all(&dir)?;

    for kind in DatasetKind::ALL {
        let cloud = generate(&DatasetSpec::new(kind, n, 7))?;
        let path = dir.join(format!("{kind}.csv"));
        save_csv(&cloud, &path)?;
        let pts = cloud.points();
        let extent: Vec<String> = pts
            .columns()
            .into_iter()
            .map(|c| {
                let (lo, hi) = c.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                format!("[{lo:.2}, {hi:.2}]")
            })
            .collect();
        println!("{:<17} {:>5} points  extent {}  -> {}", kind, cloud.len(), extent.join(" "), path.display());
    }

    // shape parameters can be overridden by name
    let mut shape = Shape::default_for(DatasetKind::Helix);
    shape.set_param("turns", 5.0)?;
    let spec = DatasetSpec { shape, n_points: n, seed: 7 };
    let cloud = generate(&spec)?;
    save_csv(&cloud, dir.join("helix_5_turns.csv"))?;
    println!("helix with 5 turns: {} points", cloud.len());
    Ok(())
}
