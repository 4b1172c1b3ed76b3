//! Renders the 2-D projection of a Möbius strip as an SVG scatter plot,
//! colored by the generator's natural parameter.
//!
//! cargo run --release --example scatter_plot -- [out.svg]

use cdp::datasets::{generate, DatasetKind, DatasetSpec};
use cdp::pipeline::{run_cdp, CdpConfig};
use cdp::svg::scatter;

fn main() -> cdp::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("mobius.svg").display().to_string());
    let cloud = generate(&DatasetSpec::new(DatasetKind::Mobius, 700, 2))?;
    let (_, eval) = run_cdp(&cloud, &CdpConfig::default())?;
    std::fs::write(&path, scatter(&eval.projected, "Möbius strip, k = 2"))?;
    println!("{} points -> {path}", eval.projected.len());
    Ok(())
}
