//! How much detour mass each subspace dimension captures, and how the
//! Markov lower bound compares with the empirical fraction.
//!
//! cargo run --release --example spectral_bound

use cdp::cdp::projection_matrix;
use cdp::datasets::{generate, DatasetKind, DatasetSpec, Shape};
use cdp::metrics::{markov_bound, markov_empirical, markov_level, spectral_capture};
use cdp::pipeline::{CdpConfig, CdpState};

fn main() -> cdp::Result<()> {
    let mut shape = Shape::default_for(DatasetKind::Torus);
    shape.set_param("minor_radius", 0.6)?;
    let cloud = generate(&DatasetSpec { shape, n_points: 600, seed: 3 })?;
    let state = CdpState::prepare(&cloud, &CdpConfig::default())?;
    println!("eigenvalues: {:.5?}", state.spectrum.eigenvalues);

    for k in 1..=state.cloud.dim() {
        let mu = spectral_capture(&state.spectrum, k)?;
        let v = projection_matrix(&state.spectrum, k)?;
        println!("\nk = {k}: mu_k = {mu:.4}");
        let mut levels = vec![0.1, 0.25, 0.5];
        let a90 = markov_level(mu, 0.9);
        if a90 > 0.0 && a90 < 1.0 {
            levels.push(a90);
        }
        for a in levels {
            println!(
                "  a = {a:.3}: P(|V'u|² ≥ {:.3}) ≥ {:.4}, observed {:.4}",
                1.0 - a,
                markov_bound(mu, a)?,
                markov_empirical(&state.admissible, &v, &state.cloud, a)
            );
        }
    }
    Ok(())
}
