//! Compares the convexity-driven projection with PCA on every generator.
//!
//! cargo run --release --example pca_vs_cdp -- [n]

use cdp::baselines::{evaluate_baseline, pca_fit};
use cdp::datasets::{generate, DatasetKind, DatasetSpec};
use cdp::pipeline::{CdpConfig, CdpState, Method};

fn main() -> cdp::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    println!(
        "{:<17} {:>6} {:>9} {:>9} {:>9} {:>9} {:>7} {:>7}",
        "dataset", "method", "fixed%", "resel%", "q10", "q90", "mu_k", "holds"
    );
    for kind in DatasetKind::ALL.into_iter().filter(|&k| k != DatasetKind::Toy5) {
        let cloud = generate(&DatasetSpec::new(kind, n, 7))?;
        let state = CdpState::prepare(&cloud, &CdpConfig::default())?;
        let cdp_eval = state.evaluate(&state.cdp_projection()?, Method::Cdp)?;
        let pca_eval = evaluate_baseline(&pca_fit(&state.cloud, 2)?, &state)?;
        for eval in [&cdp_eval, &pca_eval] {
            let r = &eval.report;
            println!(
                "{:<17} {:>6} {:>9} {:>9} {:>9.4} {:>9.4} {:>7.4} {:>7}",
                kind.name(),
                r.method,
                r.fixed_error_percent,
                r.reselected_error_percent.as_deref().unwrap_or("-"),
                r.q10_psi,
                r.q90_inv_phi_star,
                r.mu_k,
                format!("{}/{}", r.n_holding, r.n_certified)
            );
        }
    }
    Ok(())
}
