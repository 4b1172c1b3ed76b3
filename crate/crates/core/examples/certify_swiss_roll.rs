//! Projects a swiss roll and inspects the per-pair certificates.
//!
//! cargo run --release --example certify_swiss_roll -- [n] [seed]

use cdp::datasets::{generate, DatasetKind, DatasetSpec};
use cdp::pipeline::{run_cdp, CdpConfig};

fn main() -> cdp::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(800);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let cloud = generate(&DatasetSpec::new(DatasetKind::SwissRoll, n, seed))?;
    let (state, eval) = run_cdp(&cloud, &CdpConfig::default())?;
    let r = &eval.report;

    println!("kept {} of {} points, {} edges", state.cloud.len(), state.n_input, r.n_edges);
    println!("admissible pairs: {} of {}", r.n_admissible, r.n_pairs);
    println!("certificates holding: {}/{}", r.n_holding, r.n_certified);
    println!("{}", r.quantile_line());
    println!(
        "phi_G = {:.4}, so every ratio is at most {:.4} (holds: {})",
        r.phi_g,
        1.0 / r.phi_g,
        r.uniform_bound_holds
    );

    // the tightest and loosest sandwiches
    let mut by_width: Vec<_> = eval.certificates.iter().collect();
    by_width.sort_by(|a, b| (a.inv_phi_star() - a.psi).total_cmp(&(b.inv_phi_star() - b.psi)));
    for (tag, c) in [("tightest", by_width[0]), ("loosest", by_width[by_width.len() - 1])] {
        println!(
            "{tag:>8}: pair ({}, {})  {:.4} ≤ {:.4} ≤ {:.4}  path of {} vertices",
            c.i,
            c.j,
            c.psi,
            c.ratio(),
            c.inv_phi_star(),
            c.path_in(&eval.projected_distances)?.len()
        );
    }
    println!(
        "C_sp = {:.4}, C_sp' = {:.4}, fixed-pairs error {}%",
        r.c_sp, r.c_sp_prime, r.fixed_error_percent
    );
    Ok(())
}
