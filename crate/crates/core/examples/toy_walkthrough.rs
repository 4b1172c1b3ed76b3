//! Step-by-step run on the five-point toy cloud, printing every
//! intermediate quantity.
//!
//! cargo run --example toy_walkthrough

use cdp::cdp::{
    admissible_set, convexity_ratios, nonconvexity_index, project, projected_graph,
    projection_matrix, spectrum, structure_matrix,
};
use cdp::certificates::{certify, phi_graph, DEFAULT_PATH_BUDGET};
use cdp::datasets::toy5;
use cdp::graph::mutual_knn;
use cdp::shortest_paths::apsp;

fn main() -> cdp::Result<()> {
    let cloud = toy5();
    let graph = mutual_knn(&cloud, 2)?;
    println!("mutual 2-NN edges:");
    for e in graph.edges() {
        println!("  {}-{}  w = {:.4}", cloud.label(e.u), cloud.label(e.v), e.w);
    }

    let dm = apsp(&graph)?;
    let records = convexity_ratios(&cloud, &dm)?;
    let ds = admissible_set(&records, 0.75)?;
    println!("\npair   euclid  sp      r       admissible");
    for p in &records {
        println!(
            "{}-{}    {:.4}  {:.4}  {:.4}  {}",
            cloud.label(p.i),
            cloud.label(p.j),
            p.euclid,
            p.sp,
            p.r,
            ds.contains(p.i, p.j)
        );
    }
    println!("C_sp = {:.4}", nonconvexity_index(&ds)?);

    let s = structure_matrix(&ds, &cloud)?;
    println!("\nstructure matrix:\n{:.6}", s.matrix());
    let sp = spectrum(&s)?;
    println!("eigenvalues: {:.6?}", sp.eigenvalues);
    let v = projection_matrix(&sp, 2)?;
    println!("V:\n{:.6}", v.matrix());

    let projected = project(&cloud, &v)?;
    println!("\nprojected coordinates:");
    for i in 0..projected.len() {
        let p = projected.point(i);
        println!("  {}  {:>9.6} {:>9.6}", cloud.label(i), p[0], p[1]);
    }

    let pg = projected_graph(&graph, &cloud, &v)?;
    let pdm = apsp(&pg)?;
    let certs = certify(&ds, &v, &cloud, &pdm, DEFAULT_PATH_BUDGET)?;
    println!("\npair  psi       phi*      r~/r      path");
    for c in &certs {
        let path: Vec<String> = c.path_in(&pdm)?.iter().map(|&v| cloud.label(v)).collect();
        println!(
            "{}-{}   {:.6}  {:.6}  {:.6}  {}  holds={}",
            cloud.label(c.i),
            cloud.label(c.j),
            c.psi,
            c.phi_star,
            c.ratio(),
            path.join("→"),
            c.holds
        );
    }
    let (phi_g, (u, w)) = phi_graph(&graph, &v, &cloud)?;
    println!("phi_G = {phi_g:.5} on edge {}-{}", cloud.label(u), cloud.label(w));
    Ok(())
}
