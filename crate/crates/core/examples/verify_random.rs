//! Verdict suite on a seeded random connected graph with random complex
//! Szegedy weights.
//!
//! `cargo run --example verify_random -- [vertices] [seed]`

use qwspec::operators::build_model;
use qwspec::random::{
    random_connected_graph, random_szegedy_weights, seeded_rng, DEFAULT_EDGE_PROBABILITY,
};
use qwspec::report::verdict_lines;
use qwspec::spectral::{full_report, ReportOptions};

fn main() -> qwspec::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let mut rng = seeded_rng(seed);
    let g = random_connected_graph(&mut rng, n, DEFAULT_EDGE_PROBABILITY)?;
    let w = random_szegedy_weights(&mut rng, &g);
    let model = build_model(&g, &w, None)?;
    let report = full_report(&model, Some(&g), &ReportOptions::default())?;

    println!("n = {n}, |E| = {}, seed = {seed}", g.edge_count());
    print!("{}", verdict_lines(&report.verdicts));
    let failures = report.failures();
    println!(
        "{} of {} checks passed",
        report.verdicts.len() - failures.len(),
        report.verdicts.len()
    );
    if !failures.is_empty() {
        std::process::exit(1);
    }
    Ok(())
}
