//! Spectrum of the Grover walk on the triangle.
//!
//! `cargo run --example c3_spectrum`

use qwspec::graph::{grover_weights, Digraph};
use qwspec::operators::build_model;
use qwspec::report::spectrum_table;
use qwspec::spectral::{full_report, ReportOptions};

fn main() -> qwspec::Result<()> {
    let g = Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)])?;
    let model = build_model(&g, &grover_weights(&g), None)?;
    let report = full_report(&model, Some(&g), &ReportOptions::default())?;

    println!("Spec(T):");
    for (mu, k) in &report.spec_t {
        println!("  {mu:+.6}  x{k}");
    }
    println!();
    print!("{}", spectrum_table(&report));
    println!();
    println!(
        "{} arcs, multiplicities sum to {}; all checks pass: {}",
        model.m(),
        report.total_multiplicity(),
        report.all_pass()
    );
    Ok(())
}
