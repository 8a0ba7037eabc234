//! Birth eigenspaces `ker d_A ∩ ker(I ± S)` on K4 and C4, against the
//! cycle-rank formula `max(0, |E| - |V| + m±)`.
//!
//! `cargo run --example birth_eigenspaces`

use qwspec::graph::{grover_weights, Digraph};
use qwspec::operators::build_model;
use qwspec::spectral::{full_report, ReportOptions};
use qwspec::Origin;

fn show(name: &str, g: &Digraph) -> qwspec::Result<()> {
    let model = build_model(g, &grover_weights(g), None)?;
    let report = full_report(&model, Some(g), &ReportOptions::default())?;
    let cor = report.corollary.as_ref().expect("graph input");
    let (plus, minus) = report.birth_dims();
    println!(
        "{name}: |E| = {}, |V| = {}, m+ = {}, m- = {}, bipartite = {}",
        g.edge_count(),
        g.vertex_count(),
        cor.m_plus,
        cor.m_minus,
        cor.bipartite
    );
    println!("  birth +1: computed {plus}, formula {}", cor.big_m_plus);
    println!("  birth -1: computed {minus}, formula {}", cor.big_m_minus);
    for item in report.items.iter().filter(|i| i.origin.is_birth()) {
        let sign = if item.origin == Origin::BirthPlusOne {
            1.0
        } else {
            -1.0
        };
        // U acts as -S on the birth space
        let shift_residual = (model.shift() * &item.eigenbasis.basis
            + &item.eigenbasis.basis * num_complex::Complex64::new(sign, 0.0))
        .norm();
        println!(
            "  {}: dim {}, ‖S v ± v‖ = {shift_residual:.1e}",
            item.origin.as_str(),
            item.multiplicity
        );
    }
    Ok(())
}

fn main() -> qwspec::Result<()> {
    let k4 = Digraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;
    let c4 = Digraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    show("K4", &k4)?;
    show("C4", &c4)
}
