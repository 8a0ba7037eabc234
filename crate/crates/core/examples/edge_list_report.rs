//! Parse a weighted edge list, build the model, and print the JSON report
//! and the spectrum CSV that the command line tool writes to disk.
//!
//! `cargo run --example edge_list_report`

use qwspec::graph::parse_edge_list_weighted;
use qwspec::operators::build_model;
use qwspec::report::{report_json, spectrum_csv, to_json_string};
use qwspec::spectral::{full_report, ReportOptions};

const EDGES: &str = "\
# path 10 - 20 - 30; columns: u v w(u->v) w(v->u), each re[,im]
10 20 1 0.5,0.5
20 30 0.5,-0.5 0,1
";

fn main() -> qwspec::Result<()> {
    let input = parse_edge_list_weighted(EDGES)?;
    let weights = input.weights.expect("weighted edge list");
    let model = build_model(&input.graph, &weights, None)?;
    let report = full_report(&model, Some(&input.graph), &ReportOptions::default())?;
    print!("{}", spectrum_csv(&report));
    print!(
        "{}",
        to_json_string(&report_json(&report, model.n(), model.m(), false))?
    );
    Ok(())
}
