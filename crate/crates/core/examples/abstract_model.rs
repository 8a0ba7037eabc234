//! A walk model given only by `d_A` and the shift `S`, with no graph behind
//! it. Here the arcs of a 4-cycle carry non-uniform complex weights and
//! the model is assembled by hand.
//!
//! `cargo run --example abstract_model`

use nalgebra::DMatrix;
use num_complex::Complex64;
use qwspec::operators::build_abstract_model;
use qwspec::report::spectrum_table;
use qwspec::spectral::{full_report, ReportOptions};

fn main() -> qwspec::Result<()> {
    // arcs: 0:0→1 1:1→0 2:1→2 3:2→1 4:2→3 5:3→2 6:3→0 7:0→3
    let origin = [0, 1, 1, 2, 2, 3, 3, 0];
    let reverse = [1, 0, 3, 2, 5, 4, 7, 6];
    let (a, b) = (0.6f64, 0.8f64);
    let weights = [
        Complex64::from_polar(a, 0.3),
        Complex64::from_polar(a, -1.1),
        Complex64::from_polar(b, 0.7),
        Complex64::from_polar(a, 2.0),
        Complex64::from_polar(b, 0.0),
        Complex64::from_polar(a, 0.4),
        Complex64::from_polar(b, -0.9),
        Complex64::from_polar(b, 1.5),
    ];
    let mut d_a = DMatrix::<Complex64>::zeros(4, 8);
    for e in 0..8 {
        d_a[(origin[e], e)] = weights[e].conj();
    }
    let shift = DMatrix::<Complex64>::from_fn(8, 8, |i, j| {
        if reverse[j] == i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    let model = build_abstract_model(d_a, shift, None)?;
    let options = ReportOptions {
        abstract_mode: true,
        ..ReportOptions::default()
    };
    let report = full_report(&model, None, &options)?;
    print!("{}", spectrum_table(&report));
    println!(
        "m+ = {}, m- = {}, all checks pass: {}",
        report.m_plus,
        report.m_minus,
        report.all_pass()
    );
    Ok(())
}
