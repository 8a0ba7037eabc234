//! Grover walks on small named graphs, checked against the hand-built walk
//! operator and SVD nullities before the report is compared.

mod common;

use common::*;
use num_complex::Complex64;
use qwspec::graph::grover_weights;
use qwspec::spectral::{full_report, ReportOptions};
use qwspec::Origin;

struct Golden {
    graph: &'static str,
    /// (λ, inherited, birth)
    rows: Vec<(Complex64, usize, usize)>,
}

fn goldens() -> Vec<Golden> {
    use std::f64::consts::PI;
    let third = (-1.0f64 / 3.0).acos();
    vec![
        Golden {
            graph: "C3",
            rows: vec![
                (unit(0.0), 1, 1),
                (unit(2.0 * PI / 3.0), 2, 0),
                (unit(-2.0 * PI / 3.0), 2, 0),
            ],
        },
        Golden {
            graph: "C4",
            rows: vec![
                (unit(0.0), 1, 1),
                (unit(PI), 1, 1),
                (unit(PI / 2.0), 2, 0),
                (unit(-PI / 2.0), 2, 0),
            ],
        },
        Golden {
            graph: "K4",
            rows: vec![
                (unit(0.0), 1, 3),
                (unit(PI), 0, 2),
                (unit(third), 3, 0),
                (unit(-third), 3, 0),
            ],
        },
        Golden {
            graph: "P2",
            rows: vec![(unit(0.0), 1, 0), (unit(PI), 1, 0)],
        },
        Golden {
            graph: "K13",
            rows: vec![
                (unit(0.0), 1, 0),
                (unit(PI), 1, 0),
                (unit(PI / 2.0), 2, 0),
                (unit(-PI / 2.0), 2, 0),
            ],
        },
    ]
}

#[test]
fn walk_operator_matches_hand_construction() {
    for name in ["C3", "C4", "K4", "P2", "K13"] {
        let g = named(name);
        let model = grover_model(&g);
        let by_hand = walk_by_hand(&g, &grover_weights(&g));
        assert!((model.walk() - by_hand).norm() < 1e-13, "{name}");
    }
}

#[test]
fn goldens_are_confirmed_by_the_oracle() {
    for golden in goldens() {
        let g = named(golden.graph);
        let u = walk_by_hand(&g, &grover_weights(&g));
        let values: Vec<Complex64> = golden.rows.iter().map(|r| r.0).collect();
        let (mults, complete) = oracle_multiplicities(&u, &values);
        assert!(
            complete,
            "{}: oracle multiplicities {mults:?} do not exhaust the arc space",
            golden.graph
        );
        for (row, got) in golden.rows.iter().zip(&mults) {
            assert_eq!(row.1 + row.2, *got, "{} at {}", golden.graph, row.0);
        }
    }
}

#[test]
fn reports_reproduce_goldens() {
    for golden in goldens() {
        let g = named(golden.graph);
        let model = grover_model(&g);
        let report = full_report(&model, Some(&g), &ReportOptions::default()).unwrap();
        assert!(
            report.all_pass(),
            "{}: {:?}",
            golden.graph,
            report.failures()
        );
        assert_eq!(report.total_multiplicity(), g.arc_count());
        let grouped = report.grouped(1e-8);
        assert_eq!(grouped.len(), golden.rows.len(), "{}", golden.graph);
        for (lambda, inherited, birth) in &golden.rows {
            let by_origin = report.multiplicity_at(*lambda, 1e-8);
            let got_birth: usize = by_origin
                .iter()
                .filter(|(o, _)| o.is_birth())
                .map(|(_, k)| k)
                .sum();
            let got_inherited: usize = by_origin
                .iter()
                .filter(|(o, _)| !o.is_birth())
                .map(|(_, k)| k)
                .sum();
            assert_eq!(
                (got_inherited, got_birth),
                (*inherited, *birth),
                "{} at {lambda}",
                golden.graph
            );
        }
        for item in &report.items {
            let nearest = golden
                .rows
                .iter()
                .map(|r| angle_dist(r.0, item.value))
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= 1e-8,
                "{}: stray eigenvalue {}",
                golden.graph,
                item.value
            );
        }
    }
}

#[test]
fn p2_has_no_birth_space() {
    let g = named("P2");
    let report = full_report(&grover_model(&g), Some(&g), &ReportOptions::default()).unwrap();
    assert_eq!(report.dim_l_perp, 0);
    assert!(report.birth_vacuous);
    assert!(report.items.iter().all(|i| !i.origin.is_birth()));
}

#[test]
fn discriminant_spectrum_matches_normalized_adjacency() {
    for name in ["C3", "C4", "K4", "P2", "K13"] {
        let g = named(name);
        let report = full_report(&grover_model(&g), Some(&g), &ReportOptions::default()).unwrap();
        let want = sorted_eigenvalues(normalized_adjacency(&g));
        let got: Vec<f64> = report
            .spec_t
            .iter()
            .flat_map(|&(mu, k)| std::iter::repeat_n(mu, k))
            .collect();
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{name}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn inherited_eigenvectors_are_eigenvectors_of_the_hand_built_walk() {
    for name in ["C3", "C4", "K4", "K13"] {
        let g = named(name);
        let u = walk_by_hand(&g, &grover_weights(&g));
        let report = full_report(&grover_model(&g), Some(&g), &ReportOptions::default()).unwrap();
        for item in &report.items {
            for v in item.eigenbasis.columns() {
                let r = (&u * &v - &v * item.value).norm();
                assert!(r < 1e-12, "{name} {:?} residual {r}", item.origin);
            }
            if item.origin == Origin::InheritedGeneric {
                assert!(item.source_mu.unwrap().abs() < 1.0);
            }
        }
    }
}
