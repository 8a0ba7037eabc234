//! Spectral analysis of abstract quantum walk models.
//!
//! A walk model is a pair `(d_A, S)` where `d_A: K2 -> K1` is a co-isometry
//! (`d_A d_A^* = I`) and `S` is a self-adjoint unitary on the arc space `K2`.
//! From it we build the coin `C = 2 d_A^* d_A - I`, the walk `U = S C` and
//! the discriminant `T = d_A S d_A^*`. The spectrum of `U` splits into an
//! inherited part, obtained from `Spec(T)` through the inverse Joukowsky map
//! `mu -> exp(±i arccos mu)`, and a birth part carried by
//! `ker d_A ∩ ker d_B`, where only `±1` occur.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`graph`] | symmetric digraphs, weight functions, edge-list / JSON parsing |
//! | [`operators`] | dense operators `d_A, d_B, S, C, U, T, T̃, L` |
//! | [`subspace`] | kernels, generalized kernels, images, intersections |
//! | [`spectral`] | eigensystem construction, oracle cross-check, verdict suite |
//! | [`report`] | JSON report, spectrum CSV, text table |
//! | [`random`] | seeded random graphs and Szegedy weights |
//! | [`linalg`] | matrix helpers, SVD and eigensolvers |
//! | [`cli`] | the `qwspec` command-line driver |
//!
//! ```
//! use qwspec::graph::{parse_edge_list, grover_weights};
//! use qwspec::operators::build_model;
//! use qwspec::spectral::{full_report, ReportOptions};
//!
//! let g = parse_edge_list("0 1\n1 2\n2 0").unwrap();
//! let w = grover_weights(&g);
//! let model = build_model(&g, &w, None).unwrap();
//! let report = full_report(&model, Some(&g), &ReportOptions::default()).unwrap();
//! assert_eq!(report.total_multiplicity(), 6);
//! assert!(report.all_pass());
//! ```

pub mod cli;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod operators;
pub mod random;
pub mod report;
pub mod spectral;
pub mod subspace;

pub use error::{Error, Result};
pub use graph::{Digraph, WeightFunction};
pub use operators::WalkModel;
pub use spectral::{EigItem, Origin, SpectralReport};
pub use subspace::Subspace;
