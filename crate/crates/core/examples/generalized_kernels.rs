//! The companion operator `T̃` at `±1`: `ker(I ∓ T̃)` has dimension `m±`,
//! `ker(I ∓ T̃)^2` doubles it, and the lifting `L` carries the part of the
//! square kernel orthogonal to the plain kernel onto the inherited `±1`
//! eigenspace of `U`.
//!
//! `cargo run --example generalized_kernels`

use qwspec::graph::{grover_weights, Digraph};
use qwspec::linalg::identity;
use qwspec::operators::build_model;
use qwspec::spectral::{Analysis, Tolerances};
use qwspec::subspace::{generalized_kernel, subspace_equal};

fn main() -> qwspec::Result<()> {
    // even cycle: bipartite, so both +1 and -1 occur in Spec(T)
    let g = Digraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])?;
    let model = build_model(&g, &grover_weights(&g), None)?;
    let analysis = Analysis::new(&model, Tolerances::for_model(&model))?;
    let n2 = 2 * model.n();

    for sign in [1.0, -1.0] {
        let shifted = identity(n2) - model.companion() * num_complex::Complex64::new(sign, 0.0);
        let dims: Vec<usize> = (1..=3)
            .map(|k| {
                generalized_kernel(&shifted, k, analysis.tol.rank_tol).map(|g| g.subspace.dim())
            })
            .collect::<qwspec::Result<_>>()?;
        let from_chain = analysis.generalized_pm1_space(sign)?;
        let direct = analysis.direct_pm1_space(sign)?;
        let cmp = subspace_equal(&from_chain, &direct, 1e-8)?;
        println!(
            "{sign:+}: m = {}, dim ker^k for k = 1, 2, 3: {dims:?}; L(ker^2 ⊖ ker) vs d_A^* ker(I ∓ T): distance {:.1e}",
            analysis.m_sign(sign),
            cmp.distance
        );
    }
    Ok(())
}
