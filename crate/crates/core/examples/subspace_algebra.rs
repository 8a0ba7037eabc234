//! Subspace toolkit: kernels, images, intersections and complements with
//! explicit rank tolerances.
//!
//! `cargo run --example subspace_algebra`

use nalgebra::DMatrix;
use num_complex::Complex64;
use qwspec::subspace::{
    complement_within, image, intersect, kernel, orthogonal_complement, subspace_equal, sum,
};

fn main() -> qwspec::Result<()> {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    // rank 2 map on C^4
    let a = DMatrix::from_row_slice(
        3,
        4,
        &[
            z(1.0, 0.0),
            z(0.0, 1.0),
            z(0.0, 0.0),
            z(1.0, 0.0),
            z(0.0, 0.0),
            z(1.0, 0.0),
            z(1.0, -1.0),
            z(0.0, 0.0),
            z(1.0, 0.0),
            z(1.0, 1.0),
            z(1.0, -1.0),
            z(1.0, 0.0),
        ],
    );
    let tol = 1e-12;
    let ker = kernel(&a, tol)?;
    let row_space = image(&a.adjoint(), tol)?;
    println!(
        "dim ker A = {}, dim row space = {}",
        ker.dim(),
        row_space.dim()
    );

    let perp = orthogonal_complement(&ker)?;
    println!(
        "row space = (ker A)⊥: {}",
        subspace_equal(&perp, &row_space, 1e-10)?.equal
    );

    let whole = sum(&[&ker, &row_space], tol)?;
    println!("ker A + row space has dim {}", whole.dim());
    println!(
        "ker A ∩ row space has dim {}",
        intersect(&ker, &row_space)?.dim()
    );

    let rest = complement_within(&ker, &whole)?;
    println!("part of C^4 orthogonal to ker A has dim {}", rest.dim());
    Ok(())
}
