//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's operator or spectral code; the walk operator is built
//! from the arc list by hand and eigenspaces come from SVD nullities.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qwspec::graph::{grover_weights, Digraph, WeightFunction};
use qwspec::operators::build_model;
use qwspec::WalkModel;

pub type M = DMatrix<Complex64>;

pub fn named(name: &str) -> Digraph {
    let edges: Vec<(usize, usize)> = match name {
        "C3" => vec![(0, 1), (1, 2), (2, 0)],
        "C4" => vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        "K4" => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        "P2" => vec![(0, 1)],
        "K13" => vec![(0, 1), (0, 2), (0, 3)],
        _ => panic!("unknown graph {name}"),
    };
    let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
    Digraph::from_edges(n, &edges).unwrap()
}

pub fn grover_model(g: &Digraph) -> WalkModel {
    build_model(g, &grover_weights(g), None).unwrap()
}

/// `U` for weights `w`, entrywise: a walker on arc `e` moves to every arc `g`
/// leaving `t(e)` with amplitude `2 w(g) conj(w(ē))`, minus the identity on
/// the reversed arc.
pub fn walk_by_hand(g: &Digraph, w: &WeightFunction) -> M {
    let m = g.arc_count();
    let arcs = g.arcs();
    M::from_fn(m, m, |row, col| {
        // (S C)[row, col] = C[rev(row), col]
        let r = g.reverse(row);
        let mut z = Complex64::new(0.0, 0.0);
        if arcs[r].origin == arcs[col].origin {
            z += w.weights[r] * w.weights[col].conj() * 2.0;
        }
        if r == col {
            z -= 1.0;
        }
        z
    })
}

/// Symmetrically normalized adjacency matrix `D^{-1/2} A D^{-1/2}`.
pub fn normalized_adjacency(g: &Digraph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for arc in g.arcs() {
        let du = g.degree(arc.origin) as f64;
        let dv = g.degree(arc.terminus) as f64;
        a[(arc.origin, arc.terminus)] = 1.0 / (du * dv).sqrt();
    }
    a
}

pub fn sorted_eigenvalues(a: DMatrix<f64>) -> Vec<f64> {
    let f = faer::Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let mut v = f.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Full SVD through faer: singular values (padded with zeros up to the
/// column count), left factor, right factor.
pub fn full_svd(a: &M) -> (Vec<f64>, M, M) {
    let f = faer::Mat::<Complex64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let svd = f.svd().unwrap();
    let back = |m: faer::MatRef<'_, Complex64>| M::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let mut sigma: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    sigma.resize(a.ncols(), 0.0);
    (sigma, back(svd.U()), back(svd.V()))
}

/// Orthonormal basis of `ker a`.
pub fn null_basis(a: &M, tol: f64) -> M {
    let (sigma, _, v) = full_svd(a);
    let cols: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] <= tol).collect();
    let mut out = M::zeros(a.ncols(), cols.len());
    for (j, &i) in cols.iter().enumerate() {
        out.set_column(j, &v.column(i));
    }
    out
}

/// Orthonormal basis of the column space.
pub fn range_basis(a: &M) -> M {
    if a.ncols() == 0 {
        return M::zeros(a.nrows(), 0);
    }
    let (sigma, u, _) = full_svd(a);
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sigma.len().min(a.nrows()))
        .filter(|&i| sigma[i] > 1e-10 * top)
        .collect();
    let mut q = M::zeros(a.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        q.set_column(j, &u.column(i));
    }
    q
}

pub fn eigenspace(u: &M, lambda: Complex64, tol: f64) -> M {
    let shifted = u - M::identity(u.nrows(), u.ncols()) * lambda;
    null_basis(&shifted, tol)
}

/// Orthogonal projector onto the span of `basis`.
pub fn projector(basis: &M) -> M {
    let q = range_basis(basis);
    &q * q.adjoint()
}

pub fn projector_distance(a: &M, b: &M) -> f64 {
    (projector(a) - projector(b)).norm()
}

/// Distinct eigenvalues with multiplicities: each candidate's multiplicity
/// is the nullity of `U - λ`, and the total must exhaust the dimension
/// since `U` is unitary.
pub fn oracle_multiplicities(u: &M, candidates: &[Complex64]) -> (Vec<usize>, bool) {
    let mults: Vec<usize> = candidates
        .iter()
        .map(|&l| eigenspace(u, l, 1e-8).ncols())
        .collect();
    let complete = mults.iter().sum::<usize>() == u.nrows();
    (mults, complete)
}

pub fn unit(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

pub fn angle_dist(a: Complex64, b: Complex64) -> f64 {
    (a * b.conj()).arg().abs()
}

/// `|E| - |V|`.
pub fn cycle_rank(g: &Digraph) -> i64 {
    g.edge_count() as i64 - g.vertex_count() as i64
}

/// Dimension of the birth space at `sign`: `U` acts as `-S` there, so this
/// is `dim(ker d_A ∩ ker(I + sign·S))`, from the stacked constraints.
pub fn birth_dim(g: &Digraph, w: &WeightFunction, sign: f64) -> usize {
    let n = g.vertex_count();
    let m = g.arc_count();
    let mut stacked = M::zeros(n + m, m);
    for (e, arc) in g.arcs().iter().enumerate() {
        stacked[(arc.origin, e)] = w.weights[e].conj();
        stacked[(n + e, e)] += Complex64::new(1.0, 0.0);
        stacked[(n + e, g.reverse(e))] += Complex64::new(sign, 0.0);
    }
    null_basis(&stacked, 1e-9).ncols()
}
