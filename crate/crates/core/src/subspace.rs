//! Subspace algebra on dense complex matrices.
//!
//! A [`Subspace`] is an orthonormal column basis. Ranks are decided from
//! singular values: a singular value `σ` counts as zero when
//! `σ <= rank_tol · scale`, where `scale` is the largest singular value of
//! the operator involved (so a numerically zero matrix has a full kernel).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    deserialize_matrix, frobenius_diff, identity, matrix_power, serialize_matrix, spectral_norm,
    svd, CMat, CVec,
};

/// Default threshold on `sin θ` when intersecting subspaces.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-8;

/// Default projector distance below which two subspaces count as equal.
pub const DEFAULT_EQUAL_TOL: f64 = 1e-8;

/// The usual numerical-rank rule `max(d1, d2) · ε`, relative to `σ_max`.
pub fn standard_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols).max(1) as f64 * f64::EPSILON
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient_dim: usize,
    #[serde(
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub basis: CMat,
    pub rank_tol: f64,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, rank_tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: CMat::zeros(ambient_dim, 0),
            rank_tol,
        }
    }

    pub fn full(ambient_dim: usize, rank_tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: identity(ambient_dim),
            rank_tol,
        }
    }

    /// Orthonormal basis of the span of the given columns.
    pub fn span_of(columns: &CMat, rank_tol: f64) -> Result<Self> {
        image(columns, rank_tol)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orthogonal projector `B B^*`.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// `‖B^* B - I‖_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        frobenius_diff(&(self.basis.adjoint() * &self.basis), &identity(self.dim()))
    }

    /// Distance from `v` to the subspace, relative to `‖v‖`.
    pub fn relative_distance(&self, v: &CVec) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * v);
        (v - proj).norm() / norm
    }

    pub fn columns(&self) -> impl Iterator<Item = CVec> + '_ {
        self.basis.column_iter().map(|c| c.into_owned())
    }

    fn ensure_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: format!("ambient dimension {}", self.ambient_dim),
                found: format!("{}", other.ambient_dim),
            });
        }
        Ok(())
    }
}

/// Singular values paired with all right singular vectors; a wide matrix
/// gets explicit zeros for the directions beyond its row count.
fn right_singular_pairs(mat: &CMat) -> Result<(Vec<f64>, CMat)> {
    let dec = svd(mat)?;
    let mut sigma = dec.singular_values;
    sigma.resize(mat.ncols(), 0.0);
    Ok((sigma, dec.v))
}

fn select_columns(mat: &CMat, keep: &[usize]) -> CMat {
    let mut out = CMat::zeros(mat.nrows(), keep.len());
    for (k, &j) in keep.iter().enumerate() {
        out.set_column(k, &mat.column(j));
    }
    out
}

/// Right singular vectors with `σ <= abs_threshold`.
fn null_basis(mat: &CMat, abs_threshold: f64) -> Result<CMat> {
    let cols = mat.ncols();
    if mat.nrows() == 0 {
        return Ok(identity(cols));
    }
    let (sigma, v) = right_singular_pairs(mat)?;
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&j| sigma[j] <= abs_threshold)
        .collect();
    Ok(select_columns(&v, &keep))
}

fn sigma_max(mat: &CMat) -> Result<f64> {
    spectral_norm(mat)
}

/// Numerical null space of `mat`.
pub fn kernel(mat: &CMat, rank_tol: f64) -> Result<Subspace> {
    let cols = mat.ncols();
    if cols == 0 || mat.nrows() == 0 {
        return Ok(Subspace::full(cols, rank_tol));
    }
    let (sigma, v) = right_singular_pairs(mat)?;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let threshold = if smax == 0.0 {
        rank_tol
    } else {
        rank_tol * smax
    };
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&j| sigma[j] <= threshold)
        .collect();
    Ok(Subspace {
        ambient_dim: cols,
        basis: select_columns(&v, &keep),
        rank_tol,
    })
}

/// Column space of `mat`.
pub fn image(mat: &CMat, rank_tol: f64) -> Result<Subspace> {
    image_scaled(mat, rank_tol, sigma_max(mat)?)
}

/// Column space with the rank threshold `rank_tol · scale`.
fn image_scaled(mat: &CMat, rank_tol: f64, scale: f64) -> Result<Subspace> {
    let rows = mat.nrows();
    if mat.ncols() == 0 || rows == 0 || scale == 0.0 {
        return Ok(Subspace::zero(rows, rank_tol));
    }
    let dec = svd(mat)?;
    let threshold = rank_tol * scale;
    let keep: Vec<usize> = (0..dec.singular_values.len())
        .filter(|&j| dec.singular_values[j] > threshold)
        .collect();
    Ok(Subspace {
        ambient_dim: rows,
        basis: select_columns(&dec.u, &keep),
        rank_tol,
    })
}

/// `ker(mat^power)` together with the stabilization test against
/// `ker(mat^(power+1))`.
#[derive(Debug, Clone)]
pub struct GeneralizedKernel {
    pub subspace: Subspace,
    pub power: u32,
    /// Dimension of `ker(mat^(power+1))`.
    pub next_dim: usize,
    pub stabilized: bool,
}

pub fn generalized_kernel(mat: &CMat, power: u32, rank_tol: f64) -> Result<GeneralizedKernel> {
    if !mat.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", mat.nrows(), mat.ncols()),
        });
    }
    if power == 0 {
        return Err(Error::Domain(
            "generalized kernel needs a positive power".into(),
        ));
    }
    let p = matrix_power(mat, power);
    let subspace = kernel(&p, rank_tol)?;
    let next_dim = kernel(&(&p * mat), rank_tol)?.dim();
    Ok(GeneralizedKernel {
        stabilized: next_dim == subspace.dim(),
        subspace,
        power,
        next_dim,
    })
}

/// Smallest power at which the chain `ker(mat^k)` stops growing, searched up
/// to the ambient dimension (the Cayley-Hamilton bound).
pub fn stable_generalized_kernel(mat: &CMat, rank_tol: f64) -> Result<GeneralizedKernel> {
    let cap = mat.nrows().max(1) as u32;
    let mut last = generalized_kernel(mat, 1, rank_tol)?;
    while !last.stabilized && last.power < cap {
        last = generalized_kernel(mat, last.power + 1, rank_tol)?;
    }
    Ok(last)
}

/// `a ∩ b`, keeping principal directions with `sin θ <= DEFAULT_ANGLE_TOL`.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    intersect_with_tol(a, b, DEFAULT_ANGLE_TOL)
}

pub fn intersect_with_tol(a: &Subspace, b: &Subspace, angle_tol: f64) -> Result<Subspace> {
    a.ensure_same_ambient(b)?;
    let rank_tol = a.rank_tol.max(b.rank_tol);
    if a.is_zero() || b.is_zero() {
        return Ok(Subspace::zero(a.ambient_dim, rank_tol));
    }
    // (I - P_b) A x = 0 exactly on the intersection; the singular values of
    // (I - P_b) A are the sines of the principal angles.
    let residual = &a.basis - &b.basis * (b.basis.adjoint() * &a.basis);
    let coeffs = null_basis(&residual, angle_tol)?;
    let basis = &a.basis * coeffs;
    Ok(Subspace {
        ambient_dim: a.ambient_dim,
        basis: image_scaled(&basis, rank_tol, 1.0)?.basis,
        rank_tol,
    })
}

/// Orthogonal complement in the ambient space.
pub fn orthogonal_complement(a: &Subspace) -> Result<Subspace> {
    let d = a.ambient_dim;
    if a.is_zero() {
        return Ok(Subspace::full(d, a.rank_tol));
    }
    Ok(Subspace {
        ambient_dim: d,
        basis: null_basis(&a.basis.adjoint(), 0.5)?,
        rank_tol: a.rank_tol,
    })
}

/// Part of `outer` orthogonal to `inner` (for `inner ⊂ outer`). Its vectors
/// represent the set difference `outer \ inner` up to additions from `inner`.
pub fn complement_within(inner: &Subspace, outer: &Subspace) -> Result<Subspace> {
    inner.ensure_same_ambient(outer)?;
    if outer.is_zero() || inner.is_zero() {
        return Ok(outer.clone());
    }
    let overlap = inner.basis.adjoint() * &outer.basis;
    let coeffs = null_basis(&overlap, 0.5)?;
    Ok(Subspace {
        ambient_dim: outer.ambient_dim,
        basis: &outer.basis * coeffs,
        rank_tol: outer.rank_tol,
    })
}

/// Span of the union of several subspaces.
pub fn sum(parts: &[&Subspace], rank_tol: f64) -> Result<Subspace> {
    let Some(first) = parts.first() else {
        return Err(Error::Domain("sum of an empty family".into()));
    };
    let mut total = 0;
    for p in parts {
        first.ensure_same_ambient(p)?;
        total += p.dim();
    }
    let mut cols = CMat::zeros(first.ambient_dim, total);
    let mut at = 0;
    for p in parts {
        cols.view_mut((0, at), (first.ambient_dim, p.dim()))
            .copy_from(&p.basis);
        at += p.dim();
    }
    image_scaled(&cols, rank_tol, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubspaceComparison {
    pub equal: bool,
    /// `‖P_A - P_B‖_F`.
    pub distance: f64,
    pub dim_a: usize,
    pub dim_b: usize,
}

pub fn subspace_equal(a: &Subspace, b: &Subspace, tol: f64) -> Result<SubspaceComparison> {
    a.ensure_same_ambient(b)?;
    let distance = frobenius_diff(&a.projector(), &b.projector());
    Ok(SubspaceComparison {
        equal: a.dim() == b.dim() && distance <= tol,
        distance,
        dim_a: a.dim(),
        dim_b: b.dim(),
    })
}

/// `mat · a`, with rank judged against the size of `mat` itself so that a
/// subspace annihilated by `mat` maps to `{0}`.
pub fn apply_map(mat: &CMat, a: &Subspace, rank_tol: f64) -> Result<Subspace> {
    if mat.ncols() != a.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: format!("operator with {} columns", a.ambient_dim),
            found: format!("{}", mat.ncols()),
        });
    }
    let mapped = mat * &a.basis;
    let scale = sigma_max(mat)?.max(sigma_max(&mapped)?);
    image_scaled(&mapped, rank_tol, scale)
}
