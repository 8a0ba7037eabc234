//! Dense complex matrix helpers shared by the operator and subspace code.
//!
//! Matrices are `nalgebra` values; the SVD and eigensolvers run on `faer`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// 2x2 block matrix `[a b; c d]`.
pub fn block2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let (r0, c0) = a.shape();
    let (r1, c1) = d.shape();
    assert_eq!(b.shape(), (r0, c1));
    assert_eq!(c.shape(), (r1, c0));
    let mut out = CMat::zeros(r0 + r1, c0 + c1);
    out.view_mut((0, 0), (r0, c0)).copy_from(a);
    out.view_mut((0, c0), (r0, c1)).copy_from(b);
    out.view_mut((r0, 0), (r1, c0)).copy_from(c);
    out.view_mut((r0, c0), (r1, c1)).copy_from(d);
    out
}

/// Side-by-side concatenation `[a | b]`.
pub fn hcat(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn matrix_power(m: &CMat, power: u32) -> CMat {
    assert!(m.is_square());
    let mut out = identity(m.nrows());
    for _ in 0..power {
        out = &out * m;
    }
    out
}

/// Full singular value decomposition `mat = U Σ V^*` with `U` square of
/// order `rows`, `V` square of order `cols`, and `min(rows, cols)` singular
/// values in decreasing order.
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

fn to_faer(mat: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(mat.nrows(), mat.ncols(), |i, j| mat[(i, j)])
}

fn from_faer(mat: faer::MatRef<'_, Complex64>) -> CMat {
    CMat::from_fn(mat.nrows(), mat.ncols(), |i, j| mat[(i, j)])
}

pub fn svd(mat: &CMat) -> crate::Result<Svd> {
    let (rows, cols) = mat.shape();
    if rows == 0 || cols == 0 {
        return Ok(Svd {
            singular_values: Vec::new(),
            u: identity(rows),
            v: identity(cols),
        });
    }
    let dec = to_faer(mat)
        .svd()
        .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    Ok(Svd {
        singular_values: dec.S().column_vector().iter().map(|z| z.re).collect(),
        u: from_faer(dec.U()),
        v: from_faer(dec.V()),
    })
}

pub fn singular_values(mat: &CMat) -> crate::Result<Vec<f64>> {
    if mat.is_empty() {
        return Ok(Vec::new());
    }
    let values = to_faer(mat)
        .singular_values()
        .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    Ok(values)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian
/// part of `mat`.
pub fn hermitian_eigen(mat: &CMat) -> crate::Result<(Vec<f64>, CMat)> {
    if mat.is_empty() {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    let herm = (mat + mat.adjoint()) * c(0.5, 0.0);
    let dec = to_faer(&herm)
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver did not converge: {e:?}")))?;
    Ok((
        dec.S().column_vector().iter().map(|z| z.re).collect(),
        from_faer(dec.U()),
    ))
}

/// Eigenvalues of a general square matrix.
pub fn eigenvalues(mat: &CMat) -> crate::Result<Vec<Complex64>> {
    if mat.is_empty() {
        return Ok(Vec::new());
    }
    to_faer(mat)
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigensolver did not converge: {e:?}")))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> crate::Result<f64> {
    Ok(singular_values(m)?.into_iter().fold(0.0, f64::max))
}

/// Serde adapter: a dense matrix as an array of rows, each row an array of
/// `[re, im]` pairs. Column count is recovered from the first row, so empty
/// matrices carry an explicit shape alongside (see [`MatrixJson`]).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl From<&CMat> for MatrixJson {
    fn from(m: &CMat) -> Self {
        let data = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl TryFrom<&MatrixJson> for CMat {
    type Error = String;

    fn try_from(j: &MatrixJson) -> Result<Self, String> {
        if j.data.len() != j.rows {
            return Err(format!("expected {} rows, found {}", j.rows, j.data.len()));
        }
        let mut m = CMat::zeros(j.rows, j.cols);
        for (i, row) in j.data.iter().enumerate() {
            if row.len() != j.cols {
                return Err(format!(
                    "row {i}: expected {} columns, found {}",
                    j.cols,
                    row.len()
                ));
            }
            for (k, z) in row.iter().enumerate() {
                m[(i, k)] = c(z[0], z[1]);
            }
        }
        Ok(m)
    }
}

pub fn serialize_matrix<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    MatrixJson::from(m).serialize(s)
}

pub fn deserialize_matrix<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
    let j = MatrixJson::deserialize(d)?;
    CMat::try_from(&j).map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_layout() {
        let a = CMat::from_element(1, 1, c(1.0, 0.0));
        let b = CMat::from_element(1, 1, c(2.0, 0.0));
        let cc = CMat::from_element(1, 1, c(3.0, 0.0));
        let d = CMat::from_element(1, 1, c(4.0, 0.0));
        let m = block2(&a, &b, &cc, &d);
        assert_eq!(m[(0, 1)], c(2.0, 0.0));
        assert_eq!(m[(1, 0)], c(3.0, 0.0));
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = CMat::from_fn(2, 3, |i, j| c(i as f64, 0.1 * j as f64));
        let json = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        let back: MatrixJson = serde_json::from_str(&json).unwrap();
        assert_eq!(CMat::try_from(&back).unwrap(), m);
    }

    #[test]
    fn power_of_nilpotent() {
        let mut n = CMat::zeros(2, 2);
        n[(0, 1)] = ONE;
        assert_eq!(frobenius(&matrix_power(&n, 2)), 0.0);
        assert_eq!(matrix_power(&n, 0), identity(2));
    }
}
