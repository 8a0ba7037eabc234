//! Dense operators of a walk model.
//!
//! Conventions: `K1` is the vertex space (dimension `n`), `K2` the arc space
//! (dimension `m`). `d_A, d_B: K2 -> K1` are stored as `n x m` matrices,
//! `L: K1² -> K2` as the `m x 2n` matrix `[d_A^* | d_B^*]` and
//! `T̃ = [0, -I; I, 2T]` as a `2n x 2n` matrix.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{validate_weights, Digraph, WeightFunction, DEFAULT_TOL_NORM};
use crate::linalg::{
    block2, c, deserialize_matrix, frobenius, frobenius_diff, hcat, hermitian_eigen, identity,
    matrix_power, serialize_matrix, CMat, ONE,
};

/// `100 · ε · m`, the default operator-identity tolerance for arc dimension `m`.
pub fn default_tol_op(m: usize) -> f64 {
    100.0 * f64::EPSILON * m.max(1) as f64
}

/// Where a model came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the canonical edge list and weights, for graph models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_hash: Option<String>,
    /// `grover`, `file`, `random` or `abstract`.
    pub weight_scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_labels: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// All operators of one walk model, computed once and frozen.
#[derive(Debug, Clone)]
pub struct WalkModel {
    n: usize,
    m: usize,
    d_a: CMat,
    d_b: CMat,
    shift: CMat,
    coin: CMat,
    walk: CMat,
    discriminant: CMat,
    companion: CMat,
    lifting: CMat,
    tol_op: f64,
    pub provenance: Provenance,
}

/// Residual of one operator identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: f64,
    pub pass: bool,
}

impl WalkModel {
    /// Derives `C, U, T, T̃, L` from `(d_A, d_B, S)` without checking any
    /// identity. `d_B` is taken as given, so a model whose `d_B` differs from
    /// `d_A S` can be represented (and then fails verification).
    pub fn from_parts(d_a: CMat, d_b: CMat, shift: CMat, tol_op: f64) -> Result<Self> {
        let (n, m) = d_a.shape();
        if d_b.shape() != (n, m) {
            return Err(Error::DimensionMismatch {
                expected: format!("d_B of shape {n}x{m}"),
                found: format!("{}x{}", d_b.nrows(), d_b.ncols()),
            });
        }
        if shift.shape() != (m, m) {
            return Err(Error::DimensionMismatch {
                expected: format!("S of shape {m}x{m}"),
                found: format!("{}x{}", shift.nrows(), shift.ncols()),
            });
        }
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch {
                expected: "nonzero dimensions".into(),
                found: format!("{n}x{m}"),
            });
        }
        if !(tol_op > 0.0 && tol_op.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol_op must be positive, got {tol_op}"
            )));
        }
        let d_a_star = d_a.adjoint();
        let d_b_star = d_b.adjoint();
        let coin = (&d_a_star * &d_a) * c(2.0, 0.0) - identity(m);
        let walk = &shift * &coin;
        let discriminant = &d_a * &d_b_star;
        let zero = CMat::zeros(n, n);
        let companion = block2(
            &zero,
            &(-identity(n)),
            &identity(n),
            &(&discriminant * c(2.0, 0.0)),
        );
        let lifting = hcat(&d_a_star, &d_b_star);
        Ok(WalkModel {
            n,
            m,
            d_a,
            d_b,
            shift,
            coin,
            walk,
            discriminant,
            companion,
            lifting,
            tol_op,
            provenance: Provenance::default(),
        })
    }

    /// Dimension of the vertex space `K1`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the arc space `K2`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d_a(&self) -> &CMat {
        &self.d_a
    }

    pub fn d_b(&self) -> &CMat {
        &self.d_b
    }

    pub fn shift(&self) -> &CMat {
        &self.shift
    }

    pub fn coin(&self) -> &CMat {
        &self.coin
    }

    /// `U = S C`.
    pub fn walk(&self) -> &CMat {
        &self.walk
    }

    /// `T = d_A d_B^*`.
    pub fn discriminant(&self) -> &CMat {
        &self.discriminant
    }

    /// `T̃ = [0, -I; I, 2T]`.
    pub fn companion(&self) -> &CMat {
        &self.companion
    }

    /// `L = [d_A^* | d_B^*]`.
    pub fn lifting(&self) -> &CMat {
        &self.lifting
    }

    pub fn tol_op(&self) -> f64 {
        self.tol_op
    }

    /// The inverse of `T̃` read off its block structure: `[2T, I; -I, 0]`.
    pub fn companion_inverse(&self) -> CMat {
        let n = self.n;
        block2(
            &(&self.discriminant * c(2.0, 0.0)),
            &identity(n),
            &(-identity(n)),
            &CMat::zeros(n, n),
        )
    }

    /// `‖T̃ · [2T, I; -I, 0] - I‖_F`.
    pub fn companion_inverse_residual(&self) -> f64 {
        frobenius_diff(
            &(&self.companion * self.companion_inverse()),
            &identity(2 * self.n),
        )
    }

    /// `‖U L - L T̃‖_F`.
    pub fn intertwining_residual(&self) -> f64 {
        frobenius_diff(
            &(&self.walk * &self.lifting),
            &(&self.lifting * &self.companion),
        )
    }

    /// Residual of the power identity
    /// `(I - sT̃)^{2k} = 2^k (-sT̃)^k diag((I - sT)^k, (I - sT)^k)` with
    /// `s = ±1`, i.e. both the `+1` and `-1` forms.
    pub fn power_identity_residual(&self, sign: f64, k: u32) -> f64 {
        let n = self.n;
        let s = c(sign, 0.0);
        let lhs = matrix_power(&(identity(2 * n) - &self.companion * s), 2 * k);
        let inner = matrix_power(&(identity(n) - &self.discriminant * s), k);
        let diag = block2(&inner, &CMat::zeros(n, n), &CMat::zeros(n, n), &inner);
        let rhs = matrix_power(&(&self.companion * (-s)), k) * diag * c(2f64.powi(k as i32), 0.0);
        frobenius_diff(&lhs, &rhs)
    }

    /// Residuals of the standing identities of the model.
    pub fn identity_checks(&self) -> Vec<IdentityCheck> {
        let tol = self.tol_op;
        let check = |name, residual: f64| IdentityCheck {
            name,
            residual,
            pass: residual <= tol,
        };
        let s_star = self.shift.adjoint();
        let c_star = self.coin.adjoint();
        vec![
            check("shift_self_adjoint", frobenius_diff(&self.shift, &s_star)),
            check(
                "shift_involution",
                frobenius_diff(&(&self.shift * &self.shift), &identity(self.m)),
            ),
            check(
                "assumption_dA_dA_star",
                frobenius_diff(&(&self.d_a * self.d_a.adjoint()), &identity(self.n)),
            ),
            check(
                "dB_equals_dA_S",
                frobenius_diff(&self.d_b, &(&self.d_a * &self.shift)),
            ),
            check("coin_self_adjoint", frobenius_diff(&self.coin, &c_star)),
            check(
                "coin_involution",
                frobenius_diff(&(&self.coin * &self.coin), &identity(self.m)),
            ),
            check(
                "walk_unitary",
                frobenius_diff(&(self.walk.adjoint() * &self.walk), &identity(self.m)),
            ),
            check(
                "discriminant_self_adjoint",
                frobenius_diff(&self.discriminant, &self.discriminant.adjoint()),
            ),
        ]
    }

    /// Largest `|μ|` over the eigenvalues of the Hermitian part of `T`.
    pub fn discriminant_spectral_radius(&self) -> Result<f64> {
        let (values, _) = hermitian_eigen(&self.discriminant)?;
        Ok(values.iter().fold(0.0f64, |acc, x| acc.max(x.abs())))
    }

    /// `false` when `Spec(T)` leaves `[-1, 1]` by more than `tol_op`, i.e. the
    /// model is outside the self-adjoint contraction regime the spectral
    /// mapping relies on. Reported, never raised.
    pub fn discriminant_in_regime(&self) -> Result<bool> {
        Ok(self.discriminant_spectral_radius()? <= 1.0 + self.tol_op)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

/// Builds the Szegedy walk of a weighted graph:
/// `(d_A)[v, e] = conj(w(e))` when `o(e) = v`, `S[e, ē] = 1`.
pub fn build_model(g: &Digraph, w: &WeightFunction, tol_op: Option<f64>) -> Result<WalkModel> {
    build_model_with_tolerances(g, w, DEFAULT_TOL_NORM, tol_op)
}

/// [`build_model`] with an explicit weight-normalization tolerance.
pub fn build_model_with_tolerances(
    g: &Digraph,
    w: &WeightFunction,
    tol_norm: f64,
    tol_op: Option<f64>,
) -> Result<WalkModel> {
    let verdict = validate_weights(g, w, tol_norm)?;
    if !verdict.pass {
        let (v, defect) = verdict.worst_vertex().unwrap_or((0, 0.0));
        return Err(Error::InvalidWeights(if verdict.zero_arcs.is_empty() {
            format!(
                "normalization defect {defect:e} at vertex {}",
                g.labels()[v]
            )
        } else {
            format!("zero weight on arc {}", verdict.zero_arcs[0])
        }));
    }
    let n = g.vertex_count();
    let m = g.arc_count();
    let mut d_a = CMat::zeros(n, m);
    let mut shift = CMat::zeros(m, m);
    for (e, arc) in g.arcs().iter().enumerate() {
        d_a[(arc.origin, e)] = w.weights[e].conj();
        shift[(e, g.reverse(e))] = ONE;
    }
    let d_b = &d_a * &shift;
    let tol = tol_op.unwrap_or_else(|| default_tol_op(m));
    let model = WalkModel::from_parts(d_a, d_b, shift, tol)?.with_provenance(Provenance {
        graph_hash: Some(graph_hash(g, w)),
        weight_scheme: "file".into(),
        vertex_labels: Some(g.labels().to_vec()),
        seed: None,
    });
    if let Some(failed) = model.identity_checks().into_iter().find(|c| !c.pass) {
        return Err(Error::ModelInvariantViolation {
            identity: failed.name.into(),
            residual: failed.residual,
        });
    }
    Ok(model)
}

/// Builds a model from an arbitrary co-isometry `d_A` and self-adjoint
/// unitary `S`, not necessarily coming from a graph.
pub fn build_abstract_model(d_a: CMat, shift: CMat, tol_op: Option<f64>) -> Result<WalkModel> {
    let (n, m) = d_a.shape();
    if shift.shape() != (m, m) {
        return Err(Error::DimensionMismatch {
            expected: format!("S of shape {m}x{m}"),
            found: format!("{}x{}", shift.nrows(), shift.ncols()),
        });
    }
    if n > m {
        return Err(Error::DimensionMismatch {
            expected: format!("d_A with at most {m} rows"),
            found: format!("{n} rows"),
        });
    }
    let d_b = &d_a * &shift;
    let tol = tol_op.unwrap_or_else(|| default_tol_op(m));
    let model = WalkModel::from_parts(d_a, d_b, shift, tol)?.with_provenance(Provenance {
        weight_scheme: "abstract".into(),
        ..Provenance::default()
    });
    for check in model.identity_checks() {
        if check.pass {
            continue;
        }
        let err = match check.name {
            "shift_self_adjoint" | "shift_involution" | "assumption_dA_dA_star" => {
                Error::AssumptionViolated {
                    identity: check.name.into(),
                    residual: check.residual,
                }
            }
            _ => Error::ModelInvariantViolation {
                identity: check.name.into(),
                residual: check.residual,
            },
        };
        return Err(err);
    }
    Ok(model)
}

/// `‖T - D^{-1/2} A D^{-1/2}‖_F`; zero for Grover weights.
pub fn discriminant_transition_check(model: &WalkModel, g: &Digraph) -> Result<f64> {
    let n = g.vertex_count();
    if model.n() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("model on {n} vertices"),
            found: format!("{}", model.n()),
        });
    }
    let deg = g.degrees();
    let normalized = DMatrix::from_fn(n, n, |u, v| {
        let adjacent = g.arcs().iter().any(|a| a.origin == u && a.terminus == v);
        if adjacent {
            c(1.0 / ((deg[u] * deg[v]) as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    Ok(frobenius_diff(model.discriminant(), &normalized))
}

/// Stable digest of a weighted graph: vertex count, canonical edges and the
/// exact bit patterns of the weights.
pub fn graph_hash(g: &Digraph, w: &WeightFunction) -> String {
    let mut h = Sha256::new();
    h.update((g.vertex_count() as u64).to_le_bytes());
    for (u, v) in g.edges() {
        h.update((u as u64).to_le_bytes());
        h.update((v as u64).to_le_bytes());
    }
    for z in &w.weights {
        h.update(z.re.to_bits().to_le_bytes());
        h.update(z.im.to_bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// On-disk form of a [`WalkModel`]. Every operator is written out; reading
/// back uses `d_A`, `d_B` and `S` and re-derives the rest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkModelJson {
    pub n: usize,
    pub m: usize,
    pub tol_op: f64,
    pub provenance: Provenance,
    #[serde(
        rename = "dA",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub d_a: CMat,
    #[serde(
        rename = "dB",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub d_b: CMat,
    #[serde(
        rename = "S",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub shift: CMat,
    #[serde(
        rename = "C",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub coin: CMat,
    #[serde(
        rename = "U",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub walk: CMat,
    #[serde(
        rename = "T",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub discriminant: CMat,
    #[serde(
        rename = "Ttilde",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub companion: CMat,
    #[serde(
        rename = "L",
        serialize_with = "serialize_matrix",
        deserialize_with = "deserialize_matrix"
    )]
    pub lifting: CMat,
}

impl From<&WalkModel> for WalkModelJson {
    fn from(m: &WalkModel) -> Self {
        WalkModelJson {
            n: m.n,
            m: m.m,
            tol_op: m.tol_op,
            provenance: m.provenance.clone(),
            d_a: m.d_a.clone(),
            d_b: m.d_b.clone(),
            shift: m.shift.clone(),
            coin: m.coin.clone(),
            walk: m.walk.clone(),
            discriminant: m.discriminant.clone(),
            companion: m.companion.clone(),
            lifting: m.lifting.clone(),
        }
    }
}

impl WalkModelJson {
    pub fn into_model(self) -> Result<WalkModel> {
        if self.d_a.shape() != (self.n, self.m) {
            return Err(Error::DimensionMismatch {
                expected: format!("dA of shape {}x{}", self.n, self.m),
                found: format!("{}x{}", self.d_a.nrows(), self.d_a.ncols()),
            });
        }
        Ok(
            WalkModel::from_parts(self.d_a, self.d_b, self.shift, self.tol_op)?
                .with_provenance(self.provenance),
        )
    }
}

pub fn model_to_json(model: &WalkModel) -> Result<String> {
    Ok(serde_json::to_string_pretty(&WalkModelJson::from(model))?)
}

pub fn model_from_json(text: &str) -> Result<WalkModel> {
    let doc: WalkModelJson = serde_json::from_str(text)?;
    doc.into_model()
}

/// Frobenius norm, re-exported for callers assembling their own residuals.
pub fn norm(m: &CMat) -> f64 {
    frobenius(m)
}
