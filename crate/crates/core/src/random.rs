//! Seeded random models for property runs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Digraph, WeightFunction};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity by rejection.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "random graphs need at least 2 vertices, got {n}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "edge probability must lie in (0, 1], got {p}"
        )));
    }
    for _ in 0..100_000 {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        // isolated vertices make the digraph invalid; they also mean the
        // sample is disconnected, so just resample
        if let Ok(g) = Digraph::from_edges(n, &edges) {
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(Error::Numerical(format!(
        "no connected G({n}, {p}) sample after 100000 draws"
    )))
}

/// Random complex weights: modulus uniform in `[0.2, 1]`, uniform phase,
/// then each out-star rescaled to unit sum of squares.
pub fn random_szegedy_weights<R: Rng>(rng: &mut R, g: &Digraph) -> WeightFunction {
    let mut w: Vec<Complex64> = (0..g.arc_count())
        .map(|_| {
            let r = rng.random_range(0.2..=1.0);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, phase)
        })
        .collect();
    let mut norms = vec![0.0; g.vertex_count()];
    for (a, z) in g.arcs().iter().zip(&w) {
        norms[a.origin] += z.norm_sqr();
    }
    for (a, z) in g.arcs().iter().zip(w.iter_mut()) {
        *z /= norms[a.origin].sqrt();
    }
    WeightFunction::new(w)
}

/// Default edge probability for property runs.
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.3;
