//! Finite simple graphs viewed as symmetric digraphs, and weight functions on
//! their arcs.
//!
//! Every undirected edge `{u, v}` becomes two arcs `u -> v` and `v -> u`
//! paired by the involution `e -> ē`. Arc order is canonical: edges are
//! normalized to `(min, max)` in compacted vertex ids, sorted, and each edge
//! contributes `(u -> v)` at an even index followed by `(v -> u)`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on the per-vertex normalization `Σ |w(e)|² = 1`.
pub const DEFAULT_TOL_NORM: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub origin: usize,
    pub terminus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<Arc>,
    involution: Vec<usize>,
    /// Original vertex id of each compacted vertex.
    labels: Vec<u64>,
}

impl Digraph {
    /// Builds the symmetric digraph of a simple graph on `0..vertex_count`.
    ///
    /// Edges may be given in any order and orientation. Self-loops, repeated
    /// edges, out-of-range endpoints and isolated vertices are rejected; the
    /// reported line number is the 1-based position in `edges`.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..vertex_count as u64).collect();
        let numbered: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (i + 1, u, v))
            .collect();
        Self::assemble(vertex_count, &numbered, labels)
    }

    fn assemble(
        vertex_count: usize,
        edges: &[(usize, usize, usize)],
        labels: Vec<u64>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for &(line, u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex index out of range 0..{vertex_count}"),
                });
            }
            if u == v {
                return Err(Error::SelfLoopForbidden { line });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge {
                    line,
                    u: labels[key.0],
                    v: labels[key.1],
                });
            }
            normalized.push(key);
        }
        normalized.sort_unstable();

        let mut degree = vec![0usize; vertex_count];
        let mut arcs = Vec::with_capacity(2 * normalized.len());
        let mut involution = Vec::with_capacity(2 * normalized.len());
        for (k, &(u, v)) in normalized.iter().enumerate() {
            degree[u] += 1;
            degree[v] += 1;
            arcs.push(Arc {
                origin: u,
                terminus: v,
            });
            arcs.push(Arc {
                origin: v,
                terminus: u,
            });
            involution.push(2 * k + 1);
            involution.push(2 * k);
        }
        if vertex_count == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "graph has no vertices".into(),
            });
        }
        if let Some(v) = degree.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedVertex { vertex: labels[v] });
        }
        Ok(Digraph {
            vertex_count,
            arcs,
            involution,
            labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, e: usize) -> Arc {
        self.arcs[e]
    }

    /// `ē`, the reversed arc.
    pub fn reverse(&self, e: usize) -> usize {
        self.involution[e]
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    /// Original vertex ids, indexed by compacted id.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Canonical edge list `(u, v)` with `u < v`, one per even arc index.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .step_by(2)
            .map(|a| (a.origin, a.terminus))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.origin == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for a in &self.arcs {
            d[a.origin] += 1;
        }
        d
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for a in &self.arcs {
            adj[a.origin].push(a.terminus);
        }
        adj
    }

    /// Connected components, each a sorted vertex list, ordered by smallest
    /// vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbours();
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut out = Vec::new();
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Two-colouring by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.neighbours();
        let mut colour = vec![-1i8; self.vertex_count];
        for start in 0..self.vertex_count {
            if colour[start] >= 0 {
                continue;
            }
            colour[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if colour[v] < 0 {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sub-digraph induced by a connected component, with vertices renumbered
    /// in the order given.
    pub fn induced(&self, vertices: &[usize]) -> Result<Digraph> {
        let index: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter_map(|(u, v)| Some((*index.get(&u)?, *index.get(&v)?)))
            .collect();
        let mut g = Digraph::from_edges(vertices.len(), &edges)?;
        g.labels = vertices.iter().map(|&v| self.labels[v]).collect();
        Ok(g)
    }
}

/// Complex weight per arc, indexed like [`Digraph::arcs`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub weights: Vec<Complex64>,
}

impl WeightFunction {
    pub fn new(weights: Vec<Complex64>) -> Self {
        WeightFunction { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Grover weights `w(e) = 1 / sqrt(deg o(e))`.
pub fn grover_weights(g: &Digraph) -> WeightFunction {
    let deg = g.degrees();
    WeightFunction::new(
        g.arcs()
            .iter()
            .map(|a| Complex64::new(1.0 / (deg[a.origin] as f64).sqrt(), 0.0))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightValidation {
    pub pass: bool,
    /// `|Σ_{o(e)=u} |w(e)|² - 1|` per vertex.
    pub defects: Vec<f64>,
    /// Arcs carrying a zero weight.
    pub zero_arcs: Vec<usize>,
}

impl WeightValidation {
    pub fn worst_vertex(&self) -> Option<(usize, f64)> {
        self.defects
            .iter()
            .cloned()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

pub fn validate_weights(
    g: &Digraph,
    w: &WeightFunction,
    tol_norm: f64,
) -> Result<WeightValidation> {
    if w.len() != g.arc_count() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} arc weights", g.arc_count()),
            found: format!("{}", w.len()),
        });
    }
    let mut sums = vec![0.0; g.vertex_count()];
    let mut zero_arcs = Vec::new();
    for (e, (arc, z)) in g.arcs().iter().zip(&w.weights).enumerate() {
        sums[arc.origin] += z.norm_sqr();
        if z.norm() == 0.0 {
            zero_arcs.push(e);
        }
    }
    let defects: Vec<f64> = sums.iter().map(|s| (s - 1.0).abs()).collect();
    let pass = zero_arcs.is_empty() && defects.iter().all(|&d| d <= tol_norm);
    Ok(WeightValidation {
        pass,
        defects,
        zero_arcs,
    })
}

/// A parsed graph file: the digraph plus weights when the file supplies them.
#[derive(Debug, Clone)]
pub struct GraphInput {
    pub graph: Digraph,
    pub weights: Option<WeightFunction>,
}

/// Parses the edge-list text format and discards any weight columns.
pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    parse_edge_list_weighted(text).map(|p| p.graph)
}

/// Parses the edge-list text format.
///
/// One edge `u v` per line; `#` starts a comment line; a line holding a
/// single id declares a vertex. Optional third and fourth columns give the
/// weights of `u -> v` and `v -> u` as `re[,im]`. Either every edge line
/// carries weights or none does.
pub fn parse_edge_list_weighted(text: &str) -> Result<GraphInput> {
    let mut ids = IdCompactor::default();
    let mut edges = Vec::new();
    let mut raw_weights: Vec<Option<(Complex64, Complex64)>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_id = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid vertex id `{s}`"),
            })
        };
        match cols.len() {
            1 => {
                ids.declare(parse_id(cols[0])?);
            }
            2 | 4 => {
                let u = ids.intern(parse_id(cols[0])?);
                let v = ids.intern(parse_id(cols[1])?);
                edges.push((line, u, v));
                raw_weights.push(if cols.len() == 4 {
                    Some((parse_complex(cols[2], line)?, parse_complex(cols[3], line)?))
                } else {
                    None
                });
            }
            n => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 2 or 4 columns, found {n}"),
                })
            }
        }
    }

    let weighted = raw_weights.iter().filter(|w| w.is_some()).count();
    if weighted != 0 && weighted != raw_weights.len() {
        let line = edges[raw_weights.iter().position(|w| w.is_none()).unwrap()].0;
        return Err(Error::Parse {
            line,
            message: "weight columns must be given on every edge line or none".into(),
        });
    }
    let (vertex_count, labels) = ids.finish();
    let graph = Digraph::assemble(vertex_count, &edges, labels)?;

    let weights = if weighted == 0 {
        None
    } else {
        let mut arc_index = HashMap::new();
        for (e, a) in graph.arcs().iter().enumerate() {
            arc_index.insert((a.origin, a.terminus), e);
        }
        let mut w = vec![Complex64::new(0.0, 0.0); graph.arc_count()];
        for (&(_, u, v), pair) in edges.iter().zip(&raw_weights) {
            let (forward, backward) = pair.unwrap();
            w[arc_index[&(u, v)]] = forward;
            w[arc_index[&(v, u)]] = backward;
        }
        Some(WeightFunction::new(w))
    };
    Ok(GraphInput { graph, weights })
}

fn parse_complex(s: &str, line: usize) -> Result<Complex64> {
    let bad = || Error::Parse {
        line,
        message: format!("invalid weight `{s}`, expected re[,im]"),
    };
    let mut parts = s.split(',');
    let re = parts
        .next()
        .ok_or_else(bad)?
        .parse::<f64>()
        .map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// JSON mirror of the edge-list format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub edges: Vec<[u64; 2]>,
    /// Weights keyed by canonical arc index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, [f64; 2]>>,
    /// Optional explicit vertex declarations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<u64>>,
}

pub fn parse_graph_json(text: &str) -> Result<GraphInput> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    graph_from_json(&doc)
}

pub fn graph_from_json(doc: &GraphJson) -> Result<GraphInput> {
    let mut ids = IdCompactor::default();
    for &v in doc.vertices.iter().flatten() {
        ids.declare(v);
    }
    let edges: Vec<_> = doc
        .edges
        .iter()
        .enumerate()
        .map(|(i, [u, v])| (i + 1, ids.intern(*u), ids.intern(*v)))
        .collect();
    let (vertex_count, labels) = ids.finish();
    let graph = Digraph::assemble(vertex_count, &edges, labels)?;
    let weights = match &doc.weights {
        None => None,
        Some(map) => {
            let mut w = vec![None; graph.arc_count()];
            for (key, [re, im]) in map {
                let e: usize = key.parse().map_err(|_| Error::Parse {
                    line: 0,
                    message: format!("weight key `{key}` is not an arc index"),
                })?;
                if e >= w.len() {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("weight key {e} exceeds arc count {}", w.len()),
                    });
                }
                w[e] = Some(Complex64::new(*re, *im));
            }
            if let Some(missing) = w.iter().position(Option::is_none) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("no weight given for arc {missing}"),
                });
            }
            Some(WeightFunction::new(
                w.into_iter().map(Option::unwrap).collect(),
            ))
        }
    };
    Ok(GraphInput { graph, weights })
}

/// Exports a digraph (and optional weights) in the JSON graph format.
pub fn graph_to_json(g: &Digraph, w: Option<&WeightFunction>) -> GraphJson {
    GraphJson {
        edges: g
            .edges()
            .into_iter()
            .map(|(u, v)| [g.labels[u], g.labels[v]])
            .collect(),
        weights: w.map(|w| {
            w.weights
                .iter()
                .enumerate()
                .map(|(e, z)| (e.to_string(), [z.re, z.im]))
                .collect()
        }),
        vertices: None,
    }
}

/// Maps sparse vertex ids to `0..n` in first-appearance order.
#[derive(Default)]
struct IdCompactor {
    index: HashMap<u64, usize>,
    labels: Vec<u64>,
}

impl IdCompactor {
    fn intern(&mut self, id: u64) -> usize {
        if let Some(&i) = self.index.get(&id) {
            return i;
        }
        let i = self.labels.len();
        self.index.insert(id, i);
        self.labels.push(id);
        i
    }

    fn declare(&mut self, id: u64) {
        self.intern(id);
    }

    fn finish(self) -> (usize, Vec<u64>) {
        (self.labels.len(), self.labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: Complex64, b: f64) {
        assert!((a - b).norm() < 1e-15, "{a} vs {b}");
    }

    #[test]
    fn single_edge() {
        let g = parse_edge_list("0 1").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(
            g.arcs(),
            &[
                Arc {
                    origin: 0,
                    terminus: 1
                },
                Arc {
                    origin: 1,
                    terminus: 0
                }
            ]
        );
        assert_eq!(g.reverse(0), 1);
        assert_eq!(g.reverse(1), 0);
    }

    #[test]
    fn triangle_has_six_arcs() {
        let g = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!(g.arc_count(), 6);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        for e in 0..6 {
            let a = g.arc(e);
            let b = g.arc(g.reverse(e));
            assert_eq!((a.origin, a.terminus), (b.terminus, b.origin));
            assert_ne!(g.reverse(e), e);
        }
    }

    #[test]
    fn duplicate_edge_rejected() {
        assert!(matches!(
            parse_edge_list("0 1\n0 1"),
            Err(Error::DuplicateEdge { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n1 0"),
            Err(Error::DuplicateEdge { line: 2, .. })
        ));
    }

    #[test]
    fn self_loop_reports_line() {
        let err = parse_edge_list("# header\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::SelfLoopForbidden { line: 3 }));
        assert_eq!(err.to_string(), "SelfLoopForbidden line 3");
    }

    #[test]
    fn isolated_declared_vertex() {
        assert!(matches!(
            parse_edge_list("0 1\n7\n"),
            Err(Error::IsolatedVertex { vertex: 7 })
        ));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_edge_list("0 1\n1 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 0.5 0.5\n1 2"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("# only comments"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn sparse_ids_are_compacted() {
        let g = parse_edge_list("10 30\n30 20").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.labels(), &[10, 30, 20]);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn weight_columns_follow_line_orientation() {
        let p = parse_edge_list_weighted("1 0 0.6,0.8 1\n").unwrap();
        let w = p.weights.unwrap();
        // canonical arcs: 1 -> 0 is (0 -> 1) in compacted ids, because id 1
        // appears first and becomes vertex 0.
        assert_eq!(p.graph.labels(), &[1, 0]);
        assert_eq!(w.weights[0], Complex64::new(0.6, 0.8));
        assert_eq!(w.weights[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn json_graph_with_weights() {
        let p = parse_graph_json(r#"{"edges":[[0,1]],"weights":{"0":[0.0,1.0],"1":[1.0,0.0]}}"#)
            .unwrap();
        assert_eq!(p.graph.arc_count(), 2);
        assert_eq!(p.weights.unwrap().weights[0], Complex64::new(0.0, 1.0));
        assert!(parse_graph_json(r#"{"edges":[[0,1]],"weights":{"0":[1,0]}}"#).is_err());
        assert!(matches!(
            parse_graph_json(r#"{"edges":[[0,1],[1,0]]}"#),
            Err(Error::DuplicateEdge { line: 2, .. })
        ));
    }

    #[test]
    fn grover_weight_values() {
        let p2 = parse_edge_list("0 1").unwrap();
        for z in grover_weights(&p2).weights {
            assert_close(z, 1.0);
        }
        let c3 = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        for z in grover_weights(&c3).weights {
            assert_close(z, 1.0 / 2f64.sqrt());
        }
        let star = parse_edge_list("0 1\n0 2\n0 3").unwrap();
        let w = grover_weights(&star);
        for (a, z) in star.arcs().iter().zip(&w.weights) {
            assert_close(
                *z,
                if a.origin == 0 {
                    1.0 / 3f64.sqrt()
                } else {
                    1.0
                },
            );
        }
    }

    #[test]
    fn validation_verdicts() {
        let c3 = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        let v = validate_weights(&c3, &grover_weights(&c3), DEFAULT_TOL_NORM).unwrap();
        assert!(v.pass);
        assert!(v.defects.iter().all(|&d| d < 1e-15));

        let p2 = parse_edge_list("0 1").unwrap();
        let w = WeightFunction::new(vec![Complex64::new(0.6, 0.0), Complex64::new(1.0, 0.0)]);
        let v = validate_weights(&p2, &w, DEFAULT_TOL_NORM).unwrap();
        assert!(!v.pass);
        assert!((v.defects[0] - 0.64).abs() < 1e-15);
        assert_eq!(v.worst_vertex().unwrap().0, 0);

        let w = WeightFunction::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let v = validate_weights(&p2, &w, DEFAULT_TOL_NORM).unwrap();
        assert!(!v.pass);
        assert_eq!(v.zero_arcs, vec![0]);

        let short = WeightFunction::new(vec![Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            validate_weights(&p2, &short, DEFAULT_TOL_NORM),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn structure_queries() {
        let c4 = parse_edge_list("0 1\n1 2\n2 3\n3 0").unwrap();
        assert!(c4.is_bipartite());
        assert!(c4.is_connected());
        let c3 = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        assert!(!c3.is_bipartite());
        let two = parse_edge_list("0 1\n2 3\n3 4\n4 2").unwrap();
        assert_eq!(two.components(), vec![vec![0, 1], vec![2, 3, 4]]);
        let sub = two.induced(&[2, 3, 4]).unwrap();
        assert_eq!(sub.edge_count(), 3);
        assert_eq!(sub.labels(), &[2, 3, 4]);
    }
}
