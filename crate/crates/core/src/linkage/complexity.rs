//! Low Cayley complexity recognition and the complete Cayley vector.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::construction::{ConstructionStep, ReducedGraph, VertexPair};

/// Outcome of the four-cycle check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowComplexity {
    pub low: bool,
    /// 1-based index of the first step without a witness.
    pub failing_step: Option<usize>,
    /// Non-edges whose lengths pin down a realization, base non-edge first.
    /// Only complete when `low` holds.
    pub cayley_vector: Vec<VertexPair>,
}

/// Adjacent pair of edge-clusters, stored unordered.
type ClusterPair = (VertexPair, VertexPair);

fn cluster_pair(a: VertexPair, b: VertexPair) -> ClusterPair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Runs the four-cycle algorithm along the construction sequence.
///
/// The first step is based directly on the base non-edge. Every later step
/// `v <| (u, w)` needs a witness `x`, adjacent to both anchors in the graph
/// built so far, such that `(ux, wx)` is a valid base pair. Every witness, in
/// index order, contributes the non-edge `(x, v)` to the complete Cayley
/// vector and seeds new valid pairs.
pub fn is_low(graph: &ReducedGraph, base: VertexPair, steps: &[ConstructionStep]) -> LowComplexity {
    let n = graph.vertex_count();
    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut valid: HashSet<ClusterPair> = HashSet::with_capacity(3 * steps.len());
    let mut vector = vec![base];
    let mut in_vector: HashSet<VertexPair> = HashSet::from([base]);

    for (k, step) in steps.iter().enumerate() {
        let (u, w) = step.anchors;
        let v = step.vertex;
        let c1 = VertexPair::new(u, v);
        let c2 = VertexPair::new(w, v);

        if k > 0 {
            let (small, large) = if adjacency[u].len() <= adjacency[w].len() { (u, w) } else { (w, u) };
            let mut witnesses = Vec::new();
            for &x in &adjacency[small] {
                if !adjacency[large].contains(&x) {
                    continue;
                }
                let base_pair = (VertexPair::new(u, x), VertexPair::new(w, x));
                if valid.contains(&cluster_pair(base_pair.0, base_pair.1)) {
                    witnesses.push((x, base_pair));
                }
            }
            if witnesses.is_empty() {
                return LowComplexity { low: false, failing_step: Some(k + 1), cayley_vector: vector };
            }
            for (x, (b1, b2)) in witnesses {
                let nonedge = VertexPair::new(x, v);
                if !graph.is_edge(x, v) && in_vector.insert(nonedge) {
                    vector.push(nonedge);
                }
                valid.insert(cluster_pair(c1, b1));
                valid.insert(cluster_pair(c2, b2));
            }
        }
        valid.insert(cluster_pair(c1, c2));
        adjacency[u].insert(v);
        adjacency[v].insert(u);
        adjacency[w].insert(v);
        adjacency[v].insert(w);
    }

    LowComplexity { low: true, failing_step: None, cayley_vector: vector }
}
