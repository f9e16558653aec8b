//! Reduced bar graphs and their construction sequences from a base non-edge.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::spec::Bar;
use crate::error::{Error, Result};

/// Unordered vertex pair stored with the smaller index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexPair(pub usize, pub usize);

impl VertexPair {
    pub fn new(u: usize, v: usize) -> Self {
        if u <= v {
            Self(u, v)
        } else {
            Self(v, u)
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

/// Vertices and weighted edges after cluster reduction. Vertex indices follow
/// lexicographic order of the identifiers, so index order is name order.
#[derive(Clone, Debug)]
pub struct ReducedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<VertexPair, f64>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl ReducedGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], bars: &[Bar]) -> Result<Self> {
        let mut names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        names.dedup();
        let index: HashMap<String, usize> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut edges = BTreeMap::new();
        let mut adjacency = vec![BTreeSet::new(); names.len()];
        for bar in bars {
            let u = *index.get(&bar.u).ok_or_else(|| Error::UnknownVertex(bar.u.clone()))?;
            let v = *index.get(&bar.v).ok_or_else(|| Error::UnknownVertex(bar.v.clone()))?;
            if u == v {
                return Err(Error::InvalidSpec(format!("bar ({}, {}) is a loop", bar.u, bar.v)));
            }
            if edges.insert(VertexPair::new(u, v), bar.length).is_some() {
                return Err(Error::InvalidSpec(format!("bar ({}, {}) given twice", bar.u, bar.v)));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(Self { names, index, edges, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn length(&self, u: usize, v: usize) -> Option<f64> {
        self.edges.get(&VertexPair::new(u, v)).copied()
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&VertexPair::new(u, v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexPair, f64)> + '_ {
        self.edges.iter().map(|(p, l)| (*p, *l))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn pair_names(&self, p: VertexPair) -> (String, String) {
        (self.names[p.0].clone(), self.names[p.1].clone())
    }
}

/// Placement of `vertex` from two already-placed anchors:
/// `|anchors.0 - vertex| = lengths.0` and `|anchors.1 - vertex| = lengths.1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstructionStep {
    pub vertex: usize,
    pub anchors: (usize, usize),
    pub lengths: (f64, f64),
}

/// Peels degree-2 vertices (never the base endpoints) until only the base
/// non-edge remains, then reverses the removal order.
///
/// Among removable vertices the lexicographically largest goes first, so the
/// resulting construction places ties in lexicographic order. Anchors are
/// listed in construction order, base endpoints first.
pub fn derive_construction(graph: &ReducedGraph, base: VertexPair) -> Result<Vec<ConstructionStep>> {
    let n = graph.vertex_count();
    let bad_base = || {
        Error::BadBaseNonedge(
            graph.names.get(base.0).cloned().unwrap_or_default(),
            graph.names.get(base.1).cloned().unwrap_or_default(),
        )
    };
    if base.0 == base.1 || base.1 >= n || graph.is_edge(base.0, base.1) {
        return Err(bad_base());
    }
    if graph.edge_count() + 1 != (2 * n).saturating_sub(3) || n < 2 {
        return Err(Error::NotOneDof { vertices: n, edges: graph.edge_count() + 1 });
    }

    let mut degree: Vec<usize> = (0..n).map(|v| graph.adjacency[v].len()).collect();
    let mut alive = vec![true; n];
    let mut removable: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 2 && !base.contains(v)).collect();
    let mut removed = Vec::with_capacity(n.saturating_sub(2));

    for _ in 0..n - 2 {
        let Some(&v) = removable.iter().next_back() else {
            return Err(Error::NotTreeDecomposable(graph.name(base.0).into(), graph.name(base.1).into()));
        };
        removable.remove(&v);
        alive[v] = false;
        let nbrs: Vec<usize> = graph.adjacency[v].iter().copied().filter(|&w| alive[w]).collect();
        debug_assert_eq!(nbrs.len(), 2);
        for &w in &nbrs {
            degree[w] -= 1;
            if !base.contains(w) {
                if degree[w] == 2 {
                    removable.insert(w);
                } else {
                    removable.remove(&w);
                }
            }
        }
        removed.push((v, nbrs[0], nbrs[1]));
    }

    let mut rank = vec![usize::MAX; n];
    rank[base.0] = 0;
    rank[base.1] = 1;
    let mut steps = Vec::with_capacity(removed.len());
    for (k, &(v, a, b)) in removed.iter().rev().enumerate() {
        rank[v] = k + 2;
        let (u, w) = if rank[a] <= rank[b] { (a, b) } else { (b, a) };
        steps.push(ConstructionStep {
            vertex: v,
            anchors: (u, w),
            lengths: (graph.length(u, v).unwrap(), graph.length(w, v).unwrap()),
        });
    }
    Ok(steps)
}

/// All non-edges from which the graph is constructible, in lexicographic order.
pub fn enumerate_base_nonedges(graph: &ReducedGraph) -> Vec<VertexPair> {
    let n = graph.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !graph.is_edge(u, v) && derive_construction(graph, VertexPair(u, v)).is_ok() {
                out.push(VertexPair(u, v));
            }
        }
    }
    out
}
