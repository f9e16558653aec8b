//! Linkage input, cluster reduction, construction sequences and the low
//! Cayley complexity test.

mod complexity;
mod construction;
mod spec;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

pub use complexity::{is_low, LowComplexity};
pub use construction::{derive_construction, enumerate_base_nonedges, ConstructionStep, ReducedGraph, VertexPair};
pub use spec::{reduce_clusters, Bar, ClusterSpec, Decoration, LinkageSpec};

use crate::cayley;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A validated, reduced 1-dof tree-decomposable linkage together with its
/// construction sequence from the chosen base non-edge.
#[derive(Clone, Debug)]
pub struct TdLinkage {
    graph: ReducedGraph,
    base: VertexPair,
    steps: Vec<ConstructionStep>,
    complexity: LowComplexity,
    decorations: Vec<Decoration>,
    base_nonedges: Vec<VertexPair>,
    warnings: Vec<String>,
    fingerprint: u64,
    scale: f64,
    total_length: f64,
}

impl TdLinkage {
    /// Analyzes `spec` on its declared base non-edge, or on the first
    /// admissible one when none is declared.
    pub fn from_spec(spec: &LinkageSpec, tol: &Tolerances) -> Result<Self> {
        let base = spec.base_nonedge.as_ref().map(|[u, v]| (u.as_str(), v.as_str()));
        Self::with_base(spec, base, tol)
    }

    pub fn with_base(spec: &LinkageSpec, base: Option<(&str, &str)>, tol: &Tolerances) -> Result<Self> {
        spec.validate(tol.geom.max(1e-9))?;
        let (bars, decorations) = reduce_clusters(spec)?;
        let passengers: std::collections::HashSet<&str> =
            decorations.iter().flat_map(|d| d.passengers.iter().map(|(v, _)| v.as_str())).collect();
        let vertices: Vec<&str> =
            spec.vertices.iter().map(String::as_str).filter(|v| !passengers.contains(v)).collect();
        let graph = ReducedGraph::new(&vertices, &bars)?;
        if graph.vertex_count() < 3 {
            return Err(Error::InvalidSpec("a linkage needs at least one construction step".into()));
        }
        let base_nonedges = enumerate_base_nonedges(&graph);

        let base = match base {
            Some((u, v)) => {
                let bad = || Error::BadBaseNonedge(u.to_string(), v.to_string());
                let iu = graph.index_of(u).ok_or_else(bad)?;
                let iv = graph.index_of(v).ok_or_else(bad)?;
                VertexPair::new(iu, iv)
            }
            None => match base_nonedges.first() {
                Some(p) => *p,
                None => {
                    let n = graph.vertex_count();
                    let first = (0..n)
                        .flat_map(|u| (u + 1..n).map(move |v| VertexPair(u, v)))
                        .find(|p| !graph.is_edge(p.0, p.1))
                        .ok_or(Error::NotOneDof { vertices: n, edges: graph.edge_count() + 1 })?;
                    return Err(
                        derive_construction(&graph, first).expect_err("admissible base non-edges are all enumerated")
                    );
                }
            },
        };
        let steps = derive_construction(&graph, base)?;
        let complexity = is_low(&graph, base, &steps);

        let scale = graph.edges().map(|(_, l)| l).fold(0.0, f64::max);
        let total_length = graph.edges().map(|(_, l)| l).sum();
        let warnings = length_warnings(&graph, tol.endpoint * scale);

        let mut hasher = DefaultHasher::new();
        graph.names().hash(&mut hasher);
        for (p, l) in graph.edges() {
            p.hash(&mut hasher);
            l.to_bits().hash(&mut hasher);
        }
        base.hash(&mut hasher);

        Ok(Self {
            graph,
            base,
            steps,
            complexity,
            decorations,
            base_nonedges,
            warnings,
            fingerprint: hasher.finish(),
            scale,
            total_length,
        })
    }

    pub fn graph(&self) -> &ReducedGraph {
        &self.graph
    }

    pub fn base(&self) -> VertexPair {
        self.base
    }

    /// Base endpoints as `(origin, on the positive x-axis)`.
    pub fn base_endpoints(&self) -> (usize, usize) {
        (self.base.0, self.base.1)
    }

    pub fn steps(&self) -> &[ConstructionStep] {
        &self.steps
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn complexity(&self) -> &LowComplexity {
        &self.complexity
    }

    pub fn is_low(&self) -> bool {
        self.complexity.low
    }

    pub fn require_low(&self) -> Result<()> {
        match self.complexity.failing_step {
            None => Ok(()),
            Some(step) => Err(Error::NotLowComplexity { step }),
        }
    }

    pub fn cayley_vector(&self) -> &[VertexPair] {
        &self.complexity.cayley_vector
    }

    pub fn decorations(&self) -> &[Decoration] {
        &self.decorations
    }

    pub fn base_nonedges(&self) -> &[VertexPair] {
        &self.base_nonedges
    }

    /// Zero and duplicate bar length warnings.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Largest bar length; geometric tolerances are relative to it.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Sum of all bar lengths, the upper end of the scanned base length domain.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn name(&self, v: usize) -> &str {
        self.graph.name(v)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.graph.index_of(name)
    }

    pub fn pair_names(&self, p: VertexPair) -> (String, String) {
        self.graph.pair_names(p)
    }

    pub fn pair_by_names(&self, u: &str, v: &str) -> Result<VertexPair> {
        let iu = self.index_of(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
        let iv = self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        Ok(VertexPair::new(iu, iv))
    }
}

impl TdLinkage {
    /// `{tdLow, steps, completeCayleyVector, warnings}`, with `failingStep`
    /// added when the linkage is not low.
    pub fn summary(&self, tol: &Tolerances) -> serde_json::Value {
        let vector: Vec<[String; 2]> = self
            .cayley_vector()
            .iter()
            .map(|p| {
                let (u, v) = self.pair_names(*p);
                [u, v]
            })
            .collect();
        let mut out = serde_json::json!({
            "tdLow": self.is_low(),
            "steps": self.step_count(),
            "completeCayleyVector": vector,
            "warnings": check_generic(self, tol),
        });
        if let Some(step) = self.complexity.failing_step {
            out["failingStep"] = step.into();
        }
        out
    }

    pub fn base_nonedge_names(&self) -> Vec<[String; 2]> {
        self.base_nonedges
            .iter()
            .map(|p| {
                let (u, v) = self.pair_names(*p);
                [u, v]
            })
            .collect()
    }
}

fn length_warnings(graph: &ReducedGraph, tol: f64) -> Vec<String> {
    let mut bars: Vec<(VertexPair, f64)> = graph.edges().collect();
    bars.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut out = Vec::new();
    for (p, l) in &bars {
        if *l <= tol {
            let (u, v) = graph.pair_names(*p);
            out.push(format!("bar ({u}, {v}) has zero length"));
        }
    }
    for w in bars.windows(2) {
        if (w[1].1 - w[0].1).abs() <= tol {
            let (a, b) = graph.pair_names(w[0].0);
            let (c, d) = graph.pair_names(w[1].0);
            out.push(format!("bars ({a}, {b}) and ({c}, {d}) share length {}", w[0].1));
        }
    }
    out
}

/// Genericity warnings: zero or duplicate bar lengths, and base lengths at
/// which two distinct steps are collinear at once. Never fails; the
/// collinearity scan is skipped for linkages that are not low.
pub fn check_generic(tdl: &TdLinkage, tol: &Tolerances) -> Vec<String> {
    let mut out = tdl.warnings().to_vec();
    if !tdl.is_low() {
        return out;
    }
    let Ok(types) = cayley::canonical_types(tdl.step_count(), tol.max_types) else {
        out.push("too many realization types to scan for simultaneous collinearity".into());
        return out;
    };
    let mut seen: Vec<(f64, Vec<usize>)> = Vec::new();
    for t in &types {
        let Ok(candidates) = cayley::candidate_endpoints(tdl, t, tol) else { continue };
        for c in candidates.into_iter().filter(|c| c.steps.len() > 1) {
            let dup = seen.iter().any(|(l, s)| (l - c.value).abs() <= tol.endpoint * tdl.scale() && *s == c.steps);
            if !dup {
                seen.push((c.value, c.steps));
            }
        }
    }
    seen.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (l, steps) in seen {
        let list: Vec<String> = steps.iter().map(|s| tdl.name(tdl.steps()[*s].vertex).to_string()).collect();
        out.push(format!("steps placing {} are simultaneously collinear at base length {l}", list.join(", ")));
    }
    out
}
