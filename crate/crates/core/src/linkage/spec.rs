//! The on-disk linkage description and rigid-cluster reduction.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bar of fixed length between two vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub u: String,
    pub v: String,
    pub length: f64,
}

impl Bar {
    pub fn new(u: impl Into<String>, v: impl Into<String>, length: f64) -> Self {
        Self { u: u.into(), v: v.into(), length }
    }
}

/// A rigid body given by local coordinates, attached to the rest of the
/// linkage through exactly two anchor vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub coords: BTreeMap<String, [f64; 2]>,
    pub anchors: [String; 2],
}

/// Input description of a linkage, as read from a linkage file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinkageSpec {
    pub vertices: Vec<String>,
    pub bars: Vec<Bar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<ClusterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_nonedge: Option<[String; 2]>,
}

/// Passenger vertices of a reduced cluster, kept so that full realizations
/// can be reconstructed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decoration {
    pub anchors: [String; 2],
    pub anchor_coords: [[f64; 2]; 2],
    pub passengers: Vec<(String, [f64; 2])>,
}

impl LinkageSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("linkage spec serializes")
    }

    /// Checks the structural invariants of the description. `rel_tol` bounds
    /// the relative mismatch allowed between a cluster's coordinates and any
    /// bar internal to it.
    pub fn validate(&self, rel_tol: f64) -> Result<()> {
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate vertex {v}")));
            }
        }
        let mut pairs = HashSet::new();
        for bar in &self.bars {
            for end in [&bar.u, &bar.v] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::InvalidSpec(format!("bar endpoint {end} is not declared")));
                }
            }
            if bar.u == bar.v {
                return Err(Error::InvalidSpec(format!("bar ({}, {}) is a loop", bar.u, bar.v)));
            }
            if !(bar.length.is_finite() && bar.length > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "bar ({}, {}) has non-positive length {}",
                    bar.u, bar.v, bar.length
                )));
            }
            if !pairs.insert(ordered(&bar.u, &bar.v)) {
                return Err(Error::InvalidSpec(format!("bar ({}, {}) given twice", bar.u, bar.v)));
            }
        }
        for cluster in &self.clusters {
            for (v, p) in &cluster.coords {
                if !seen.contains(v.as_str()) {
                    return Err(Error::InvalidSpec(format!("cluster vertex {v} is not declared")));
                }
                if !(p[0].is_finite() && p[1].is_finite()) {
                    return Err(Error::InvalidSpec(format!("cluster vertex {v} has bad coordinates")));
                }
            }
            for a in &cluster.anchors {
                if !cluster.coords.contains_key(a) {
                    return Err(Error::InvalidSpec(format!("cluster anchor {a} has no coordinates")));
                }
            }
            for bar in &self.bars {
                if let (Some(p), Some(q)) = (cluster.coords.get(&bar.u), cluster.coords.get(&bar.v)) {
                    let d = dist(*p, *q);
                    if (d - bar.length).abs() > rel_tol * bar.length.max(d) {
                        return Err(Error::InvalidSpec(format!(
                            "bar ({}, {}) of length {} disagrees with cluster distance {d}",
                            bar.u, bar.v, bar.length
                        )));
                    }
                }
            }
        }
        if let Some([u, v]) = &self.base_nonedge {
            if !seen.contains(u.as_str()) || !seen.contains(v.as_str()) || u == v {
                return Err(Error::BadBaseNonedge(u.clone(), v.clone()));
            }
            if pairs.contains(&ordered(u, v)) {
                return Err(Error::BadBaseNonedge(u.clone(), v.clone()));
            }
        }
        Ok(())
    }
}

/// Replaces every rigid cluster by a single bar between its anchors.
///
/// Bars with both endpoints inside a cluster are absorbed by it; all other
/// bars pass through unchanged. Passenger vertices are returned as
/// decorations in cluster order.
pub fn reduce_clusters(spec: &LinkageSpec) -> Result<(Vec<Bar>, Vec<Decoration>)> {
    let mut bars: Vec<Bar> = Vec::with_capacity(spec.bars.len() + spec.clusters.len());
    let mut absorbed = vec![false; spec.bars.len()];
    let mut decorations = Vec::with_capacity(spec.clusters.len());

    for (ci, cluster) in spec.clusters.iter().enumerate() {
        let [a, b] = &cluster.anchors;
        let pa = cluster.coords[a];
        let pb = cluster.coords[b];
        let length = dist(pa, pb);
        let extent = cluster.coords.values().map(|p| dist(*p, pa)).fold(0.0, f64::max);
        if a == b || length <= 1e-12 * extent.max(1.0) {
            return Err(Error::DegenerateCluster(a.clone(), b.clone()));
        }

        // Vertices of this cluster touched by anything outside it.
        let mut shared = BTreeSet::new();
        for (bi, bar) in spec.bars.iter().enumerate() {
            let inside_u = cluster.coords.contains_key(&bar.u);
            let inside_v = cluster.coords.contains_key(&bar.v);
            if inside_u && inside_v {
                absorbed[bi] = true;
            } else if inside_u {
                shared.insert(bar.u.as_str());
            } else if inside_v {
                shared.insert(bar.v.as_str());
            }
        }
        for (cj, other) in spec.clusters.iter().enumerate() {
            if cj != ci {
                shared.extend(other.coords.keys().filter(|v| cluster.coords.contains_key(*v)).map(String::as_str));
            }
        }
        if let Some([u, v]) = &spec.base_nonedge {
            for end in [u, v] {
                if cluster.coords.contains_key(end) {
                    shared.insert(end.as_str());
                }
            }
        }
        let anchors: BTreeSet<&str> = [a.as_str(), b.as_str()].into();
        if shared != anchors {
            return Err(Error::ClusterShareViolation(format!(
                "cluster {ci} anchored on ({a}, {b}) shares {:?}",
                shared.iter().collect::<Vec<_>>()
            )));
        }

        bars.push(Bar::new(a.clone(), b.clone(), length));
        decorations.push(Decoration {
            anchors: [a.clone(), b.clone()],
            anchor_coords: [pa, pb],
            passengers: cluster
                .coords
                .iter()
                .filter(|(v, _)| !anchors.contains(v.as_str()))
                .map(|(v, p)| (v.clone(), *p))
                .collect(),
        });
    }

    let mut out: Vec<Bar> = spec.bars.iter().zip(&absorbed).filter(|(_, a)| !**a).map(|(b, _)| b.clone()).collect();
    out.extend(bars);
    Ok((out, decorations))
}

fn ordered<'a>(u: &'a str, v: &'a str) -> (&'a str, &'a str) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}
