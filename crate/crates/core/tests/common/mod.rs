//! Independent oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use cayrs_core::{Bar, ConstructionStep, LinkageSpec, ReducedGraph, VertexPair};

pub fn spec(vertices: &[&str], bars: &[(&str, &str, f64)], base: (&str, &str)) -> LinkageSpec {
    LinkageSpec {
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        bars: bars.iter().map(|(u, v, l)| Bar::new(*u, *v, *l)).collect(),
        clusters: vec![],
        base_nonedge: Some([base.0.into(), base.1.into()]),
    }
}

pub fn four_bar() -> LinkageSpec {
    spec(&["a", "b", "c", "d"], &[("a", "b", 2.0), ("b", "c", 6.0), ("a", "d", 3.0), ("d", "c", 4.5)], ("a", "c"))
}

pub fn two_bar() -> LinkageSpec {
    spec(&["a", "b", "c"], &[("a", "c", 3.0), ("b", "c", 4.0)], ("a", "b"))
}

/// Four-cycle closure checker.
///
/// Clusters are edges; two clusters sharing a vertex form a pair. Before each
/// step the set of valid pairs is closed under four-cycles of the graph built
/// so far: when one adjacent pair of a four-cycle is valid, all four are. A
/// step after the first is low when some vertex adjacent to both anchors
/// closes a valid pair with them. Every four-cycle is enumerated explicitly.
pub fn four_cycle_low(n: usize, steps: &[ConstructionStep]) -> bool {
    type Pair = (VertexPair, VertexPair);
    let norm = |a: VertexPair, b: VertexPair| if a <= b { (a, b) } else { (b, a) };
    let mut edges: BTreeSet<VertexPair> = BTreeSet::new();
    let mut valid: HashSet<Pair> = HashSet::new();

    for (k, s) in steps.iter().enumerate() {
        let (u, w) = s.anchors;
        if k > 0 {
            close(n, &edges, &mut valid);
            let ok = (0..n).any(|x| {
                let (ux, wx) = (VertexPair::new(u, x), VertexPair::new(w, x));
                x != u && x != w && edges.contains(&ux) && edges.contains(&wx) && valid.contains(&norm(ux, wx))
            });
            if !ok {
                return false;
            }
        }
        let (c1, c2) = (VertexPair::new(u, s.vertex), VertexPair::new(w, s.vertex));
        edges.insert(c1);
        edges.insert(c2);
        valid.insert(norm(c1, c2));
    }
    true
}

fn close(n: usize, edges: &BTreeSet<VertexPair>, valid: &mut HashSet<(VertexPair, VertexPair)>) {
    let norm = |a: VertexPair, b: VertexPair| if a <= b { (a, b) } else { (b, a) };
    let e = |a: usize, b: usize| edges.contains(&VertexPair::new(a, b));
    let mut cycles = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct && a < b && a < c && a < d && b < d && e(a, b) && e(b, c) && e(c, d) && e(d, a) {
                        let ring = [
                            VertexPair::new(a, b),
                            VertexPair::new(b, c),
                            VertexPair::new(c, d),
                            VertexPair::new(d, a),
                        ];
                        cycles.push([0, 1, 2, 3].map(|i| norm(ring[i], ring[(i + 1) % 4])));
                    }
                }
            }
        }
    }
    loop {
        let mut changed = false;
        for pairs in &cycles {
            if pairs.iter().any(|p| valid.contains(p)) {
                for p in pairs {
                    changed |= valid.insert(*p);
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Every labelled graph on `n` vertices with `2n - 4` edges, as bar lists
/// over the names `a, b, ...` with distinct lengths.
pub fn graphs_with_one_dof(n: usize) -> Vec<(Vec<String>, Vec<Bar>)> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = 2 * n - 4;
    let mut out = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let bars = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(i, &(u, v))| Bar::new(&names[u], &names[v], 1.0 + i as f64))
            .collect();
        out.push((names.clone(), bars));
    }
    out
}

pub fn graph(names: &[String], bars: &[Bar]) -> ReducedGraph {
    ReducedGraph::new(names, bars).expect("valid graph")
}

/// Four-bar followed by `extra` steps, each hanging off the previous vertex
/// and alternately `a` and `b`: `v5 <| (b, d)`, `v6 <| (a, v5)`, ...
pub fn chain(extra: usize) -> (ReducedGraph, VertexPair) {
    let mut names: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let mut bars =
        vec![Bar::new("a", "b", 2.0), Bar::new("b", "c", 6.0), Bar::new("a", "d", 3.0), Bar::new("d", "c", 4.5)];
    let mut prev = "d".to_string();
    for i in 0..extra {
        let v = format!("v{:04}", i + 5);
        let hub = if i % 2 == 0 { "b" } else { "a" };
        bars.push(Bar::new(hub, &v, 3.0 + 0.01 * i as f64));
        bars.push(Bar::new(&prev, &v, 4.0 + 0.01 * i as f64));
        names.push(v.clone());
        prev = v;
    }
    let g = graph(&names, &bars);
    let base = VertexPair::new(g.index_of("a").unwrap(), g.index_of("c").unwrap());
    (g, base)
}

/// Random linkage with `steps` construction steps whose bar lengths come from
/// random points, so the sampled configuration itself is a realization. Each
/// step after the first hangs off two non-adjacent earlier vertices.
pub fn random_linkage<R: rand::Rng>(rng: &mut R, steps: usize) -> LinkageSpec {
    let n = steps + 2;
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))).collect();
    let dist = |i: usize, j: usize| ((points[i].0 - points[j].0).powi(2) + (points[i].1 - points[j].1).powi(2)).sqrt();
    let mut adjacent = vec![vec![false; n]; n];
    let mut bars = Vec::new();
    for v in 2..n {
        let (u, w) = if v == 2 {
            (0, 1)
        } else {
            let free: Vec<(usize, usize)> =
                (0..v).flat_map(|u| (u + 1..v).map(move |w| (u, w))).filter(|&(u, w)| !adjacent[u][w]).collect();
            free[rng.random_range(0..free.len())]
        };
        for a in [u, w] {
            adjacent[a][v] = true;
            adjacent[v][a] = true;
            bars.push(Bar::new(&names[a], &names[v], dist(a, v)));
        }
    }
    LinkageSpec {
        vertices: names.clone(),
        bars,
        clusters: vec![],
        base_nonedge: Some([names[0].clone(), names[1].clone()]),
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A sampled realization and its connectivity class.
pub struct SampleNode {
    pub rtype: cayrs_core::RealizationType,
    pub length: f64,
    pub class: usize,
}

/// Connectivity classes of a dense sample of the realization space.
///
/// For every canonical type the base length runs over `(0, total]` with the
/// given pitch. Realizability transitions between grid points are bisected
/// to the boundary, and consecutive realizable samples of one type are
/// refined by midpoint insertion until their Cayley distance is below
/// `delta = 3 * pitch`. Samples of any types closer than `delta` are joined.
pub fn sampled_classes(tdl: &cayrs_core::TdLinkage, tol: &cayrs_core::Tolerances, pitch: f64) -> Vec<SampleNode> {
    use cayrs_core::{canonical_types, realizable_at, realize};

    let delta = 3.0 * pitch;
    let total = tdl.total_length();
    let mut nodes: Vec<(cayrs_core::RealizationType, f64, Vec<f64>)> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();

    for t in canonical_types(tdl.step_count(), 1 << 20).unwrap() {
        let ok = |l: f64| realizable_at(tdl, l, &t, tol);
        let vector = |l: f64| realize(tdl, l, &t, tol).ok().map(|r| r.cayley_vector().0.clone());
        let grid: Vec<f64> = (1..=(total / pitch).ceil() as usize).map(|i| (i as f64 * pitch).min(total)).collect();
        let mut lengths: Vec<f64> = Vec::new();
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (pa, pb) = (ok(a), ok(b));
            if pa {
                lengths.push(a);
            }
            if pa != pb {
                let (mut lo, mut hi) = if pa { (a, b) } else { (b, a) };
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    if ok(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lengths.push(lo);
            }
        }
        if let Some(&last) = grid.last() {
            if ok(last) {
                lengths.push(last);
            }
        }
        lengths.sort_by(f64::total_cmp);
        lengths.dedup();

        // Runs of realizable samples, refined until neighbors are close.
        let mut prev: Option<(usize, f64)> = None;
        for &l in &lengths {
            let Some(v) = vector(l) else { continue };
            let id = nodes.len();
            nodes.push((t.clone(), l, v));
            if let Some((pid, pl)) = prev {
                if l - pl <= pitch * (1.0 + 1e-9) && ok(0.5 * (pl + l)) {
                    refine(&mut nodes, &mut links, &t, pid, id, delta, &vector, 0);
                }
            }
            prev = Some((id, l));
        }
    }

    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[a].1.total_cmp(&nodes[b].1));
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            if nodes[b].1 - nodes[a].1 >= delta {
                break;
            }
            if distance(&nodes[a].2, &nodes[b].2) < delta {
                links.push((a, b));
            }
        }
    }

    let mut uf = UnionFind((0..nodes.len()).collect());
    for (a, b) in links {
        uf.union(a, b);
    }
    (0..nodes.len()).map(|i| SampleNode { rtype: nodes[i].0.clone(), length: nodes[i].1, class: uf.find(i) }).collect()
}

#[allow(clippy::too_many_arguments)]
fn refine(
    nodes: &mut Vec<(cayrs_core::RealizationType, f64, Vec<f64>)>,
    links: &mut Vec<(usize, usize)>,
    t: &cayrs_core::RealizationType,
    a: usize,
    b: usize,
    delta: f64,
    vector: &dyn Fn(f64) -> Option<Vec<f64>>,
    depth: u32,
) {
    if distance(&nodes[a].2, &nodes[b].2) < delta {
        links.push((a, b));
        return;
    }
    let mid = 0.5 * (nodes[a].1 + nodes[b].1);
    if depth > 60 || mid <= nodes[a].1 || mid >= nodes[b].1 {
        return;
    }
    let Some(v) = vector(mid) else { return };
    let m = nodes.len();
    nodes.push((t.clone(), mid, v));
    refine(nodes, links, t, a, m, delta, vector, depth + 1);
    refine(nodes, links, t, m, b, delta, vector, depth + 1);
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Three-step linkage with two components, one in each of its two
/// non-oriented intervals (about [3.50, 5.02] and [6.71, 7.95]).
pub fn two_components() -> LinkageSpec {
    spec(
        &["a", "b", "c", "d", "e"],
        &[("a", "c", 3.0), ("b", "c", 5.0), ("a", "d", 7.0), ("b", "d", 4.0), ("c", "e", 1.0), ("d", "e", 6.0)],
        ("a", "b"),
    )
}

/// Exhaustive nearest pair over two sample lists, with every non-edge length
/// recomputed from the points. Ties go to the smallest index pair.
pub fn brute_force_nearest(
    tdl: &cayrs_core::TdLinkage,
    s1: &[cayrs_core::Realization],
    s2: &[cayrs_core::Realization],
) -> (usize, usize, f64) {
    let vector = |r: &cayrs_core::Realization| -> Vec<f64> {
        tdl.cayley_vector()
            .iter()
            .enumerate()
            .map(|(i, p)| if i == 0 { r.base_length } else { (r.points[p.0] - r.points[p.1]).norm() })
            .collect()
    };
    let v1: Vec<Vec<f64>> = s1.iter().map(vector).collect();
    let v2: Vec<Vec<f64>> = s2.iter().map(vector).collect();
    let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
    for (i, a) in v1.iter().enumerate() {
        for (j, b) in v2.iter().enumerate() {
            let d = distance(a, b);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

/// A random low linkage with 2 to 4 steps and a nonempty space.
pub fn random_analysis(seed: u64) -> Option<cayrs_core::Analysis> {
    use rand::{Rng, SeedableRng};
    let tol = cayrs_core::Tolerances::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let steps = rng.random_range(2..=4);
    let spec = random_linkage(&mut rng, steps);
    let tdl = cayrs_core::TdLinkage::from_spec(&spec, &tol).ok()?;
    if !tdl.is_low() {
        return None;
    }
    cayrs_core::Analysis::new(tdl, &tol).ok().filter(|a| !a.ccs.is_empty())
}

/// Realization at a random interior point of a random oriented interval.
pub fn random_realization<R: rand::Rng>(a: &cayrs_core::Analysis, rng: &mut R) -> cayrs_core::Realization {
    let ids: Vec<_> = a.ccs.interval_ids().collect();
    let iv = a.ccs.interval(ids[rng.random_range(0..ids.len())]);
    let l = iv.lower + (iv.upper - iv.lower) * rng.random_range(0.05..0.95);
    a.realize(l, &iv.rtype).unwrap()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

/// Realization and space invariants of one analysis, probed at random
/// realizations drawn from `seed`.
pub fn check_invariants(a: &cayrs_core::Analysis, seed: u64) -> Result<(), String> {
    use cayrs_core::{cayley_distance, orientation_of, realizable_at, realize, RealizationType, Side, Vec2};
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tdl = &a.linkage;
    let tol = &a.tol;
    let scale = tdl.scale();
    let slack = tol.endpoint * scale;

    let samples: Vec<_> = (0..8).map(|_| random_realization(a, &mut rng)).collect();
    for r in &samples {
        for (p, l) in tdl.graph().edges() {
            let got = (r.points[p.0] - r.points[p.1]).norm();
            ensure!((got - l).abs() <= 1e-9 * scale, "bar {p:?} is {got}, want {l}");
        }
        ensure!(r.cayley_vector().0[0] == r.base_length, "entry 0 is not the base length");
        for (k, s) in tdl.steps().iter().enumerate() {
            let o = orientation_of(r.points[s.vertex], r.points[s.anchors.0], r.points[s.anchors.1], 1e-6);
            ensure!(o == 0 || o == r.rtype.signs()[k], "step {k} has orientation {o} in type {}", r.rtype);
        }

        let negated: Vec<i8> = r.rtype.signs().iter().map(|s| -s).collect();
        let m = realize(tdl, r.base_length, &RealizationType::new(negated), tol).map_err(|e| e.to_string())?;
        ensure!(cayley_distance(r, &m).unwrap() == 0.0, "mirror pair at distance > 0");
        for p in tdl.cayley_vector() {
            let flip = |v: Vec2| Vec2::new(v.x, -v.y);
            let d = (flip(r.points[p.0]) - flip(r.points[p.1])).norm();
            ensure!((d - (r.points[p.0] - r.points[p.1]).norm()).abs() <= 1e-12 * scale, "reflection moved {p:?}");
        }
    }
    for x in &samples {
        for y in &samples {
            let dxy = cayley_distance(x, y).unwrap();
            ensure!(dxy == cayley_distance(y, x).unwrap(), "distance is not symmetric");
            for z in &samples {
                let bound = dxy + cayley_distance(y, z).unwrap();
                ensure!(cayley_distance(x, z).unwrap() <= bound + 1e-12, "triangle inequality fails");
            }
        }
    }

    for o in &a.ccs.oriented {
        for w in o.intervals.windows(2) {
            ensure!(w[0].upper < w[1].lower, "intervals of {} overlap", o.rtype);
        }
        for iv in &o.intervals {
            ensure!(
                realizable_at(tdl, 0.5 * (iv.lower + iv.upper), &o.rtype, tol),
                "midpoint of {} unrealizable",
                o.rtype
            );
            ensure!(
                a.ccs.non_oriented.iter().any(|(lo, hi)| iv.lower >= lo - slack && iv.upper <= hi + slack),
                "[{}, {}] of {} is not in the non-oriented space",
                iv.lower,
                iv.upper,
                o.rtype
            );
        }
    }
    for (lo, hi) in &a.ccs.non_oriented {
        for k in 0..=16 {
            let l = lo + (hi - lo) * k as f64 / 16.0;
            ensure!(
                a.ccs.oriented.iter().any(|o| o.intervals.iter().any(|iv| iv.contains(l, slack))),
                "{l} is in the non-oriented space but in no oriented interval"
            );
        }
    }
    for w in a.ccs.non_oriented.windows(2) {
        let mid = 0.5 * (w[0].1 + w[1].0);
        ensure!(
            a.ccs.oriented.iter().all(|o| !realizable_at(tdl, mid, &o.rtype, tol)),
            "gap midpoint {mid} realizable"
        );
    }

    for id in a.ccs.interval_ids() {
        let iv = a.ccs.interval(id);
        for side in [Side::Lower, Side::Upper] {
            let Some(link) = iv.next(side) else { continue };
            let back = a.ccs.interval(link.target).next(link.side);
            ensure!(back.is_some_and(|b| b.target == id && b.side == side), "link from {id:?} is not an involution");
            let e = iv.endpoint(side);
            let step = iv.flip(side).ok_or("linked endpoint without a flip step")?;
            let r = realize(tdl, e, &iv.rtype, tol).map_err(|e| e.to_string())?;
            let s = &tdl.steps()[step];
            let d2 = (r.points[s.anchors.0] - r.points[s.anchors.1]).norm_squared();
            let (r1, r2) = s.lengths;
            let disc = (d2 - (r1 + r2).powi(2)).abs().min((d2 - (r1 - r2).powi(2)).abs());
            ensure!(disc <= 1e-6 * scale * scale, "flip step discriminant {disc} at {e}");
            // The endpoint configuration has the flip step tangential; it
            // must exist from both sides and be the same. Realizing with the
            // interval's own signs instead leaves the flip vertex off the
            // line by about sqrt(eps) * scale.
            let other = a.ccs.interval(link.target);
            let other_step = other.flip(link.side).ok_or("link target endpoint without a flip step")?;
            let tangent = |t: &RealizationType, k: usize, l: f64| {
                realize(tdl, l, &t.with_zero(k), tol).map_err(|e| format!("tangent realization at {l}: {e}"))
            };
            let z1 = tangent(&iv.rtype, step, e)?;
            let z2 = tangent(&other.rtype, other_step, other.endpoint(link.side))?;
            ensure!(cayley_distance(&z1, &z2).unwrap() <= 1e-6, "linked endpoint configurations differ at {e}");
            let r2 = realize(tdl, other.endpoint(link.side), &other.rtype, tol).map_err(|e| e.to_string())?;
            ensure!(cayley_distance(&r, &r2).unwrap() <= 1e-6 * scale, "one-sided endpoint realizations differ at {e}");
        }
    }
    Ok(())
}

/// Component index of every oriented interval, keyed by type and bounds.
fn engine_partition(analysis: &cayrs_core::Analysis) -> Vec<(String, f64, f64, usize)> {
    let mut out = Vec::new();
    for (c, motion) in analysis.components().iter().enumerate() {
        for id in motion.intervals() {
            let iv = analysis.ccs.interval(id);
            out.push((iv.rtype.to_string(), iv.lower, iv.upper, c));
        }
    }
    out
}

/// Checks that sample classes and engine components induce the same
/// partition. Returns a description of the first disagreement.
pub fn compare_partitions(analysis: &cayrs_core::Analysis, pitch: f64) -> Result<(usize, usize), String> {
    let tol = analysis.tol.clone();
    let intervals = engine_partition(analysis);
    let slack = tol.endpoint * analysis.linkage.scale();
    let nodes = sampled_classes(&analysis.linkage, &tol, pitch);
    let mut class_to_comp: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut comp_to_class: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for n in &nodes {
        let t = n.rtype.to_string();
        let comp = intervals
            .iter()
            .find(|(it, lo, hi, _)| *it == t && n.length >= lo - slack && n.length <= hi + slack)
            .map(|x| x.3)
            .ok_or_else(|| format!("sample {} {t} lies in no interval", n.length))?;
        class_to_comp.entry(n.class).or_default().insert(comp);
        comp_to_class.entry(comp).or_default().insert(n.class);
    }
    if let Some((c, comps)) = class_to_comp.iter().find(|(_, s)| s.len() > 1) {
        return Err(format!("sample class {c} spans components {comps:?}"));
    }
    if let Some((c, classes)) = comp_to_class.iter().find(|(_, s)| s.len() > 1) {
        return Err(format!("component {c} splits into {} sample classes", classes.len()));
    }
    if comp_to_class.len() != analysis.components().len() {
        return Err(format!("{} components, {} sampled", analysis.components().len(), comp_to_class.len()));
    }
    Ok((analysis.components().len(), nodes.len()))
}
