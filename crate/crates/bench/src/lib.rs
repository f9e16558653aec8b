//! Benchmark fixtures.

use cayrs_core::{Bar, LinkageSpec};

fn spec(vertices: Vec<String>, bars: Vec<Bar>, base: (&str, &str)) -> LinkageSpec {
    LinkageSpec { vertices, bars, clusters: vec![], base_nonedge: Some([base.0.into(), base.1.into()]) }
}

pub fn four_bar() -> LinkageSpec {
    let names = ["a", "b", "c", "d"].map(String::from).to_vec();
    let bars = vec![Bar::new("a", "b", 2.0), Bar::new("b", "c", 6.0), Bar::new("a", "d", 3.0), Bar::new("d", "c", 4.5)];
    spec(names, bars, ("a", "c"))
}

/// The four-bar followed by `extra` steps, each hanging a new vertex off
/// `b` or `a` (alternating) and the previous vertex. Bar lengths are measured on a fixed
/// point set, so the linkage is realizable at the base length of that set.
pub fn chain(extra: usize) -> LinkageSpec {
    let point = |i: usize| {
        let t = i as f64;
        ((1.3 * t).cos() * (2.0 + (i % 3) as f64), (1.7 * t).sin() * 3.0 + 0.1 * t)
    };
    let dist = |i: usize, j: usize| {
        let (p, q) = (point(i), point(j));
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    };
    let mut names: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let mut bars = vec![
        Bar::new("a", "b", dist(0, 1)),
        Bar::new("b", "c", dist(1, 2)),
        Bar::new("a", "d", dist(0, 3)),
        Bar::new("d", "c", dist(3, 2)),
    ];
    for i in 0..extra {
        let v = 4 + i;
        let hub = 1 - i % 2;
        let prev = v - 1;
        names.push(format!("v{v:04}"));
        bars.push(Bar::new(names[hub].clone(), names[v].clone(), dist(hub, v)));
        bars.push(Bar::new(names[prev].clone(), names[v].clone(), dist(prev, v)));
    }
    spec(names, bars, ("a", "c"))
}
