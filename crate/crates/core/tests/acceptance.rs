//! One line per acceptance criterion, then a single verdict.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cayrs_core::{
    check_generic, derive_construction, enumerate_base_nonedges, is_low, Analysis, RealizationType, TdLinkage,
    Tolerances, Uniform,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn t(s: &str) -> RealizationType {
    RealizationType::parse(s).unwrap()
}

fn close(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps
}

fn four_bar_fixture() -> Outcome {
    let start = Instant::now();
    let a = Analysis::from_spec(&common::four_bar(), &Tolerances::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let no = &a.ccs.non_oriented;
    ensure!(no.len() == 1 && close(no[0].0, 4.0, 1e-6) && close(no[0].1, 7.5, 1e-6), "non-oriented {no:?}");
    ensure!(a.ccs.oriented.len() == 2, "{} oriented spaces", a.ccs.oriented.len());
    for o in &a.ccs.oriented {
        let iv = &o.intervals;
        ensure!(
            iv.len() == 1 && close(iv[0].lower, 4.0, 1e-6) && close(iv[0].upper, 7.5, 1e-6),
            "{} has {iv:?}",
            o.rtype
        );
    }
    ensure!(a.components().len() == 1, "{} components", a.components().len());
    ensure!(a.components()[0].legs.len() == 2, "component has {} legs", a.components()[0].legs.len());
    ensure!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    Ok(format!("[4, 7.5], 2 oriented spaces, 1 component, {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn two_bar_fixture() -> Outcome {
    let a = Analysis::from_spec(&common::two_bar(), &Tolerances::default()).map_err(|e| e.to_string())?;
    let no = &a.ccs.non_oriented;
    ensure!(no.len() == 1 && close(no[0].0, 1.0, 1e-9) && close(no[0].1, 7.0, 1e-9), "non-oriented {no:?}");
    let r = a.realize(5.0, &t("+")).map_err(|e| e.to_string())?;
    let c = r.points[a.linkage.index_of("c").unwrap()];
    ensure!(close(c.x, 1.8, 1e-9) && close(c.y, 2.4, 1e-9), "c = {c:?}");
    Ok(format!("[{}, {}], c = ({}, {})", no[0].0, no[0].1, c.x, c.y))
}

fn four_bar_paths() -> Outcome {
    let a = Analysis::from_spec(&common::four_bar(), &Tolerances::default()).map_err(|e| e.to_string())?;
    let r1 = a.realize(5.0, &t("++")).map_err(|e| e.to_string())?;
    let r2 = a.realize(5.0, &t("+-")).map_err(|e| e.to_string())?;
    let forward = a.find_path(&r1, &r2).map_err(|e| e.to_string())?;
    let backward = a.find_path(&r2, &r1).map_err(|e| e.to_string())?;
    ensure!(forward.len() == 2, "{} paths", forward.len());
    ensure!(forward[0].legs[0].exit_at != forward[1].legs[0].exit_at, "both paths leave the same way");
    let mut f: Vec<String> = forward.iter().map(|p| p.to_json().to_string()).collect();
    let mut b: Vec<String> = backward.iter().map(|p| p.reversed().to_json().to_string()).collect();
    f.sort();
    b.sort();
    ensure!(f == b, "reversed paths differ");
    Ok(format!("2 paths, arc lengths {} and {}", forward[0].arc_length(), forward[1].arc_length()))
}

fn oracle_equivalence() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut checked, mut multi, mut skipped) = (0, 0, 0);
    let mut failures = Vec::new();
    while checked < 120 {
        let steps = 2 + checked % 3;
        let spec = common::random_linkage(&mut rng, steps);
        let Ok(tdl) = TdLinkage::from_spec(&spec, &tol) else { continue };
        if !tdl.is_low() || !check_generic(&tdl, &tol).is_empty() {
            skipped += 1;
            continue;
        }
        let a = Analysis::new(tdl, &tol).map_err(|e| e.to_string())?;
        let span = a.ccs.non_oriented.last().unwrap().1 - a.ccs.non_oriented[0].0;
        match common::compare_partitions(&a, 1e-3 * span) {
            Ok((components, _)) => multi += usize::from(components > 1),
            Err(e) => failures.push(e),
        }
        checked += 1;
    }
    ensure!(failures.is_empty(), "{} of {checked} disagree: {:?}", failures.len(), failures);
    Ok(format!("{checked}/{checked} agree ({multi} with several components, {skipped} non-generic skipped)"))
}

fn invariant_suite() -> Outcome {
    let mut checked = 0;
    for seed in 0..200u64 {
        let Some(a) = common::random_analysis(seed) else { continue };
        common::check_invariants(&a, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        checked += 1;
    }
    for spec in [common::four_bar(), common::two_bar(), common::two_components()] {
        let a = Analysis::from_spec(&spec, &Tolerances::default()).map_err(|e| e.to_string())?;
        common::check_invariants(&a, 0)?;
        checked += 1;
    }
    Ok(format!("{checked} linkages"))
}

fn low_complexity() -> Outcome {
    let mut cases = 0;
    for n in 3..=6 {
        for (names, bars) in common::graphs_with_one_dof(n) {
            let g = common::graph(&names, &bars);
            for base in enumerate_base_nonedges(&g) {
                let steps = derive_construction(&g, base).map_err(|e| e.to_string())?;
                let got = is_low(&g, base, &steps).low;
                ensure!(got == common::four_cycle_low(n, &steps), "disagree on {bars:?} from {base:?}");
                cases += 1;
            }
        }
    }
    let (g, base) = common::chain(98);
    let steps = derive_construction(&g, base).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let low = is_low(&g, base, &steps);
    let elapsed = start.elapsed();
    ensure!(low.low, "chain is not low");
    ensure!(elapsed.as_millis() < 10, "100-step chain took {elapsed:?}");
    Ok(format!("{cases} graph/base cases agree; 100-step chain in {:.3} ms", elapsed.as_secs_f64() * 1e3))
}

fn nearest_pair() -> Outcome {
    let a = Analysis::from_spec(&common::two_components(), &Tolerances::default()).map_err(|e| e.to_string())?;
    ensure!(a.components().len() == 2, "{} components", a.components().len());
    let (c1, c2) = (&a.components()[0], &a.components()[1]);
    let sampler = Uniform::default();
    let got = a.nearest_realizations(c1, c2, &sampler).map_err(|e| e.to_string())?;
    let s1 = a.sample_realizations(c1, &sampler);
    let s2 = a.sample_realizations(c2, &sampler);
    let (i, j, d) = common::brute_force_nearest(&a.linkage, &s1, &s2);
    ensure!(got.indices == (i, j), "pair {:?}, exhaustive {:?}", got.indices, (i, j));
    ensure!(got.distance == d, "distance {}, exhaustive {d}", got.distance);
    Ok(format!("pair {:?} at distance {d} over {} x {} samples", (i, j), s1.len(), s2.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("four-bar CCS, oriented spaces, component, runtime", four_bar_fixture),
        ("two-bar CCS and 3-4-5 realization", two_bar_fixture),
        ("four-bar findPath: two paths, reversal symmetry", four_bar_paths),
        ("component partition equals dense-sampling union-find", oracle_equivalence),
        ("invariant suite", invariant_suite),
        ("isLow vs exhaustive four-cycle checker, 100-step chain", low_complexity),
        ("nearestRealizations vs exhaustive pairwise scan", nearest_pair),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
