//! Oriented and non-oriented Cayley configuration spaces on the base non-edge.
//!
//! Interval endpoints are base lengths at which some construction step turns
//! collinear. They are located numerically: each step's two slack functions
//! `d - |r1 - r2|` and `r1 + r2 - d` are scanned over `(0, sum of bars]` on a
//! uniform grid (plus a geometric tail towards zero), grid cells where the
//! set of evaluable steps changes are subdivided, and every sign change is
//! bisected down to adjacent floating point numbers. The root reported is
//! the bracket end on the feasible side, so the endpoint itself realizes.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linkage::TdLinkage;
use crate::realization::{trace, RealizationType};

/// Candidate endpoint with the steps collinear there (more than one only for
/// non-generic linkages).
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub value: f64,
    pub steps: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

/// Position of an interval: index of its oriented space, then of the
/// interval within that space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalId {
    pub space: usize,
    pub index: usize,
}

/// Where a continuous motion continues after leaving an interval: the
/// neighbor interval and the side through which it is entered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalLink {
    pub target: IntervalId,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrientedInterval {
    pub lower: f64,
    pub upper: f64,
    pub rtype: RealizationType,
    /// Step collinear at each endpoint (0-based).
    pub flip_lower: Option<usize>,
    pub flip_upper: Option<usize>,
    pub next_lower: Option<IntervalLink>,
    pub next_upper: Option<IntervalLink>,
}

impl OrientedInterval {
    pub fn endpoint(&self, side: Side) -> f64 {
        match side {
            Side::Lower => self.lower,
            Side::Upper => self.upper,
        }
    }

    pub fn flip(&self, side: Side) -> Option<usize> {
        match side {
            Side::Lower => self.flip_lower,
            Side::Upper => self.flip_upper,
        }
    }

    pub fn next(&self, side: Side) -> Option<IntervalLink> {
        match side {
            Side::Lower => self.next_lower,
            Side::Upper => self.next_upper,
        }
    }

    pub fn contains(&self, length: f64, slack: f64) -> bool {
        length >= self.lower - slack && length <= self.upper + slack
    }

    pub fn is_isolated(&self) -> bool {
        self.lower == self.upper
    }
}

/// Oriented Cayley configuration space of one realization type.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedCcs {
    pub rtype: RealizationType,
    pub intervals: Vec<OrientedInterval>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CayleyConfigSpace {
    /// Nonempty oriented spaces in canonical type order.
    pub oriented: Vec<OrientedCcs>,
    /// Union of all oriented intervals as maximal disjoint closed intervals.
    pub non_oriented: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

impl CayleyConfigSpace {
    pub fn interval(&self, id: IntervalId) -> &OrientedInterval {
        &self.oriented[id.space].intervals[id.index]
    }

    pub fn interval_ids(&self) -> impl Iterator<Item = IntervalId> + '_ {
        self.oriented
            .iter()
            .enumerate()
            .flat_map(|(space, o)| (0..o.intervals.len()).map(move |index| IntervalId { space, index }))
    }

    pub fn interval_count(&self) -> usize {
        self.oriented.iter().map(|o| o.intervals.len()).sum()
    }

    pub fn space_of(&self, rtype: &RealizationType) -> Option<usize> {
        self.oriented.iter().position(|o| &o.rtype == rtype)
    }

    pub fn is_empty(&self) -> bool {
        self.non_oriented.is_empty()
    }

    /// `{nonOriented: [[lo, hi]...], oriented: [{type, intervals}...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let oriented: Vec<serde_json::Value> = self
            .oriented
            .iter()
            .map(|o| {
                let intervals: Vec<[f64; 2]> = o.intervals.iter().map(|i| [i.lower, i.upper]).collect();
                json!({ "type": o.rtype.to_string(), "intervals": intervals })
            })
            .collect();
        let non_oriented: Vec<[f64; 2]> = self.non_oriented.iter().map(|(a, b)| [*a, *b]).collect();
        json!({ "nonOriented": non_oriented, "oriented": oriented })
    }
}

/// All canonical realization types for `steps` steps (first sign `+`), in
/// canonical order.
pub fn canonical_types(steps: usize, cap: u64) -> Result<Vec<RealizationType>> {
    if steps == 0 {
        return Ok(vec![]);
    }
    let free = steps - 1;
    let count = if free >= 63 { u64::MAX } else { 1u64 << free };
    if count > cap {
        return Err(Error::TooManySteps { types: count, cap });
    }
    Ok((0..count)
        .map(|i| {
            let mut signs = vec![1i8; steps];
            for (k, s) in signs.iter_mut().enumerate().skip(1) {
                if (i >> (free - k)) & 1 == 1 {
                    *s = -1;
                }
            }
            RealizationType::new(signs)
        })
        .collect())
}

/// Whether some realization of type `rtype` has base length `length`. Zero
/// signs may take either side.
pub fn realizable_at(tdl: &TdLinkage, length: f64, rtype: &RealizationType, tol: &Tolerances) -> bool {
    if rtype.len() != tdl.step_count() {
        return false;
    }
    let zeros: Vec<usize> = (0..rtype.len()).filter(|&k| rtype.signs()[k] == 0).collect();
    let mut signs = rtype.signs().to_vec();
    (0..1u64 << zeros.len().min(20)).any(|mask| {
        for (bit, &k) in zeros.iter().enumerate() {
            signs[k] = if (mask >> bit) & 1 == 1 { -1 } else { 1 };
        }
        trace(tdl, length, &signs, tol, false).failed.is_none()
    })
}

struct Profile {
    slack: Vec<(f64, f64)>,
}

impl Profile {
    fn defined(&self) -> usize {
        self.slack.len()
    }

    fn value(&self, step: usize, which: usize) -> f64 {
        let s = self.slack[step];
        if which == 0 {
            s.0
        } else {
            s.1
        }
    }
}

struct Scanner<'a> {
    tdl: &'a TdLinkage,
    signs: &'a [i8],
    tol: &'a Tolerances,
    min_width: f64,
    roots: Vec<(f64, usize)>,
}

impl Scanner<'_> {
    fn profile(&self, length: f64) -> Profile {
        let t = trace(self.tdl, length, self.signs, self.tol, true);
        Profile { slack: t.slack }
    }

    fn scan(&mut self, lo: f64, plo: &Profile, hi: f64, phi: &Profile, depth: u32) {
        if plo.defined() != phi.defined() && hi - lo > self.min_width && depth < 200 {
            let mid = lo + 0.5 * (hi - lo);
            let pmid = self.profile(mid);
            self.scan(lo, plo, mid, &pmid, depth + 1);
            self.scan(mid, &pmid, hi, phi, depth + 1);
            return;
        }
        for k in 0..plo.defined().min(phi.defined()) {
            for which in 0..2 {
                let (a, b) = (plo.value(k, which), phi.value(k, which));
                if (a >= 0.0) != (b >= 0.0) {
                    self.bisect(k, which, lo, a >= 0.0, hi, depth);
                }
            }
        }
    }

    fn bisect(&mut self, step: usize, which: usize, mut lo: f64, lo_feasible: bool, mut hi: f64, depth: u32) {
        let (start, end) = (lo, hi);
        loop {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            let p = self.profile(mid);
            if p.defined() <= step {
                // An earlier step drops out and back in inside this bracket.
                if depth < 200 {
                    let (ps, pm, pe) = (self.profile(start), p, self.profile(end));
                    self.scan(start, &ps, mid, &pm, depth + 1);
                    self.scan(mid, &pm, end, &pe, depth + 1);
                }
                return;
            }
            if (p.value(step, which) >= 0.0) == lo_feasible {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.roots.push((if lo_feasible { lo } else { hi }, step));
    }
}

/// Base lengths in `(0, sum of bars]` at which some step of `rtype` becomes
/// collinear, restricted to where the earlier steps are realizable. Sorted,
/// with values closer than `tol.endpoint * scale` merged.
pub fn candidate_endpoints(tdl: &TdLinkage, rtype: &RealizationType, tol: &Tolerances) -> Result<Vec<Candidate>> {
    tdl.require_low()?;
    if rtype.len() != tdl.step_count() {
        return Err(Error::TypeLength { expected: tdl.step_count(), got: rtype.len() });
    }
    let total = tdl.total_length();
    let cells = tol.grid.max(2);
    let mut grid: Vec<f64> = (1..=40).rev().map(|j| total / cells as f64 * 0.5f64.powi(j)).collect();
    grid.extend((1..=cells).map(|i| total * i as f64 / cells as f64));
    // One cell past the domain so that a root at exactly `total` is bracketed.
    grid.push(total * (1.0 + 1.0 / cells as f64));

    let mut scanner = Scanner { tdl, signs: rtype.signs(), tol, min_width: total * 1e-13, roots: Vec::new() };
    let profiles: Vec<Profile> = grid.iter().map(|&l| scanner.profile(l)).collect();
    for i in 1..grid.len() {
        scanner.scan(grid[i - 1], &profiles[i - 1], grid[i], &profiles[i], 0);
    }

    let mut roots = scanner.roots;
    roots.retain(|(l, _)| *l > 0.0 && *l <= total);
    roots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let merge = tol.endpoint * tdl.scale();
    let mut out: Vec<Candidate> = Vec::new();
    for (value, step) in roots {
        match out.last_mut() {
            Some(last) if value - last.value <= merge => {
                if !last.steps.contains(&step) {
                    last.steps.push(step);
                    last.steps.sort_unstable();
                }
            }
            _ => out.push(Candidate { value, steps: vec![step] }),
        }
    }
    Ok(out)
}

/// Oriented space of `rtype` from its candidates, classifying each candidate
/// by realizability at the midpoints towards its neighbors.
pub fn build_oriented_ccs(tdl: &TdLinkage, rtype: &RealizationType, tol: &Tolerances) -> Result<OrientedCcs> {
    let candidates = candidate_endpoints(tdl, rtype, tol)?;
    let total = tdl.total_length();
    let realizable = |l: f64| realizable_at(tdl, l, rtype, tol);
    let mut intervals = Vec::new();
    let mut warnings = Vec::new();
    let mut start: Option<(f64, Option<usize>)> = None;

    let interval = |lower: f64, flip_lower, upper: f64, flip_upper| OrientedInterval {
        lower,
        upper,
        rtype: rtype.clone(),
        flip_lower,
        flip_upper,
        next_lower: None,
        next_upper: None,
    };

    for (i, cand) in candidates.iter().enumerate() {
        let cur = cand.value;
        let prev = if i == 0 { 0.0 } else { candidates[i - 1].value };
        let next = candidates.get(i + 1).map_or(total, |c| c.value);
        let before = realizable(0.5 * (prev + cur));
        let after = next > cur && realizable(0.5 * (cur + next));
        let flip = cand.steps.first().copied();
        if cand.steps.len() > 1 && (before != after || !before) {
            warnings.push(format!(
                "LinkAmbiguity: steps {:?} collinear together at {cur} for type {rtype}; linking through step {}",
                cand.steps.iter().map(|s| s + 1).collect::<Vec<_>>(),
                cand.steps[0] + 1
            ));
        }
        match (before, after) {
            (false, false) if realizable(cur) => intervals.push(interval(cur, flip, cur, flip)),
            (false, false) => {}
            (true, false) => {
                let (lower, flip_lower) = start.take().unwrap_or((0.0, None));
                intervals.push(interval(lower, flip_lower, cur, flip));
            }
            (false, true) => start = Some((cur, flip)),
            (true, true) => {}
        }
    }
    if let Some((lower, flip_lower)) = start {
        intervals.push(interval(lower, flip_lower, total, None));
    }
    Ok(OrientedCcs { rtype: rtype.clone(), intervals, warnings })
}

/// Builds every canonical type's oriented space, merges them into the
/// non-oriented space and links the intervals.
pub fn build_ccs(tdl: &TdLinkage, tol: &Tolerances) -> Result<CayleyConfigSpace> {
    tdl.require_low()?;
    let types = canonical_types(tdl.step_count(), tol.max_types)?;
    let spaces: Vec<OrientedCcs> =
        types.par_iter().map(|t| build_oriented_ccs(tdl, t, tol)).collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    let oriented: Vec<OrientedCcs> = spaces
        .into_iter()
        .inspect(|o| warnings.extend(o.warnings.iter().cloned()))
        .filter(|o| !o.intervals.is_empty())
        .collect();

    let mut all: Vec<(f64, f64)> =
        oriented.iter().flat_map(|o| o.intervals.iter().map(|i| (i.lower, i.upper))).collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let touch = tol.endpoint * tdl.scale();
    let mut non_oriented: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in all {
        match non_oriented.last_mut() {
            Some(last) if lo <= last.1 + touch => last.1 = last.1.max(hi),
            _ => non_oriented.push((lo, hi)),
        }
    }

    let mut ccs = CayleyConfigSpace { oriented, non_oriented, warnings };
    link_intervals(&mut ccs, tdl, tol);
    Ok(ccs)
}

/// Sets `next_lower` / `next_upper` on every interval: an endpoint where step
/// `k` is collinear continues into the interval of the type with sign `k`
/// flipped that shares the endpoint.
pub fn link_intervals(ccs: &mut CayleyConfigSpace, tdl: &TdLinkage, tol: &Tolerances) {
    let index: HashMap<RealizationType, usize> =
        ccs.oriented.iter().enumerate().map(|(i, o)| (o.rtype.clone(), i)).collect();
    let slack = tol.endpoint * tdl.scale();
    let ids: Vec<IntervalId> = ccs.interval_ids().collect();
    let mut links: Vec<(IntervalId, Side, IntervalLink)> = Vec::new();
    let mut warnings = Vec::new();

    for &id in &ids {
        let interval = ccs.interval(id);
        for side in [Side::Lower, Side::Upper] {
            let Some(step) = interval.flip(side) else { continue };
            let e = interval.endpoint(side);
            let target_type = interval.rtype.flipped(step);
            let Some(&space) = index.get(&target_type) else {
                warnings.push(format!("no oriented space of type {target_type} to continue {} at {e}", interval.rtype));
                continue;
            };
            let best = ccs.oriented[space]
                .intervals
                .iter()
                .enumerate()
                .flat_map(|(i, iv)| [Side::Lower, Side::Upper].map(|s| ((iv.endpoint(s) - e).abs(), i, s)))
                .filter(|(gap, i, s)| {
                    *gap <= slack && !(space == id.space && *i == id.index && *s != side && !interval.is_isolated())
                })
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match best {
                Some((_, i, s)) => {
                    links.push((id, side, IntervalLink { target: IntervalId { space, index: i }, side: s }))
                }
                None => {
                    warnings.push(format!("endpoint {e} of {} has no neighbor of type {target_type}", interval.rtype))
                }
            }
        }
    }

    for (id, side, link) in links {
        let iv = &mut ccs.oriented[id.space].intervals[id.index];
        match side {
            Side::Lower => iv.next_lower = Some(link),
            Side::Upper => iv.next_upper = Some(link),
        }
    }
    for &id in &ids {
        for side in [Side::Lower, Side::Upper] {
            if let Some(link) = ccs.interval(id).next(side) {
                let back = ccs.interval(link.target).next(link.side);
                if back != Some(IntervalLink { target: id, side }) {
                    warnings.push(format!("link from {:?} {:?} is not mutual", id, side));
                }
            }
        }
    }
    ccs.warnings.extend(warnings);
}
