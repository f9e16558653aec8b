//! Continuous motions over linked oriented intervals: connected components,
//! paths between realizations, sampling, curves and nearest realizations.

use std::collections::{BTreeMap, HashMap};

use serde::{Serialize, Serializer};
use serde_json::json;

use crate::cayley::{build_ccs, CayleyConfigSpace, IntervalId, OrientedInterval, Side};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linkage::{LinkageSpec, TdLinkage, VertexPair};
use crate::realization::{cayley_distance, realize, restore_decorations, Realization, RealizationType};

/// One traversal of (part of) an oriented interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MotionLeg {
    #[serde(skip)]
    pub interval: IntervalId,
    #[serde(rename = "type")]
    pub rtype: RealizationType,
    pub lower: f64,
    pub upper: f64,
    pub enter_at: Side,
    pub exit_at: Side,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip_end: Option<f64>,
}

impl MotionLeg {
    fn new(id: IntervalId, iv: &OrientedInterval, enter_at: Side, exit_at: Side) -> Self {
        Self {
            interval: id,
            rtype: iv.rtype.clone(),
            lower: iv.lower,
            upper: iv.upper,
            enter_at,
            exit_at,
            clip_start: None,
            clip_end: None,
        }
    }

    fn endpoint(&self, side: Side) -> f64 {
        match side {
            Side::Lower => self.lower,
            Side::Upper => self.upper,
        }
    }

    /// Base length where the leg starts.
    pub fn start(&self) -> f64 {
        self.clip_start.unwrap_or_else(|| self.endpoint(self.enter_at))
    }

    /// Base length where the leg ends.
    pub fn end(&self) -> f64 {
        self.clip_end.unwrap_or_else(|| self.endpoint(self.exit_at))
    }

    pub fn arc_length(&self) -> f64 {
        (self.end() - self.start()).abs()
    }

    fn reversed(&self) -> Self {
        Self {
            enter_at: self.exit_at,
            exit_at: self.enter_at,
            clip_start: self.clip_end,
            clip_end: self.clip_start,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionKind {
    /// A full connected component; the last leg links back to the first.
    Component,
    /// An open motion between two realizations, clipped at both ends.
    Path,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuousMotion {
    pub kind: MotionKind,
    pub legs: Vec<MotionLeg>,
}

impl ContinuousMotion {
    pub fn arc_length(&self) -> f64 {
        self.legs.iter().map(MotionLeg::arc_length).sum()
    }

    pub fn reversed(&self) -> Self {
        Self { kind: self.kind, legs: self.legs.iter().rev().map(MotionLeg::reversed).collect() }
    }

    pub fn intervals(&self) -> Vec<IntervalId> {
        self.legs.iter().map(|l| l.interval).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("motion serializes")
    }

    /// The serialization plus `legCount`, `arcLength` and the leg intervals.
    pub fn summary(&self) -> serde_json::Value {
        let mut out = self.to_json();
        out["legCount"] = self.legs.len().into();
        out["arcLength"] = self.arc_length().into();
        out["intervals"] = self
            .legs
            .iter()
            .map(|l| json!({ "type": l.rtype.to_string(), "lower": l.lower, "upper": l.upper }))
            .collect();
        out
    }
}

/// Chooses base lengths along one leg. Implementations must return `start`
/// first and `end` last, exactly.
pub trait Sampler: Send + Sync {
    fn params(&self, start: f64, end: f64) -> Vec<f64>;
}

/// Evenly spaced in the base length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Uniform {
    pub per_leg: usize,
}

impl Default for Uniform {
    fn default() -> Self {
        Self { per_leg: 64 }
    }
}

impl Sampler for Uniform {
    fn params(&self, start: f64, end: f64) -> Vec<f64> {
        let n = self.per_leg.max(2);
        (0..n)
            .map(|i| match i {
                0 => start,
                i if i == n - 1 => end,
                i => start + (end - start) * i as f64 / (n - 1) as f64,
            })
            .collect()
    }
}

/// Cosine spacing: denser towards the leg ends, where configurations move
/// fastest with respect to the base length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointGraded {
    pub per_leg: usize,
}

impl Sampler for EndpointGraded {
    fn params(&self, start: f64, end: f64) -> Vec<f64> {
        let n = self.per_leg.max(2);
        (0..n)
            .map(|i| match i {
                0 => start,
                i if i == n - 1 => end,
                i => {
                    let s = 0.5 - 0.5 * (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
                    start + (end - start) * s
                }
            })
            .collect()
    }
}

/// A realization along a motion. `mirrored` marks samples whose physical
/// configuration, followed continuously from the start of the motion, is the
/// reflection of the canonical `realization`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub leg: usize,
    pub realization: Realization,
    pub mirrored: bool,
}

/// Canonical Cayley curve projected on three non-edges.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Curve3D {
    pub points: Vec<[f64; 3]>,
    pub type_labels: Vec<RealizationType>,
    /// `(leg index, base length)` per sample.
    pub sample_params: Vec<(usize, f64)>,
}

impl Curve3D {
    /// CSV with header `param,leg,type,x,y,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,leg,type,x,y,z\n");
        for ((p, t), (leg, param)) in self.points.iter().zip(&self.type_labels).zip(&self.sample_params) {
            out.push_str(&format!("{param},{leg},{t},{},{},{}\n", p[0], p[1], p[2]));
        }
        out
    }
}

/// Canonical-frame polyline traced by one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TracedCurve {
    pub points: Vec<[f64; 2]>,
    pub type_labels: Vec<RealizationType>,
    pub sample_params: Vec<(usize, f64)>,
}

impl TracedCurve {
    /// CSV with header `param,leg,type,x,y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,leg,type,x,y\n");
        for ((p, t), (leg, param)) in self.points.iter().zip(&self.type_labels).zip(&self.sample_params) {
            out.push_str(&format!("{param},{leg},{t},{},{}\n", p[0], p[1]));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct NearestPair {
    pub first: Realization,
    pub second: Realization,
    pub distance: f64,
    /// Sample indices of the pair within each component's sample list.
    pub indices: (usize, usize),
}

impl NearestPair {
    pub fn to_json(&self, tdl: &TdLinkage) -> serde_json::Value {
        json!({
            "first": self.first.to_json(tdl),
            "second": self.second.to_json(tdl),
            "distance": self.distance,
        })
    }
}

/// Payload of [`Error::NotConnected`].
#[derive(Clone, Debug)]
pub struct NotConnected {
    pub from_component: ContinuousMotion,
    pub to_component: ContinuousMotion,
    pub nearest: NearestPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    Case1,
    Case2a,
    Case2b,
    Case3a,
    Case3b,
}

impl PairCase {
    pub fn label(self) -> &'static str {
        match self {
            PairCase::Case1 => "1",
            PairCase::Case2a => "2a",
            PairCase::Case2b => "2b",
            PairCase::Case3a => "3a",
            PairCase::Case3b => "3b",
        }
    }
}

impl Serialize for PairCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Relationship between two realizations of the same linkage.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairClassification {
    pub same_oriented_interval: bool,
    pub same_non_oriented_interval: bool,
    pub same_type: bool,
    pub same_component: bool,
    pub path_count: usize,
    pub case: PairCase,
}

/// A linkage with its Cayley configuration space and connected components.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub linkage: TdLinkage,
    pub ccs: CayleyConfigSpace,
    pub tol: Tolerances,
    components: Vec<ContinuousMotion>,
    component_of: HashMap<IntervalId, usize>,
}

impl Analysis {
    pub fn from_spec(spec: &LinkageSpec, tol: &Tolerances) -> Result<Self> {
        Self::new(TdLinkage::from_spec(spec, tol)?, tol)
    }

    pub fn new(linkage: TdLinkage, tol: &Tolerances) -> Result<Self> {
        let ccs = build_ccs(&linkage, tol)?;
        let mut analysis =
            Self { linkage, ccs, tol: tol.clone(), components: Vec::new(), component_of: HashMap::new() };
        analysis.components = analysis.find_all_components();
        for (i, c) in analysis.components.iter().enumerate() {
            for id in c.intervals() {
                analysis.component_of.insert(id, i);
            }
        }
        Ok(analysis)
    }

    pub fn realize(&self, length: f64, rtype: &RealizationType) -> Result<Realization> {
        realize(&self.linkage, length, rtype, &self.tol)
    }

    /// Connected components, ordered by their smallest interval.
    pub fn components(&self) -> &[ContinuousMotion] {
        &self.components
    }

    pub fn component(&self, index: usize) -> Result<&ContinuousMotion> {
        self.components.get(index).ok_or(Error::UnknownComponent(index))
    }

    fn slack(&self) -> f64 {
        self.tol.endpoint * self.linkage.scale()
    }

    /// The oriented interval holding `r`'s base length and type.
    pub fn locate(&self, r: &Realization) -> Result<IntervalId> {
        if r.linkage_fingerprint() != self.linkage.fingerprint() {
            return Err(Error::MismatchedLinkage);
        }
        let slack = self.slack();
        self.ccs
            .interval_ids()
            .filter(|id| r.rtype.admits(&self.ccs.interval(*id).rtype))
            .filter(|id| self.ccs.interval(*id).contains(r.base_length, slack))
            .min_by(|a, b| {
                let gap = |id: &IntervalId| {
                    let iv = self.ccs.interval(*id);
                    (iv.lower - r.base_length).max(r.base_length - iv.upper).max(0.0)
                };
                gap(a).total_cmp(&gap(b)).then(a.cmp(b))
            })
            .ok_or_else(|| Error::NotRealizable { length: r.base_length, rtype: r.rtype.to_string() })
    }

    /// Walks the linked intervals from `start`, leaving through its upper end,
    /// until the walk comes back to `start`.
    fn walk_component(&self, start: IntervalId) -> Result<ContinuousMotion> {
        let mut legs = vec![MotionLeg::new(start, self.ccs.interval(start), Side::Lower, Side::Upper)];
        let (mut cur, mut exit) = (start, Side::Upper);
        for _ in 0..=2 * self.ccs.interval_count() {
            let link = self.ccs.interval(cur).next(exit).ok_or(Error::UnlinkedEndpoint)?;
            if link.target == start {
                return Ok(ContinuousMotion { kind: MotionKind::Component, legs });
            }
            exit = link.side.opposite();
            cur = link.target;
            legs.push(MotionLeg::new(cur, self.ccs.interval(cur), link.side, exit));
        }
        Err(Error::UnlinkedEndpoint)
    }

    /// The connected component containing `r`.
    pub fn find_component(&self, r: &Realization) -> Result<ContinuousMotion> {
        self.walk_component(self.locate(r)?)
    }

    fn find_all_components(&self) -> Vec<ContinuousMotion> {
        let mut ids: Vec<IntervalId> = self.ccs.interval_ids().collect();
        ids.sort_by(|a, b| self.ccs.interval(*a).lower.total_cmp(&self.ccs.interval(*b).lower).then(a.cmp(b)));
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for id in ids {
            if seen.contains(&id) {
                continue;
            }
            let motion = self.walk_component(id).unwrap_or_else(|_| ContinuousMotion {
                kind: MotionKind::Component,
                legs: vec![MotionLeg::new(id, self.ccs.interval(id), Side::Lower, Side::Upper)],
            });
            seen.extend(motion.intervals());
            out.push(motion);
        }
        out
    }

    /// Index of the component containing `r`.
    pub fn component_index(&self, r: &Realization) -> Result<usize> {
        let id = self.locate(r)?;
        self.component_of.get(&id).copied().ok_or(Error::UnlinkedEndpoint)
    }

    fn walk_path(
        &self,
        from: (IntervalId, f64),
        to: (IntervalId, f64),
        exit: Side,
    ) -> Result<Option<ContinuousMotion>> {
        let (i1, l1) = from;
        let (i2, l2) = to;
        let first = self.ccs.interval(i1);
        let direct = match exit {
            Side::Upper => l2 >= l1,
            Side::Lower => l2 <= l1,
        };
        let mut leg = MotionLeg::new(i1, first, exit.opposite(), exit);
        leg.clip_start = Some(l1);
        if i1 == i2 && direct {
            leg.clip_end = Some(l2);
            return Ok(Some(ContinuousMotion { kind: MotionKind::Path, legs: vec![leg] }));
        }
        let mut legs = vec![leg];
        let (mut cur, mut exit) = (i1, exit);
        for _ in 0..=2 * self.ccs.interval_count() + 1 {
            let link = self.ccs.interval(cur).next(exit).ok_or(Error::UnlinkedEndpoint)?;
            let target = self.ccs.interval(link.target);
            if link.target == i2 {
                let mut last = MotionLeg::new(i2, target, link.side, link.side.opposite());
                last.clip_end = Some(l2);
                legs.push(last);
                return Ok(Some(ContinuousMotion { kind: MotionKind::Path, legs }));
            }
            if link.target == i1 {
                return Ok(None);
            }
            exit = link.side.opposite();
            cur = link.target;
            legs.push(MotionLeg::new(cur, target, link.side, exit));
        }
        Ok(None)
    }

    /// Continuous motion paths from `r1` to `r2`: none, one or two, fewest
    /// legs first (ties by arc length in the base length).
    pub fn find_path(&self, r1: &Realization, r2: &Realization) -> Result<Vec<ContinuousMotion>> {
        if r1.linkage_fingerprint() != r2.linkage_fingerprint() {
            return Err(Error::MismatchedLinkage);
        }
        let (i1, i2) = (self.locate(r1)?, self.locate(r2)?);
        let clamp = |id: IntervalId, l: f64| {
            let iv = self.ccs.interval(id);
            l.clamp(iv.lower, iv.upper)
        };
        let (l1, l2) = (clamp(i1, r1.base_length), clamp(i2, r2.base_length));
        if i1 == i2 && l1 == l2 {
            let mut leg = MotionLeg::new(i1, self.ccs.interval(i1), Side::Lower, Side::Upper);
            leg.clip_start = Some(l1);
            leg.clip_end = Some(l2);
            return Ok(vec![ContinuousMotion { kind: MotionKind::Path, legs: vec![leg] }]);
        }

        let mut paths = Vec::with_capacity(2);
        for exit in [Side::Upper, Side::Lower] {
            if let Some(p) = self.walk_path((i1, l1), (i2, l2), exit)? {
                paths.push(p);
            }
        }
        if paths.is_empty() {
            let from_component = self.walk_component(i1)?;
            let to_component = self.walk_component(i2)?;
            let nearest = self.nearest_realizations(&from_component, &to_component, &Uniform::default())?;
            return Err(Error::NotConnected(Box::new(NotConnected { from_component, to_component, nearest })));
        }
        let eps = 1e-9 * self.linkage.scale();
        paths.sort_by(|a, b| {
            a.legs.len().cmp(&b.legs.len()).then_with(|| {
                let (x, y) = (a.arc_length(), b.arc_length());
                if (x - y).abs() <= eps {
                    let key = |m: &ContinuousMotion| {
                        let mut ids = m.intervals();
                        ids.sort();
                        ids
                    };
                    key(a).cmp(&key(b))
                } else {
                    x.total_cmp(&y)
                }
            })
        });
        Ok(paths)
    }

    fn non_oriented_index(&self, length: f64) -> Option<usize> {
        let slack = self.slack();
        self.ccs.non_oriented.iter().position(|(lo, hi)| length >= lo - slack && length <= hi + slack)
    }

    pub fn classify_pair(&self, r1: &Realization, r2: &Realization) -> Result<PairClassification> {
        let (i1, i2) = (self.locate(r1)?, self.locate(r2)?);
        let path_count = match self.find_path(r1, r2) {
            Ok(paths) => paths.len(),
            Err(Error::NotConnected(_)) => 0,
            Err(e) => return Err(e),
        };
        let same_oriented_interval = i1 == i2;
        let same_non_oriented_interval =
            self.non_oriented_index(r1.base_length) == self.non_oriented_index(r2.base_length);
        let case = match (same_oriented_interval, same_non_oriented_interval, path_count > 0) {
            (true, _, _) => PairCase::Case1,
            (false, true, true) => PairCase::Case2a,
            (false, true, false) => PairCase::Case2b,
            (false, false, true) => PairCase::Case3a,
            (false, false, false) => PairCase::Case3b,
        };
        Ok(PairClassification {
            same_oriented_interval,
            same_non_oriented_interval,
            same_type: self.ccs.interval(i1).rtype == self.ccs.interval(i2).rtype,
            same_component: self.component_of.get(&i1) == self.component_of.get(&i2),
            path_count,
            case,
        })
    }

    /// Realization at an interval endpoint: the flipping step is placed
    /// tangentially. Returns the realization and whether canonicalizing the
    /// zero-sign type reflected it relative to the interval's type.
    fn realize_on_leg(&self, leg: &MotionLeg, length: f64) -> Option<(Realization, bool)> {
        let iv = self.ccs.interval(leg.interval);
        let flip = if length == iv.lower {
            iv.flip_lower
        } else if length == iv.upper {
            iv.flip_upper
        } else {
            None
        };
        if let Some(step) = flip {
            let mut raw = iv.rtype.signs().to_vec();
            raw[step] = 0;
            let reflected = raw.iter().find(|s| **s != 0).is_some_and(|s| *s < 0);
            if let Ok(r) = self.realize(length, &RealizationType::new(raw)) {
                return Some((r, reflected));
            }
        }
        self.realize(length, &iv.rtype).ok().map(|r| (r, false))
    }

    /// Whether passing from `leg` through its exit endpoint reflects the
    /// canonical frame (the flipped type had to be negated to canonicalize).
    fn junction_reflects(&self, leg: &MotionLeg) -> bool {
        let iv = self.ccs.interval(leg.interval);
        let Some(step) = iv.flip(leg.exit_at) else { return false };
        let mut raw = iv.rtype.signs().to_vec();
        raw[step] = -raw[step];
        raw.iter().find(|s| **s != 0).is_some_and(|s| *s < 0)
    }

    fn sample_with_parity(&self, motion: &ContinuousMotion, sampler: &dyn Sampler) -> (Vec<Sample>, bool) {
        let mut out: Vec<Sample> = Vec::new();
        let mut parity = false;
        for (li, leg) in motion.legs.iter().enumerate() {
            let params =
                if leg.start() == leg.end() { vec![leg.start()] } else { sampler.params(leg.start(), leg.end()) };
            for (j, &length) in params.iter().enumerate() {
                if j == 0 && li > 0 {
                    continue;
                }
                if let Some((realization, reflected)) = self.realize_on_leg(leg, length) {
                    out.push(Sample { leg: li, realization, mirrored: parity ^ reflected });
                }
            }
            if motion.kind == MotionKind::Component || li + 1 < motion.legs.len() {
                parity ^= self.junction_reflects(leg);
            }
        }
        if motion.kind == MotionKind::Component && out.len() > 1 {
            let (first, last) = (&out[0].realization, &out[out.len() - 1].realization);
            let close = (first.base_length - last.base_length).abs() <= self.slack()
                && cayley_distance(first, last).is_ok_and(|d| d <= 1e-6 * self.linkage.scale());
            if close {
                out.pop();
            }
        }
        (out, parity)
    }

    /// Realizations along `motion`, in motion order. Junction samples are
    /// emitted once, with the earlier leg; for a component, the sample that
    /// closes the cycle is dropped.
    pub fn sample(&self, motion: &ContinuousMotion, sampler: &dyn Sampler) -> Vec<Sample> {
        self.sample_with_parity(motion, sampler).0
    }

    pub fn sample_realizations(&self, motion: &ContinuousMotion, sampler: &dyn Sampler) -> Vec<Realization> {
        self.sample(motion, sampler).into_iter().map(|s| s.realization).collect()
    }

    /// Lengths of three complete Cayley vector non-edges along `motion`.
    pub fn curve_3d(
        &self,
        motion: &ContinuousMotion,
        nonedges: [VertexPair; 3],
        sampler: &dyn Sampler,
    ) -> Result<Curve3D> {
        let vector = self.linkage.cayley_vector();
        let mut slots = [0usize; 3];
        for (slot, p) in slots.iter_mut().zip(nonedges) {
            *slot = vector.iter().position(|q| *q == p).ok_or_else(|| {
                let (u, v) = self.linkage.pair_names(p);
                Error::NonedgeNotInVector(u, v)
            })?;
        }
        if slots[0] == slots[1] || slots[1] == slots[2] || slots[0] == slots[2] {
            let (u, v) = self.linkage.pair_names(nonedges[2]);
            return Err(Error::NonedgeNotInVector(u, v));
        }
        let samples = self.sample(motion, sampler);
        let mut curve = Curve3D { points: Vec::new(), type_labels: Vec::new(), sample_params: Vec::new() };
        for s in samples {
            let c = &s.realization.cayley_vector().0;
            curve.points.push([c[slots[0]], c[slots[1]], c[slots[2]]]);
            curve.type_labels.push(s.realization.rtype.clone());
            curve.sample_params.push((s.leg, s.realization.base_length));
        }
        Ok(curve)
    }

    /// Canonical-frame curves traced by `vertices` (cluster passengers
    /// included) as the linkage moves continuously along `motion`.
    ///
    /// A component whose cycle returns to its starting base length in the
    /// mirror image is traversed a second time, reflected, so the traced
    /// curves close.
    pub fn traced_curves(
        &self,
        motion: &ContinuousMotion,
        vertices: &[&str],
        sampler: &dyn Sampler,
    ) -> Result<BTreeMap<String, TracedCurve>> {
        let (samples, parity) = self.sample_with_parity(motion, sampler);
        let full: Vec<BTreeMap<String, crate::Vec2>> =
            samples.iter().map(|s| restore_decorations(&self.linkage, &s.realization)).collect();
        for v in vertices {
            if full.first().is_some_and(|m| !m.contains_key(*v))
                || (full.is_empty() && self.linkage.index_of(v).is_none())
            {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        let closes = motion.kind == MotionKind::Component
            && motion.legs.first().zip(motion.legs.last()).is_some_and(|(a, b)| a.start() == b.end());
        let passes: &[bool] = if closes && parity { &[false, true] } else { &[false] };

        let mut out = BTreeMap::new();
        for v in vertices {
            let mut curve = TracedCurve { points: Vec::new(), type_labels: Vec::new(), sample_params: Vec::new() };
            for &extra in passes {
                for (s, points) in samples.iter().zip(&full) {
                    let p = points[*v];
                    let y = if s.mirrored ^ extra { -p.y } else { p.y };
                    curve.points.push([p.x, y]);
                    curve.type_labels.push(s.realization.rtype.clone());
                    curve.sample_params.push((s.leg, s.realization.base_length));
                }
            }
            if closes && !curve.points.is_empty() {
                curve.points.push(curve.points[0]);
                curve.type_labels.push(curve.type_labels[0].clone());
                curve.sample_params.push(curve.sample_params[0]);
            }
            out.insert(v.to_string(), curve);
        }
        Ok(out)
    }

    /// Closest pair of sampled realizations, one per motion, in Cayley
    /// distance. Ties go to the lexicographically smallest sample indices.
    pub fn nearest_realizations(
        &self,
        c1: &ContinuousMotion,
        c2: &ContinuousMotion,
        sampler: &dyn Sampler,
    ) -> Result<NearestPair> {
        let s1 = self.sample_realizations(c1, sampler);
        let s2 = self.sample_realizations(c2, sampler);
        let mut best: Option<(f64, usize, usize)> = None;
        for (i, a) in s1.iter().enumerate() {
            for (j, b) in s2.iter().enumerate() {
                let d = a.cayley_vector().distance(b.cayley_vector());
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
        let (distance, i, j) = best.ok_or(Error::NotRealizable { length: f64::NAN, rtype: String::new() })?;
        Ok(NearestPair { first: s1[i].clone(), second: s2[j].clone(), distance, indices: (i, j) })
    }
}
