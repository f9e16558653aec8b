//! Ruler-and-compass realization, orientation predicates and Cayley distances.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::json;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linkage::TdLinkage;
use crate::Vec2;

/// Orientation signs, one per construction step, up to global reflection.
///
/// Stored in canonical form: the first nonzero sign is `+1`. Types order
/// lexicographically with `+ < 0 < -`, so `(+,+)` comes before `(+,-)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealizationType(Vec<i8>);

impl RealizationType {
    /// Canonicalizes `signs` (entries are clamped to -1, 0, +1).
    pub fn new(mut signs: Vec<i8>) -> Self {
        for s in signs.iter_mut() {
            *s = s.signum();
        }
        if signs.iter().find(|s| **s != 0).is_some_and(|s| *s < 0) {
            for s in signs.iter_mut() {
                *s = -*s;
            }
        }
        Self(signs)
    }

    /// Parses a string over `+`, `-` and `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::InvalidSpec(format!("bad sign {other:?} in realization type {text:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        if signs.is_empty() {
            return Err(Error::InvalidSpec("empty realization type".into()));
        }
        Ok(Self::new(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The type with the sign of `step` (0-based) negated, canonicalized.
    pub fn flipped(&self, step: usize) -> Self {
        let mut signs = self.0.clone();
        signs[step] = -signs[step];
        Self::new(signs)
    }

    /// Same type with `step` forced to sign 0.
    pub fn with_zero(&self, step: usize) -> Self {
        let mut signs = self.0.clone();
        signs[step] = 0;
        Self::new(signs)
    }

    /// Whether `other` agrees with `self` wherever `self` is nonzero, up to
    /// global reflection.
    pub fn admits(&self, other: &RealizationType) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let agree = |flip: i8| self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *a == flip * *b);
        agree(1) || agree(-1)
    }

    fn key(&self) -> impl Iterator<Item = i8> + '_ {
        self.0.iter().map(|s| -s)
    }
}

impl Ord for RealizationType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(other.key())
    }
}

impl PartialOrd for RealizationType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RealizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl Serialize for RealizationType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Lengths of the complete Cayley vector non-edges in one realization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CayleyDistanceVector(pub Vec<f64>);

impl CayleyDistanceVector {
    pub fn distance(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Points of the reduced linkage in the canonical frame: the first base
/// endpoint at the origin, the second on the positive x-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    linkage: u64,
    pub base_length: f64,
    pub rtype: RealizationType,
    /// Indexed by reduced vertex.
    pub points: Vec<Vec2>,
    cayley: CayleyDistanceVector,
}

impl Realization {
    pub fn linkage_fingerprint(&self) -> u64 {
        self.linkage
    }

    /// Complete Cayley distance vector, computed once at construction.
    pub fn cayley_vector(&self) -> &CayleyDistanceVector {
        &self.cayley
    }

    /// `{baseLength, type, points}` with passenger vertices restored.
    pub fn to_json(&self, tdl: &TdLinkage) -> serde_json::Value {
        let points: BTreeMap<String, [f64; 2]> =
            restore_decorations(tdl, self).into_iter().map(|(k, p)| (k, [p.x, p.y])).collect();
        json!({ "baseLength": self.base_length, "type": self.rtype.to_string(), "points": points })
    }
}

/// Parses a realization literal `L:signs`, such as `5:+-`.
pub fn parse_literal(text: &str) -> Result<(f64, RealizationType)> {
    let bad = || Error::InvalidSpec(format!("realization literal {text:?} is not of the form L:signs"));
    let (length, signs) = text.split_once(':').ok_or_else(bad)?;
    let length: f64 = length.trim().parse().map_err(|_| bad())?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(bad());
    }
    Ok((length, RealizationType::parse(signs.trim())?))
}

/// Intersection of circle(`u`, `r1`) and circle(`w`, `r2`) expressed in the
/// frame of `u -> w`: foot `x` along the axis and squared height `h2`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CircleCut {
    pub d: f64,
    pub x: f64,
    pub h2: f64,
}

impl CircleCut {
    pub fn new(u: Vec2, w: Vec2, r1: f64, r2: f64) -> Self {
        let d = (w - u).norm();
        if d == 0.0 {
            return Self { d, x: 0.0, h2: f64::NEG_INFINITY };
        }
        let sum = r1 + r2;
        let diff = r1 - r2;
        let h2 = (sum * sum - d * d) * (d * d - diff * diff) / (4.0 * d * d);
        let x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
        Self { d, x, h2 }
    }
}

/// State of a forward solve, possibly stopped at the first failing step.
pub(crate) struct Trace {
    pub points: Vec<Vec2>,
    /// Per attempted step: `(d - |r1 - r2|, r1 + r2 - d)`, both nonnegative
    /// exactly when the step's circles meet.
    pub slack: Vec<(f64, f64)>,
    /// 0-based index of the first step that could not be placed.
    pub failed: Option<usize>,
    pub error: Option<Error>,
}

/// Places vertices step by step. A sign of 0 selects the tangential point
/// and requires `h2` to vanish within `tol.geom * scale^2`, unless
/// `zero_as_plus` is set.
pub(crate) fn trace(tdl: &TdLinkage, base_length: f64, signs: &[i8], tol: &Tolerances, zero_as_plus: bool) -> Trace {
    let n = tdl.graph().vertex_count();
    let m = tdl.step_count();
    let scale2 = tdl.scale() * tdl.scale();
    let mut points = vec![Vec2::new(f64::NAN, f64::NAN); n];
    let (f0, f1) = tdl.base_endpoints();
    points[f0] = Vec2::zeros();
    points[f1] = Vec2::new(base_length, 0.0);
    let mut slack = Vec::with_capacity(m);

    let fail = |points, slack, k, e| Trace { points, slack, failed: Some(k), error: Some(e) };
    if !(base_length > 0.0 && base_length.is_finite()) {
        return fail(points, slack, 0, Error::Unrealizable { step: 1 });
    }

    for (k, step) in tdl.steps().iter().enumerate() {
        let (u, w) = step.anchors;
        let (r1, r2) = step.lengths;
        let (pu, pw) = (points[u], points[w]);
        let cut = CircleCut::new(pu, pw, r1, r2);
        slack.push((cut.d - (r1 - r2).abs(), r1 + r2 - cut.d));
        if cut.h2.is_nan() || cut.h2 < -tol.discriminant * scale2 {
            return fail(points, slack, k, Error::Unrealizable { step: k + 1 });
        }
        let mut sign = signs[k] as f64;
        if signs[k] == 0 {
            if zero_as_plus {
                sign = 1.0;
            } else if cut.h2 > tol.geom * scale2 {
                return fail(points, slack, k, Error::AmbiguousZeroSign { step: k + 1 });
            }
        }
        let e = (pw - pu) / cut.d;
        let normal = Vec2::new(-e.y, e.x);
        points[step.vertex] = pu + e * cut.x + normal * (sign * cut.h2.max(0.0).sqrt());
    }
    Trace { points, slack, failed: None, error: None }
}

/// Realizes the linkage with base length `base_length` and type `rtype`.
pub fn realize(tdl: &TdLinkage, base_length: f64, rtype: &RealizationType, tol: &Tolerances) -> Result<Realization> {
    if rtype.len() != tdl.step_count() {
        return Err(Error::TypeLength { expected: tdl.step_count(), got: rtype.len() });
    }
    let t = trace(tdl, base_length, rtype.signs(), tol, false);
    if let Some(e) = t.error {
        return Err(e);
    }
    Ok(from_points(tdl, base_length, rtype.clone(), t.points))
}

pub(crate) fn from_points(tdl: &TdLinkage, base_length: f64, rtype: RealizationType, points: Vec<Vec2>) -> Realization {
    let cayley = distance_vector(tdl, base_length, &points);
    Realization { linkage: tdl.fingerprint(), base_length, rtype, points, cayley }
}

fn distance_vector(tdl: &TdLinkage, base_length: f64, points: &[Vec2]) -> CayleyDistanceVector {
    let mut values = Vec::with_capacity(tdl.cayley_vector().len());
    for (i, p) in tdl.cayley_vector().iter().enumerate() {
        values.push(if i == 0 { base_length } else { (points[p.0] - points[p.1]).norm() });
    }
    CayleyDistanceVector(values)
}

/// Sign of the orientation of `(u, w, v)`: `+1` when counterclockwise, 0 when
/// twice the signed area is within `rel_tol` times the squared extent.
pub fn orientation_of(v: Vec2, u: Vec2, w: Vec2, rel_tol: f64) -> i8 {
    let cross = (w - u).perp(&(v - u));
    let extent = (w - u).norm().max((v - u).norm()).max((v - w).norm());
    if cross.abs() <= rel_tol * extent * extent {
        0
    } else {
        cross.signum() as i8
    }
}

/// Complete Cayley distance vector of `r`. Entry 0 is the base length.
pub fn complete_cayley_distance_vector(r: &Realization) -> &CayleyDistanceVector {
    &r.cayley
}

/// Euclidean distance between complete Cayley distance vectors.
pub fn cayley_distance(r1: &Realization, r2: &Realization) -> Result<f64> {
    if r1.linkage != r2.linkage {
        return Err(Error::MismatchedLinkage);
    }
    Ok(r1.cayley.distance(&r2.cayley))
}

/// Full point map by vertex name, with every cluster passenger placed by the
/// rotation and translation taking its local anchors onto their realized
/// positions.
pub fn restore_decorations(tdl: &TdLinkage, r: &Realization) -> BTreeMap<String, Vec2> {
    let mut out: BTreeMap<String, Vec2> =
        r.points.iter().enumerate().map(|(i, p)| (tdl.name(i).to_string(), *p)).collect();
    for deco in tdl.decorations() {
        let pa = out[&deco.anchors[0]];
        let pb = out[&deco.anchors[1]];
        let la = Vec2::new(deco.anchor_coords[0][0], deco.anchor_coords[0][1]);
        let lb = Vec2::new(deco.anchor_coords[1][0], deco.anchor_coords[1][1]);
        let local = lb - la;
        let real = pb - pa;
        let angle = real.y.atan2(real.x) - local.y.atan2(local.x);
        let rot = nalgebra::Rotation2::new(angle);
        for (name, p) in &deco.passengers {
            let q = pa + rot * (Vec2::new(p[0], p[1]) - la);
            out.insert(name.clone(), q);
        }
    }
    out
}
