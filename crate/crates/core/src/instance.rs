//! The `dhl-1` JSON instance format.
//!
//! Rationals are written as strings (`"3"`, `"-1/2"`); integers are also
//! accepted on input. Parsing validates everything the library would reject
//! later, so a parsed [`Instance`] is always usable.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Point, PointSet};
use crate::hconvex::{DirectionSet, HConvexSet};
use crate::helly::Target;
use crate::nerve::MatroidOracle;
use crate::rational::{format_rational, parse_rational, Rational};

pub const FORMAT_VERSION: &str = "dhl-1";

/// How an instance or report was produced.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub seed: u64,
    pub operation: String,
    #[serde(default)]
    pub generator: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub guards: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub library_version: String,
}

/// H-convex sets over one direction set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HConvexFamily {
    pub directions: Arc<DirectionSet>,
    pub sets: Vec<HConvexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub dimension: usize,
    pub boxes: Vec<AxisBox>,
    pub hconvex: Option<HConvexFamily>,
    /// Disjoint lists of indices into the boxes (or, without boxes, into the
    /// H-convex sets).
    pub classes: Option<Vec<Vec<usize>>>,
    pub targets: Vec<Target>,
    /// A matroid on the boxes.
    pub matroid: Option<MatroidOracle>,
    /// Point lists of equal or unequal length for the intermixing suites.
    pub parts: Option<Vec<Vec<Point>>>,
    pub manifest: Option<RunManifest>,
}

impl Instance {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            boxes: Vec::new(),
            hconvex: None,
            classes: None,
            targets: Vec::new(),
            matroid: None,
            parts: None,
            manifest: None,
        }
    }

    /// Size of the family the classes index into.
    pub fn family_len(&self) -> usize {
        match &self.hconvex {
            Some(h) if self.boxes.is_empty() => h.sets.len(),
            _ => self.boxes.len(),
        }
    }

    /// The boxes grouped by class.
    pub fn box_classes(&self) -> Option<Vec<Vec<AxisBox>>> {
        self.classes
            .as_ref()
            .map(|cls| cls.iter().map(|c| c.iter().map(|&i| self.boxes[i].clone()).collect()).collect())
    }

    /// The H-convex sets grouped by class.
    pub fn hconvex_classes(&self) -> Option<Vec<Vec<HConvexSet>>> {
        let family = self.hconvex.as_ref().filter(|_| self.boxes.is_empty())?;
        self.classes
            .as_ref()
            .map(|cls| cls.iter().map(|c| c.iter().map(|&i| family.sets[i].clone()).collect()).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

impl RawRational {
    fn value(&self) -> Result<Rational> {
        match self {
            Self::Int(v) => Ok(Rational::from_integer((*v).into())),
            Self::Text(s) => parse_rational(s),
        }
    }

    fn of(value: &Rational) -> Self {
        Self::Text(format_rational(value))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lo: Option<Vec<RawRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hi: Option<Vec<RawRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    empty: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHConvex {
    directions: Vec<Vec<RawRational>>,
    /// `null` is an absent constraint.
    sets: Vec<Vec<Option<RawRational>>>,
}

fn one() -> usize {
    1
}

fn is_false(b: &bool) -> bool {
    !b
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    points: Vec<Vec<RawRational>>,
    #[serde(default = "one")]
    count: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    multiset: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatroid {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parts: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacities: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    independent: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    version: String,
    dimension: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    boxes: Vec<RawBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hconvex: Option<RawHConvex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    targets: Vec<RawTarget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matroid: Option<RawMatroid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parts: Option<Vec<Vec<Vec<RawRational>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    manifest: Option<RunManifest>,
}

fn values(raw: &[RawRational]) -> Result<Vec<Rational>> {
    raw.iter().map(RawRational::value).collect()
}

fn point(dim: usize, raw: &[RawRational]) -> Result<Point> {
    let p = Point::new(values(raw)?)?;
    if p.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
    }
    Ok(p)
}

fn raw_point(p: &Point) -> Vec<RawRational> {
    p.coords().iter().map(RawRational::of).collect()
}

/// Parses a `dhl-1` document. Every failure, including semantic ones, is an
/// [`Error::Parse`].
pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    build(raw).map_err(|e| match e {
        Error::Parse(_) => e,
        other => Error::Parse(other.to_string()),
    })
}

fn build(raw: RawInstance) -> Result<Instance> {
    if raw.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", raw.version)));
    }
    let dim = raw.dimension;
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    let mut inst = Instance::new(dim);
    for (i, b) in raw.boxes.iter().enumerate() {
        let parsed = match (b.empty, &b.lo, &b.hi) {
            (Some(true), None, None) => AxisBox::empty(dim),
            (None | Some(false), Some(lo), Some(hi)) => AxisBox::new(values(lo)?, values(hi)?)?,
            _ => return Err(Error::Parse(format!("box {i} needs either lo and hi or \"empty\": true"))),
        };
        if parsed.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: parsed.dim() });
        }
        inst.boxes.push(parsed);
    }
    if let Some(h) = &raw.hconvex {
        let directions = Arc::new(DirectionSet::new(dim, h.directions.iter().map(|d| values(d)).collect::<Result<_>>()?)?);
        if let Some(y) = crate::hconvex::validate_direction_set(&directions) {
            return Err(Error::Parse(format!(
                "directions do not positively span: y = {:?} has <h, y> <= 0 for all h",
                Point::new(y)?
            )));
        }
        let sets = h
            .sets
            .iter()
            .map(|bounds| {
                let bounds = bounds.iter().map(|c| c.as_ref().map(RawRational::value).transpose()).collect::<Result<_>>()?;
                HConvexSet::new(directions.clone(), bounds)
            })
            .collect::<Result<_>>()?;
        inst.hconvex = Some(HConvexFamily { directions, sets });
    }
    if let Some(classes) = raw.classes {
        let n = inst.family_len();
        let mut seen = vec![false; n];
        for &i in classes.iter().flatten() {
            if i >= n {
                return Err(Error::Parse(format!("class index {i} out of range for {n} sets")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Parse(format!("set {i} appears in two classes")));
            }
        }
        inst.classes = Some(classes);
    }
    for t in &raw.targets {
        let pts = t.points.iter().map(|p| point(dim, p)).collect::<Result<Vec<_>>>()?;
        let set = if t.multiset { PointSet::multiset(dim, pts)? } else { PointSet::new(dim, pts)? };
        inst.targets.push(Target::new(set, t.count)?);
    }
    if let Some(m) = &raw.matroid {
        let size = inst.boxes.len();
        let oracle = match (m.kind.as_str(), m.rank, &m.parts, &m.capacities, &m.independent) {
            ("uniform", Some(rank), None, None, None) => MatroidOracle::uniform(size, rank)?,
            ("partition", None, Some(parts), Some(caps), None) => MatroidOracle::partition(size, parts, caps.clone())?,
            ("explicit-independent-sets", None, None, None, Some(sets)) => MatroidOracle::explicit(size, sets.clone())?,
            (kind, ..) => return Err(Error::Parse(format!("bad parameters for matroid kind {kind:?}"))),
        };
        inst.matroid = Some(oracle);
    }
    if let Some(parts) = &raw.parts {
        inst.parts = Some(
            parts
                .iter()
                .map(|part| part.iter().map(|p| point(dim, p)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        );
    }
    inst.manifest = raw.manifest;
    Ok(inst)
}

/// Pretty-printed `dhl-1` JSON with a trailing newline.
pub fn emit_instance(inst: &Instance) -> String {
    let raw = RawInstance {
        version: FORMAT_VERSION.into(),
        dimension: inst.dimension,
        boxes: inst
            .boxes
            .iter()
            .map(|b| match (b.lo(), b.hi()) {
                (Some(lo), Some(hi)) => RawBox {
                    lo: Some(lo.iter().map(RawRational::of).collect()),
                    hi: Some(hi.iter().map(RawRational::of).collect()),
                    empty: None,
                },
                _ => RawBox { lo: None, hi: None, empty: Some(true) },
            })
            .collect(),
        hconvex: inst.hconvex.as_ref().map(|h| RawHConvex {
            directions: h.directions.directions().iter().map(|d| d.iter().map(RawRational::of).collect()).collect(),
            sets: h.sets.iter().map(|s| s.bounds().iter().map(|c| c.as_ref().map(RawRational::of)).collect()).collect(),
        }),
        classes: inst.classes.clone(),
        targets: inst
            .targets
            .iter()
            .map(|t| RawTarget {
                points: t
                    .points
                    .iter_counted()
                    .flat_map(|(p, c)| std::iter::repeat_n(raw_point(p), c))
                    .collect(),
                count: t.count,
                multiset: t.points.is_multiset(),
            })
            .collect(),
        matroid: inst.matroid.as_ref().map(raw_matroid),
        parts: inst.parts.as_ref().map(|parts| parts.iter().map(|p| p.iter().map(raw_point).collect()).collect()),
        manifest: inst.manifest.clone(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("instance serializes");
    text.push('\n');
    text
}

fn raw_matroid(m: &MatroidOracle) -> RawMatroid {
    let mut raw = RawMatroid { kind: m.kind().into(), rank: None, parts: None, capacities: None, independent: None };
    match m {
        MatroidOracle::Uniform { rank, .. } => raw.rank = Some(*rank),
        MatroidOracle::Partition { part_of, capacities } => {
            raw.parts = Some(
                (0..capacities.len()).map(|p| (0..part_of.len()).filter(|&e| part_of[e] == p).collect()).collect(),
            );
            raw.capacities = Some(capacities.clone());
        }
        MatroidOracle::ExplicitIndependentSets { independent, .. } => raw.independent = Some(independent.clone()),
    }
    raw
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const SAMPLE: &str = r#"{
        "version": "dhl-1",
        "dimension": 2,
        "boxes": [
            {"lo": [0, "1/2"], "hi": ["2", 3]},
            {"empty": true}
        ],
        "classes": [[1], [0]],
        "targets": [{"points": [[0, 1], ["1/3", "-2"]], "count": 2}],
        "matroid": {"kind": "partition", "parts": [[0, 1]], "capacities": [1]}
    }"#;

    #[test]
    fn parse_sample() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.dimension, 2);
        assert_eq!(inst.boxes[0], AxisBox::new(vec![int(0), ratio(1, 2)], vec![int(2), int(3)]).unwrap());
        assert!(inst.boxes[1].is_empty());
        assert_eq!(inst.targets[0].count, 2);
        assert_eq!(inst.targets[0].points.points()[1], Point::new(vec![ratio(1, 3), int(-2)]).unwrap());
        assert_eq!(inst.matroid.as_ref().unwrap().rank(&[0, 1]), 1);
        assert_eq!(inst.box_classes().unwrap()[0], vec![AxisBox::empty(2)]);
    }

    #[test]
    fn round_trip() {
        let inst = parse_instance(SAMPLE).unwrap();
        let text = emit_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(emit_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn hconvex_round_trip() {
        let text = r#"{"version": "dhl-1", "dimension": 2,
            "hconvex": {"directions": [[-1, 0], [0, -1], [1, 1]], "sets": [[0, 0, 4], [null, "-1", 3]]},
            "targets": [{"points": [[1, 1], [1, 1]], "multiset": true}],
            "classes": [[0], [1]]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.hconvex.as_ref().unwrap().sets[1].bounds()[0], None);
        assert_eq!(inst.targets[0].points.len(), 2);
        assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            "",
            "{",
            r#"{"version": "dhl-2", "dimension": 1}"#,
            r#"{"version": "dhl-1", "dimension": 0}"#,
            r#"{"version": "dhl-1", "dimension": 1, "boxes": [{"lo": [0]}]}"#,
            r#"{"version": "dhl-1", "dimension": 1, "boxes": [{"lo": [0, 1], "hi": [1, 2]}]}"#,
            r#"{"version": "dhl-1", "dimension": 1, "boxes": [{"lo": ["1/0"], "hi": [1]}]}"#,
            r#"{"version": "dhl-1", "dimension": 1, "boxes": [{"lo": [0], "hi": [1]}], "classes": [[0], [0]]}"#,
            r#"{"version": "dhl-1", "dimension": 1, "boxes": [{"lo": [0], "hi": [1]}], "classes": [[3]]}"#,
            r#"{"version": "dhl-1", "dimension": 1, "targets": [{"points": [[0]], "count": 0}]}"#,
            r#"{"version": "dhl-1", "dimension": 1, "extra": 1}"#,
            r#"{"version": "dhl-1", "dimension": 2, "hconvex": {"directions": [[1, 0], [0, 1]], "sets": []}}"#,
            r#"{"version": "dhl-1", "dimension": 1, "matroid": {"kind": "uniform"}}"#,
            r#"{"version": "dhl-1", "dimension": 1, "boxes": [{"lo": [1.5], "hi": [2]}]}"#,
        ];
        for text in bad {
            assert!(matches!(parse_instance(text), Err(Error::Parse(_))), "accepted {text:?}");
        }
    }

    #[test]
    fn manifest_round_trip() {
        let mut inst = Instance::new(1);
        inst.manifest = Some(RunManifest {
            seed: 7,
            operation: "gen".into(),
            generator: BTreeMap::from([("kind".into(), serde_json::json!("random"))]),
            guards: BTreeMap::from([("enumeration".into(), 10)]),
            timestamp: None,
            library_version: "0.1.0".into(),
        });
        assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }
}
