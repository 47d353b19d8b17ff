//! Seeded instance generators.
//!
//! Hypothesis-satisfying instances are built target-first: every set is the
//! hull of its target points minus at most `f` of them per target, with
//! `f·level ≤ |S| − count`, so any `level` sets still share `count` points.
//! The result is then checked and the achieved level recorded.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bits::{intersect_all, BitSet};
use crate::combinatorics::{ensure_within, Combinations, Product};
use crate::error::{Error, Result};
use crate::fractional::{is_box_intermixed, slab_instance};
use crate::geometry::{bbox, box_masks, AxisBox, Point, PointSet};
use crate::hconvex::{hconvex_hull, DirectionSet, HConvexSet};
use crate::helly::{cross_polytope, halman_sharp, Target};
use crate::instance::{HConvexFamily, Instance, RunManifest};
use crate::nerve::{matroid_halman_check, MatroidOracle, MatroidOutcome};
use crate::rational::{int, Rational};

/// Rejection attempts before a generator gives up.
pub const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Random,
    HypothesisSatisfying,
    HalmanSharp,
    RadonSharp,
    Slab,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::HypothesisSatisfying => "hypothesis-satisfying",
            Self::HalmanSharp => "halman-sharp",
            Self::RadonSharp => "radon-sharp",
            Self::Slab => "slab",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::Random, Self::HypothesisSatisfying, Self::HalmanSharp, Self::RadonSharp, Self::Slab]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown generator kind {s:?}")))
    }
}

/// Which sets the instance holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Boxes,
    /// H-convex sets over `e_1, −e_1, …`.
    BoxDirections,
    /// H-convex sets over `−e_1, …, −e_d, e_1 + … + e_d`.
    Simplex,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boxes" => Ok(Self::Boxes),
            "box-directions" => Ok(Self::BoxDirections),
            "simplex" => Ok(Self::Simplex),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

impl Family {
    fn as_str(self) -> &'static str {
        match self {
            Self::Boxes => "boxes",
            Self::BoxDirections => "box-directions",
            Self::Simplex => "simplex",
        }
    }

    fn directions(self, dim: usize) -> Result<Option<Arc<DirectionSet>>> {
        match self {
            Self::Boxes => Ok(None),
            Self::BoxDirections => DirectionSet::box_directions(dim).map(Some),
            Self::Simplex => {
                let mut dirs: Vec<Vec<Rational>> =
                    (0..dim).map(|axis| Point::unit(dim, axis, -1).coords().to_vec()).collect();
                dirs.push(vec![int(1); dim]);
                DirectionSet::validated(dim, dirs).map(Some)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidSpec {
    Uniform { rank: usize },
    /// Elements dealt round-robin into `parts` parts of equal capacity.
    Partition { parts: usize, capacity: usize },
}

impl FromStr for MatroidSpec {
    type Err = Error;

    /// `uniform:RANK` or `partition:PARTS:CAPACITY`.
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad matroid spec {s:?}")));
        match fields.as_slice() {
            ["uniform", rank] => Ok(Self::Uniform { rank: num(rank)? }),
            ["partition", parts, capacity] => Ok(Self::Partition { parts: num(parts)?, capacity: num(capacity)? }),
            _ => Err(Error::InvalidArgument(format!("bad matroid spec {s:?}"))),
        }
    }
}

impl fmt::Display for MatroidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform { rank } => write!(f, "uniform:{rank}"),
            Self::Partition { parts, capacity } => write!(f, "partition:{parts}:{capacity}"),
        }
    }
}

impl MatroidSpec {
    fn build(self, size: usize) -> Result<MatroidOracle> {
        match self {
            Self::Uniform { rank } => MatroidOracle::uniform(size, rank.min(size)),
            Self::Partition { parts, capacity } => {
                if parts == 0 {
                    return Err(Error::InvalidArgument("a partition matroid needs at least one part".into()));
                }
                let groups: Vec<Vec<usize>> = (0..parts).map(|p| (p..size).step_by(parts).collect()).collect();
                MatroidOracle::partition(size, &groups, vec![capacity; parts])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub kind: GenKind,
    pub dim: usize,
    /// Number of sets (boxes or H-convex sets).
    pub sets: usize,
    /// Points drawn per target (duplicates collapse).
    pub points: usize,
    /// Coordinates are integers in `0..=range`.
    pub range: i64,
    /// Required points per target.
    pub count: usize,
    /// Hypothesis tuple size; defaults to the Helly number of the family.
    pub level: Option<usize>,
    /// Number of color classes; zero for a monochromatic family.
    pub classes: usize,
    pub targets: usize,
    pub family: Family,
    pub matroid: Option<MatroidSpec>,
    /// Number of intermixing parts, each with `points` points.
    pub parts: usize,
    /// Slabs per axis.
    pub slabs: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            kind: GenKind::Random,
            dim: 2,
            sets: 6,
            points: 10,
            range: 10,
            count: 1,
            level: None,
            classes: 0,
            targets: 1,
            family: Family::Boxes,
            matroid: None,
            parts: 0,
            slabs: 2,
        }
    }
}

impl GenParams {
    fn helly_number(&self) -> usize {
        match self.family {
            Family::Boxes => 2 * self.dim,
            Family::BoxDirections => 2 * self.dim,
            Family::Simplex => self.dim + 1,
        }
    }

    fn record(&self) -> BTreeMap<String, serde_json::Value> {
        let mut map = BTreeMap::from([
            ("kind".to_string(), json!(self.kind.as_str())),
            ("dim".to_string(), json!(self.dim)),
        ]);
        match self.kind {
            GenKind::HalmanSharp | GenKind::RadonSharp => {}
            GenKind::Slab => {
                map.insert("slabs".into(), json!(self.slabs));
            }
            GenKind::Random | GenKind::HypothesisSatisfying => {
                map.insert("sets".into(), json!(self.sets));
                map.insert("points".into(), json!(self.points));
                map.insert("range".into(), json!(self.range));
                map.insert("count".into(), json!(self.count));
                map.insert("classes".into(), json!(self.classes));
                map.insert("targets".into(), json!(self.targets));
                map.insert("family".into(), json!(self.family.as_str()));
                map.insert("parts".into(), json!(self.parts));
                if let Some(level) = self.level {
                    map.insert("level".into(), json!(level));
                }
                if let Some(m) = self.matroid {
                    map.insert("matroid".into(), json!(m.to_string()));
                }
            }
        }
        map
    }
}

/// Generates an instance; equal parameters and seed give equal instances.
/// The manifest records the parameters, the seed and, for
/// hypothesis-satisfying instances, the achieved level.
pub fn generate(params: &GenParams, seed: u64, guard: u64) -> Result<Instance> {
    if params.dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    let mut record = params.record();
    let mut inst = match params.kind {
        GenKind::HalmanSharp => {
            let (boxes, points) = halman_sharp(params.dim)?;
            let mut inst = Instance::new(params.dim);
            inst.boxes = boxes;
            inst.targets = vec![Target::new(points, 1)?];
            inst
        }
        GenKind::RadonSharp => {
            let mut inst = Instance::new(params.dim);
            inst.targets = vec![Target::new(cross_polytope(params.dim)?, 1)?];
            inst
        }
        GenKind::Slab => {
            let (boxes, points) = slab_instance(params.dim, params.slabs)?;
            let mut inst = Instance::new(params.dim);
            inst.boxes = boxes;
            inst.targets = vec![Target::new(points, 1)?];
            inst
        }
        GenKind::Random => random_instance(params, &mut ChaCha8Rng::seed_from_u64(seed))?,
        GenKind::HypothesisSatisfying => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (inst, achieved) = satisfying_instance(params, &mut rng, guard)?;
            record.insert("achieved_level".into(), json!(achieved));
            inst
        }
    };
    inst.manifest = Some(RunManifest {
        seed,
        operation: "gen".into(),
        generator: record,
        guards: BTreeMap::from([("enumeration".into(), guard)]),
        timestamp: None,
        library_version: env!("CARGO_PKG_VERSION").into(),
    });
    Ok(inst)
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, range: i64) -> Point {
    Point::new((0..dim).map(|_| int(rng.gen_range(0..=range))).collect()).expect("positive dimension")
}

fn random_points(rng: &mut ChaCha8Rng, dim: usize, n: usize, range: i64) -> Vec<Point> {
    (0..n).map(|_| random_point(rng, dim, range)).collect()
}

fn random_box(rng: &mut ChaCha8Rng, dim: usize, range: i64) -> AxisBox {
    let (lo, hi) = (0..dim)
        .map(|_| {
            let a = rng.gen_range(0..=range);
            let b = rng.gen_range(0..=range);
            (int(a.min(b)), int(a.max(b)))
        })
        .unzip();
    AxisBox::new(lo, hi).expect("matching dimensions")
}

fn check_params(params: &GenParams) -> Result<()> {
    if params.range < 0 {
        return Err(Error::InvalidArgument("coordinate range must be nonnegative".into()));
    }
    if params.targets == 0 && params.parts == 0 {
        return Err(Error::InvalidArgument("at least one target or part is required".into()));
    }
    if params.classes > 0 && params.sets < params.classes {
        return Err(Error::InvalidArgument(format!("{} sets cannot fill {} classes", params.sets, params.classes)));
    }
    if params.count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    if params.matroid.is_some() && params.family != Family::Boxes {
        return Err(Error::InvalidArgument("matroids are generated on boxes only".into()));
    }
    Ok(())
}

fn round_robin(sets: usize, classes: usize) -> Option<Vec<Vec<usize>>> {
    (classes > 0).then(|| (0..classes).map(|c| (c..sets).step_by(classes).collect()).collect())
}

fn random_instance(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Instance> {
    check_params(params)?;
    let dim = params.dim;
    let mut inst = Instance::new(dim);
    match params.family.directions(dim)? {
        None => inst.boxes = (0..params.sets).map(|_| random_box(rng, dim, params.range)).collect(),
        Some(directions) => {
            let sets = (0..params.sets)
                .map(|_| {
                    let n = rng.gen_range(1..=3);
                    hconvex_hull(&PointSet::new(dim, random_points(rng, dim, n, params.range))?, &directions)
                })
                .collect::<Result<_>>()?;
            inst.hconvex = Some(HConvexFamily { directions, sets });
        }
    }
    inst.targets = (0..params.targets)
        .map(|_| Target::new(PointSet::new(dim, random_points(rng, dim, params.points.max(1), params.range))?, params.count))
        .collect::<Result<_>>()?;
    inst.classes = round_robin(params.sets, params.classes);
    if let Some(spec) = params.matroid {
        inst.matroid = Some(spec.build(params.sets)?);
    }
    if params.parts > 0 {
        inst.parts = Some((0..params.parts).map(|_| random_points(rng, dim, params.points.max(1), params.range)).collect());
    }
    Ok(inst)
}

fn satisfying_instance(params: &GenParams, rng: &mut ChaCha8Rng, guard: u64) -> Result<(Instance, usize)> {
    check_params(params)?;
    let dim = params.dim;
    let directions = params.family.directions(dim)?;
    let matroid = params.matroid.map(|spec| spec.build(params.sets)).transpose()?;
    let level = match (&matroid, params.level) {
        (_, Some(level)) => level,
        (Some(m), None) => m.rank(&(0..params.sets).collect::<Vec<_>>()),
        (None, None) => params.helly_number(),
    };
    if level == 0 {
        return Err(Error::InvalidArgument("hypothesis level must be at least 1".into()));
    }
    let classes = round_robin(params.sets, params.classes);
    if params.targets == 0 {
        let mut inst = Instance::new(dim);
        inst.parts = Some(intermixed_parts(params, rng)?);
        return Ok((inst, 0));
    }
    for _ in 0..MAX_ATTEMPTS {
        let targets: Vec<PointSet> = (0..params.targets)
            .map(|_| PointSet::new(dim, random_points(rng, dim, params.points.max(1), params.range)))
            .collect::<Result<_>>()?;
        if targets.iter().any(|t| t.len() < params.count) {
            continue;
        }
        let slack: Vec<usize> = targets.iter().map(|t| (t.len() - params.count) / level).collect();
        let mut hulls: Vec<Vec<Point>> = Vec::with_capacity(params.sets);
        for _ in 0..params.sets {
            let mut kept = Vec::new();
            for (t, &f) in targets.iter().zip(&slack) {
                // Omitting extreme points along one axis shrinks the hull.
                let mut pts = t.points();
                pts.shuffle(rng);
                let axis = rng.gen_range(0..dim);
                pts.sort_by(|a, b| a.coord(axis).cmp(b.coord(axis)));
                if rng.gen_bool(0.5) {
                    pts.reverse();
                }
                let omit = rng.gen_range(0..=f);
                kept.extend(pts.into_iter().skip(omit));
            }
            hulls.push(kept);
        }
        let mut inst = Instance::new(dim);
        match &directions {
            None => inst.boxes = hulls.iter().map(|h| bbox(h.iter())).collect::<Result<_>>()?,
            Some(dirs) => {
                let sets = hulls
                    .iter()
                    .map(|h| hconvex_hull(&PointSet::new(dim, h.iter().cloned())?, dirs))
                    .collect::<Result<_>>()?;
                inst.hconvex = Some(HConvexFamily { directions: dirs.clone(), sets });
            }
        }
        inst.targets = targets.into_iter().map(|t| Target::new(t, params.count)).collect::<Result<_>>()?;
        inst.classes = classes.clone();
        if params.parts > 0 {
            inst.parts = Some(intermixed_parts(params, rng)?);
        }
        let groups = classes.clone().unwrap_or_else(|| (0..params.sets).map(|i| vec![i]).collect());
        let achieved = achieved_level(&inst, &groups, guard)?;
        if achieved < level.min(groups.len()) {
            continue;
        }
        if let Some(oracle) = &matroid {
            let points = &inst.targets[0].points;
            if let MatroidOutcome::Counterexample { .. } = matroid_halman_check(oracle, &inst.boxes, points)? {
                continue;
            }
            inst.matroid = Some(oracle.clone());
        }
        return Ok((inst, achieved));
    }
    Err(Error::InvalidArgument(format!("no hypothesis-satisfying instance found in {MAX_ATTEMPTS} attempts")))
}

/// Parts that share a random base list, each with some entries replaced;
/// the number of replacements drops with every rejected attempt, down to
/// identical parts, which are always intermixed.
fn intermixed_parts(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Point>>> {
    let dim = params.dim;
    let size = params.points.max(1);
    let base = random_points(rng, dim, size, params.range);
    let eps = Rational::new(1.into(), (2 * dim).into());
    let mut swaps = size / 2;
    loop {
        let parts: Vec<Vec<Point>> = (0..params.parts)
            .map(|_| {
                let mut part = base.clone();
                for _ in 0..swaps {
                    let i = rng.gen_range(0..size);
                    part[i] = random_point(rng, dim, params.range);
                }
                part
            })
            .collect();
        let sets = parts.iter().map(|p| PointSet::multiset(dim, p.iter().cloned())).collect::<Result<Vec<_>>>()?;
        if swaps == 0 || is_box_intermixed(&sets, &eps)?.is_none() {
            return Ok(parts);
        }
        swaps -= 1;
    }
}

/// Largest `L` such that every colorful `L`-tuple over `groups` captures
/// every target's count. Stops early (reporting the last verified level) once
/// the enumeration guard would be exceeded.
fn achieved_level(inst: &Instance, groups: &[Vec<usize>], guard: u64) -> Result<usize> {
    let member_masks: Vec<Vec<BitSet>> = match &inst.hconvex {
        Some(h) if inst.boxes.is_empty() => {
            let per_target: Vec<Vec<BitSet>> =
                inst.targets.iter().map(|t| hconvex_masks(&h.sets, &t.points)).collect();
            (0..h.sets.len()).map(|i| per_target.iter().map(|m| m[i].clone()).collect()).collect()
        }
        _ => {
            let per_target: Vec<Vec<BitSet>> =
                inst.targets.iter().map(|t| box_masks(&inst.boxes, &t.points)).collect::<Result<_>>()?;
            (0..inst.boxes.len()).map(|i| per_target.iter().map(|m| m[i].clone()).collect()).collect()
        }
    };
    let mut spent: u128 = 0;
    for size in 1..=groups.len() {
        let tuples: u128 = Combinations::new(groups.len(), size)
            .map(|c| c.iter().map(|&g| groups[g].len() as u128).product::<u128>())
            .sum();
        spent = spent.saturating_add(tuples);
        if ensure_within(spent, guard).is_err() {
            return Ok(size - 1);
        }
        for chosen in Combinations::new(groups.len(), size) {
            let sizes = chosen.iter().map(|&g| groups[g].len()).collect();
            for pick in Product::new(sizes) {
                let members: Vec<usize> = chosen.iter().zip(&pick).map(|(&g, &i)| groups[g][i]).collect();
                let short = inst.targets.iter().enumerate().any(|(j, t)| {
                    intersect_all(t.points.distinct_len(), members.iter().map(|&m| &member_masks[m][j])).count() < t.count
                });
                if short {
                    return Ok(size - 1);
                }
            }
        }
    }
    Ok(groups.len())
}

fn hconvex_masks(sets: &[HConvexSet], points: &PointSet) -> Vec<BitSet> {
    sets.iter()
        .map(|s| {
            let mut mask = BitSet::empty(points.distinct_len());
            for (i, p) in points.iter().enumerate() {
                if crate::hconvex::hconvex_contains(s, p).unwrap_or(false) {
                    mask.insert(i);
                }
            }
            mask
        })
        .collect()
}
