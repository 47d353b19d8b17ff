//! Theorem suites run against a parsed instance.
//!
//! A suite either completes, possibly with findings (a hypothesis that holds
//! while the conclusion fails, or a certificate that does not check out), or
//! stops with a library error. Expected violations, where the hypothesis
//! itself fails, are not findings.

use std::fmt;
use std::str::FromStr;

use dhl_core::fractional::{
    check_pq_condition, intermix_dichotomy, is_box_intermixed, measure_fractional_small, piercing_set,
    verify_fractional_strong, Dichotomy, FractionReport, IndexedParts, Side,
};
use dhl_core::hconvex::{
    check_hconvex_hypothesis, hconvex_colorful, hconvex_contains, hconvex_halman, hconvex_intersection,
};
use dhl_core::helly::{
    certificate_holds, check_halman_hypothesis, colorful_halman, halman_witness, radon_box_point, valid_classes,
    ColoredInstance, HellyOutcome, Target,
};
use dhl_core::instance::Instance;
use dhl_core::nerve::{
    collapse_sequence, discrete_nerve, homology_ranks, is_m_leray, matroid_halman_check, verify_collapse_sequence,
    CollapseCheck, MatroidOutcome,
};
use dhl_core::{bbox, box_intersection, Error, Point, PointSet, Result};
use serde_json::{json, Value};

use crate::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Halman,
    Colorful,
    Radon,
    Collapse,
    Leray,
    Matroid,
    Fractional,
    Intermix,
    Pq,
    Hconvex,
}

pub const ALL_SUITES: [Suite; 10] = [
    Suite::Halman,
    Suite::Colorful,
    Suite::Radon,
    Suite::Collapse,
    Suite::Leray,
    Suite::Matroid,
    Suite::Fractional,
    Suite::Intermix,
    Suite::Pq,
    Suite::Hconvex,
];

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Halman => "halman",
            Self::Colorful => "colorful",
            Self::Radon => "radon",
            Self::Collapse => "collapse",
            Self::Leray => "leray",
            Self::Matroid => "matroid",
            Self::Fractional => "fractional",
            Self::Intermix => "intermix",
            Self::Pq => "pq",
            Self::Hconvex => "hconvex",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ALL_SUITES.into_iter().find(|x| x.as_str() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// What a completed suite produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutput {
    pub result: Value,
    pub findings: Vec<String>,
}

pub fn run_suite(suite: Suite, inst: &Instance, guard: u64) -> Result<SuiteOutput> {
    match suite {
        Suite::Halman => halman(inst, guard),
        Suite::Colorful => colorful(inst, guard),
        Suite::Radon => radon(inst),
        Suite::Collapse => collapse(inst),
        Suite::Leray => leray(inst),
        Suite::Matroid => matroid(inst),
        Suite::Fractional => fractional(inst, guard),
        Suite::Intermix => intermix(inst),
        Suite::Pq => pq(inst, guard),
        Suite::Hconvex => hconvex(inst, guard),
    }
}

fn first_target(inst: &Instance) -> Result<&Target> {
    inst.targets.first().ok_or_else(|| Error::InvalidArgument("the instance has no target point set".into()))
}

fn need_boxes(inst: &Instance) -> Result<()> {
    if inst.boxes.is_empty() {
        return Err(Error::EmptyFamily("the instance has no boxes"));
    }
    Ok(())
}

fn witness_points_hold(inst: &Instance, out: &HellyOutcome) -> bool {
    match out {
        HellyOutcome::Witness { points, .. } => points
            .iter()
            .flatten()
            .all(|p| inst.boxes.iter().all(|b| b.contains(p).unwrap_or(false))),
        HellyOutcome::Violation(_) => true,
    }
}

fn halman(inst: &Instance, guard: u64) -> Result<SuiteOutput> {
    need_boxes(inst)?;
    let target = first_target(inst)?;
    let hypothesis = check_halman_hypothesis(&inst.boxes, &target.points, target.count, guard)?;
    let out = halman_witness(&inst.boxes, &target.points, target.count)?;
    let mut findings = Vec::new();
    if !witness_points_hold(inst, &out) {
        findings.push("a witness point lies outside some box".into());
    }
    if let HellyOutcome::Violation(cert) = &out {
        let mono = ColoredInstance::monochromatic(inst.dimension, inst.boxes.clone(), target.points.clone(), target.count)?;
        if !certificate_holds(&mono, cert)? {
            findings.push("the violation certificate captures enough points".into());
        }
        if cert.members.len() > 2 * inst.dimension {
            findings.push(format!("the violation certificate has {} > 2d boxes", cert.members.len()));
        }
        if hypothesis.is_none() {
            findings.push("every 2d boxes capture the required points, yet the whole family does not".into());
        }
    }
    Ok(SuiteOutput {
        result: json!({
            "hypothesis": hypothesis_json(hypothesis.as_ref().map(render::certificate)),
            "outcome": render::outcome(&out),
        }),
        findings,
    })
}

fn hypothesis_json(counterexample: Option<Value>) -> Value {
    match counterexample {
        None => json!({ "holds": true }),
        Some(cert) => json!({ "holds": false, "counterexample": cert }),
    }
}

fn colorful(inst: &Instance, guard: u64) -> Result<SuiteOutput> {
    let classes = inst.box_classes().ok_or_else(|| Error::InvalidArgument("the instance has no classes".into()))?;
    let colored = ColoredInstance::new(inst.dimension, classes, inst.targets.clone())?;
    let out = colorful_halman(&colored, guard)?;
    let valid = valid_classes(&colored)?;
    let mut findings = Vec::new();
    match &out {
        HellyOutcome::Witness { class, .. } if !valid.contains(class) => {
            findings.push(format!("class {class} was returned but fails direct testing"));
        }
        HellyOutcome::Violation(cert) if !certificate_holds(&colored, cert)? => {
            findings.push("the violating tuple captures enough points".into());
        }
        _ => {}
    }
    let mode = if inst.targets.len() > 1 { "very-colorful" } else { "colorful" };
    Ok(SuiteOutput { result: json!({ "mode": mode, "outcome": render::outcome(&out), "valid_classes": valid }), findings })
}

fn radon(inst: &Instance) -> Result<SuiteOutput> {
    let points = &first_target(inst)?.points;
    let found = radon_box_point(points)?;
    let mut findings = Vec::new();
    match &found {
        Some(x) => {
            let rest = points.without(x);
            if rest.is_empty() || !bbox(rest.iter())?.contains(x)? {
                findings.push("the returned point is outside the box hull of the others".into());
            }
        }
        None if points.distinct_len() > 2 * inst.dimension => {
            findings.push(format!("no point lies in the box hull of the others among {} points", points.distinct_len()));
        }
        None => {}
    }
    Ok(SuiteOutput {
        result: json!({ "size": points.distinct_len(), "point": found.as_ref().map(render::point) }),
        findings,
    })
}

/// Collapse sequence of the discrete nerve, checked with `m = 2d−1`.
pub fn collapse_report(inst: &Instance) -> Result<Value> {
    let points = &first_target(inst)?.points;
    let complex = discrete_nerve(&inst.boxes, points)?;
    let steps = collapse_sequence(&inst.boxes, points)?;
    let m = 2 * inst.dimension - 1;
    let check = verify_collapse_sequence(&complex, &steps, m);
    let mut value = json!({
        "m": m,
        "facets": complex.facets(),
        "steps": serde_json::to_value(&steps).expect("steps serialize"),
        "valid": check.is_valid(),
    });
    if let CollapseCheck::Invalid { step, reason } = check {
        value["invalid"] = json!({ "step": step, "reason": reason });
    }
    Ok(value)
}

fn collapse(inst: &Instance) -> Result<SuiteOutput> {
    let result = collapse_report(inst)?;
    let findings = match result.get("invalid") {
        Some(bad) => vec![format!("step {}: {}", bad["step"], bad["reason"].as_str().unwrap_or_default())],
        None => Vec::new(),
    };
    Ok(SuiteOutput { result, findings })
}

fn leray(inst: &Instance) -> Result<SuiteOutput> {
    let points = &first_target(inst)?.points;
    let complex = discrete_nerve(&inst.boxes, points)?;
    let m = 2 * inst.dimension - 1;
    let leray = is_m_leray(&complex, m)?;
    let betti = homology_ranks(&complex)?;
    let findings = if leray { Vec::new() } else { vec![format!("the nerve is not {m}-Leray")] };
    Ok(SuiteOutput {
        result: json!({ "m": m, "facets": complex.facets(), "reduced_betti": betti, "leray": leray }),
        findings,
    })
}

fn matroid(inst: &Instance) -> Result<SuiteOutput> {
    let oracle = inst.matroid.as_ref().ok_or_else(|| Error::InvalidArgument("the instance has no matroid".into()))?;
    let points = &first_target(inst)?.points;
    let out = matroid_halman_check(oracle, &inst.boxes, points)?;
    let limit = 2 * inst.dimension - 1;
    let mut findings = Vec::new();
    let result = match &out {
        MatroidOutcome::Found { cover, point, complement_rank } => {
            if !cover.iter().all(|&b| inst.boxes[b].contains(point).unwrap_or(false)) {
                findings.push("the common point is outside some box of the cover".into());
            }
            let rest: Vec<usize> = (0..inst.boxes.len()).filter(|b| !cover.contains(b)).collect();
            if oracle.rank(&rest) != *complement_rank || *complement_rank > limit {
                findings.push(format!("complement rank {complement_rank} exceeds {limit}"));
            }
            json!({
                "kind": oracle.kind(),
                "hypothesis": { "holds": true },
                "cover": cover,
                "point": render::point(point),
                "complement_rank": complement_rank,
                "limit": limit,
            })
        }
        MatroidOutcome::Counterexample { independent } => json!({
            "kind": oracle.kind(),
            "hypothesis": { "holds": false, "counterexample": independent },
        }),
    };
    Ok(SuiteOutput { result, findings })
}

fn fraction_json(r: &FractionReport) -> Value {
    json!({
        "d": r.dim,
        "k": r.tuple_size,
        "alpha": render::fraction(&r.alpha),
        "beta_measured": render::fraction(&r.beta),
        "point": r.point.as_ref().map(render::point),
        "beta_bound_pass": r.bound_pass,
        "relaxed_bound_pass": r.relaxed_bound_pass,
    })
}

fn fractional(inst: &Instance, guard: u64) -> Result<SuiteOutput> {
    need_boxes(inst)?;
    let points = &first_target(inst)?.points;
    let strong = verify_fractional_strong(&inst.boxes, points, guard)?;
    let small = measure_fractional_small(&inst.boxes, points, guard)?;
    let mut findings = Vec::new();
    if strong.bound_pass == Some(false) {
        findings.push(format!("(1-beta)^{} > 1-alpha", 2 * inst.dimension - 1));
    }
    Ok(SuiteOutput { result: json!({ "strong": fraction_json(&strong), "small": fraction_json(&small) }), findings })
}

fn intermix(inst: &Instance) -> Result<SuiteOutput> {
    let parts = inst.parts.clone().ok_or_else(|| Error::InvalidArgument("the instance has no parts".into()))?;
    let indexed = IndexedParts::new(inst.dimension, parts)?;
    let sets = indexed
        .parts()
        .iter()
        .map(|p| PointSet::multiset(inst.dimension, p.iter().cloned()))
        .collect::<Result<Vec<_>>>()?;
    let eps = dhl_core::Rational::new(1.into(), (2 * inst.dimension).into());
    let intermixed = is_box_intermixed(&sets, &eps)?.is_none();
    let out = intermix_dichotomy(&indexed)?;
    let mut findings = Vec::new();
    let hull = |pts: &[&Point]| bbox(pts.iter().copied());
    let result = match &out {
        Dichotomy::Case1 { point } => {
            for part in indexed.parts() {
                if !hull(&part.iter().collect::<Vec<_>>())?.contains(point)? {
                    findings.push("the common point is outside some part's box hull".into());
                }
            }
            json!({ "intermixed": intermixed, "case": 1, "point": render::point(point) })
        }
        Dichotomy::Case2 { halfspace, missed, dense, indices } => {
            let restricted = |j: usize| hull(&indices.iter().map(|&i| &indexed.parts()[j][i]).collect::<Vec<_>>());
            if !box_intersection(&[restricted(*missed)?, restricted(*dense)?])?.is_empty() {
                findings.push("restricted box hulls intersect".into());
            }
            if indices.len() * 2 * inst.dimension < indexed.index_count() {
                findings.push("too few indices survive".into());
            }
            let side = match halfspace.side {
                Side::AtMost => "<=",
                Side::AtLeast => ">=",
            };
            json!({
                "intermixed": intermixed,
                "case": 2,
                "halfspace": { "axis": halfspace.axis, "side": side, "threshold": render::rational(&halfspace.threshold) },
                "missed": missed,
                "dense": dense,
                "indices": indices,
            })
        }
    };
    Ok(SuiteOutput { result, findings })
}

/// Piercing set for the instance's boxes and first target, as JSON.
pub fn pierce(inst: &Instance) -> Result<Value> {
    let points = &first_target(inst)?.points;
    let p = piercing_set(&inst.boxes, points)?;
    Ok(json!({ "points": render::points(&p.points), "size": p.points.len(), "exact": p.exact }))
}

fn pq(inst: &Instance, guard: u64) -> Result<SuiteOutput> {
    let points = &first_target(inst)?.points;
    let p = inst.dimension + 1;
    let violating = check_pq_condition(&inst.boxes, points, p, p, guard)?;
    let mut findings = Vec::new();
    let piercing = match piercing_set(&inst.boxes, points) {
        Ok(found) => {
            if !inst.boxes.iter().all(|b| found.points.iter().any(|x| b.contains(x).unwrap_or(false))) {
                findings.push("the piercing set misses a box".into());
            }
            json!({ "points": render::points(&found.points), "size": found.points.len(), "exact": found.exact })
        }
        Err(Error::Unpierceable(b)) => {
            if violating.is_none() {
                findings.push(format!("the (p,q) condition holds but box {b} contains no point"));
            }
            json!({ "unpierceable_box": b })
        }
        Err(e) => return Err(e),
    };
    let condition = match &violating {
        None => json!({ "p": p, "q": p, "holds": true }),
        Some(subset) => json!({ "p": p, "q": p, "holds": false, "counterexample": subset }),
    };
    Ok(SuiteOutput { result: json!({ "condition": condition, "piercing": piercing }), findings })
}

fn hconvex(inst: &Instance, guard: u64) -> Result<SuiteOutput> {
    let family = inst.hconvex.as_ref().ok_or_else(|| Error::InvalidArgument("the instance has no H-convex sets".into()))?;
    if family.sets.is_empty() {
        return Err(Error::EmptyFamily("the instance has no H-convex sets"));
    }
    if let Some(classes) = inst.hconvex_classes() {
        let out = hconvex_colorful(&classes, &inst.targets, guard)?;
        let mut findings = Vec::new();
        if let HellyOutcome::Witness { class, points } = &out {
            let holds = classes[*class]
                .iter()
                .all(|s| points.iter().flatten().all(|p| hconvex_contains(s, p).unwrap_or(false)));
            if !holds {
                findings.push(format!("class {class} misses a witness point"));
            }
        }
        return Ok(SuiteOutput { result: json!({ "mode": "colorful", "outcome": render::outcome(&out) }), findings });
    }
    let target = first_target(inst)?;
    let hypothesis = check_hconvex_hypothesis(&family.sets, &target.points, target.count, guard)?;
    let out = hconvex_halman(&family.sets, &target.points, target.count)?;
    let mut findings = Vec::new();
    match &out {
        HellyOutcome::Witness { points, .. } => {
            if !points.iter().flatten().all(|p| family.sets.iter().all(|s| hconvex_contains(s, p).unwrap_or(false))) {
                findings.push("a witness point lies outside some set".into());
            }
        }
        HellyOutcome::Violation(cert) => {
            let picked: Vec<_> = cert.members.iter().map(|m| family.sets[m.index].clone()).collect();
            if hconvex_intersection(&picked)? != hconvex_intersection(&family.sets)? {
                findings.push("the certificate's intersection differs from the family's".into());
            }
            if hypothesis.is_none() {
                findings.push("every |H| sets capture the required points, yet the whole family does not".into());
            }
        }
    }
    let result = json!({
        "mode": "monochromatic",
        "hypothesis": hypothesis_json(hypothesis.as_ref().map(render::certificate)),
        "outcome": render::outcome(&out),
    });
    Ok(SuiteOutput { result, findings })
}

/// Run status and its process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Finding,
    InputError,
    GuardExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::Finding => 1,
            Self::InputError => 2,
            Self::GuardExceeded => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Finding => "finding",
            Self::InputError => "input-error",
            Self::GuardExceeded => "guard-exceeded",
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::GuardExceeded { .. } => Self::GuardExceeded,
            Error::TheoremViolated(_) => Self::Finding,
            _ => Self::InputError,
        }
    }
}

/// Runs a suite and turns the outcome into a report and status.
pub fn verify(suite: Suite, inst: &Instance, guard: u64) -> (Status, Value) {
    let (status, result, findings, error) = match run_suite(suite, inst, guard) {
        Ok(out) => {
            let status = if out.findings.is_empty() { Status::Pass } else { Status::Finding };
            (status, out.result, out.findings, None)
        }
        Err(e) => {
            let status = Status::of_error(&e);
            let findings = if status == Status::Finding { vec![e.to_string()] } else { Vec::new() };
            (status, Value::Null, findings, Some(e.to_string()))
        }
    };
    let mut report = json!({
        "suite": suite.as_str(),
        "status": status.as_str(),
        "exit_code": status.exit_code(),
        "result": result,
        "findings": findings,
    });
    if let Some(e) = error {
        report["error"] = json!(e);
    }
    (status, report)
}
