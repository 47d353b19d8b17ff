//! JSON renderings of library values for reports.

use dhl_core::helly::{Certificate, HellyOutcome};
use dhl_core::rational::{format_rational, to_decimal};
use dhl_core::{AxisBox, Point, Rational};
use serde_json::{json, Value};

pub const DECIMAL_DIGITS: usize = 15;

pub fn rational(value: &Rational) -> Value {
    json!(format_rational(value))
}

/// Exact and decimal forms side by side.
pub fn fraction(value: &Rational) -> Value {
    json!({ "exact": format_rational(value), "decimal": to_decimal(value, DECIMAL_DIGITS) })
}

pub fn point(p: &Point) -> Value {
    Value::Array(p.coords().iter().map(rational).collect())
}

pub fn points<'a>(ps: impl IntoIterator<Item = &'a Point>) -> Value {
    Value::Array(ps.into_iter().map(point).collect())
}

pub fn axis_box(b: &AxisBox) -> Value {
    match (b.lo(), b.hi()) {
        (Some(lo), Some(hi)) => json!({
            "lo": lo.iter().map(rational).collect::<Vec<_>>(),
            "hi": hi.iter().map(rational).collect::<Vec<_>>(),
        }),
        _ => json!({ "empty": true }),
    }
}

pub fn certificate(cert: &Certificate) -> Value {
    serde_json::to_value(cert).expect("certificate serializes")
}

pub fn outcome(out: &HellyOutcome) -> Value {
    match out {
        HellyOutcome::Witness { class, points: pts } => json!({
            "kind": "witness",
            "class": class,
            "points": pts.iter().map(|t| points(t)).collect::<Vec<_>>(),
        }),
        HellyOutcome::Violation(cert) => json!({ "kind": "violation", "certificate": certificate(cert) }),
    }
}
