//! The α/β sweep emitted as CSV.

use std::io::Write;

use dhl_core::fractional::{fraction_report, FractionReport};
use dhl_core::gen::{generate, GenKind, GenParams};
use dhl_core::rational::{format_rational, to_decimal};
use dhl_core::{Error, Result};
use rayon::prelude::*;

use crate::render::DECIMAL_DIGITS;

pub const HEADER: [&str; 8] =
    ["trial", "d", "k", "alpha", "alpha_decimal", "beta_measured", "beta_measured_decimal", "beta_bound_pass"];

/// One generated instance per trial, with seed `seed + trial` and, for slab
/// sweeps, `slabs + trial` slabs per axis.
pub fn curve_rows(params: &GenParams, k: usize, trials: u64, seed: u64, guard: u64) -> Result<Vec<FractionReport>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut p = params.clone();
            if p.kind == GenKind::Slab {
                p.slabs += trial as usize;
            }
            let inst = generate(&p, seed.wrapping_add(trial), guard)?;
            let target = inst
                .targets
                .first()
                .ok_or_else(|| Error::InvalidArgument("the generator produced no target".into()))?;
            if inst.boxes.is_empty() {
                return Err(Error::EmptyFamily("curve needs boxes"));
            }
            fraction_report(&inst.boxes, &target.points, k, guard)
        })
        .collect()
}

pub fn write_csv(rows: &[FractionReport], out: impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for (trial, r) in rows.iter().enumerate() {
        let pass = r.bound_pass.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([
            trial.to_string(),
            r.dim.to_string(),
            r.tuple_size.to_string(),
            format_rational(&r.alpha),
            to_decimal(&r.alpha, DECIMAL_DIGITS),
            format_rational(&r.beta),
            to_decimal(&r.beta, DECIMAL_DIGITS),
            pass,
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dhl_core::combinatorics::DEFAULT_GUARD;

    fn csv_of(rows: &[FractionReport]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn zero_trials_is_header_only() {
        let rows = curve_rows(&GenParams::default(), 4, 0, 1, DEFAULT_GUARD).unwrap();
        assert_eq!(csv_of(&rows), format!("{}\n", HEADER.join(",")));
    }

    #[test]
    fn slab_rows_have_no_intersecting_small_tuples() {
        for d in [2, 3] {
            let params = GenParams { kind: GenKind::Slab, dim: d, slabs: 2, ..GenParams::default() };
            let rows = curve_rows(&params, d + 1, 3, 0, DEFAULT_GUARD).unwrap();
            assert!(rows.iter().all(|r| r.alpha == dhl_core::rational::int(0)));
            assert!(rows.iter().all(|r| r.bound_pass.is_none()));
        }
    }

    #[test]
    fn pass_column_only_at_two_d() {
        let params = GenParams { dim: 1, sets: 5, points: 5, ..GenParams::default() };
        let rows = curve_rows(&params, 2, 2, 3, DEFAULT_GUARD).unwrap();
        let text = csv_of(&rows);
        let line = text.lines().nth(1).unwrap();
        assert!(line.ends_with(",true") || line.ends_with(",false"), "{line}");
        let rows = curve_rows(&params, 3, 2, 3, DEFAULT_GUARD).unwrap();
        assert!(csv_of(&rows).lines().nth(1).unwrap().ends_with(','));
    }
}
