//! Batch front end: generate instances, run theorem suites, sweep α/β.
//!
//! Exit codes: 0 pass, 1 finding (a hypothesis holds but the conclusion
//! fails), 2 bad input or inapplicable suite, 3 enumeration guard exceeded.

pub mod curve;
pub mod render;
pub mod suites;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dhl_core::combinatorics::DEFAULT_GUARD;
use dhl_core::gen::{generate, Family, GenKind, GenParams, MatroidSpec};
use dhl_core::instance::{emit_instance, parse_instance, Instance, RunManifest};
use dhl_core::Error;
use serde_json::{json, Value};

use crate::suites::{Status, Suite};

#[derive(Debug, Parser)]
#[command(name = "dhl", version, about = "Exact discrete Helly witnesses, certificates and stress harnesses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run a theorem suite on an instance file and print a JSON report.
    Verify {
        file: PathBuf,
        #[arg(long)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Add wall-clock time to the report.
        #[arg(long)]
        timing: bool,
    },
    /// Sweep α and β over generated instances and print CSV.
    Curve {
        #[command(flatten)]
        gen: GenArgs,
        /// Tuple size for α; defaults to 2d.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
    /// Smallest piercing set of S-points for the boxes of an instance.
    Pierce {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Collapse sequence of the discrete nerve of an instance.
    Collapse {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Upper bound on enumerated subfamilies.
    #[arg(long, env = "DHL_GUARD", default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// random, hypothesis-satisfying, halman-sharp, radon-sharp or slab.
    #[arg(long, default_value = "random")]
    pub kind: GenKind,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub sets: usize,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Coordinates are integers in 0..=RANGE.
    #[arg(long, default_value_t = 10)]
    pub range: i64,
    /// Required points per target.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Hypothesis tuple size for hypothesis-satisfying instances.
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub classes: usize,
    #[arg(long, default_value_t = 1)]
    pub targets: usize,
    /// boxes, box-directions or simplex.
    #[arg(long, default_value = "boxes")]
    pub family: Family,
    /// uniform:RANK or partition:PARTS:CAPACITY.
    #[arg(long)]
    pub matroid: Option<MatroidSpec>,
    #[arg(long, default_value_t = 0)]
    pub parts: usize,
    #[arg(long, default_value_t = 2)]
    pub slabs: usize,
    #[command(flatten)]
    pub common: Common,
}

impl GenArgs {
    pub fn params(&self) -> GenParams {
        GenParams {
            kind: self.kind,
            dim: self.dim,
            sets: self.sets,
            points: self.points,
            range: self.range,
            count: self.count,
            level: self.level,
            classes: self.classes,
            targets: self.targets,
            family: self.family,
            matroid: self.matroid,
            parts: self.parts,
            slabs: self.slabs,
        }
    }
}

/// `SOURCE_DATE_EPOCH`, when set, is the only source of timestamps so that
/// outputs stay reproducible.
fn timestamp() -> Option<String> {
    std::env::var("SOURCE_DATE_EPOCH").ok().filter(|s| !s.is_empty())
}

fn report_manifest(operation: &str, inst: &Instance, guard: u64) -> RunManifest {
    let source = inst.manifest.as_ref();
    RunManifest {
        seed: source.map_or(0, |m| m.seed),
        operation: operation.into(),
        generator: source.map(|m| m.generator.clone()).unwrap_or_default(),
        guards: BTreeMap::from([("enumeration".into(), guard)]),
        timestamp: timestamp(),
        library_version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn load(path: &Path) -> Result<Instance, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    Status::of_error(e).exit_code()
}

fn write_or_fail(out: Option<&Path>, text: &str, code: i32) -> i32 {
    match emit(out, text) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            Status::InputError.exit_code()
        }
    }
}

/// Runs one command and returns its exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Gen(args) => {
            let guard = args.common.guard;
            match generate(&args.params(), args.seed, guard) {
                Ok(mut inst) => {
                    if let Some(m) = inst.manifest.as_mut() {
                        m.timestamp = timestamp();
                    }
                    write_or_fail(args.common.out.as_deref(), &emit_instance(&inst), 0)
                }
                Err(e) => fail(&e),
            }
        }
        Command::Verify { file, suite, common, timing } => {
            let inst = match load(&file) {
                Ok(inst) => inst,
                Err(e) => return fail(&e),
            };
            let start = Instant::now();
            let (status, mut report) = suites::verify(suite, &inst, common.guard);
            if timing {
                report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
            }
            let manifest = report_manifest(&format!("verify:{suite}"), &inst, common.guard);
            report["manifest"] = serde_json::to_value(manifest).expect("manifest serializes");
            if let Some(e) = report.get("error").and_then(Value::as_str) {
                eprintln!("error: {e}");
            }
            write_or_fail(common.out.as_deref(), &json_text(&report), status.exit_code())
        }
        Command::Curve { gen, k, trials } => {
            let k = k.unwrap_or(2 * gen.dim);
            match curve::curve_rows(&gen.params(), k, trials, gen.seed, gen.common.guard) {
                Ok(rows) => {
                    let mut buf = Vec::new();
                    curve::write_csv(&rows, &mut buf).expect("writing to memory");
                    write_or_fail(gen.common.out.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"), 0)
                }
                Err(e) => fail(&e),
            }
        }
        Command::Pierce { file, common } => match load(&file).and_then(|inst| suites::pierce(&inst)) {
            Ok(value) => write_or_fail(common.out.as_deref(), &json_text(&value), 0),
            Err(e) => fail(&e),
        },
        Command::Collapse { file, common } => match load(&file).and_then(|inst| suites::collapse_report(&inst)) {
            Ok(value) => write_or_fail(common.out.as_deref(), &json_text(&value), 0),
            Err(e) => fail(&e),
        },
    }
}
