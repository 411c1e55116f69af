//! `profmeasure`: load descriptors, run the law checkers and oracle suites,
//! compute measures and densities, print a report.
//!
//! Exit codes: 0 when everything checked passes, 1 when a checked property
//! fails (the report carries a witness), 2 for usage and descriptor errors.

mod output;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use profmeasure::density::density;
use profmeasure::descriptor::{
    load_measure, measure_descriptor, parse_json, point_descriptor, MeasureDescriptor,
};
use profmeasure::duality::bijection_report;
use profmeasure::measure::{density_witness, integrate, pushforward, DensityOutcome, SubbasicConstraint};
use profmeasure::monad::check_monad_laws;
use profmeasure::report::{LawOutcome, Witness};
use profmeasure::semiring::{
    parse_builtin, validate_semimodule, validate_semiring, FiniteSemiring, SemimoduleDescriptor,
    SemiringDescriptor, BUILTINS,
};
use profmeasure::space::{Clopen, ContinuousMap, InverseSystem, Space};
use profmeasure::suites::{self, SuiteConfig, SEEDED};
use profmeasure::{Error, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use output::{Format, Report};

#[derive(Parser)]
#[command(name = "profmeasure", version, about = "Oracles for semiring-valued measures on profinite spaces")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Level up to which stage families are read and compared.
    #[arg(long, global = true, default_value_t = 5)]
    depth: usize,
    /// Number of seeded random cases.
    #[arg(long, global = true, default_value_t = 1000)]
    cases: u64,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Enumeration cap for exhaustive checks.
    #[arg(long, global = true, default_value_t = 1 << 14)]
    budget: u64,
    /// Builtin (`bool2`, `zmod:3`, `trop_trunc:2`, `nat_sat:2`) or a
    /// semiring descriptor file.
    #[arg(long, global = true, default_value = "bool2")]
    semiring: String,
    /// Builtin (`cantor`, `nat_infty`, `finite:k`, `product:a,b`) or a space
    /// descriptor file.
    #[arg(long, global = true, default_value = "cantor")]
    space: String,
}

#[derive(Subcommand)]
enum Command {
    /// Semiring and semimodule tables.
    #[command(subcommand)]
    Semiring(SemiringCmd),
    /// Inverse systems.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Measures given by descriptors.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Densities of measures over idempotent semirings.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Seeded density/integration round trips.
    #[command(subcommand)]
    Roundtrip(RoundtripCmd),
    /// Finite Stone duality for measures on a finite set.
    #[command(subcommand)]
    Duality(DualityCmd),
    /// The semiring monad on finite sets.
    #[command(subcommand)]
    Monad(MonadCmd),
    /// Property suites.
    #[command(subcommand)]
    Props(PropsCmd),
}

#[derive(Subcommand)]
enum SemiringCmd {
    /// Checks every law of a semiring or semimodule descriptor.
    Check { file: String },
    /// Lists the builtin semirings.
    Builtins,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Checks surjectivity and shape of the levels up to `--depth`.
    Validate { file: Option<String> },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Value of a measure on a clopen.
    Eval {
        measure: String,
        /// Clopen descriptor `{"level": n, "cells": [..]}`, inline or a file.
        #[arg(long)]
        clopen: String,
    },
    /// Image measure along a continuous map.
    Pushforward {
        measure: String,
        /// Map descriptor, inline or a file.
        #[arg(long)]
        map: String,
    },
    /// A finitely supported measure meeting every constraint of a list.
    Witness { constraints: String },
}

#[derive(Subcommand)]
enum DensityCmd {
    Compute { measure: String },
}

#[derive(Subcommand)]
enum RoundtripCmd {
    Check,
}

#[derive(Subcommand)]
enum DualityCmd {
    Report {
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum MonadCmd {
    Laws {
        #[arg(long, default_value_t = 2)]
        max_base: usize,
    },
}

#[derive(Subcommand)]
enum PropsCmd {
    /// Runs the named suites; all seeded suites when none is named.
    Run {
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

/// Continuous maps that can be named in a descriptor.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum MapDescriptor {
    Identity,
    FirstBit,
    ToFinite { level: usize, k: usize, values: Vec<usize> },
    Indicator { clopen: ClopenJson },
}

#[derive(Debug, Deserialize)]
struct ClopenJson {
    level: usize,
    cells: Vec<usize>,
}

#[derive(Debug, Deserialize)]
struct ConstraintJson {
    clopen: ClopenJson,
    allowed: Vec<usize>,
}

/// Inline JSON, or the contents of a file.
fn read_arg(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Error::InvalidParameter { name: arg.to_string(), detail: e.to_string() })
}

fn parse_arg<T: serde::de::DeserializeOwned>(arg: &str, what: &'static str) -> Result<T> {
    parse_json(&read_arg(arg)?, what).map_err(|e| match e {
        Error::Malformed { what, detail } => Error::Malformed { what, detail: format!("{arg}: {detail}") },
        other => other,
    })
}

fn looks_like_descriptor(arg: &str) -> bool {
    arg.ends_with(".json") || arg.trim_start().starts_with('{')
}

fn load_semiring(arg: &str) -> Result<Arc<FiniteSemiring>> {
    if looks_like_descriptor(arg) {
        let desc: SemiringDescriptor = parse_arg(arg, "semiring descriptor")?;
        Ok(Arc::new(FiniteSemiring::from_descriptor(&desc)?))
    } else {
        parse_builtin(arg)
    }
}

fn load_space(arg: &str) -> Result<Space> {
    if looks_like_descriptor(arg) {
        parse_arg::<InverseSystem>(arg, "space descriptor")?.checked()
    } else {
        InverseSystem::builtin(arg)
    }
}

fn clopen(space: &Space, c: &ClopenJson) -> Result<Clopen> {
    Clopen::new(space.clone(), c.level, c.cells.iter().copied())
}

struct Ctx {
    common: Common,
}

impl Ctx {
    fn semiring(&self) -> Result<Arc<FiniteSemiring>> {
        load_semiring(&self.common.semiring)
    }

    fn space(&self) -> Result<Space> {
        load_space(&self.common.space)
    }

    fn cfg(&self) -> SuiteConfig {
        SuiteConfig {
            cases: self.common.cases,
            seed: self.common.seed,
            depth: self.common.depth,
        }
    }

    fn measure(&self, arg: &str) -> Result<(Space, Arc<FiniteSemiring>, profmeasure::measure::Measure)> {
        let (space, s) = (self.space()?, self.semiring()?);
        let desc: MeasureDescriptor = parse_arg(arg, "measure descriptor")?;
        let m = load_measure(&space, &s, &desc)?;
        Ok((space, s, m))
    }
}

fn semiring_check(file: &str) -> Result<Report> {
    let value: Value = parse_arg(file, "descriptor")?;
    if value.get("madd").is_some() {
        let desc: SemimoduleDescriptor = parse_arg(file, "semimodule descriptor")?;
        let s = parse_builtin(&desc.semiring)?;
        return Ok(Report::from_laws("semiring check", validate_semimodule(&s, &desc)?));
    }
    let desc: SemiringDescriptor = parse_arg(file, "semiring descriptor")?;
    Ok(Report::from_laws("semiring check", validate_semiring(&desc)?))
}

fn builtins() -> Report {
    let list: Vec<Value> = BUILTINS
        .iter()
        .map(|(name, about)| json!({ "name": name, "description": about }))
        .collect();
    Report::computed("semiring builtins", json!({ "builtins": list }))
}

fn space_validate(ctx: &Ctx, file: Option<&str>) -> Result<Report> {
    let space = match file {
        Some(f) => load_space(f)?,
        None => ctx.space()?,
    };
    let depth = ctx.common.depth.min(space.certified_depth());
    Ok(Report::from_laws("space validate", space.validate(depth)?))
}

fn measure_eval(ctx: &Ctx, measure: &str, clopen_arg: &str) -> Result<Report> {
    let (space, s, m) = ctx.measure(measure)?;
    let b = clopen(&space, &parse_arg(clopen_arg, "clopen descriptor")?)?;
    let v = m.eval(&b)?;
    Ok(Report::computed(
        "measure eval",
        json!({ "semiring": s.label(), "space": space.describe(), "value": v, "name": s.name(v) }),
    ))
}

fn map_from(space: &Space, desc: MapDescriptor) -> Result<ContinuousMap> {
    match desc {
        MapDescriptor::Identity => Ok(ContinuousMap::identity(space.clone())),
        MapDescriptor::FirstBit => ContinuousMap::first_bit(space.clone()),
        MapDescriptor::ToFinite { level, k, values } => ContinuousMap::to_finite(space.clone(), level, k, values),
        MapDescriptor::Indicator { clopen: c } => ContinuousMap::indicator(&clopen(space, &c)?),
    }
}

fn measure_pushforward(ctx: &Ctx, measure: &str, map_arg: &str) -> Result<Report> {
    let (space, _, m) = ctx.measure(measure)?;
    let map = map_from(&space, parse_arg(map_arg, "map descriptor")?)?;
    let image = pushforward(&m, &map)?;
    let depth = ctx.common.depth.min(image.certified_depth());
    Ok(Report::computed(
        "measure pushforward",
        json!({
            "map": map.label(),
            "target": serde_json::to_value(&**map.target()).expect("spaces serialise"),
            "measure": serde_json::to_value(measure_descriptor(&image, depth)?).expect("descriptors serialise"),
        }),
    ))
}

fn measure_witness(ctx: &Ctx, constraints: &str) -> Result<Report> {
    let (space, s) = (ctx.space()?, ctx.semiring()?);
    let list: Vec<ConstraintJson> = parse_arg(constraints, "constraint list")?;
    let cs = list
        .iter()
        .map(|c| {
            for &v in &c.allowed {
                s.check(v)?;
            }
            Ok(SubbasicConstraint::new(clopen(&space, &c.clopen)?, c.allowed.iter().copied()))
        })
        .collect::<Result<Vec<_>>>()?;
    let law = format!("density-witness[{} on {}]", s.label(), space.describe());
    let mut report = Report::new("measure witness");
    match density_witness(&space, &s, &cs)? {
        DensityOutcome::Witness(f) => {
            let m = integrate(&f);
            for (i, c) in cs.iter().enumerate() {
                if !c.holds(&m)? {
                    let w = Witness::new(vec![format!("constraint {i}")], "witness violates the constraint");
                    report.push(LawOutcome::fail(law, cs.len() as u64, w));
                    return Ok(report);
                }
            }
            report.push(LawOutcome::pass(law, cs.len() as u64));
            report.result = Some(json!({ "measure": measure_descriptor(&m, ctx.common.depth)? }));
        }
        DensityOutcome::Unsatisfiable { atoms, assignments } => {
            let w = Witness::new(
                vec![format!("{} constraints", cs.len())],
                format!("unsatisfiable: all {assignments} assignments to {atoms} atoms fail"),
            );
            report.push(LawOutcome::fail(law, cs.len() as u64, w));
        }
    }
    Ok(report)
}

fn density_compute(ctx: &Ctx, measure: &str) -> Result<Report> {
    let (space, s, m) = ctx.measure(measure)?;
    let d = density(&m)?;
    let depth = ctx.common.depth;
    let result = match d.support() {
        Some(f) => {
            let points = f
                .support()
                .iter()
                .map(|(p, _)| {
                    let v = d.value_at(p)?;
                    Ok(json!({
                        "point": serde_json::to_value(point_descriptor(p, depth)?).expect("descriptors serialise"),
                        "value": v.value,
                        "name": s.name(v.value),
                        "level": v.level,
                        "stabilised": v.stabilised,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            json!({ "representation": "pointwise", "bottom": s.name(s.zero()), "support": points })
        }
        None => {
            let depth = depth.min(d.certified_depth());
            let size = space.level_size(depth)?;
            let cells = d
                .representatives(depth, 0..size)?
                .iter()
                .enumerate()
                .map(|(c, p)| {
                    let v = d.eval_pointwise(p, depth)?;
                    Ok(json!({ "cell": c, "value": v.value, "name": s.name(v.value), "stabilised": v.stabilised }))
                })
                .collect::<Result<Vec<_>>>()?;
            json!({ "representation": "stages", "level": depth, "cells": cells })
        }
    };
    Ok(Report::computed("density compute", result))
}

fn roundtrip_check(ctx: &Ctx) -> Result<Report> {
    let mut report = Report::new("roundtrip check");
    report.push(suites::run_seeded("roundtrip", &ctx.space()?, &ctx.semiring()?, &ctx.cfg())?);
    Ok(report)
}

fn duality_report(ctx: &Ctx, size: usize) -> Result<Report> {
    let s = ctx.semiring()?;
    let r = bijection_report(size, &s, ctx.common.budget)?;
    let mut report = Report::new("duality report");
    report.subject = Some(format!("measures on a {size}-point set with values in `{}`", s.label()));
    report.status = r.bijection;
    report.result = Some(serde_json::to_value(&r).expect("reports serialise"));
    Ok(report)
}

fn monad_laws(ctx: &Ctx, max_base: usize) -> Result<Report> {
    let s = ctx.semiring()?;
    Ok(Report::from_laws("monad laws", check_monad_laws(&s, max_base, ctx.common.budget)?))
}

const EXHAUSTIVE: &[&str] = &["density-witness", "freeness", "vietoris", "vietoris-monad"];

fn props_run(ctx: &Ctx, names: &[String]) -> Result<Report> {
    let mut report = Report::new("props run");
    let all: Vec<String> = SEEDED.iter().map(|s| s.to_string()).collect();
    let names = if names.is_empty() { &all } else { names };
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            continue;
        }
        let outcome = match name.as_str() {
            "density-witness" => suites::density_witness_exhaustive(&ctx.semiring()?)?,
            "freeness" => suites::freeness(&ctx.semiring()?, 4)?,
            "vietoris" => suites::vietoris(&ctx.space()?, ctx.common.depth.min(3))?,
            "vietoris-monad" => suites::vietoris_monad(3)?,
            seeded if SEEDED.contains(&seeded) => suites::run_seeded(seeded, &ctx.space()?, &ctx.semiring()?, &ctx.cfg())?,
            other => {
                return Err(Error::InvalidParameter {
                    name: "suite".into(),
                    detail: format!("unknown suite `{other}`; expected one of {SEEDED:?} or {EXHAUSTIVE:?}"),
                })
            }
        };
        report.push(outcome);
    }
    report.subject = Some(format!("suites with seed {}", ctx.common.seed));
    Ok(report)
}

fn dispatch(cli: Cli) -> Result<Report> {
    let ctx = Ctx { common: cli.common };
    match cli.command {
        Command::Semiring(SemiringCmd::Check { file }) => semiring_check(&file),
        Command::Semiring(SemiringCmd::Builtins) => Ok(builtins()),
        Command::Space(SpaceCmd::Validate { file }) => space_validate(&ctx, file.as_deref()),
        Command::Measure(MeasureCmd::Eval { measure, clopen }) => measure_eval(&ctx, &measure, &clopen),
        Command::Measure(MeasureCmd::Pushforward { measure, map }) => measure_pushforward(&ctx, &measure, &map),
        Command::Measure(MeasureCmd::Witness { constraints }) => measure_witness(&ctx, &constraints),
        Command::Density(DensityCmd::Compute { measure }) => density_compute(&ctx, &measure),
        Command::Roundtrip(RoundtripCmd::Check) => roundtrip_check(&ctx),
        Command::Duality(DualityCmd::Report { size }) => duality_report(&ctx, size),
        Command::Monad(MonadCmd::Laws { max_base }) => monad_laws(&ctx, max_base),
        Command::Props(PropsCmd::Run { suites }) => props_run(&ctx, &suites),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.common.format;
    match dispatch(cli) {
        Ok(report) => {
            println!("{}", report.render(format));
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "version": output::SCHEMA_VERSION, "status": "error", "error": e.to_string() }))
                        .expect("errors serialise")
                ),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(2)
        }
    }
}
