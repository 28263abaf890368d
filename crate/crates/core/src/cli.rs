//! Command-line frontend.
//!
//! Exit codes: 0 success or realizable, 1 not realizable or a failed
//! check, 2 unknown, 3 usage error, 4 internal invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use crate::group_core::parse_group_spec;
pub use crate::group_ring::parse_element_literal;

use crate::certificate::{certificate_failure, Certificate};
use crate::error::{Error, Result};
use crate::group_core::{abelian_invariants, structure_report, GroupSpec};
use crate::group_ring::{ideal_closure, GroupRing, QuotientRing, MAX_CHAR_EXPONENT};
use crate::screeners::{obstructions, screen, Status};
use crate::search::{run_fixtures, search_realizing_ideal, SearchConfig, DEFAULT_BUDGET};
use crate::star_realizer::{realize_exponent4, StarOptions, DEFAULT_STAR_ATTEMPTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_REALIZABLE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ringunits", version, about = "Realize finite 2-groups as unit groups of finite rings")]
struct Cli {
    /// Print JSON instead of text where both are available.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for identity checks and search.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=256))]
    workers: u32,
    /// Progress messages on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural data of a group.
    Info { spec: String },
    /// Run the non-realizability screens.
    Screen { spec: String },
    /// Find a realizing residue ring and print its certificate.
    Realize {
        spec: String,
        /// Characteristic 2^m, written as 2, 4, ... or 2^m.
        #[arg(long = "char", default_value = "2", value_parser = parse_characteristic)]
        characteristic: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Maximum number of ideal closures for search.
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Basis orderings tried by the star construction.
        #[arg(long, default_value_t = DEFAULT_STAR_ATTEMPTS)]
        attempts: u32,
    },
    /// Unit group of Z_(2^m)[G] or of a residue ring.
    Unitgroup {
        spec: String,
        #[arg(long = "char", default_value = "2", value_parser = parse_characteristic)]
        characteristic: u32,
        /// Ideal generators as element literals.
        #[arg(long, num_args = 1..)]
        ideal: Vec<String>,
        /// Export the unit group's multiplication table.
        #[arg(long)]
        cayley: bool,
    },
    /// Re-check a certificate file.
    Verify { certificate: PathBuf },
    /// Reproduce the catalogue of explicit residue rings.
    Fixtures,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Star,
    Search,
}

/// Parses `2^m` given as a number or as `2^m`, returning `m`.
fn parse_characteristic(text: &str) -> std::result::Result<u32, String> {
    let m = match text.strip_prefix("2^") {
        Some(e) => e.trim().parse::<u32>().map_err(|e| e.to_string())?,
        None => {
            let c: u64 = text.trim().parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
            if !c.is_power_of_two() || c < 2 {
                return Err(format!("{c} is not a power of 2 above 1"));
            }
            c.trailing_zeros()
        }
    };
    if !(1..=MAX_CHAR_EXPONENT).contains(&m) {
        return Err(format!("characteristic 2^{m} outside 2^1..=2^{MAX_CHAR_EXPONENT}"));
    }
    Ok(m)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvariantViolation(_) => EXIT_INTERNAL,
        Error::Undecided { .. } => EXIT_UNKNOWN,
        _ => EXIT_USAGE,
    }
}

struct Session<'a> {
    json: bool,
    output: Option<PathBuf>,
    workers: usize,
    verbose: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Session<'_> {
    fn emit(&mut self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, format!("{text}\n"))?,
            None => writeln!(self.out, "{text}")?,
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        self.emit(&text)
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }

    fn progress(&mut self, text: &str) {
        if self.verbose {
            self.note(text);
        }
    }
}

/// Runs the command line and returns the exit code; output goes to the
/// given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut session = Session {
        json: cli.json,
        output: cli.output,
        workers: cli.workers as usize,
        verbose: cli.verbose,
        out,
        err,
    };
    match dispatch(cli.command, &mut session) {
        Ok(code) => code,
        Err(e) => {
            session.note(&format!("error: {e}"));
            exit_code(&e)
        }
    }
}

fn parse_spec(text: &str) -> Result<GroupSpec> {
    parse_group_spec(text)
}

fn dispatch(command: Command, s: &mut Session<'_>) -> Result<i32> {
    match command {
        Command::Info { spec } => {
            let spec = parse_spec(&spec)?;
            let report = structure_report(&spec.build()?);
            if s.json {
                s.emit_json(&report)?;
            } else {
                let text = format!(
                    "group {spec}\norder {}\nexponent {}\nnilpotency class {}\ncenter invariants {:?}\n\
                     abelian invariants {:?}\nindecomposable {}\nminimal generators {}\nderived subgroup order {}",
                    report.order,
                    report.exponent,
                    report.nilpotency_class,
                    report.center_invariants,
                    report.abelian_invariants,
                    report.indecomposable.map_or("not computed".to_string(), |b| b.to_string()),
                    report.minimal_generator_count,
                    report.derived_subgroup_order,
                );
                s.emit(&text)?;
            }
            Ok(EXIT_OK)
        }
        Command::Screen { spec } => {
            let spec = parse_spec(&spec)?;
            let options = StarOptions {
                workers: s.workers,
                ..StarOptions::default()
            };
            let verdict = screen(&spec, options)?;
            s.emit_json(&verdict)?;
            Ok(match verdict.status {
                Status::Realizable => EXIT_OK,
                Status::NotRealizable => EXIT_NOT_REALIZABLE,
                Status::Unknown => EXIT_UNKNOWN,
            })
        }
        Command::Realize {
            spec,
            characteristic: m,
            method,
            budget,
            attempts,
        } => {
            let spec = parse_spec(&spec)?;
            realize(s, &spec, m, method, budget, attempts)
        }
        Command::Unitgroup {
            spec,
            characteristic: m,
            ideal,
            cayley,
        } => {
            let spec = parse_spec(&spec)?;
            let ring = GroupRing::new(Arc::new(spec.build()?), m)?;
            let q = if ideal.is_empty() {
                QuotientRing::full(ring.clone())
            } else {
                let gens = ideal
                    .iter()
                    .map(|t| parse_element_literal(t, &ring))
                    .collect::<Result<Vec<_>>>()?;
                QuotientRing::new(ring.clone(), ideal_closure(&ring, &gens)?)?
            };
            let units = q.unit_group()?;
            let report = UnitReport {
                group: spec.to_string(),
                characteristic: ring.modulus(),
                quotient_size: 1u64 << q.size_log2(),
                order: units.group.order(),
                abelian_invariants: abelian_invariants(&units.group).ok(),
                structure: structure_report(&units.group),
                table: cayley.then(|| units.group.table()),
            };
            if s.json || cayley {
                s.emit_json(&report)?;
            } else {
                let shape = match &report.abelian_invariants {
                    Some(inv) => format!("abelian invariants {inv:?}"),
                    None => format!(
                        "nonabelian, exponent {}, class {}, center invariants {:?}",
                        report.structure.exponent, report.structure.nilpotency_class, report.structure.center_invariants
                    ),
                };
                s.emit(&format!(
                    "quotient size {}\nunit group order {}\n{shape}",
                    report.quotient_size, report.order
                ))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { certificate } => {
            let text = std::fs::read_to_string(&certificate)?;
            let cert = Certificate::from_json(&text)?;
            match certificate_failure(&cert)? {
                None => {
                    s.emit("certificate verified")?;
                    Ok(EXIT_OK)
                }
                Some(why) => {
                    s.note(&format!("certificate rejected: {why}"));
                    Ok(EXIT_NOT_REALIZABLE)
                }
            }
        }
        Command::Fixtures => {
            let results = run_fixtures()?;
            let all = results.iter().all(|r| r.verified);
            if s.json {
                s.emit_json(&results)?;
            } else {
                let lines: Vec<String> = results
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<14} expected {:<14} quotient {:>4} units {:>4} {}",
                            r.name,
                            r.expected_group,
                            r.quotient_size,
                            r.unit_group_order,
                            if r.verified { "ok" } else { "MISMATCH" }
                        )
                    })
                    .collect();
                s.emit(&lines.join("\n"))?;
            }
            Ok(if all { EXIT_OK } else { EXIT_INTERNAL })
        }
    }
}

#[derive(Serialize)]
struct UnitReport {
    group: String,
    #[serde(rename = "char")]
    characteristic: u32,
    quotient_size: u64,
    order: usize,
    abelian_invariants: Option<Vec<u64>>,
    structure: crate::group_core::StructureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<usize>>,
}

fn realize(s: &mut Session<'_>, spec: &GroupSpec, m: u32, method: MethodArg, budget: u64, attempts: u32) -> Result<i32> {
    let exponent = spec.build()?.exponent();
    let use_star = match method {
        MethodArg::Star => {
            if m != 1 {
                return Err(Error::InvalidArgument("the star construction works in characteristic 2 only".into()));
            }
            true
        }
        MethodArg::Search => false,
        MethodArg::Auto => m == 1 && exponent <= 4,
    };
    if use_star {
        s.progress(&format!("star construction for {spec}"));
        let options = StarOptions {
            attempts,
            workers: s.workers,
        };
        let r = realize_exponent4(spec, options)?;
        s.emit(&r.certificate.to_json())?;
        return Ok(EXIT_OK);
    }
    if method == MethodArg::Auto {
        let verdict = obstructions(spec)?;
        if verdict.status == Status::NotRealizable || !verdict.allowed_characteristics.contains(&m) {
            s.note(&format!("{spec} is not realizable in characteristic {}", 1u32 << m));
            s.emit_json(&verdict)?;
            return Ok(EXIT_NOT_REALIZABLE);
        }
    }
    s.progress(&format!("searching Z_{}[{spec}] with budget {budget}", 1u32 << m));
    let config = SearchConfig {
        budget,
        workers: s.workers,
        ..SearchConfig::new(m)
    };
    let outcome = search_realizing_ideal(spec, &config)?;
    s.progress(&format!("{:?}", outcome.stats));
    match outcome.certificate {
        Some(cert) => {
            s.emit(&cert.to_json())?;
            Ok(EXIT_OK)
        }
        None => {
            let why = if outcome.stats.budget_exhausted {
                "budget exhausted"
            } else {
                "search space exhausted"
            };
            s.note(&format!("no realizing ideal found ({why}); realizability unknown"));
            Ok(EXIT_UNKNOWN)
        }
    }
}
