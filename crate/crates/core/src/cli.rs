//! The `mobi` command line.
//!
//! Exit codes: 0 when every required check passes, 1 when some check
//! fails or errors, 2 for usage, parse and configuration errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{check_algebra, check_properties, solve_two, TwoElement, TwoSearch};
use crate::carrier::Element;
use crate::catalog::{self, InstanceParams, Structure};
use crate::check::{all_pass, CheckReport, Strategy, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::dsl::{self, Definition};
use crate::functor::{module_to_space, roundtrip_module, roundtrip_space, space_to_module};
use crate::number::decimal_string;
use crate::ring::{check_module, check_ring};
use crate::search::search_finite;
use crate::space::{
    check_affine, check_space, check_y_properties, labelled_grid, trace_geodesic, AffineMode,
    MobiSpace,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CSV_DIGITS: u32 = 12;

#[derive(Parser, Debug)]
#[command(
    name = "mobi",
    version,
    about = "Check mobi algebras, mobi spaces and their modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every algebra and space in a definition file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// List or check built-in instances.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Build the module of a pointed space, or the space of a module.
    #[command(subcommand)]
    Convert(ConvertCommand),
    /// Go around module -> space -> module (or back) and compare.
    Roundtrip {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Enumerate finite algebras up to isomorphism.
    Search {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        distinct_constants: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Write the geodesic from one point to another as CSV.
    Trace {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Print every entry with its parameters and defaults.
    List,
    /// Run the checks that apply to an entry.
    Check {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        opts: CheckOpts,
    },
}

#[derive(Subcommand, Debug)]
enum ConvertCommand {
    /// Module of a catalog space at the given origin; reports its module laws.
    SpaceToModule {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        origin: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Space of a catalog module; reports its space laws and affinity.
    ModuleToSpace {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct CheckOpts {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Enumerate finite carriers instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Also check the affine condition (spaces).
    #[arg(long)]
    affine: bool,
    /// Also check the derived identities.
    #[arg(long)]
    properties: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report: ReportFormat,
}

impl CheckOpts {
    fn strategy(&self) -> Strategy {
        if self.exhaustive {
            Strategy::Exhaustive
        } else {
            Strategy::sampled(self.samples, self.seed)
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ReportFormat {
    Text,
    Json,
}

/// A usage or configuration problem, reported on the error stream.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(err: E) -> Self {
        Usage(err.to_string())
    }
}

/// Run with the process streams.
pub fn run_cli<S: AsRef<str>>(argv: &[S]) -> i32 {
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_cli_with(argv, &mut out, &mut err)
}

/// Run with explicit streams; `argv[0]` is the program name.
pub fn run_cli_with<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(AsRef::as_ref)) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_PASS
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Usage> {
    match command {
        Command::Check { file, opts } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| Usage(format!("cannot read {}: {e}", file.display())))?;
            let definitions =
                dsl::load(&text).map_err(|d| Usage(format!("{}:{d}", file.display())))?;
            let mut reports = Vec::new();
            for def in &definitions {
                reports.extend(match def {
                    Definition::Algebra(a) => algebra_reports(a, &opts),
                    Definition::Space(s) => space_reports(s, &opts),
                });
            }
            emit(out, &reports, opts.report)
        }
        Command::Catalog(CatalogCommand::List) => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&catalog::list_catalog())?
            )?;
            Ok(EXIT_PASS)
        }
        Command::Catalog(CatalogCommand::Check { name, params, opts }) => {
            let reports = match build(&name, &params)? {
                Structure::Algebra(a) => algebra_reports(&a, &opts),
                Structure::Space(s) => space_reports(&s.space, &opts),
                Structure::Ring(r) => about(check_ring(&r, opts.strategy()), &r.name),
                Structure::Module(m) => about(check_module(&m, opts.strategy()), &m.name),
            };
            emit(out, &reports, opts.report)
        }
        Command::Convert(ConvertCommand::SpaceToModule {
            name,
            params,
            origin,
            samples,
            seed,
        }) => {
            let Structure::Space(mut pointed) = build(&name, &params)? else {
                return Err(Usage(format!("{name} is not a space")));
            };
            if let Some(text) = origin {
                pointed.origin = dsl::parse_value(&text, &pointed.space.points)?;
            }
            let two = two_of(&pointed.space)?;
            let module = space_to_module(&pointed, &two);
            let reports = about(
                check_module(&module, Strategy::sampled(samples, seed)),
                &module.name,
            );
            emit(out, &reports, ReportFormat::Json)
        }
        Command::Convert(ConvertCommand::ModuleToSpace {
            name,
            params,
            samples,
            seed,
        }) => {
            let Structure::Module(module) = build(&name, &params)? else {
                return Err(Usage(format!("{name} is not a module")));
            };
            let pointed = module_to_space(&module)?;
            let strategy = Strategy::sampled(samples, seed);
            let mut reports = check_space(&pointed.space, strategy);
            reports.push(check_affine(&pointed.space, strategy, AffineMode::Half).0);
            emit(
                out,
                &about(reports, &pointed.space.name),
                ReportFormat::Json,
            )
        }
        Command::Roundtrip {
            name,
            params,
            samples,
            seed,
        } => {
            let strategy = Strategy::sampled(samples, seed);
            let report = match build(&name, &params)? {
                Structure::Module(m) => roundtrip_module(&m, strategy).about(m.name.clone()),
                Structure::Space(s) => {
                    let two = two_of(&s.space)?;
                    roundtrip_space(&s, &two, strategy).about(s.space.name.clone())
                }
                _ => return Err(Usage(format!("{name} is neither a space nor a module"))),
            };
            emit(out, &[report], ReportFormat::Json)
        }
        Command::Search {
            size,
            distinct_constants,
            limit,
        } => {
            let models = search_finite(size, distinct_constants, limit)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&models)?)?;
            Ok(EXIT_PASS)
        }
        Command::Trace {
            name,
            params,
            from,
            to,
            steps,
            out: path,
        } => {
            let Structure::Space(pointed) = build(&name, &params)? else {
                return Err(Usage(format!("{name} is not a space")));
            };
            let s = &pointed.space;
            let x = dsl::parse_value(&from, &s.points)?;
            let y = dsl::parse_value(&to, &s.points)?;
            let grid = labelled_grid(steps, &s.algebra);
            let scalars: Vec<Element> = grid.iter().map(|(_, e)| e.clone()).collect();
            let rows = trace_geodesic(s, &x, &y, &scalars)?;
            let csv = trace_csv(grid.iter().map(|(t, _)| t).zip(rows.iter().map(|(_, p)| p)));
            fs::write(&path, csv)
                .map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(EXIT_PASS)
        }
    }
}

fn build(name: &str, params: &[String]) -> Result<Structure, Usage> {
    Ok(catalog::build(name, &InstanceParams::parse(params)?)?)
}

fn two_of(s: &MobiSpace) -> Result<TwoElement, Usage> {
    match solve_two(&s.algebra)? {
        TwoSearch::Found(two) => Ok(two),
        other => Err(Usage(format!(
            "{} has no element 2 ({other:?})",
            s.algebra.name
        ))),
    }
}

fn about(reports: Vec<CheckReport>, subject: &str) -> Vec<CheckReport> {
    reports.into_iter().map(|r| r.about(subject)).collect()
}

fn algebra_reports(a: &crate::algebra::MobiAlgebra, opts: &CheckOpts) -> Vec<CheckReport> {
    let strategy = opts.strategy();
    let mut reports = check_algebra(a, strategy);
    if opts.properties {
        reports.extend(check_properties(a, strategy));
    }
    about(reports, &a.name)
}

fn space_reports(s: &MobiSpace, opts: &CheckOpts) -> Vec<CheckReport> {
    let strategy = opts.strategy();
    let mut reports = check_space(s, strategy);
    if opts.affine {
        reports.push(check_affine(s, strategy, AffineMode::Half).0);
    }
    if opts.properties {
        reports.extend(check_y_properties(s, strategy));
    }
    about(reports, &s.name)
}

fn emit(out: &mut dyn Write, reports: &[CheckReport], format: ReportFormat) -> Result<i32, Usage> {
    match format {
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(reports)?)?,
        ReportFormat::Text => {
            for r in reports {
                write!(
                    out,
                    "{} {}: {:?}",
                    r.subject.as_deref().unwrap_or("-"),
                    r.law,
                    r.verdict
                )?;
                if let Some(w) = &r.witness {
                    let inputs: Vec<String> =
                        w.inputs.iter().map(|(n, v)| format!("{n}={v}")).collect();
                    write!(out, " at {}", inputs.join(" "))?;
                    if let Some(d) = &w.difference {
                        write!(out, " difference {d}")?;
                    }
                }
                if let Some(note) = &r.note {
                    write!(out, " ({note})")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(if all_pass(reports) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn leaf_columns(e: &Element, cols: &mut Vec<String>) {
    match e {
        Element::Rat(r) => cols.push(decimal_string(r, CSV_DIGITS)),
        Element::Gauss(g) => {
            cols.push(decimal_string(&g.re, CSV_DIGITS));
            cols.push(decimal_string(&g.im, CSV_DIGITS));
        }
        Element::Residue { value, .. } => cols.push(value.to_string()),
        Element::Float(x) => cols.push(format!("{x:.12}")),
        Element::Tuple(items) => items.iter().for_each(|i| leaf_columns(i, cols)),
    }
}

/// `t,c1,..,ck` with one row per grid point; a Gaussian leaf fills two
/// columns (real, imaginary).
pub fn trace_csv<'a>(
    rows: impl IntoIterator<Item = (&'a crate::number::Rational, &'a Element)>,
) -> String {
    let mut body = Vec::new();
    let mut width = 0;
    for (t, point) in rows {
        let mut cols = vec![decimal_string(t, CSV_DIGITS)];
        leaf_columns(point, &mut cols);
        width = width.max(cols.len() - 1);
        body.push(cols.join(","));
    }
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=width).map(|i| format!("c{i}")))
        .collect();
    let mut csv = header.join(",");
    csv.push('\n');
    for row in body {
        csv.push_str(&row);
        csv.push('\n');
    }
    csv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["mobi"];
        argv.extend_from_slice(args);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_cli_with(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run(&[
                "catalog",
                "check",
                "zmod-algebra",
                "--param",
                "m=3",
                "--exhaustive"
            ])
            .0,
            0
        );
        assert_eq!(
            run(&["catalog", "check", "tri-space", "--samples", "50"]).0,
            0
        );
        assert_eq!(run(&["catalog", "check", "nope"]).0, 2);
        assert_eq!(
            run(&["catalog", "check", "zmod-algebra", "--param", "m=4"]).0,
            2
        );
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn nonaffine_witness_in_json() {
        let (code, out, _) = run(&[
            "catalog",
            "check",
            "nonaffine-complex-space",
            "--affine",
            "--samples",
            "20",
        ]);
        assert_eq!(code, 1);
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        let affine = json
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["law"] == "affine")
            .unwrap();
        assert_eq!(affine["verdict"], "fail");
        assert_eq!(affine["witness"]["difference"], "(3/20, 0)");
    }

    #[test]
    fn search_output() {
        let (code, out, _) = run(&["search", "--size", "2", "--distinct-constants"]);
        assert_eq!((code, out.trim()), (0, "[]"));
        assert_eq!(run(&["search", "--size", "9"]).0, 2);
    }

    #[test]
    fn text_report() {
        let (code, out, _) = run(&[
            "catalog",
            "check",
            "rational-ring",
            "--samples",
            "20",
            "--report",
            "text",
        ]);
        assert_eq!(code, 0);
        assert!(
            out.lines()
                .any(|l| l.starts_with("rational-ring add-assoc: Pass")),
            "{out}"
        );
    }

    #[test]
    fn csv_layout() {
        let (half, one) = (crate::number::rat(1, 2), crate::number::int(1));
        let p = Element::Tuple(vec![
            Element::Gauss(crate::number::gauss(half.clone(), one.clone())),
            Element::Rat(one.clone()),
        ]);
        let csv = trace_csv([(&half, &p)]);
        assert_eq!(csv, "t,c1,c2,c3\n0.5,0.5,1,1\n");
    }
}
