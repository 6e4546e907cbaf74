use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kleinian::arith::CycloNum;
use kleinian::dynkin::{affine_diagram, match_profile};
use kleinian::export;
use kleinian::expr::{parse_number, parse_xyz};
use kleinian::groups::{build_group, GroupKind};
use kleinian::mckay::mckay_graph;
use kleinian::pipeline::{probe, sample_c, verify, verify_all, VerificationReport};
use kleinian::resolution::{divisor_profile_a, divisor_profile_d, divisor_profile_e};
use kleinian::invariants::invariant_triple;
use kleinian::Error;

const DEFAULT_SEED: u64 = 2024;

#[derive(Parser)]
#[command(name = "kleinian", version, about = "Kleinian singularities: groups, invariants, resolutions and diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check for one group, or for the whole suite with `all`.
    Verify {
        /// A, D, E6, E7, E8, a name such as D5, or `all`.
        kind: String,
        /// Rank for A and D.
        rank: Option<u32>,
        #[arg(long = "r")]
        r: Option<u32>,
        /// Parameter c of F = X + cY for type D, e.g. `3/2` or `zeta(3)`.
        #[arg(long = "c", allow_hyphen_values = true)]
        c: Option<String>,
        /// Seed for sampling c when none is given.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether a function in X, Y, Z reproduces the affine diagram.
    Probe {
        kind: String,
        /// Rank (optional) followed by the candidate expression.
        #[arg(required = true, num_args = 1..=2)]
        args: Vec<String>,
        #[arg(long = "r")]
        r: Option<u32>,
        /// Reference parameter for type D.
        #[arg(long = "c", allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Write a diagram, divisor profile or McKay graph as DOT or JSON.
    Export {
        #[arg(value_enum)]
        what: Artifact,
        kind: String,
        rank: Option<u32>,
        #[arg(long = "r")]
        r: Option<u32>,
        #[arg(long = "c", allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Artifact {
    Diagram,
    Profile,
    Mckay,
}

enum Failure {
    /// Checks ran and at least one failed.
    Checks,
    /// Bad input, degenerate parameter or I/O error.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Accepts "E8", "D5", "A" with a separate rank, or "E" with rank 6..8.
fn parse_kind(name: &str, rank: Option<u32>) -> Result<GroupKind, Failure> {
    let name = name.trim();
    let split = name.find(|ch: char| ch.is_ascii_digit()).unwrap_or(name.len());
    let (family, digits) = name.split_at(split);
    let inline = if digits.is_empty() {
        None
    } else {
        Some(
            digits
                .parse::<u32>()
                .map_err(|_| Failure::Usage(format!("bad rank in {name}")))?,
        )
    };
    let r = match (inline, rank) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::Usage(format!("conflicting ranks {a} and {b}")))
        }
        (a, b) => a.or(b),
    };
    if family.eq_ignore_ascii_case("E") {
        return Ok(GroupKind::new("E", r)?);
    }
    if r.is_none() {
        return Err(Failure::Usage(format!("{family} needs a rank")));
    }
    Ok(GroupKind::new(family, r)?)
}

fn merge_rank(a: Option<u32>, b: Option<u32>) -> Result<Option<u32>, Failure> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Failure::Usage(format!("conflicting ranks {x} and {y}"))),
        (x, y) => Ok(x.or(y)),
    }
}

fn parse_c(c: Option<&str>) -> Result<Option<CycloNum>, Failure> {
    c.map(parse_number).transpose().map_err(Failure::from)
}

/// The parameter for type D: the given one, or the first sampled admissible value.
fn d_parameter(kind: GroupKind, c: Option<CycloNum>, seed: u64) -> Result<Option<CycloNum>, Failure> {
    match (kind, c) {
        (GroupKind::D(r), None) => Ok(Some(sample_c(r, 1, seed)?.remove(0))),
        (_, c) => Ok(c),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn marks_line(report: &VerificationReport, kind: GroupKind) -> Option<String> {
    let m = report.diagram_match.as_ref()?;
    let p = report.profile.as_ref()?;
    let d = affine_diagram(kind).ok()?;
    let marks: Vec<String> = d
        .graph
        .names
        .iter()
        .map(|target| {
            let node = m.mapping.iter().find(|(_, t)| *t == target).map(|(n, _)| n)?;
            Some(if node == "+" { 1 } else { p.multiplicity(node)? }.to_string())
        })
        .collect::<Option<_>>()?;
    Some(format!(
        "marks ({}) with ⊕ = {{{}}}",
        marks.join(","),
        m.open_components.join(", ")
    ))
}

fn text_report(report: &VerificationReport, kind: GroupKind) -> String {
    let mut s = format!(
        "{}{}: {} ({} ms)\n",
        report.kind,
        report.c.as_ref().map(|c| format!(" c = {c}")).unwrap_or_default(),
        if report.passed() { "PASS" } else { "FAIL" },
        report.millis
    );
    for c in &report.checks {
        s.push_str(&format!(
            "  {:<18} {}  {}\n",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.detail
        ));
    }
    if let Some(line) = marks_line(report, kind) {
        s.push_str(&format!("  {line}\n"));
    }
    for n in &report.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    s
}

fn cmd_verify(
    kind: &str,
    rank: Option<u32>,
    c: Option<&str>,
    seed: u64,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if kind.eq_ignore_ascii_case("all") {
        if c.is_some() || rank.is_some() {
            return Err(Failure::Usage("`verify all` takes no rank or parameter".into()));
        }
        let reports = verify_all(seed)?;
        let text = match format {
            ReportFormat::Json => serde_json::to_string_pretty(&reports).expect("report serializes") + "\n",
            ReportFormat::Text => {
                let mut s = String::new();
                for r in &reports {
                    s.push_str(&format!(
                        "{:<5} {:<8} {}  {} ms{}\n",
                        r.kind,
                        r.c.as_deref().unwrap_or("-"),
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.millis,
                        if r.passed() {
                            String::new()
                        } else {
                            format!("  failing: {}", r.failed_checks().join(", "))
                        }
                    ));
                }
                let passed = reports.iter().filter(|r| r.passed()).count();
                s.push_str(&format!("{passed}/{} targets passed\n", reports.len()));
                s
            }
        };
        emit(&text, out)?;
        return if reports.iter().all(VerificationReport::passed) {
            Ok(())
        } else {
            Err(Failure::Checks)
        };
    }
    let kind = parse_kind(kind, rank)?;
    let c = d_parameter(kind, parse_c(c)?, seed)?;
    let report = verify(kind, c.as_ref())?;
    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        ReportFormat::Text => text_report(&report, kind),
    };
    emit(&text, out)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_probe(kind: &str, args: &[String], r: Option<u32>, c: Option<&str>, format: ReportFormat) -> Result<(), Failure> {
    let (rank, candidate) = match args {
        [only] => (None, only),
        [rank, cand] => (
            Some(
                rank.parse::<u32>()
                    .map_err(|_| Failure::Usage(format!("expected a rank, found {rank}")))?,
            ),
            cand,
        ),
        _ => unreachable!("clap enforces one or two values"),
    };
    let kind = parse_kind(kind, merge_rank(rank, r)?)?;
    let expr = parse_xyz(candidate)?;
    let c = parse_c(c)?;
    let v = probe(kind, &expr, c.as_ref())?;
    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&v).expect("verdict serializes")),
        ReportFormat::Text => {
            println!("{kind} candidate {}: {}", v.candidate, if v.accepted { "ACCEPTED" } else { "REJECTED" });
            println!("  {}", v.reason);
            if let Some(same) = v.same_as_f {
                println!("  same profile as F: {same}");
            }
            if let Some(rc) = &v.recovered_c {
                println!("  recovered c = {rc}");
            }
            if let Some(m) = v.c_matches {
                println!("  recovered c equals the given c: {m}");
            }
        }
    }
    if v.accepted {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_export(
    what: Artifact,
    kind: GroupKind,
    c: Option<CycloNum>,
    format: GraphFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let text = match what {
        Artifact::Diagram => {
            let d = affine_diagram(kind)?;
            match format {
                GraphFormat::Dot => export::diagram_dot(&d),
                GraphFormat::Json => export::diagram_json(&d),
            }
        }
        Artifact::Mckay => {
            let g = mckay_graph(&build_group(kind)?)?;
            match format {
                GraphFormat::Dot => export::mckay_dot(&g, &kind.to_string()),
                GraphFormat::Json => export::mckay_json(&g, &kind.to_string()),
            }
        }
        Artifact::Profile => {
            let p = match kind {
                GroupKind::A(r) => divisor_profile_a(&invariant_triple(kind)?.x, r)?,
                GroupKind::D(r) => divisor_profile_d(c.as_ref().expect("D has a parameter"), r)?,
                _ => divisor_profile_e(kind)?,
            };
            let m = match_profile(&p, &affine_diagram(kind)?).ok();
            match format {
                GraphFormat::Dot => export::profile_dot(&p, &format!("divisor {kind}")),
                GraphFormat::Json => export::profile_json(&p, m.as_ref()),
            }
        }
    };
    emit(&text, out)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { kind, rank, r, c, seed, format, out } => {
            cmd_verify(&kind, merge_rank(rank, r)?, c.as_deref(), seed, format, out.as_deref())
        }
        Command::Probe { kind, args, r, c, format } => cmd_probe(&kind, &args, r, c.as_deref(), format),
        Command::Export { what, kind, rank, r, c, seed, format, out } => {
            let kind = parse_kind(&kind, merge_rank(rank, r)?)?;
            if c.is_some() && !matches!(kind, GroupKind::D(_)) {
                return Err(Failure::Usage("the parameter c applies to type D only".into()));
            }
            let c = match what {
                Artifact::Profile => d_parameter(kind, parse_c(c.as_deref())?, seed)?,
                _ => None,
            };
            cmd_export(what, kind, c, format, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
