//! `fedosov check`: runs the verification stages on Lie-pair spec files and
//! writes a versioned JSON report.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fedosov_core::contraction_engine::Status;
use fedosov_core::suites::{run_pair, Check, PairReport, RunConfig, StageReport, Suite};
use fedosov_core::LiePairSpec;
use serde::Serialize;

const SCHEMA: &str = "v1";

#[derive(Parser)]
#[command(name = "fedosov", version, about = "Exact verification of Fedosov resolutions and transferred brackets for Lie pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification stages on one or more Lie-pair specs.
    Check(CheckArgs),
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Lie-pair spec files (JSON); repeat the flag or pass several paths.
    #[arg(long, num_args = 1..)]
    pair: Vec<PathBuf>,
    /// Truncation weight N.
    #[arg(long, default_value_t = 5)]
    trunc: u32,
    /// Largest bracket arity K; N >= K + 2 is required.
    #[arg(long, default_value_t = 3)]
    arity: usize,
    /// Stages to run, comma separated; `none` selects nothing.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    suite: Vec<SuiteArg>,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; without it the JSON goes to stdout and the summary to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Validate,
    Fedosov,
    Contraction,
    #[value(name = "transfer-t")]
    TransferT,
    #[value(name = "transfer-d")]
    TransferD,
    Matched,
    Uniqueness,
    Cohomology,
    All,
    None,
}

impl SuiteArg {
    fn expand(self) -> Vec<Suite> {
        match self {
            SuiteArg::Validate => vec![Suite::Validate],
            SuiteArg::Fedosov => vec![Suite::Fedosov],
            SuiteArg::Contraction => vec![Suite::Contraction],
            SuiteArg::TransferT => vec![Suite::TransferT],
            SuiteArg::TransferD => vec![Suite::TransferD],
            SuiteArg::Matched => vec![Suite::Matched],
            SuiteArg::Uniqueness => vec![Suite::Uniqueness],
            SuiteArg::Cohomology => vec![Suite::Cohomology],
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::None => Vec::new(),
        }
    }
}

/// Selected stages in canonical order, without repeats.
fn selection(args: &[SuiteArg]) -> Vec<Suite> {
    let mut out: Vec<Suite> = args.iter().flat_map(|a| a.expand()).collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Serialize)]
struct ConfigEcho {
    trunc: u32,
    arity: usize,
    seed: u64,
    suites: Vec<&'static str>,
}

#[derive(Serialize)]
struct PairEntry {
    file: String,
    #[serde(flatten)]
    report: PairReport,
}

#[derive(Serialize)]
struct Summary {
    pairs: usize,
    checks: usize,
    failed: usize,
    status: Status,
}

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    config: ConfigEcho,
    pairs: Vec<PairEntry>,
    summary: Summary,
}

fn parse_failure(path: &Path, detail: String) -> PairReport {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let stage = StageReport {
        stage: "parse",
        status: Status::Fail,
        checks: vec![Check::fail("spec file parses", detail, Vec::new())],
        artifacts: Default::default(),
    };
    PairReport { name, status: Status::Fail, stages: vec![stage] }
}

fn run_file(path: &Path, suites: &[Suite], cfg: &RunConfig) -> PairReport {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return parse_failure(path, format!("{}: {e}", path.display())),
    };
    match LiePairSpec::from_json(&text) {
        Ok(spec) => run_pair(&spec, suites, cfg),
        Err(e) => parse_failure(path, format!("{}: {e}", path.display())),
    }
}

fn summary_text(report: &Report) -> String {
    let mut s = String::new();
    for p in &report.pairs {
        let r = &p.report;
        s += &format!("{} ({}): {}\n", r.name, p.file, status_word(&r.status));
        for st in &r.stages {
            let passed = st.checks.iter().filter(|c| c.passed()).count();
            s += &format!("  {:<12} {} {passed}/{}\n", st.stage, status_word(&st.status), st.checks.len());
            for c in st.checks.iter().filter(|c| !c.passed()) {
                let w = c.witness.as_ref();
                let detail = w.map_or(String::new(), |w| w.detail.clone());
                let indices = w.filter(|w| !w.indices.is_empty()).map_or(String::new(), |w| format!(" witness {:?}", w.indices));
                s += &format!("    FAIL {}: {detail}{indices}\n", c.identity);
            }
        }
    }
    let sm = &report.summary;
    s += &format!("{} checks, {} failed: {}\n", sm.checks, sm.failed, status_word(&sm.status));
    s
}

fn status_word(s: &Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
    }
}

fn check(args: CheckArgs) -> ExitCode {
    let cfg = RunConfig { trunc: args.trunc, arity: args.arity, seed: args.seed };
    if let Err(e) = cfg.validate() {
        eprintln!("fedosov: invalid configuration: {e} (N >= K + 2 is required)");
        return ExitCode::from(2);
    }
    let suites = selection(&args.suite);
    let pairs: Vec<PairEntry> =
        args.pair.iter().map(|path| PairEntry { file: path.display().to_string(), report: run_file(path, &suites, &cfg) }).collect();
    let checks: Vec<&Check> = pairs.iter().flat_map(|p| p.report.checks()).collect();
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let report = Report {
        schema: SCHEMA,
        config: ConfigEcho { trunc: cfg.trunc, arity: cfg.arity, seed: cfg.seed, suites: suites.iter().map(|s| s.name()).collect() },
        summary: Summary { pairs: pairs.len(), checks: checks.len(), failed, status: if failed == 0 { Status::Pass } else { Status::Fail } },
        pairs,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let text = summary_text(&report);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("fedosov: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            print!("{text}");
        }
        None => {
            print!("{json}");
            eprint!("{text}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Check(args) => check(args),
    }
}
