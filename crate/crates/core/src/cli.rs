//! Command-line driver. `run` returns the exit code and both output streams
//! so the binary stays a thin wrapper and tests can call it in-process.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::report::Report;
use crate::scenario::{self, load_scenario, Plan, Scenario, Settings};

#[derive(Debug, Parser)]
#[command(name = "realpv", version, about = "Picard-Vessiot extensions and their real forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the extension and verify its certificates
    Build(ScenarioArgs),
    /// Relation ideal, defining set and the action of group elements
    Group(ScenarioArgs),
    /// Galois correspondence, normality and weak normality
    Correspond(ScenarioArgs),
    /// Cocycle twists and real forms
    Twist(ScenarioArgs),
    /// Built-in demonstrations
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(scenario::DEMOS))]
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Every pipeline on every built-in scenario, then every demo
    All(Common),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario JSON file
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write the output to a file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Total degree bound of the constant scan
    #[arg(long, value_name = "D")]
    scan_degree: Option<u32>,
    /// Base-coefficient degree bound of the constant scan
    #[arg(long, value_name = "E")]
    scan_coeff_degree: Option<u32>,
    /// Step budget for Groebner computations
    #[arg(long, value_name = "STEPS")]
    budget: Option<usize>,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings { scan_degree: self.scan_degree, scan_coeff_degree: self.scan_coeff_degree }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Serialize)]
struct Output<'a> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<&'a Scenario>,
    reports: &'a [Report],
    passed: bool,
}

fn usage_error(message: String) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: message }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                usage_error(text)
            };
        }
    };
    let (name, plan, common) = match &cli.command {
        Command::Build(a) | Command::Group(a) | Command::Correspond(a) | Command::Twist(a) => {
            let plan = match load_scenario(&a.scenario).and_then(|s| s.plan()) {
                Ok(p) => p,
                Err(e) => return usage_error(format!("error: {}: {e}\n", a.scenario.display())),
            };
            (subcommand_name(&cli.command), Some(plan), &a.common)
        }
        Command::Demo { common, .. } => ("demo", None, common),
        Command::All(common) => ("all", None, common),
    };
    if let Some(b) = common.budget {
        crate::arith::set_budget(b);
    }
    let settings = common.settings();
    let reports = match (&cli.command, &plan) {
        (Command::Build(_), Some(p)) => vec![scenario::run_build(p, &settings)],
        (Command::Group(_), Some(p)) => vec![scenario::run_group(p, &settings)],
        (Command::Correspond(_), Some(p)) => vec![scenario::run_correspond(p, &settings)],
        (Command::Twist(_), Some(p)) => vec![scenario::run_twist(p, &settings)],
        (Command::Demo { name, .. }, _) => vec![scenario::run_demo(name, &settings).expect("validated by clap")],
        _ => scenario::run_all(&settings),
    };
    emit(name, plan.as_ref(), &reports, common)
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Build(_) => "build",
        Command::Group(_) => "group",
        Command::Correspond(_) => "correspond",
        Command::Twist(_) => "twist",
        Command::Demo { .. } => "demo",
        Command::All(_) => "all",
    }
}

fn emit(command: &str, plan: Option<&Plan>, reports: &[Report], common: &Common) -> Outcome {
    let passed = reports.iter().all(Report::all_passed);
    let json = common.json || plan.and_then(|p| p.scenario.output).is_some_and(|o| o.json);
    let body = if json {
        let out = Output { command, scenario: plan.map(|p| &p.scenario), reports, passed };
        let mut s = serde_json::to_string_pretty(&out).expect("reports serialize");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for r in reports {
            s.push_str(&r.to_text());
            s.push('\n');
        }
        s.push_str(if passed { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
        s
    };
    let mut stderr = String::new();
    for r in reports {
        for c in r.failures() {
            stderr.push_str(&format!("FAIL {}: {}: {}\n", r.title, c.name, c.detail));
        }
    }
    let code = if passed { 0 } else { 1 };
    match &common.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome { code, stdout: format!("wrote {}\n", path.display()), stderr },
            Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("{stderr}error: {}: {e}\n", path.display()) },
        },
        None => Outcome { code, stdout: body, stderr },
    }
}
