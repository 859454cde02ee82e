//! Running a scenario programmatically, as the CLI does.
//!
//! `cargo run --example scenario -- path/to/scenario.json` runs a file;
//! without an argument the built-in circle scenario is used.

use realpv::scenario::{builtin, load_scenario, run_build, run_correspond, run_group, run_twist, Settings};

fn main() {
    let scenario = match std::env::args().nth(1) {
        Some(path) => load_scenario(path.as_ref()).unwrap_or_else(|e| {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }),
        None => builtin("circle").unwrap(),
    };
    let plan = scenario.plan().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    let settings = Settings::default();
    for rep in [run_build(&plan, &settings), run_group(&plan, &settings), run_correspond(&plan, &settings), run_twist(&plan, &settings)] {
        println!("{}: {} checks, passed = {}", rep.title, rep.checks.len(), rep.all_passed());
    }
}
