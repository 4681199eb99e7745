//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;

use fiberforge_cli::config::RunConfig;
use fiberforge_cli::corpus::{run, CRITERIA};

fn main() -> ExitCode {
    let outcomes = run(&RunConfig::default(), None);
    assert_eq!(outcomes.len(), CRITERIA);
    println!("\nacceptance suite");
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("all {CRITERIA} criteria pass\n");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}\n");
        ExitCode::FAILURE
    }
}
