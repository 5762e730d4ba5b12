//! Runs every reproduction criterion and prints one PASS/FAIL line each.
//! Built without the libtest harness so the lines show up in `cargo test`.

use std::process::ExitCode;

use unigraph::reproduce::{Runner, CRITERIA};

fn main() -> ExitCode {
    let results = Runner::new().run_all(None);
    assert_eq!(results.len(), CRITERIA.len());
    println!("\nacceptance: {} criteria", results.len());
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!(
            "{} {}",
            r.key,
            serde_json::to_string_pretty(&r.details).unwrap()
        );
    }
    println!(
        "acceptance: {} passed; {} failed\n",
        results.len() - failed.len(),
        failed.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
