//! Runs the ten acceptance criteria and prints one line per criterion.

use coanalytic_core::acceptance::{run, AcceptanceConfig};

fn main() {
    let results = run(&AcceptanceConfig::default());
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if results.len() != 10 || !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
