//! Builds the workbook for a target triple, sieves it to the fixed point and
//! prints the count table, the rule tally and the verdict.
//!
//!     cargo run --release --example run_workbook -- 9 96 4
//!     cargo run --release --example run_workbook -- 11 112 4 --min-strength 2 --seed 5

use std::time::Instant;

use boa_sieve::orchestrator::{Schedule, SieveOptions, Visibility, DEFAULT_MIN_STRENGTH};
use boa_sieve::{build_workbook, ParameterTriple};

fn main() -> boa_sieve::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, default: u64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let target = ParameterTriple::new(num(0, 9) as usize, num(1, 96), num(2, 4) as usize)?;
    let flag = |name: &str| {
        args.iter()
            .position(|a| a == name)
            .and_then(|i| args.get(i + 1))
            .map(|s| s.parse::<u64>().expect("flag value"))
    };
    let min_strength = flag("--min-strength").map_or(DEFAULT_MIN_STRENGTH, |v| v as usize);
    let options = match flag("--seed") {
        Some(seed) => SieveOptions {
            schedule: Schedule::Shuffled(seed),
            visibility: Visibility::Immediate,
            ..Default::default()
        },
        None => SieveOptions::default(),
    };

    let start = Instant::now();
    let mut workbook = build_workbook(target, min_strength)?;
    println!("workbook for {target}: {} rows, built in {:.1?}", workbook.rows().len(), start.elapsed());
    let report = workbook.run_fixed_point(&options)?;
    println!("fixed point after {} passes, {:.1?} total\n", report.passes.len(), start.elapsed());
    print!("{}", report.to_csv());
    println!("\nrulings per rule:");
    for (rule, count) in &report.rules {
        println!("  {rule:>4} {count}");
    }
    for pass in &report.passes {
        println!(
            "  pass {:>2}: {:>2} cells sieved, {:>4} removals, {:.1} ms",
            pass.pass, pass.cells_sieved, pass.removals, pass.millis
        );
    }
    println!("\n{target}: {}", report.target_verdict());
    Ok(())
}
