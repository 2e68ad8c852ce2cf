//! Derives further nonexistence results from sieve verdicts.
//!
//!     cargo run --release --example coexistence

use boa_sieve::orchestrator::SieveOptions;
use boa_sieve::{build_workbook, coexistence_propagate, ParameterTriple, Verdict};

fn main() -> boa_sieve::Result<()> {
    let mut verdicts = Vec::new();
    for (n, m, tau) in [(9, 96, 4), (11, 112, 4)] {
        let target = ParameterTriple::new(n, m, tau)?;
        let mut workbook = build_workbook(target, 2)?;
        workbook.run_fixed_point(&SieveOptions::default())?;
        // Every cell of the top row carries its own verdict.
        for &cell in &workbook.rows()[0] {
            let v = workbook.verdict(cell)?;
            println!("sieved   {cell}: {v}");
            verdicts.push((cell, v));
        }
    }
    let derived = coexistence_propagate(&verdicts);
    for (triple, v) in &derived[verdicts.len()..] {
        if *v == Verdict::Nonexistent && triple.n <= 12 {
            println!("derived  {triple}: {v}");
        }
    }
    Ok(())
}
