//! Prints the cleared moment constants `T_k` for one length and checks the
//! moment equations on the distance distribution of a replicated factorial.
//!
//!     cargo run --example moment_constants -- 9

use boa_sieve::moments::{krawtchouk_eval, MomentTable};
use boa_sieve::oracle::{empirical_distribution, make_replicated_factorial};

fn main() -> boa_sieve::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(9), |s| s.parse()).expect("length");
    let table = MomentTable::new(n)?;
    println!("n = {n}");
    for k in 0..=n {
        println!("  T_{k:<2} = {:>12}   b_{k} = {}", table.get(k), table.b(k));
    }
    println!("Krawtchouk Q_k at distance 1:");
    for k in 0..=n.min(6) {
        println!("  Q_{k}(1 - 2/{n}) = {}", krawtchouk_eval(n, k, 1)?);
    }

    let small = n.min(6);
    let array = make_replicated_factorial(small, 3)?;
    let w = empirical_distribution(&array, 0);
    let residuals = w.moment_residuals(array.len() as u64, small)?;
    println!("factorial ({small},{},{small}) from zero: {w}", array.len());
    println!("  residuals for k = 0..={small}: {residuals:?}");
    Ok(())
}
