//! Enumerates the initial P, Q and W sets along one workbook row and writes
//! the W set of the last cell as JSON.
//!
//!     cargo run --release --example enumerate_sets -- 96 4 9 /tmp/w.json

use std::time::Instant;

use boa_sieve::{brute_force_enumerate, enumerate_initial, ParameterTriple, SetKind};

fn main() -> boa_sieve::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m: u64 = args.first().map_or(96, |s| s.parse().expect("M"));
    let tau: usize = args.get(1).map_or(4, |s| s.parse().expect("tau"));
    let last: usize = args.get(2).map_or(9, |s| s.parse().expect("n"));

    println!("{:>4} {:>6} {:>6} {:>6} {:>10}", "n", "P", "Q", "W", "time");
    let mut top = None;
    for n in tau..=last {
        let triple = ParameterTriple::new(n, m, tau)?;
        let start = Instant::now();
        let w = enumerate_initial(triple, SetKind::W)?;
        let p = w.restrict(SetKind::P);
        let q = w.restrict(SetKind::Q);
        println!(
            "{n:>4} {:>6} {:>6} {:>6} {:>10.1?}",
            p.len(),
            q.len(),
            w.len(),
            start.elapsed()
        );
        if n <= 5 && brute_force_enumerate(triple).is_ok_and(|b| b != w) {
            println!("     exhaustive search disagrees at {triple}");
        }
        top = Some(w);
    }

    let Some(top) = top else { return Ok(()) };
    let shown = top.len().min(5);
    println!("first {shown} members of W{}:", top.triple);
    for w in top.iter().take(shown) {
        println!("  {w}");
    }
    if let Some(path) = args.get(3) {
        std::fs::write(path, top.to_json()?).expect("write JSON");
        println!("wrote {path}");
    }
    Ok(())
}
