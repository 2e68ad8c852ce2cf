//! Checks explicit arrays against sieved sets: every distance distribution
//! of a genuine array must survive in its cell.
//!
//!     cargo run --release --example verify_array

use boa_sieve::oracle::{make_even_weight, make_replicated_factorial, verify_strength, BinaryArray};
use boa_sieve::orchestrator::SieveOptions;
use boa_sieve::{build_workbook, ParameterTriple, SetKind};

fn main() -> boa_sieve::Result<()> {
    let target = ParameterTriple::new(9, 96, 4)?;
    let mut workbook = build_workbook(target, 2)?;
    workbook.run_fixed_point(&SieveOptions::default())?;

    let arrays: Vec<(&str, BinaryArray, usize)> = vec![
        ("factorial x6", make_replicated_factorial(4, 6)?, 4),
        ("even weight x6", make_even_weight(5, 6)?, 4),
        ("even weight x6, one column deleted", make_even_weight(5, 6)?.delete_column(2), 4),
        ("factorial x3", make_replicated_factorial(3, 6)?, 3),
        ("even weight x6", make_even_weight(4, 6)?, 3),
        ("even weight x6", make_even_weight(3, 6)?, 2),
    ];
    for (name, array, tau) in arrays {
        let triple = ParameterTriple::new(array.n(), array.len() as u64, tau)?;
        let survivors = workbook.set(triple, SetKind::W)?;
        let mut census: Vec<_> = array.distribution_census().into_iter().collect();
        census.sort();
        println!(
            "{name} as {triple}: strength {tau} {}, {} surviving distributions in the cell",
            if verify_strength(&array, tau) { "holds" } else { "FAILS" },
            survivors.len()
        );
        for (w, points) in census {
            let status = if survivors.contains(&w) { "survives" } else { "REMOVED" };
            println!("  {w} from {points} points: {status}");
        }
    }

    // Text format accepted by `boa verify-oa`.
    let small = make_even_weight(3, 1)?;
    print!("\nplain-text form of the (3,4,2) even-weight array:\n{small}");
    Ok(())
}
