//! Walks through the column-deletion relations on an explicit array: the
//! chain recovering the two halves, the flipped-column distribution and the
//! multiplicity system over all columns.
//!
//!     cargo run --example column_deletion

use boa_sieve::oracle::{
    column_witness, empirical_distribution, make_replicated_factorial, split_by_first_column,
    verify_strength, BinaryArray,
};
use boa_sieve::sieves::{
    hat_transform, multiplicity_feasible, multiplicity_support, solve_column_deletion,
    MultiplicityInstance,
};

fn main() -> boa_sieve::Result<()> {
    // Columns a, b, c, a+b, a+c of the 2^3 words (a, b, c): a (5, 8, 2)
    // array whose columns play different roles.
    let rows = (0u32..8)
        .map(|v| {
            let (a, b, c) = (v & 1, (v >> 1) & 1, (v >> 2) & 1);
            a | b << 1 | c << 2 | (a ^ b) << 3 | (a ^ c) << 4
        })
        .collect();
    let array = BinaryArray::new(5, rows)?;
    println!(
        "array: n = {}, M = {}, strength 2: {}, strength 3: {}",
        array.n(),
        array.len(),
        verify_strength(&array, 2),
        verify_strength(&array, 3)
    );

    for point in [0u32, 0b00100] {
        let moved = array.translate(point);
        let w = empirical_distribution(&moved, 0);
        println!("\nreference point {point:05b}: w = {w}");
        let mut witnesses = Vec::new();
        for col in 0..array.n() {
            let truth = column_witness(&moved, col);
            let solved = solve_column_deletion(&truth.w, &truth.wprime)?.expect("genuine pair");
            assert_eq!(solved, truth);
            let (c0, c1) = split_by_first_column(&moved.column_to_front(col));
            println!(
                "  cut column {col}: w' = {}  y = {} (C0 has {} rows)  x = {} (C1 has {} rows)  hat = {}",
                solved.wprime,
                solved.y,
                c0.len(),
                solved.x,
                c1.len(),
                hat_transform(&solved)
            );
            assert_eq!(hat_transform(&solved), empirical_distribution(&moved.flip_column(col), 0));
            witnesses.push(solved);
        }
        let instance = MultiplicityInstance::from_witnesses(&w, &witnesses);
        let support = multiplicity_support(&instance, array.n())?;
        println!(
            "  {} distinct (x, y) solutions, multiplicities {:?}, system solvable: {}, support {:?}",
            instance.solutions.len(),
            instance.contributors.iter().map(Vec::len).collect::<Vec<_>>(),
            multiplicity_feasible(&instance, array.n()),
            support
        );
    }

    let factorial = make_replicated_factorial(4, 6)?;
    let w = column_witness(&factorial, 0);
    println!("\nfactorial (4,96,4): w = {}, w' = {}, x = {}, y = {}", w.w, w.wprime, w.x, w.y);
    Ok(())
}
