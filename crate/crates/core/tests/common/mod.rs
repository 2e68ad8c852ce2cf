//! Ground-truth arrays shared by the integration tests.

#![allow(dead_code)]

use boa_sieve::oracle::{
    column_witness, empirical_distribution, make_even_weight, make_replicated_factorial,
    split_by_first_column, BinaryArray,
};
use boa_sieve::sieves::{hat_transform, multiplicity_feasible, solve_column_deletion, MultiplicityInstance};
use boa_sieve::{DistanceDistribution, ParameterTriple};

/// `alpha` copies of the even-weight vectors of length `n` followed by `beta`
/// copies of the odd-weight ones. Strength `n − 1`, or `n` when the two
/// multiplicities agree.
pub fn parity_array(n: usize, alpha: u64, beta: u64) -> BinaryArray {
    assert!(alpha + beta > 0);
    let even = (alpha > 0).then(|| make_even_weight(n, alpha).unwrap());
    let odd = (beta > 0).then(|| make_even_weight(n, beta).unwrap().translate(1));
    match (even, odd) {
        (Some(e), Some(o)) => e.juxtapose(&o).unwrap(),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!(),
    }
}

/// Known arrays with the length and cardinality of `triple` and strength at
/// least `triple.tau`: replicated factorials and unbalanced parity mixtures.
pub fn corpus_for(triple: ParameterTriple) -> Vec<BinaryArray> {
    let (n, m, tau) = (triple.n, triple.m, triple.tau);
    if n > 10 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if m % (1 << n) == 0 {
        out.push(make_replicated_factorial(n, m >> n).unwrap());
    }
    if tau < n && m % (1 << (n - 1)) == 0 {
        let lambda = m >> (n - 1);
        for alpha in lambda.div_ceil(2)..=lambda {
            let beta = lambda - alpha;
            if alpha != beta {
                out.push(parity_array(n, alpha, beta));
            }
        }
    }
    out
}

/// Checks the column-deletion, flipped-column and multiplicity identities on
/// every point and column of `array`. Returns a description of the first
/// mismatch.
pub fn witness_consistency(array: &BinaryArray) -> Result<(), String> {
    let n = array.n();
    if n < 2 {
        return Ok(());
    }
    for point in 0..(1u32 << n) {
        let moved = array.translate(point);
        let w = empirical_distribution(&moved, 0);
        let mut witnesses = Vec::new();
        for col in 0..n {
            let wit = column_witness(&moved, col);
            if wit.w != w {
                return Err(format!("point {point:b} col {col}: w differs"));
            }
            let solved = solve_column_deletion(&wit.w, &wit.wprime).map_err(|e| e.to_string())?;
            if solved.as_ref() != Some(&wit) {
                return Err(format!("point {point:b} col {col}: chain gives {solved:?}"));
            }
            let (c0, c1) = split_by_first_column(&moved.column_to_front(col));
            if empirical_distribution(&c0, 0) != wit.y || empirical_distribution(&c1, 0) != wit.x {
                return Err(format!("point {point:b} col {col}: halves disagree"));
            }
            let flipped = empirical_distribution(&moved.flip_column(col), 0);
            if hat_transform(&wit) != flipped {
                return Err(format!("point {point:b} col {col}: hat {} vs {flipped}", hat_transform(&wit)));
            }
            witnesses.push(wit);
        }
        let instance = MultiplicityInstance::from_witnesses(&w, &witnesses);
        let k: Vec<usize> = instance.contributors.iter().map(Vec::len).collect();
        if k.iter().sum::<usize>() != n {
            return Err(format!("point {point:b}: multiplicities sum to {k:?}"));
        }
        for i in 1..=n {
            let lhs: u64 = instance
                .solutions
                .iter()
                .zip(&k)
                .map(|((x, _), &kj)| kj as u64 * x.0[i - 1] as u64)
                .sum();
            if lhs != i as u64 * w.0[i] as u64 {
                return Err(format!("point {point:b}: counting identity fails at i={i}"));
            }
        }
        if !multiplicity_feasible(&instance, n) {
            return Err(format!("point {point:b}: multiplicity system infeasible"));
        }
    }
    Ok(())
}

/// Distinct distributions of `array` over all points.
pub fn all_distributions(array: &BinaryArray) -> Vec<DistanceDistribution> {
    let mut v: Vec<_> = array.distribution_census().into_keys().collect();
    v.sort();
    v
}
