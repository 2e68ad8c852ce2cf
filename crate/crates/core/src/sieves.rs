//! Pruning rules linking an `(n, M, τ)` array `C` to its relatives.
//!
//! Fix the first column of `C` and the reference point `0`. Deleting the
//! column gives `C′ = (n − 1, M, τ)`; keeping only the rows that start with
//! `0` (resp. `1`) and dropping that bit gives `C_0` (resp. `C_1`), both
//! `(n − 1, M/2, τ − 1)` arrays. Let `x_i` / `y_i` count the ones / zeros of
//! the first column among the rows of weight `i`. Then
//!
//! ```text
//! x_i + y_i = w_i         (1 ≤ i ≤ n − 1)
//! x_{i+1} + y_i = w′_i    (0 ≤ i ≤ n − 1)
//! y_0 = w_0,  x_n = w_n
//! ```
//!
//! `y` is the distance distribution of `C_0`, `x = (x_1, …, x_n)` that of
//! `C_1`, and flipping the first column yields the distribution
//! [`hat_transform`]. Summed over all `n` column cuts, the ones in the
//! weight-`i` rows count to `i · w_i`, which gives the multiplicity system
//! solved by [`multiplicity_feasible`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distributions::{mirror, DistanceDistribution, DistributionSet};
use crate::error::{Error, Result};

/// Identifies the rule responsible for ruling out a distribution or a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// The mirror image was ruled out.
    #[serde(rename = "Cor2")]
    Mirror,
    /// No distribution of the deleted-column array admits a solution.
    #[serde(rename = "a0")]
    NoColumnDeletion,
    /// `y` or `ȳ` is not feasible for the half array.
    #[serde(rename = "a2")]
    ZeroHalf,
    /// `x` or `x̄` is not feasible for the half array.
    #[serde(rename = "a4")]
    OneHalf,
    /// The flipped-column distribution or its mirror is not feasible.
    #[serde(rename = "a6")]
    FlippedColumn,
    /// Every pair for this distribution was ruled out.
    #[serde(rename = "a7")]
    AllPairsRuledOut,
    /// The multiplicity system has no solution.
    #[serde(rename = "a8")]
    NoMultiplicities,
    /// The pair's solution has multiplicity zero in every solution.
    #[serde(rename = "a9")]
    ZeroMultiplicity,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::Mirror,
        Rule::NoColumnDeletion,
        Rule::ZeroHalf,
        Rule::OneHalf,
        Rule::FlippedColumn,
        Rule::AllPairsRuledOut,
        Rule::NoMultiplicities,
        Rule::ZeroMultiplicity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Mirror => "Cor2",
            Rule::NoColumnDeletion => "a0",
            Rule::ZeroHalf => "a2",
            Rule::OneHalf => "a4",
            Rule::FlippedColumn => "a6",
            Rule::AllPairsRuledOut => "a7",
            Rule::NoMultiplicities => "a8",
            Rule::ZeroMultiplicity => "a9",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A surviving solution `(x, y)` of the column-deletion system for `(w, w′)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairWitness {
    pub w: DistanceDistribution,
    pub wprime: DistanceDistribution,
    /// `(x_1, …, x_n)`: distribution of the half with a leading one.
    pub x: DistanceDistribution,
    /// `(y_0, …, y_{n−1})`: distribution of the half with a leading zero.
    pub y: DistanceDistribution,
}

/// Solves the column-deletion system for `(w, w′)` by the forward chain
/// `y_0 = w_0`, `x_{i+1} = w′_i − y_i`, `y_{i+1} = w_{i+1} − x_{i+1}`.
///
/// The system has at most one solution; `None` means it has none.
pub fn solve_column_deletion(
    w: &DistanceDistribution,
    wprime: &DistanceDistribution,
) -> Result<Option<PairWitness>> {
    let n = w.length();
    if n == 0 || wprime.0.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: wprime.0.len(),
        });
    }
    let (wv, wp) = (&w.0, &wprime.0);
    let mut x = vec![0u32; n];
    let mut y = vec![0u32; n];
    y[0] = wv[0];
    for i in 0..n {
        // x_{i+1} lives at x[i].
        let Some(xi) = wp[i].checked_sub(y[i]) else {
            return Ok(None);
        };
        x[i] = xi;
        if i + 1 < n {
            let Some(yi) = wv[i + 1].checked_sub(xi) else {
                return Ok(None);
            };
            y[i + 1] = yi;
        }
    }
    if x[n - 1] != wv[n] {
        return Ok(None);
    }
    Ok(Some(PairWitness {
        w: w.clone(),
        wprime: wprime.clone(),
        x: DistanceDistribution(x),
        y: DistanceDistribution(y),
    }))
}

/// Distribution of the array with its first column complemented:
/// `ŵ = (x_1, x_2 + y_0, …, x_n + y_{n−2}, y_{n−1})`.
pub fn hat_transform(witness: &PairWitness) -> DistanceDistribution {
    hat_from_halves(&witness.x, &witness.y)
}

pub(crate) fn hat_from_halves(x: &DistanceDistribution, y: &DistanceDistribution) -> DistanceDistribution {
    let n = x.0.len();
    let mut hat = Vec::with_capacity(n + 1);
    hat.push(x.0[0]);
    for i in 1..n {
        hat.push(x.0[i] + y.0[i - 1]);
    }
    hat.push(y.0[n - 1]);
    DistanceDistribution(hat)
}

/// The first rule, if any, that rules out `witness`.
///
/// `half` is the current `W(n−1, M/2, τ−1)`; `None` skips the half-array
/// checks (used when the workbook has no row below). `target` is the current
/// `W(n, M, τ)` and `filtered` holds distributions already ruled out but not
/// yet removed from `target`.
pub fn pair_ruling(
    witness: &PairWitness,
    half: Option<&DistributionSet>,
    target: &DistributionSet,
    filtered: &HashSet<DistanceDistribution>,
) -> Result<Option<Rule>> {
    let n = witness.w.length();
    if target.triple.n != n || witness.x.0.len() != n || witness.y.0.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: target.triple.n,
        });
    }
    if let Some(half) = half {
        if half.triple.n + 1 != n {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                got: half.triple.n,
            });
        }
        if !half.contains(&witness.y) || !half.contains(&mirror(&witness.y)) {
            return Ok(Some(Rule::ZeroHalf));
        }
        if !half.contains(&witness.x) || !half.contains(&mirror(&witness.x)) {
            return Ok(Some(Rule::OneHalf));
        }
    }
    let hat = hat_transform(witness);
    let hat_bar = mirror(&hat);
    let admissible = |v: &DistanceDistribution| target.contains(v) && !filtered.contains(v);
    if !admissible(&hat) || !admissible(&hat_bar) {
        return Ok(Some(Rule::FlippedColumn));
    }
    Ok(None)
}

/// True iff `witness` passes the half-array and flipped-column checks.
pub fn check_pair(
    witness: &PairWitness,
    half: &DistributionSet,
    target: &DistributionSet,
    filtered: &HashSet<DistanceDistribution>,
) -> Result<bool> {
    Ok(pair_ruling(witness, Some(half), target, filtered)?.is_none())
}

/// The distinct surviving solutions for one `w`, gathered over every `w′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityInstance {
    pub w: DistanceDistribution,
    /// Distinct `(x, y)` solutions; `y` is determined by `x` and `w`.
    pub solutions: Vec<(DistanceDistribution, DistanceDistribution)>,
    /// The `w′` values that produced each solution.
    pub contributors: Vec<Vec<DistanceDistribution>>,
}

impl MultiplicityInstance {
    /// Groups witnesses for one `w` by their `(x, y)` solution, in order of
    /// first appearance.
    pub fn from_witnesses<'a>(
        w: &DistanceDistribution,
        witnesses: impl IntoIterator<Item = &'a PairWitness>,
    ) -> Self {
        let mut index: HashMap<&DistanceDistribution, usize> = HashMap::new();
        let mut solutions = Vec::new();
        let mut contributors: Vec<Vec<DistanceDistribution>> = Vec::new();
        for wit in witnesses {
            let j = *index.entry(&wit.x).or_insert_with(|| {
                solutions.push((wit.x.clone(), wit.y.clone()));
                contributors.push(Vec::new());
                solutions.len() - 1
            });
            contributors[j].push(wit.wprime.clone());
        }
        Self {
            w: w.clone(),
            solutions,
            contributors,
        }
    }
}

/// Depth-first solver for `Σ_j k_j = n`, `Σ_j k_j x_i^{(j)} = i · w_i`.
///
/// A solution is a multiset of `n` cuts; each level picks one more cut with
/// index at least that of the previous one.
struct MultiplicitySolver<'a> {
    /// `x_i^{(j)}` for `i = 1..=n`, row `j`.
    cols: Vec<&'a [u32]>,
    /// Per `(j, i)`: min and max of `x_i^{(j′)}` over `j′ ≥ j`.
    suffix_lo: Vec<Vec<u64>>,
    suffix_hi: Vec<Vec<u64>>,
    dead: HashSet<(usize, u32, Vec<u64>)>,
}

impl<'a> MultiplicitySolver<'a> {
    fn new(instance: &'a MultiplicityInstance) -> Self {
        let cols: Vec<&[u32]> = instance.solutions.iter().map(|(x, _)| x.as_slice()).collect();
        let s = cols.len();
        let n = instance.w.length();
        let mut suffix_lo = vec![vec![u64::MAX; n]; s + 1];
        let mut suffix_hi = vec![vec![0u64; n]; s + 1];
        for j in (0..s).rev() {
            for i in 0..n {
                let v = cols[j][i] as u64;
                suffix_lo[j][i] = suffix_lo[j + 1][i].min(v);
                suffix_hi[j][i] = suffix_hi[j + 1][i].max(v);
            }
        }
        Self {
            cols,
            suffix_lo,
            suffix_hi,
            dead: HashSet::new(),
        }
    }

    fn targets(instance: &MultiplicityInstance) -> Vec<u64> {
        // index i − 1 holds i · w_i
        (1..=instance.w.length())
            .map(|i| i as u64 * instance.w.0[i] as u64)
            .collect()
    }

    /// Whether `residual` can be met with exactly `budget` more cuts drawn
    /// from solutions `start..`. On success `used` ends with the indices
    /// picked.
    fn solve(&mut self, start: usize, budget: u32, residual: &mut [u64], used: &mut Vec<usize>) -> bool {
        if budget == 0 {
            return residual.iter().all(|&r| r == 0);
        }
        if start == self.cols.len() {
            return false;
        }
        let b = budget as u64;
        for (i, &r) in residual.iter().enumerate() {
            if r < b * self.suffix_lo[start][i] || r > b * self.suffix_hi[start][i] {
                return false;
            }
        }
        let key = (start, budget, residual.to_vec());
        if self.dead.contains(&key) {
            return false;
        }
        for j in start..self.cols.len() {
            let col = self.cols[j];
            if col.iter().zip(residual.iter()).any(|(&v, &r)| v as u64 > r) {
                continue;
            }
            for (r, &v) in residual.iter_mut().zip(col) {
                *r -= v as u64;
            }
            used.push(j);
            let ok = self.solve(j, budget - 1, residual, used);
            for (r, &v) in residual.iter_mut().zip(col) {
                *r += v as u64;
            }
            if ok {
                return true;
            }
            used.pop();
        }
        self.dead.insert(key);
        false
    }
}

/// True iff some nonnegative `k_1..k_s` with `Σ k_j = n` satisfies
/// `Σ_j k_j x_i^{(j)} = i · w_i` for every `i = 1..=n`.
pub fn multiplicity_feasible(instance: &MultiplicityInstance, n: usize) -> bool {
    if instance.solutions.is_empty() || instance.w.length() != n {
        return false;
    }
    let mut solver = MultiplicitySolver::new(instance);
    let mut residual = MultiplicitySolver::targets(instance);
    solver.solve(0, n as u32, &mut residual, &mut Vec::new())
}

/// Indices `j` for which some solution of the multiplicity system has
/// `k_j ≥ 1`. Pairs whose solution index is missing are ruled out.
pub fn multiplicity_support(instance: &MultiplicityInstance, n: usize) -> Result<BTreeSet<usize>> {
    let infeasible = || {
        Err(Error::OutOfRange(format!(
            "multiplicity system for {} has no solution",
            instance.w
        )))
    };
    if instance.solutions.is_empty() || instance.w.length() != n {
        return infeasible();
    }
    let mut solver = MultiplicitySolver::new(instance);
    let base = MultiplicitySolver::targets(instance);
    let mut used = Vec::new();
    if !solver.solve(0, n as u32, &mut base.clone(), &mut used) {
        return infeasible();
    }
    let mut support: BTreeSet<usize> = used.drain(..).collect();
    for j in 0..instance.solutions.len() {
        if support.contains(&j) {
            continue;
        }
        let x = solver.cols[j];
        if x.iter().zip(&base).any(|(&v, &r)| v as u64 > r) {
            continue;
        }
        let mut residual: Vec<u64> = base.iter().zip(x).map(|(&r, &v)| r - v as u64).collect();
        // Fix one cut on j and complete it from all solutions; every index
        // the completion uses is supported too.
        if solver.solve(0, n as u32 - 1, &mut residual, &mut used) {
            support.insert(j);
            support.extend(used.drain(..));
        }
        used.clear();
    }
    Ok(support)
}
