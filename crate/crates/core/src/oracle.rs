//! Explicit binary arrays used as ground truth for the sieves.
//!
//! Rows are stored as bit masks with bit `j` holding column `j`, so column 0
//! is the "first column" the sieves cut on.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::distributions::DistanceDistribution;
use crate::error::{Error, Result};
use crate::sieves::PairWitness;

/// Largest number of rows [`make_replicated_factorial`] will build.
pub const ROW_BUDGET: u64 = 1 << 20;

/// An `M × n` matrix over `{0, 1}`; repeated rows are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryArray {
    n: usize,
    rows: Vec<u32>,
}

impl BinaryArray {
    pub fn new(n: usize, rows: Vec<u32>) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::OutOfRange(format!("array length {n}")));
        }
        if let Some(r) = rows.iter().find(|&&r| r >> n != 0) {
            return Err(Error::OutOfRange(format!("row {r:#b} wider than {n} columns")));
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows `M`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Removes column `col`.
    pub fn delete_column(&self, col: usize) -> Self {
        let low = (1u32 << col) - 1;
        let rows = self
            .rows
            .iter()
            .map(|&r| (r & low) | ((r >> (col + 1)) << col))
            .collect();
        Self {
            n: self.n - 1,
            rows,
        }
    }

    /// Complements column `col`.
    pub fn flip_column(&self, col: usize) -> Self {
        Self {
            n: self.n,
            rows: self.rows.iter().map(|&r| r ^ (1 << col)).collect(),
        }
    }

    /// Adds `point` to every row, moving the reference point to zero.
    pub fn translate(&self, point: u32) -> Self {
        Self {
            n: self.n,
            rows: self.rows.iter().map(|&r| r ^ point).collect(),
        }
    }

    /// Moves column `col` to the front, keeping the others in order.
    pub fn column_to_front(&self, col: usize) -> Self {
        let rest = self.delete_column(col);
        Self {
            n: self.n,
            rows: rest
                .rows
                .iter()
                .zip(&self.rows)
                .map(|(&r, &orig)| (r << 1) | ((orig >> col) & 1))
                .collect(),
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn juxtapose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(Self { n: self.n, rows })
    }

    /// The first column subset (ascending column indices) whose projection is
    /// unbalanced, or `None` when the array has strength `tau`.
    pub fn strength_violation(&self, tau: usize) -> Option<Vec<usize>> {
        if tau == 0 {
            return None;
        }
        if tau > self.n || tau >= 32 || !self.rows.len().is_multiple_of(1usize << tau) {
            return Some((0..tau.min(self.n)).collect());
        }
        let lambda = self.rows.len() >> tau;
        let mut cols: Vec<usize> = (0..tau).collect();
        loop {
            let mut counts = vec![0usize; 1 << tau];
            for &r in &self.rows {
                let key = cols
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (b, &c)| acc | ((((r >> c) & 1) as usize) << b));
                counts[key] += 1;
            }
            if counts.iter().any(|&c| c != lambda) {
                return Some(cols);
            }
            // next combination in lexicographic order
            let mut i = tau;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if cols[i] < self.n - tau + i {
                    break;
                }
            }
            cols[i] += 1;
            for j in i + 1..tau {
                cols[j] = cols[j - 1] + 1;
            }
        }
    }

    /// Distinct distance distributions over every point of the ambient space,
    /// with the number of points producing each.
    pub fn distribution_census(&self) -> HashMap<DistanceDistribution, u64> {
        let mut census = HashMap::new();
        for point in 0..(1u32 << self.n) {
            *census.entry(empirical_distribution(self, point)).or_insert(0) += 1;
        }
        census
    }
}

impl fmt::Display for BinaryArray {
    /// Plain-text format: `n M` on the first line, then one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.rows.len())?;
        for &r in &self.rows {
            let line: String = (0..self.n)
                .map(|c| if (r >> c) & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty input".into()))?;
        let mut parts = header.split_whitespace();
        let mut field = |name: &str| -> Result<usize> {
            parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Malformed(format!("header lacks {name}")))
        };
        let n = field("n")?;
        let m = field("M")?;
        if n == 0 || n > 31 {
            return Err(Error::Malformed(format!("unsupported length {n}")));
        }
        let mut rows = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            if line.len() != n {
                return Err(Error::Malformed(format!(
                    "row {} has {} characters, expected {n}",
                    i + 1,
                    line.len()
                )));
            }
            let mut r = 0u32;
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => r |= 1 << c,
                    other => {
                        return Err(Error::Malformed(format!(
                            "row {} contains {other:?}",
                            i + 1
                        )))
                    }
                }
            }
            rows.push(r);
        }
        if rows.len() != m {
            return Err(Error::Malformed(format!(
                "header promises {m} rows, found {}",
                rows.len()
            )));
        }
        BinaryArray::new(n, rows)
    }
}

/// Whether every `M × τ` projection of `array` holds each `τ`-tuple exactly
/// `M / 2^τ` times.
pub fn verify_strength(array: &BinaryArray, tau: usize) -> bool {
    array.strength_violation(tau).is_none()
}

/// Histogram of Hamming distances from `point` to the rows of `array`.
pub fn empirical_distribution(array: &BinaryArray, point: u32) -> DistanceDistribution {
    let mut w = vec![0u32; array.n + 1];
    for &r in &array.rows {
        w[(r ^ point).count_ones() as usize] += 1;
    }
    DistanceDistribution(w)
}

/// `(C_0, C_1)`: rows starting with 0 (resp. 1), with that bit dropped.
pub fn split_by_first_column(array: &BinaryArray) -> (BinaryArray, BinaryArray) {
    let (ones, zeros): (Vec<u32>, Vec<u32>) = array.rows.iter().partition(|&&r| r & 1 == 1);
    let strip = |rows: Vec<u32>| BinaryArray {
        n: array.n - 1,
        rows: rows.into_iter().map(|r| r >> 1).collect(),
    };
    (strip(zeros), strip(ones))
}

/// `lambda` copies of every vector of length `n`; strength `n`.
pub fn make_replicated_factorial(n: usize, lambda: u64) -> Result<BinaryArray> {
    if n == 0 || n > 12 || lambda == 0 || lambda << n > ROW_BUDGET {
        return Err(Error::OutOfRange(format!(
            "replicated factorial n={n}, lambda={lambda}"
        )));
    }
    let rows = (0..lambda).flat_map(|_| 0..(1u32 << n)).collect();
    BinaryArray::new(n, rows)
}

/// `lambda` copies of the even-weight vectors of length `n`; strength `n − 1`.
pub fn make_even_weight(n: usize, lambda: u64) -> Result<BinaryArray> {
    let base = make_replicated_factorial(n, lambda)?;
    let rows = base.rows.into_iter().filter(|r| r.count_ones() % 2 == 0).collect();
    BinaryArray::new(n, rows)
}

/// The ground-truth column-deletion witness for cutting column `col`, taken
/// relative to the zero point.
pub fn column_witness(array: &BinaryArray, col: usize) -> PairWitness {
    let front = array.column_to_front(col);
    let n = array.n;
    let mut x = vec![0u32; n];
    let mut y = vec![0u32; n];
    for &r in &front.rows {
        let i = r.count_ones() as usize;
        if r & 1 == 1 {
            x[i - 1] += 1;
        } else {
            y[i] += 1;
        }
    }
    PairWitness {
        w: empirical_distribution(&front, 0),
        wprime: empirical_distribution(&front.delete_column(0), 0),
        x: DistanceDistribution(x),
        y: DistanceDistribution(y),
    }
}
